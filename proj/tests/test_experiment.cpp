#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dtqw/experiment.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using namespace dtqw;

namespace {

ExperimentPreset tiny_preset() {
    ExperimentPreset p;
    p.name = "tiny";
    p.spec = WalkSpec{2, 0, 1};
    p.target = TargetKind::HaarUnitary;
    p.T = 3;
    p.eta = 0.05;
    p.sample_count = 4;
    p.max_updates = 300;
    p.eval_every = 100;
    return p;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag)
        : path(fs::temp_directory_path() / ("dtqw-test-" + tag)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("preset registry contains the documented runs") {
    const char* expected[] = {"qft-n2",    "qft-n3",   "qft-n4",     "qft-n5",   "haar-u4-T4",
                              "haar-u4-T10", "overpara-T4", "overpara-T10", "large-n20",
                              "fixed-phase", "xrot",     "phase-fail", "noisy-axis",
                              "correlated",  "povm-n4"};
    for (const char* name : expected) CHECK_NOTHROW(find_preset(name));
    CHECK_THROWS_AS(find_preset("no-such-preset"), std::invalid_argument);

    ExperimentPreset qft2 = find_preset("qft-n2");
    CHECK(qft2.spec.n == 2);
    CHECK(qft2.T == 8);
    CHECK(qft2.target == TargetKind::Qft);
    for (const auto& p : preset_registry()) CHECK_NOTHROW(p.validate());
}

TEST_CASE("preset_from_json_text: parsing and unknown-key rejection") {
    ExperimentPreset p = preset_from_json_text(R"({
        "name": "custom", "n": 3, "T": 5, "eta": 0.02, "samples": 7,
        "target": "haar-unitary", "variant": "x-rotation",
        "table_policy": "independent", "max_updates": 1000})");
    CHECK(p.name == "custom");
    CHECK(p.spec.n == 3);
    CHECK(p.T == 5);
    CHECK(p.eta == doctest::Approx(0.02));
    CHECK(p.sample_count == 7);
    CHECK(p.variant == CoinVariant::XRotation);
    CHECK(p.table_policy == TablePolicy::Independent);

    CHECK_THROWS_AS(preset_from_json_text(R"({"name": "x", "bogus_key": 1})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(preset_from_json_text("not json"), std::invalid_argument);
}

TEST_CASE("run_preset report satisfies the aggregate invariants") {
    RunReport report = run_preset(tiny_preset(), 11, 1);
    REQUIRE(report.samples.size() == 4);
    REQUIRE(report.traces.size() == 4);
    // Grid: one entry per eval point plus the final state.
    CHECK(report.grid.front() == 0);
    CHECK(report.grid.back() == 300);
    CHECK(report.avg.size() == report.grid.size());
    CHECK(report.worst.size() == report.grid.size());
    for (size_t i = 0; i < report.grid.size(); ++i) {
        CHECK(report.worst[i] >= report.avg[i] - 1e-15);
        CHECK(report.avg[i] >= 0.0);
    }
    long total = 0;
    for (long c : report.hist_counts) total += c;
    CHECK(total == 4);
    REQUIRE(report.exceedance.size() == report.hist_edges.size());
    CHECK(report.exceedance.front() == doctest::Approx(1.0));
    // Exceedance at edge e equals the fraction of finals above e.
    for (size_t i = 0; i < report.hist_edges.size(); ++i) {
        int over = 0;
        for (const auto& s : report.samples)
            if (s.final_distance > report.hist_edges[i]) ++over;
        CHECK(report.exceedance[i] == doctest::Approx(over / 4.0));
    }
}

TEST_CASE("run_preset results do not depend on the thread count") {
    ExperimentPreset preset = tiny_preset();
    RunReport serial = run_preset(preset, 5, 1);
    RunReport parallel = run_preset(preset, 5, 4);
    TempDir a("serial"), b("parallel");
    write_report(serial, a.path);
    write_report(parallel, b.path);
    for (const char* f : {"trace.csv", "histogram.csv", "summary.json"})
        CHECK(slurp(a.path / f) == slurp(b.path / f));
}

TEST_CASE("write_report emits the documented files and headers") {
    RunReport report = run_preset(tiny_preset(), 3, 2);
    TempDir dir("report");
    write_report(report, dir.path);
    std::string trace = slurp(dir.path / "trace.csv");
    CHECK(trace.rfind("update,loss,distance,sample\n", 0) == 0);
    std::string hist = slurp(dir.path / "histogram.csv");
    CHECK(hist.rfind("bin_lo,bin_hi,count,exceedance_at_hi\n", 0) == 0);
    std::string summary = slurp(dir.path / "summary.json");
    CHECK(summary.find("\"preset\"") != std::string::npos);
    CHECK(summary.find("\"aggregate\"") != std::string::npos);
    CHECK(summary.find("\"samples\"") != std::string::npos);
}

TEST_CASE("summarize merges reports sharing an eval grid") {
    ExperimentPreset preset = tiny_preset();
    RunReport one = run_preset(preset, 21, 1);
    RunReport merged_self = summarize({one});
    CHECK(merged_self.samples.size() == one.samples.size());
    for (size_t i = 0; i < one.avg.size(); ++i)
        CHECK(merged_self.avg[i] == doctest::Approx(one.avg[i]));

    RunReport two = run_preset(preset, 22, 1);
    RunReport merged = summarize({one, two});
    CHECK(merged.samples.size() == 8);
    for (size_t i = 0; i < merged.avg.size(); ++i) {
        CHECK(merged.avg[i] == doctest::Approx(0.5 * (one.avg[i] + two.avg[i])));
        CHECK(merged.worst[i] == doctest::Approx(std::max(one.worst[i], two.worst[i])));
    }
    // Sample ids are re-numbered consecutively.
    for (size_t i = 0; i < merged.samples.size(); ++i)
        CHECK(merged.samples[i].id == static_cast<int>(i));
}

TEST_CASE("phase-difference recording is on only for the presets that ask") {
    ExperimentPreset preset = tiny_preset();
    preset.variant = CoinVariant::XRotation;
    preset.record_phase_diff = true;
    preset.max_updates = 100;
    RunReport report = run_preset(preset, 9, 1);
    for (const auto& s : report.samples) {
        CHECK(std::isfinite(s.phase_diff));
        CHECK(s.phase_diff >= -M_PI);
        CHECK(s.phase_diff <= M_PI);
    }
    RunReport silent = run_preset(tiny_preset(), 9, 1);
    for (const auto& s : silent.samples) CHECK(std::isnan(s.phase_diff));
}

TEST_CASE("run_synthesis_check verifies exact compilation on Haar draws") {
    SynthesisCheckReport report = run_synthesis_check(WalkSpec{2, 0, 1}, 5, 17);
    CHECK(report.trials == 5);
    CHECK(report.max_distance < 1e-7);
    CHECK(report.max_schedule_length > 0);

    CHECK_THROWS_AS(run_synthesis_check(WalkSpec{4, 0, 2}, 2, 17), std::runtime_error);
}
