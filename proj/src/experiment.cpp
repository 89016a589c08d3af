#include "dtqw/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <thread>

#include <json.hpp>

#include "dtqw/synthesis.hpp"

namespace dtqw {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double wrap_to_pi(double a) {
    a = std::fmod(a, 2.0 * M_PI);
    if (a > M_PI) a -= 2.0 * M_PI;
    if (a <= -M_PI) a += 2.0 * M_PI;
    return a;
}

std::vector<double> histogram_edges() {
    // Half-decade log bins covering every distance the metric can produce.
    std::vector<double> edges;
    for (int i = 0; i <= 18; ++i) edges.push_back(std::pow(10.0, -9.0 + 0.5 * i));
    return edges;
}

CoinModel build_model(const ExperimentPreset& preset, std::uint64_t seed, int sample_id) {
    if (preset.variant == CoinVariant::Full) return CoinModel::full();
    const std::uint64_t sub =
        preset.table_policy == TablePolicy::Shared ? 0 : static_cast<std::uint64_t>(sample_id) + 1;
    auto rng = make_rng(seed, Stream::Tables, sub);
    SitePhaseTable phases = sample_phase_table(preset.spec.n, rng);
    switch (preset.variant) {
        case CoinVariant::FixedPhase: return CoinModel::fixed_phase(std::move(phases));
        case CoinVariant::XRotation: return CoinModel::x_rotation(std::move(phases));
        case CoinVariant::NoisyAxis: {
            AxisNoiseTable noise =
                sample_axis_noise(preset.T, preset.spec.n, preset.noise_theta_stddev, rng);
            return CoinModel::noisy_axis(std::move(phases), std::move(noise));
        }
        case CoinVariant::Correlated: return CoinModel::correlated(std::move(phases));
        default: throw std::logic_error("unreachable");
    }
}

TargetOp build_target(const ExperimentPreset& preset, std::uint64_t seed, int sample_id) {
    switch (preset.target) {
        case TargetKind::Qft: return qft_target(preset.spec.dim());
        case TargetKind::HaarUnitary: {
            auto rng = make_rng(seed, Stream::Targets, static_cast<std::uint64_t>(sample_id) + 1);
            return haar_unitary(preset.spec.dim(), rng);
        }
        case TargetKind::HaarPovm: {
            auto rng = make_rng(seed, Stream::Targets, static_cast<std::uint64_t>(sample_id) + 1);
            return sample_povm_target(preset.spec.n, rng);
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace

const char* target_kind_name(TargetKind k) {
    switch (k) {
        case TargetKind::Qft: return "qft";
        case TargetKind::HaarUnitary: return "haar-unitary";
        case TargetKind::HaarPovm: return "haar-povm";
    }
    return "?";
}

TargetKind target_kind_from_name(const std::string& name) {
    if (name == "qft") return TargetKind::Qft;
    if (name == "haar-unitary") return TargetKind::HaarUnitary;
    if (name == "haar-povm") return TargetKind::HaarPovm;
    throw std::invalid_argument("unknown target kind: " + name);
}

void ExperimentPreset::validate() const {
    spec.validate();
    if (T <= 0) throw std::invalid_argument("preset: T must be positive");
    if (eta <= 0) throw std::invalid_argument("preset: eta must be positive");
    if (sample_count <= 0) throw std::invalid_argument("preset: sample_count must be positive");
    if (max_updates <= 0 || eval_every <= 0)
        throw std::invalid_argument("preset: update budget must be positive");
    if (target == TargetKind::HaarPovm && variant != CoinVariant::Full)
        throw std::invalid_argument("preset: POVM targets are trained with the full variant");
}

const std::vector<ExperimentPreset>& preset_registry() {
    static const std::vector<ExperimentPreset> presets = [] {
        std::vector<ExperimentPreset> list;
        auto add = [&list](ExperimentPreset p) { list.push_back(std::move(p)); };

        // QFT targets, full coins, T = 2n^2.
        for (int n : {2, 3, 4, 5}) {
            ExperimentPreset p;
            p.name = "qft-n" + std::to_string(n);
            p.spec = {n, 0, 1};
            p.target = TargetKind::Qft;
            p.T = 2 * n * n;
            p.eta = 0.05;
            p.sample_count = n <= 3 ? 200 : 50;
            p.max_updates = n <= 3 ? 50000 : 200000;
            add(p);
        }

        for (int T : {4, 10}) {
            ExperimentPreset p;
            p.name = "haar-u4-T" + std::to_string(T);
            p.spec = {2, 0, 1};
            p.target = TargetKind::HaarUnitary;
            p.T = T;
            p.eta = 0.05;
            p.sample_count = 200;
            p.max_updates = 200000;
            add(p);
        }

        for (int T : {4, 10}) {
            ExperimentPreset p;
            p.name = "overpara-T" + std::to_string(T);
            p.spec = {2, 0, 1};
            p.target = TargetKind::Qft;
            p.T = T;
            p.eta = 0.01;
            p.sample_count = 200;
            p.max_updates = 50000;
            add(p);
        }

        {
            ExperimentPreset p;
            p.name = "large-n20";
            p.spec = {20, 0, 1};
            p.target = TargetKind::Qft;
            p.T = 500;
            p.eta = 0.05;
            p.sample_count = 10;
            p.max_updates = 200000;
            add(p);
        }

        {
            ExperimentPreset p;
            p.name = "fixed-phase";
            p.spec = {2, 0, 1};
            p.target = TargetKind::HaarUnitary;
            p.T = 20;
            p.eta = 0.05;
            p.sample_count = 200;
            p.variant = CoinVariant::FixedPhase;
            p.table_policy = TablePolicy::Shared;
            add(p);
        }
        {
            ExperimentPreset p;
            p.name = "xrot";
            p.spec = {2, 0, 1};
            p.target = TargetKind::HaarUnitary;
            p.T = 20;
            p.eta = 0.05;
            p.sample_count = 200;
            p.variant = CoinVariant::XRotation;
            p.table_policy = TablePolicy::Shared;
            add(p);
        }
        {
            ExperimentPreset p;
            p.name = "phase-fail";
            p.spec = {2, 0, 1};
            p.target = TargetKind::HaarUnitary;
            p.T = 20;
            p.eta = 0.05;
            p.sample_count = 200;
            p.variant = CoinVariant::XRotation;
            p.table_policy = TablePolicy::Independent;
            p.record_phase_diff = true;
            add(p);
        }
        {
            ExperimentPreset p;
            p.name = "noisy-axis";
            p.spec = {2, 0, 1};
            p.target = TargetKind::Qft;
            p.T = 20;
            p.eta = 0.1;
            p.sample_count = 100;
            p.variant = CoinVariant::NoisyAxis;
            p.table_policy = TablePolicy::Shared;
            p.noise_theta_stddev = 0.01;
            add(p);
        }
        {
            ExperimentPreset p;
            p.name = "correlated";
            p.spec = {2, 0, 1};
            p.target = TargetKind::HaarUnitary;
            p.T = 20;
            p.eta = 0.05;
            p.sample_count = 200;
            p.variant = CoinVariant::Correlated;
            p.table_policy = TablePolicy::Shared;
            add(p);
        }
        {
            ExperimentPreset p;
            p.name = "povm-n4";
            p.spec = {4, 0, 1};
            p.target = TargetKind::HaarPovm;
            p.T = 20;
            p.eta = 0.01;
            p.sample_count = 150;
            p.max_updates = 200000;
            add(p);
        }
        return list;
    }();
    return presets;
}

ExperimentPreset find_preset(const std::string& name) {
    for (const auto& p : preset_registry())
        if (p.name == name) return p;
    throw std::invalid_argument("unknown preset: " + name);
}

ExperimentPreset preset_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
    static const std::vector<std::string> allowed = {
        "name",         "n",           "delta0",     "delta1",
        "target",       "T",           "eta",        "samples",
        "variant",      "table_policy", "noise_theta_stddev", "max_updates",
        "eval_every",   "stop_distance", "record_phase_diff"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            throw std::invalid_argument("config: unknown key \"" + it.key() + "\"");
    }
    ExperimentPreset p;
    p.name = j.value("name", std::string("custom"));
    p.spec.n = j.value("n", p.spec.n);
    p.spec.delta0 = j.value("delta0", p.spec.delta0);
    p.spec.delta1 = j.value("delta1", p.spec.delta1);
    if (j.contains("target")) p.target = target_kind_from_name(j.at("target"));
    p.T = j.value("T", p.T);
    p.eta = j.value("eta", p.eta);
    p.sample_count = j.value("samples", p.sample_count);
    if (j.contains("variant")) p.variant = variant_from_name(j.at("variant"));
    if (j.contains("table_policy")) {
        const std::string pol = j.at("table_policy");
        if (pol == "shared")
            p.table_policy = TablePolicy::Shared;
        else if (pol == "independent")
            p.table_policy = TablePolicy::Independent;
        else
            throw std::invalid_argument("config: table_policy must be shared|independent");
    }
    p.noise_theta_stddev = j.value("noise_theta_stddev", p.noise_theta_stddev);
    p.max_updates = j.value("max_updates", p.max_updates);
    p.eval_every = j.value("eval_every", p.eval_every);
    p.stop_distance = j.value("stop_distance", p.stop_distance);
    p.record_phase_diff = j.value("record_phase_diff", p.record_phase_diff);
    p.validate();
    return p;
}

void aggregate_report(RunReport& report) {
    const ExperimentPreset& preset = report.preset;
    report.grid.clear();
    for (long u = 0; u < preset.max_updates; u += preset.eval_every) report.grid.push_back(u);
    report.grid.push_back(preset.max_updates);

    const size_t points = report.grid.size();
    report.avg.assign(points, 0.0);
    report.worst.assign(points, 0.0);
    for (const auto& trace : report.traces) {
        double last = std::numeric_limits<double>::quiet_NaN();
        for (size_t i = 0; i < points; ++i) {
            // Early-stopped samples hold their converged distance.
            if (i < trace.records.size()) last = trace.records[i].distance;
            report.avg[i] += last;
            report.worst[i] = std::max(report.worst[i], last);
        }
    }
    const double count = static_cast<double>(report.traces.size());
    for (auto& v : report.avg) v /= count;

    report.hist_edges = histogram_edges();
    const size_t bins = report.hist_edges.size() - 1;
    report.hist_counts.assign(bins, 0);
    for (const auto& s : report.samples) {
        size_t bin = 0;
        while (bin + 1 < bins && s.final_distance > report.hist_edges[bin + 1]) ++bin;
        ++report.hist_counts[bin];
    }
    report.exceedance.assign(report.hist_edges.size(), 0.0);
    long cum = 0;
    report.exceedance[0] = 1.0;
    for (size_t b = 0; b < bins; ++b) {
        cum += report.hist_counts[b];
        report.exceedance[b + 1] =
            static_cast<double>(report.samples.size() - cum) / count;
    }
}

RunReport run_preset(const ExperimentPreset& preset, std::uint64_t seed, int threads) {
    preset.validate();
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;

    RunReport report;
    report.preset = preset;
    report.seed = seed;
    report.traces.resize(preset.sample_count);
    report.samples.resize(preset.sample_count);

    auto run_sample = [&](int id) {
        CoinModel model = build_model(preset, seed, id);
        TargetOp target = build_target(preset, seed, id);
        auto init_rng = make_rng(seed, Stream::Init, static_cast<std::uint64_t>(id) + 1);
        ParameterTensor init = random_parameters(preset.T, preset.spec.n,
                                                 model.params_per_coin(), init_rng);
        TrainConfig config;
        config.eta = preset.eta;
        config.T = preset.T;
        config.max_updates = preset.max_updates;
        config.eval_every = preset.eval_every;
        config.seed = seed;
        config.variant = preset.variant;
        config.stop_distance = preset.stop_distance;
        auto state_rng = make_rng(seed, Stream::States, static_cast<std::uint64_t>(id) + 1);
        TrainTrace trace = train(config, preset.spec, model, target, state_rng, std::move(init));

        double phase_diff = std::numeric_limits<double>::quiet_NaN();
        if (preset.record_phase_diff && preset.spec.n >= 2)
            phase_diff = wrap_to_pi(model.phases().a[0] - model.phases().a[1]);
        report.samples[id] = {id, trace.final_distance, trace.updates_run, phase_diff};
        report.traces[id] = std::move(trace);
    };

    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    const int workers = std::min(threads, preset.sample_count);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int id = next.fetch_add(1); id < preset.sample_count; id = next.fetch_add(1))
                run_sample(id);
        });
    }
    for (auto& th : pool) th.join();

    aggregate_report(report);
    return report;
}

void write_report(const RunReport& report, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);

    {
        std::ofstream trace(out_dir / "trace.csv");
        trace << "update,loss,distance,sample\n";
        for (size_t id = 0; id < report.traces.size(); ++id)
            for (const auto& rec : report.traces[id].records)
                trace << rec.update << ',' << fmt(rec.loss) << ',' << fmt(rec.distance) << ','
                      << id << '\n';
    }
    {
        std::ofstream hist(out_dir / "histogram.csv");
        hist << "bin_lo,bin_hi,count,exceedance_at_hi\n";
        for (size_t b = 0; b + 1 < report.hist_edges.size(); ++b)
            hist << fmt(report.hist_edges[b]) << ',' << fmt(report.hist_edges[b + 1]) << ','
                 << report.hist_counts[b] << ',' << fmt(report.exceedance[b + 1]) << '\n';
    }
    {
        nlohmann::ordered_json j;
        j["preset"] = report.preset.name;
        j["seed"] = report.seed;
        j["spec"] = {{"n", report.preset.spec.n},
                     {"delta0", report.preset.spec.delta0},
                     {"delta1", report.preset.spec.delta1}};
        j["T"] = report.preset.T;
        j["eta"] = report.preset.eta;
        j["variant"] = variant_name(report.preset.variant);
        j["samples"] = nlohmann::ordered_json::array();
        for (const auto& s : report.samples) {
            nlohmann::ordered_json e;
            e["id"] = s.id;
            e["final_distance"] = s.final_distance;
            e["updates_run"] = s.updates_run;
            if (!std::isnan(s.phase_diff)) e["phase_diff"] = s.phase_diff;
            j["samples"].push_back(std::move(e));
        }
        j["aggregate"] = {{"avg", report.avg}, {"worst", report.worst}};
        std::ofstream summary(out_dir / "summary.json");
        summary << j.dump(2) << '\n';
    }
}

RunReport summarize(const std::vector<RunReport>& reports) {
    if (reports.empty()) throw std::invalid_argument("summarize: no reports");
    RunReport merged;
    merged.preset = reports.front().preset;
    merged.seed = reports.front().seed;
    for (const auto& r : reports) {
        if (r.grid != reports.front().grid)
            throw std::invalid_argument("summarize: reports do not share an eval grid");
        for (const auto& trace : r.traces) merged.traces.push_back(trace);
        for (const auto& s : r.samples) {
            SampleSummary copy = s;
            copy.id = static_cast<int>(merged.samples.size());
            merged.samples.push_back(copy);
        }
    }
    merged.preset.sample_count = static_cast<int>(merged.samples.size());
    aggregate_report(merged);
    return merged;
}

SynthesisCheckReport run_synthesis_check(const WalkSpec& spec, int trials, std::uint64_t seed) {
    spec.validate();
    if (!spec.universal()) {
        std::string msg = "synthesis check: spec is not universal; closed subspaces:";
        for (const auto& orbit : orbit_partition(spec)) {
            msg += " {";
            for (size_t i = 0; i < orbit.size(); ++i)
                msg += (i ? "," : "") + std::to_string(orbit[i]);
            msg += "}";
        }
        throw std::runtime_error(msg);
    }
    auto rng = make_rng(seed, Stream::Targets);
    SynthesisCheckReport report;
    report.trials = trials;
    const auto start = std::chrono::steady_clock::now();
    for (int trial = 0; trial < trials; ++trial) {
        Matrix v = haar_unitary(spec.dim(), rng);
        CoinSchedule schedule = realize_unitary_exact(v, spec);
        const double d = distance_unitary(full_unitary(schedule, spec), v);
        report.max_distance = std::max(report.max_distance, d);
        report.max_schedule_length =
            std::max(report.max_schedule_length, static_cast<int>(schedule.size()));
    }
    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace dtqw
