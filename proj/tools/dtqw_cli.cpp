// Command-line experiment runner: trains coin schedules against preset or
// custom targets, verifies exact synthesis, sweeps layer counts, and merges
// run outputs into aggregate tables.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "dtqw/experiment.hpp"
#include "dtqw/synthesis.hpp"

namespace fs = std::filesystem;
using namespace dtqw;

namespace {

ExperimentPreset resolve_preset(const std::string& preset_name, const std::string& config_path) {
    if (!preset_name.empty() && !config_path.empty())
        throw std::invalid_argument("use either --preset or --config, not both");
    if (!preset_name.empty()) return find_preset(preset_name);
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in)
            throw fs::filesystem_error("cannot read config file", config_path,
                                       std::make_error_code(std::errc::no_such_file_or_directory));
        std::ostringstream text;
        text << in.rdbuf();
        return preset_from_json_text(text.str());
    }
    throw std::invalid_argument("one of --preset or --config is required");
}

void apply_overrides(ExperimentPreset& preset, long max_updates, double stop_distance,
                     int samples) {
    if (max_updates > 0) preset.max_updates = max_updates;
    if (stop_distance >= 0) preset.stop_distance = stop_distance;
    if (samples > 0) preset.sample_count = samples;
}

struct TraceRow {
    long update;
    double loss;
    double distance;
    int sample;
};

std::map<int, std::vector<TraceRow>> read_trace_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in)
        throw fs::filesystem_error("cannot read trace file", path,
                                   std::make_error_code(std::errc::no_such_file_or_directory));
    std::string line;
    std::getline(in, line);
    if (line != "update,loss,distance,sample")
        throw std::invalid_argument("unexpected trace header in " + path.string());
    std::map<int, std::vector<TraceRow>> rows;
    while (std::getline(in, line)) {
        TraceRow row;
        if (std::sscanf(line.c_str(), "%ld,%lf,%lf,%d", &row.update, &row.loss, &row.distance,
                        &row.sample) != 4)
            throw std::invalid_argument("malformed trace row in " + path.string());
        rows[row.sample].push_back(row);
    }
    return rows;
}

int cmd_train(const std::string& preset_name, const std::string& config_path,
              std::uint64_t seed, const std::string& out, int threads, long max_updates,
              double stop_distance, int samples) {
    ExperimentPreset preset = resolve_preset(preset_name, config_path);
    apply_overrides(preset, max_updates, stop_distance, samples);
    RunReport report = run_preset(preset, seed, threads);
    write_report(report, out);
    double final_avg = report.avg.empty() ? 0.0 : report.avg.back();
    double final_worst = report.worst.empty() ? 0.0 : report.worst.back();
    std::cout << "preset " << preset.name << ": " << preset.sample_count
              << " samples, final avg distance " << final_avg << ", worst " << final_worst
              << "\nwrote " << out << "/{trace.csv,histogram.csv,summary.json}\n";
    return 0;
}

int cmd_synth(int n, int delta0, int delta1, int trials, std::uint64_t seed) {
    WalkSpec spec{n, delta0, delta1};
    SynthesisCheckReport report = run_synthesis_check(spec, trials, seed);
    std::cout << "synthesis check on n=" << n << " (delta0=" << delta0 << ", delta1=" << delta1
              << "): " << report.trials << " Haar targets\n"
              << "  max reconstruction distance: " << report.max_distance << '\n'
              << "  max schedule length: " << report.max_schedule_length << '\n'
              << "  elapsed: " << report.elapsed_seconds << " s\n";
    return 0;
}

int cmd_sweep(const std::string& preset_name, const std::string& config_path,
              const std::vector<int>& layer_counts, std::uint64_t seed, const std::string& out,
              int threads, long max_updates, double stop_distance, int samples) {
    ExperimentPreset base = resolve_preset(preset_name, config_path);
    apply_overrides(base, max_updates, stop_distance, samples);
    if (layer_counts.empty()) throw std::invalid_argument("sweep: --layers is required");
    for (int T : layer_counts) {
        ExperimentPreset preset = base;
        preset.T = T;
        preset.name = base.name + "-T" + std::to_string(T);
        RunReport report = run_preset(preset, seed, threads);
        const fs::path dir = fs::path(out) / ("T" + std::to_string(T));
        write_report(report, dir);
        std::cout << "T=" << T << ": final avg distance " << report.avg.back() << " -> " << dir
                  << '\n';
    }
    return 0;
}

int cmd_summarize(const std::vector<std::string>& run_dirs, const std::string& out) {
    if (run_dirs.empty()) throw std::invalid_argument("summarize: no run directories given");

    // Per-sample series, keyed by (file index, sample id); all runs must
    // share the eval grid of the first full-length sample.
    std::vector<std::vector<TraceRow>> series;
    for (const auto& dir : run_dirs) {
        auto rows = read_trace_csv(fs::path(dir) / "trace.csv");
        for (auto& [sample, vec] : rows) series.push_back(std::move(vec));
    }
    std::vector<long> grid;
    for (const auto& s : series)
        if (s.size() > grid.size()) {
            grid.clear();
            for (const auto& row : s) grid.push_back(row.update);
        }
    for (const auto& s : series)
        for (size_t i = 0; i < s.size(); ++i)
            if (s[i].update != grid[i])
                throw std::invalid_argument("summarize: runs do not share an eval grid");

    std::vector<double> avg(grid.size(), 0.0), worst(grid.size(), 0.0);
    std::vector<double> finals;
    for (const auto& s : series) {
        double last = 0.0;
        for (size_t i = 0; i < grid.size(); ++i) {
            if (i < s.size()) last = s[i].distance;
            avg[i] += last;
            worst[i] = std::max(worst[i], last);
        }
        finals.push_back(last);
    }
    for (auto& v : avg) v /= static_cast<double>(series.size());

    fs::create_directories(out);
    {
        std::ofstream f(fs::path(out) / "aggregate.csv");
        f << "update,avg_distance,worst_distance\n";
        for (size_t i = 0; i < grid.size(); ++i) {
            char buf[96];
            std::snprintf(buf, sizeof(buf), "%ld,%.17g,%.17g\n", grid[i], avg[i], worst[i]);
            f << buf;
        }
    }
    {
        std::ofstream f(fs::path(out) / "exceedance.csv");
        f << "threshold,exceedance\n";
        for (int i = 0; i <= 18; ++i) {
            const double threshold = std::pow(10.0, -9.0 + 0.5 * i);
            long over = 0;
            for (double d : finals)
                if (d > threshold) ++over;
            char buf[96];
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", threshold,
                          static_cast<double>(over) / static_cast<double>(finals.size()));
            f << buf;
        }
    }
    std::cout << "merged " << series.size() << " samples from " << run_dirs.size()
              << " run(s) -> " << out << "/{aggregate.csv,exceedance.csv}\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coin-schedule synthesis and training for quantum walks on a cycle"};
    app.require_subcommand(1);

    std::string preset_name, config_path, out = "out";
    std::uint64_t seed = 1;
    int threads = 0;
    long max_updates = 0;
    double stop_distance = -1;
    int samples = 0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--preset", preset_name, "Preset name");
        cmd->add_option("--config", config_path, "JSON config file");
        cmd->add_option("--seed", seed, "Master seed");
        cmd->add_option("--out", out, "Output directory");
        cmd->add_option("--threads", threads, "Worker threads (0 = hardware)");
        cmd->add_option("--max-updates", max_updates, "Override update budget");
        cmd->add_option("--stop-distance", stop_distance, "Override early-stop distance");
        cmd->add_option("--samples", samples, "Override sample count");
    };

    auto* train_cmd = app.add_subcommand("train", "Train coin schedules against a target");
    add_common(train_cmd);

    auto* synth_cmd = app.add_subcommand("synth", "Verify exact synthesis on Haar targets");
    int n = 2, delta0 = 0, delta1 = 1, trials = 50;
    synth_cmd->add_option("--n", n, "Cycle size");
    synth_cmd->add_option("--delta0", delta0, "Shift for coin 0");
    synth_cmd->add_option("--delta1", delta1, "Shift for coin 1");
    synth_cmd->add_option("--trials", trials, "Number of Haar targets");
    synth_cmd->add_option("--seed", seed, "Master seed");

    auto* sweep_cmd = app.add_subcommand("sweep", "Run a preset across layer counts");
    add_common(sweep_cmd);
    std::vector<int> layer_counts;
    sweep_cmd->add_option("--layers", layer_counts, "Layer counts to sweep")->delimiter(',');

    auto* sum_cmd = app.add_subcommand("summarize", "Merge run outputs into aggregate tables");
    std::vector<std::string> run_dirs;
    sum_cmd->add_option("dirs", run_dirs, "Run output directories");
    sum_cmd->add_option("--out", out, "Output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (train_cmd->parsed())
            return cmd_train(preset_name, config_path, seed, out, threads, max_updates,
                             stop_distance, samples);
        if (synth_cmd->parsed()) return cmd_synth(n, delta0, delta1, trials, seed);
        if (sweep_cmd->parsed())
            return cmd_sweep(preset_name, config_path, layer_counts, seed, out, threads,
                             max_updates, stop_distance, samples);
        if (sum_cmd->parsed()) return cmd_summarize(run_dirs, out);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
