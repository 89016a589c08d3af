#pragma once

// Experiment runner: named presets, parallel fan-out of independent
// trainers, aggregate statistics (average/worst curves, final-distance
// histograms, exceedance), and exact-synthesis verification runs.

#include <filesystem>
#include <string>
#include <vector>

#include "dtqw/training.hpp"

namespace dtqw {

enum class TargetKind { Qft, HaarUnitary, HaarPovm };
enum class TablePolicy { Shared, Independent };

const char* target_kind_name(TargetKind k);
TargetKind target_kind_from_name(const std::string& name);

struct ExperimentPreset {
    std::string name;
    WalkSpec spec{2, 0, 1};
    TargetKind target = TargetKind::Qft;
    int T = 8;
    double eta = 0.05;
    int sample_count = 200;
    CoinVariant variant = CoinVariant::Full;
    TablePolicy table_policy = TablePolicy::Shared;
    double noise_theta_stddev = 0.01;
    long max_updates = 50000;
    long eval_every = 100;
    double stop_distance = 0.0;
    bool record_phase_diff = false;

    void validate() const;
};

/// The built-in presets (one per reproduced figure family).
const std::vector<ExperimentPreset>& preset_registry();
ExperimentPreset find_preset(const std::string& name);

/// Parses a preset from a JSON config; unknown keys are rejected.
ExperimentPreset preset_from_json_text(const std::string& text);

struct SampleSummary {
    int id;
    double final_distance;
    long updates_run;
    double phase_diff;  // NaN unless the preset records it
};

struct RunReport {
    ExperimentPreset preset;
    std::uint64_t seed = 0;
    std::vector<TrainTrace> traces;      // indexed by sample id
    std::vector<SampleSummary> samples;  // sample order
    std::vector<long> grid;              // common eval grid (update indices)
    std::vector<double> avg;             // average distance per grid point
    std::vector<double> worst;           // worst distance per grid point
    std::vector<double> hist_edges;      // bin edges, ascending
    std::vector<long> hist_counts;       // per bin; sums to sample_count
    std::vector<double> exceedance;      // fraction of samples > edge, per edge
};

/// Runs sample_count independent trainers.  Each sample owns RNG sub-streams
/// derived from (seed, sample id), so the result is independent of the
/// thread count.
RunReport run_preset(const ExperimentPreset& preset, std::uint64_t seed, int threads);

/// Writes trace.csv, histogram.csv and summary.json under out_dir.
void write_report(const RunReport& report, const std::filesystem::path& out_dir);

/// Recomputes the aggregate curves/histogram of a report whose traces and
/// samples are already filled (used by run_preset and by merging).
void aggregate_report(RunReport& report);

/// Merges reports sharing an eval grid into one (samples re-numbered).
RunReport summarize(const std::vector<RunReport>& reports);

struct SynthesisCheckReport {
    int trials = 0;
    double max_distance = 0.0;
    int max_schedule_length = 0;
    double elapsed_seconds = 0.0;
};

/// Samples Haar unitaries, compiles each exactly, and reports the worst
/// reconstruction distance and schedule length.
SynthesisCheckReport run_synthesis_check(const WalkSpec& spec, int trials, std::uint64_t seed);

}  // namespace dtqw
