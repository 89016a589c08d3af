#pragma once

// Seeded randomness: named sub-streams derived from a master seed, Haar
// samplers for pure states and unitaries, and the table/initialization
// draws used by training runs.

#include <cstdint>
#include <random>

#include "dtqw/coin_model.hpp"
#include "dtqw/walk.hpp"

namespace dtqw {

// Sub-stream tags; runs are bit-reproducible given (master seed, tags).
enum class Stream : std::uint64_t {
    Init = 1,      // parameter initialization
    States = 2,    // training-state sampling
    Tables = 3,    // phase / axis-noise tables
    Targets = 4,   // per-sample target sampling
};

/// Deterministic engine for (master_seed, stream, substream).
std::mt19937_64 make_rng(std::uint64_t master_seed, Stream stream, std::uint64_t substream = 0);

/// Haar-distributed pure state: normalized complex Gaussian vector.
State haar_state(int dim, std::mt19937_64& rng);

/// Haar-distributed unitary: complex Ginibre matrix, QR, then the diagonal
/// of R folded back so the distribution is exactly Haar.
Matrix haar_unitary(int dim, std::mt19937_64& rng);

/// Site phases a^(x), uniform on [0, 2*pi].
SitePhaseTable sample_phase_table(int n, std::mt19937_64& rng);

/// Axis perturbations: theta ~ N(0, stddev), phi ~ uniform [0, 2*pi].
AxisNoiseTable sample_axis_noise(int T, int n, double theta_stddev, std::mt19937_64& rng);

}  // namespace dtqw
