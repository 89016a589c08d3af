#pragma once

// Gradient-descent approximation of target unitaries and 2-outcome POVMs:
// loss, analytic gradients via one forward and one backward sweep, the SGD
// loop, distance metrics, and the ancilla-circuit gradient readout.

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "dtqw/coin_model.hpp"
#include "dtqw/rng.hpp"
#include "dtqw/walk.hpp"

namespace dtqw {

/// Trainable reals, laid out (t, x, j) with j < k = params-per-coin.
struct ParameterTensor {
    int T = 0;
    int n = 0;
    int k = 0;
    std::vector<double> values;  // T*n*k

    static ParameterTensor zeros(int T, int n, int k);

    double& at(int t, int x, int j) {
        return values[(static_cast<size_t>(t) * n + x) * k + j];
    }
    double at(int t, int x, int j) const {
        return values[(static_cast<size_t>(t) * n + x) * k + j];
    }
    std::span<const double> coin_params(int t, int x) const {
        return {values.data() + (static_cast<size_t>(t) * n + x) * k, static_cast<size_t>(k)};
    }
};

/// Random initialization, each entry uniform on [-2*pi, 2*pi].
ParameterTensor random_parameters(int T, int n, int k, std::mt19937_64& rng);

/// Realizes the whole schedule from a parameter tensor.
CoinSchedule realize_schedule(const ParameterTensor& params, const CoinModel& model);

/// 2-outcome POVM on the n-dimensional position space.
struct Povm2 {
    Matrix m0;
    Matrix m1;

    /// Throws unless m0^+ m0 + m1^+ m1 = I within 1e-10.
    void validate() const;
};

/// Either a 2n x 2n unitary or a 2-outcome position-space POVM.
using TargetOp = std::variant<Matrix, Povm2>;

/// Unitary DFT matrix over the flat coin-major index.
Matrix qft_target(int dim);

/// POVM pair taken as the coin-0 block column of a Haar unitary on the full
/// 2n-dimensional space; complete by construction.
Povm2 sample_povm_target(int n, std::mt19937_64& rng);

/// L = 1/2 || U_{T,0} psi - V psi ||^2, in [0, 2].
double loss(const ParameterTensor& params, const WalkSpec& spec, const CoinModel& model,
            const State& psi, const Matrix& target);

/// Analytic gradient of the state-wise loss, entry (t,x,j) =
/// Im(<Phi^(t)| Sigma_j^(x,t) |Psi^(t)>).  One forward and one backward
/// sweep; O(T*n) coin applications.
ParameterTensor grad(const ParameterTensor& params, const WalkSpec& spec, const CoinModel& model,
                     const State& psi, const Matrix& target);

/// POVM loss: 1/2 sum_j || <j|_c U |0>_c psi_p - M_j psi_p ||^2.
double povm_loss(const ParameterTensor& params, const WalkSpec& spec, const CoinModel& model,
                 const State& psi_p, const Povm2& target);

ParameterTensor povm_grad(const ParameterTensor& params, const WalkSpec& spec,
                          const CoinModel& model, const State& psi_p, const Povm2& target);

/// new alpha = old alpha - eta * gradient, elementwise.
void sgd_step(ParameterTensor& params, const ParameterTensor& gradient, double eta);

/// d(U, V) = sqrt(1 - |tr(U V^+)/dim|^2); global-phase invariant.
double distance_unitary(const Matrix& u, const Matrix& v);

/// Measurement distance between two 2-outcome POVMs on dimension n.
double distance_povm(const Povm2& a, const Povm2& b);

/// The POVM realized by a walk unitary: N_j = <j|_c U |0>_c.
Povm2 walk_povm(const Matrix& u, const WalkSpec& spec);

/// Simulates the ancilla readout circuit for one partial derivative of the
/// Full variant: controlled target on the ancilla-|0> branch, controlled
/// U_{T,t} Sigma_j U_{t,0} on the |1> branch, then a rotated sigma3 readout.
/// Sigma_j acts as the generator on site x and as +/- identity elsewhere; the
/// two sign readouts are averaged, which cancels the off-site overlap and
/// equals the corresponding grad entry.
double hadamard_test_gradient(const ParameterTensor& params, const WalkSpec& spec,
                              const CoinModel& model, const State& psi, const Matrix& target,
                              int j, int x, int t);

struct TrainConfig {
    double eta = 0.05;
    int T = 0;
    long max_updates = 100000;
    long eval_every = 100;
    std::uint64_t seed = 0;
    CoinVariant variant = CoinVariant::Full;
    double stop_distance = 0.0;

    void validate() const;
};

struct TrainRecord {
    long update;
    double loss;
    double distance;
};

struct TrainTrace {
    std::vector<TrainRecord> records;
    ParameterTensor final_params;
    long updates_run = 0;
    double final_distance = 0.0;
};

/// The SGD loop: sample a Haar state, compute the analytic gradient, step;
/// the walk-vs-target distance is recorded every eval_every updates and the
/// loop stops early once it falls below stop_distance.
TrainTrace train(const TrainConfig& config, const WalkSpec& spec, const CoinModel& model,
                 const TargetOp& target, std::mt19937_64& state_rng,
                 std::optional<ParameterTensor> init = std::nullopt);

}  // namespace dtqw
