#pragma once

// Single-site coin operators realized from real parameters: the full U(2)
// parameterization and the constrained variants (fixed random phases,
// x-rotation only, noisy rotation axis, phase/angle correlation).

#include <span>
#include <stdexcept>
#include <vector>

#include "dtqw/walk.hpp"

namespace dtqw {

inline const Coin& pauli(int j) {
    static const Coin s0 = Coin::Identity();
    static const Coin s1 = (Coin() << 0, 1, 1, 0).finished();
    static const Coin s2 = (Coin() << 0, Complex(0, -1), Complex(0, 1), 0).finished();
    static const Coin s3 = (Coin() << 1, 0, 0, -1).finished();
    static const Coin* table[4] = {&s0, &s1, &s2, &s3};
    if (j < 0 || j > 3) throw std::out_of_range("pauli index");
    return *table[j];
}

/// exp(i*beta*sigma_j) in closed form: cos(beta)*I + i*sin(beta)*sigma_j.
Coin pauli_exp(int j, double beta);

/// exp(i*beta*(u.sigma)) for a unit 3-vector u over (sigma1,sigma2,sigma3).
Coin axis_exp(double beta, double u1, double u2, double u3);

/// The four angles (alpha0..alpha3) of the unconstrained coin.
struct CoinAngles {
    double alpha[4];
};

/// Returns e^{i a3 s3} e^{i a2 s2} e^{i a1 s1} e^{i a0}.
Coin realize_full(const CoinAngles& angles);

enum class CoinVariant { Full, FixedPhase, XRotation, NoisyAxis, Correlated };

const char* variant_name(CoinVariant v);
CoinVariant variant_from_name(const std::string& name);

/// Trainable reals per (site, layer) coin for a variant.
int params_per_coin(CoinVariant v);

/// Total trainable reals of a T-layer schedule on n sites.
long parameter_count(CoinVariant v, int T, int n);

/// One fixed phase a^(x) per site, drawn once per run and never trained.
struct SitePhaseTable {
    std::vector<double> a;
};

/// Per-layer, per-site rotation-axis perturbations, drawn once per run.
struct AxisNoiseTable {
    int T = 0;
    int n = 0;
    std::vector<double> theta;  // T*n, row-major (t, x)
    std::vector<double> phi;    // T*n

    double theta_at(int t, int x) const { return theta[static_cast<size_t>(t) * n + x]; }
    double phi_at(int t, int x) const { return phi[static_cast<size_t>(t) * n + x]; }
};

/// A coin parameterization together with whatever fixed tables it needs.
/// Pure value type; realize() and generators() have no hidden state.
class CoinModel {
  public:
    static CoinModel full();
    static CoinModel fixed_phase(SitePhaseTable phases);
    static CoinModel x_rotation(SitePhaseTable phases);
    static CoinModel noisy_axis(SitePhaseTable phases, AxisNoiseTable noise);
    static CoinModel correlated(SitePhaseTable phases);

    CoinVariant variant() const { return tag_; }
    int params_per_coin() const { return dtqw::params_per_coin(tag_); }
    const SitePhaseTable& phases() const { return phases_; }

    /// Realizes the coin at (site x, layer t) from its free parameters.
    Coin realize(int x, int t, std::span<const double> p) const;

    /// Hermitian generators G_j with d(coin)/d(p_j) = i * coin * G_j, used by
    /// the analytic gradient.  For NoisyAxis the generator is the noisy axis.
    void generators(int x, int t, std::span<const double> p, std::vector<Coin>& out) const;

  private:
    CoinModel(CoinVariant tag, SitePhaseTable phases, AxisNoiseTable noise)
        : tag_(tag), phases_(std::move(phases)), noise_(std::move(noise)) {}

    void check_tables(int x, int t) const;

    CoinVariant tag_;
    SitePhaseTable phases_;
    AxisNoiseTable noise_;
};

}  // namespace dtqw
