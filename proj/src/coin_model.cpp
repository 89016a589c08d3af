#include "dtqw/coin_model.hpp"

#include <cmath>

namespace dtqw {

Coin pauli_exp(int j, double beta) {
    return std::cos(beta) * Coin::Identity() + Complex(0, 1) * std::sin(beta) * pauli(j);
}

Coin axis_exp(double beta, double u1, double u2, double u3) {
    Coin gen = u1 * pauli(1) + u2 * pauli(2) + u3 * pauli(3);
    return std::cos(beta) * Coin::Identity() + Complex(0, 1) * std::sin(beta) * gen;
}

Coin realize_full(const CoinAngles& angles) {
    Coin c = pauli_exp(3, angles.alpha[3]) * pauli_exp(2, angles.alpha[2]) *
             pauli_exp(1, angles.alpha[1]);
    return std::exp(Complex(0, angles.alpha[0])) * c;
}

const char* variant_name(CoinVariant v) {
    switch (v) {
        case CoinVariant::Full: return "full";
        case CoinVariant::FixedPhase: return "fixed-phase";
        case CoinVariant::XRotation: return "x-rotation";
        case CoinVariant::NoisyAxis: return "noisy-axis";
        case CoinVariant::Correlated: return "correlated";
    }
    return "?";
}

CoinVariant variant_from_name(const std::string& name) {
    if (name == "full") return CoinVariant::Full;
    if (name == "fixed-phase") return CoinVariant::FixedPhase;
    if (name == "x-rotation") return CoinVariant::XRotation;
    if (name == "noisy-axis") return CoinVariant::NoisyAxis;
    if (name == "correlated") return CoinVariant::Correlated;
    throw std::invalid_argument("unknown coin variant: " + name);
}

int params_per_coin(CoinVariant v) {
    switch (v) {
        case CoinVariant::Full: return 4;
        case CoinVariant::FixedPhase: return 3;
        default: return 1;
    }
}

long parameter_count(CoinVariant v, int T, int n) {
    return static_cast<long>(params_per_coin(v)) * T * n;
}

CoinModel CoinModel::full() { return CoinModel(CoinVariant::Full, {}, {}); }

CoinModel CoinModel::fixed_phase(SitePhaseTable phases) {
    return CoinModel(CoinVariant::FixedPhase, std::move(phases), {});
}

CoinModel CoinModel::x_rotation(SitePhaseTable phases) {
    return CoinModel(CoinVariant::XRotation, std::move(phases), {});
}

CoinModel CoinModel::noisy_axis(SitePhaseTable phases, AxisNoiseTable noise) {
    return CoinModel(CoinVariant::NoisyAxis, std::move(phases), std::move(noise));
}

CoinModel CoinModel::correlated(SitePhaseTable phases) {
    return CoinModel(CoinVariant::Correlated, std::move(phases), {});
}

void CoinModel::check_tables(int x, int t) const {
    if (tag_ != CoinVariant::Full && x >= static_cast<int>(phases_.a.size()))
        throw std::runtime_error("CoinModel: site phase table missing or too small");
    if (tag_ == CoinVariant::NoisyAxis && (t >= noise_.T || x >= noise_.n))
        throw std::runtime_error("CoinModel: axis noise table missing or too small");
}

Coin CoinModel::realize(int x, int t, std::span<const double> p) const {
    if (static_cast<int>(p.size()) != params_per_coin())
        throw std::invalid_argument("CoinModel::realize: wrong parameter count");
    check_tables(x, t);
    switch (tag_) {
        case CoinVariant::Full:
            return realize_full(CoinAngles{{p[0], p[1], p[2], p[3]}});
        case CoinVariant::FixedPhase:
            return realize_full(CoinAngles{{phases_.a[x], p[0], p[1], p[2]}});
        case CoinVariant::XRotation:
            return std::exp(Complex(0, phases_.a[x])) * pauli_exp(1, p[0]);
        case CoinVariant::NoisyAxis: {
            const double th = noise_.theta_at(t, x);
            const double ph = noise_.phi_at(t, x);
            return std::exp(Complex(0, phases_.a[x])) *
                   axis_exp(p[0], std::cos(th), std::sin(th) * std::cos(ph),
                            std::sin(th) * std::sin(ph));
        }
        case CoinVariant::Correlated:
            return std::exp(Complex(0, phases_.a[x] + p[0])) * pauli_exp(1, p[0]);
    }
    throw std::logic_error("unreachable");
}

void CoinModel::generators(int x, int t, std::span<const double> p,
                           std::vector<Coin>& out) const {
    if (static_cast<int>(p.size()) != params_per_coin())
        throw std::invalid_argument("CoinModel::generators: wrong parameter count");
    check_tables(x, t);
    out.clear();
    // Right generators of the layered exponentials: rotating sigma_2 and
    // sigma_3 back through the inner rotations gives angle-dependent axes.
    auto g2 = [](double a1) { return std::cos(2 * a1) * pauli(2) + std::sin(2 * a1) * pauli(3); };
    auto g3 = [](double a1, double a2) {
        return std::sin(2 * a2) * pauli(1) - std::cos(2 * a2) * std::sin(2 * a1) * pauli(2) +
               std::cos(2 * a2) * std::cos(2 * a1) * pauli(3);
    };
    switch (tag_) {
        case CoinVariant::Full:
            out.push_back(pauli(0));
            out.push_back(pauli(1));
            out.push_back(g2(p[1]));
            out.push_back(g3(p[1], p[2]));
            break;
        case CoinVariant::FixedPhase:
            out.push_back(pauli(1));
            out.push_back(g2(p[0]));
            out.push_back(g3(p[0], p[1]));
            break;
        case CoinVariant::XRotation:
            out.push_back(pauli(1));
            break;
        case CoinVariant::NoisyAxis: {
            const double th = noise_.theta_at(t, x);
            const double ph = noise_.phi_at(t, x);
            out.push_back(std::cos(th) * pauli(1) + std::sin(th) * std::cos(ph) * pauli(2) +
                          std::sin(th) * std::sin(ph) * pauli(3));
            break;
        }
        case CoinVariant::Correlated:
            // The single parameter drives both the phase and the rotation.
            out.push_back(pauli(0) + pauli(1));
            break;
    }
}

}  // namespace dtqw
