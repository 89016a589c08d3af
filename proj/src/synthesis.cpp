#include "dtqw/synthesis.hpp"

#include "dtqw/coin_model.hpp"

#include <cmath>
#include <sstream>

namespace dtqw {

namespace {

constexpr double kEliminationZero = 1e-12;
constexpr double kUnitaryTol = 1e-10;

void require_unitary(const Matrix& v) {
    const int d = static_cast<int>(v.rows());
    if (v.cols() != d) throw std::invalid_argument("matrix is not square");
    double dev = (v.adjoint() * v - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
    if (dev > kUnitaryTol)
        throw std::invalid_argument("matrix is not unitary (deviation " + std::to_string(dev) + ")");
}

}  // namespace

Matrix TwoLevelUnitary::embed(int dim) const {
    Matrix m = Matrix::Identity(dim, dim);
    m(i0, i0) = v(0, 0);
    m(i0, i1) = v(0, 1);
    m(i1, i0) = v(1, 0);
    m(i1, i1) = v(1, 1);
    return m;
}

std::vector<TwoLevelUnitary> two_level_decompose(const Matrix& v) {
    require_unitary(v);
    const int d = static_cast<int>(v.rows());
    Matrix w = v;
    std::vector<TwoLevelUnitary> eliminators;  // g_m ... g_1 w = I

    for (int j = 0; j < d; ++j) {
        for (int i = j + 1; i < d; ++i) {
            if (std::abs(w(i, j)) < kEliminationZero) continue;
            const Complex a = w(j, j);
            const Complex b = w(i, j);
            const double r = std::sqrt(std::norm(a) + std::norm(b));
            Coin g;
            g << std::conj(a) / r, std::conj(b) / r, b / r, -a / r;
            // Left-multiply rows (j, i) of w by g.
            for (int col = 0; col < d; ++col) {
                const Complex wj = w(j, col);
                const Complex wi = w(i, col);
                w(j, col) = g(0, 0) * wj + g(0, 1) * wi;
                w(i, col) = g(1, 0) * wj + g(1, 1) * wi;
            }
            eliminators.push_back({g, j, i});
        }
    }
    // w is now diagonal with unit-modulus entries; clear residual phases.
    for (int j = 0; j < d; ++j) {
        const Complex ph = w(j, j);
        if (std::abs(ph - 1.0) < kEliminationZero) continue;
        const int partner = (j + 1 < d) ? j + 1 : j - 1;
        Coin g;
        g << std::conj(ph), 0, 0, 1;
        eliminators.push_back({g, j, partner});
        w(j, j) *= std::conj(ph);
    }

    // v = g_1^+ g_2^+ ... g_m^+, so g_m^+ is applied first.
    std::vector<TwoLevelUnitary> factors;
    factors.reserve(eliminators.size());
    for (auto it = eliminators.rbegin(); it != eliminators.rend(); ++it)
        factors.push_back({it->v.adjoint(), it->i0, it->i1});
    return factors;
}

Matrix reconstruct(const std::vector<TwoLevelUnitary>& factors, int dim) {
    Matrix m = Matrix::Identity(dim, dim);
    for (const auto& f : factors) m = f.embed(dim) * m;
    return m;
}

MeetPoint solve_meet(const WalkSpec& spec, int i0, int i1) {
    spec.validate();
    if (!spec.universal())
        throw std::invalid_argument("solve_meet: spec is not universal");
    if (i0 == i1 || i0 < 0 || i1 < 0 || i0 >= spec.dim() || i1 >= spec.dim())
        throw std::invalid_argument("solve_meet: invalid basis pair");
    const int c0 = i0 / spec.n, x0 = i0 % spec.n;
    const int c1 = i1 / spec.n, x1 = i1 % spec.n;
    const bool same_coin = (c0 == c1);
    const int e0 = same_coin ? c0 : c0;        // effective coin of trajectory 0
    const int e1 = same_coin ? 1 - c1 : c1;    // flipped for a same-coin pair
    const int t_lo = same_coin ? 1 : 0;
    for (int t = t_lo; t < spec.n; ++t) {
        if (spec.wrap(x0 + t * spec.delta(e0)) == spec.wrap(x1 + t * spec.delta(e1)))
            return {t, spec.wrap(x0 + t * spec.delta(e0))};
    }
    throw std::logic_error("solve_meet: no meeting step found");
}

CoinSchedule realize_two_level(const TwoLevelUnitary& tl, const WalkSpec& spec) {
    spec.validate();
    if (!spec.universal())
        throw std::invalid_argument("realize_two_level: spec is not universal");
    const int c0 = tl.coin0(spec), x0 = tl.site0(spec);
    const int c1 = tl.coin1(spec), x1 = tl.site1(spec);
    if (tl.i0 == tl.i1) throw std::invalid_argument("realize_two_level: degenerate pair");
    (void)x0;

    const MeetPoint meet = solve_meet(spec, tl.i0, tl.i1);
    if (c0 != c1) {
        CoinSchedule schedule(spec.n, CoinLayer::identity(spec.n));
        Coin mix;
        mix(c0, c0) = tl.v(0, 0);
        mix(c0, c1) = tl.v(0, 1);
        mix(c1, c0) = tl.v(1, 0);
        mix(c1, c1) = tl.v(1, 1);
        schedule[meet.t_meet].coins[meet.x_meet] = mix;
        return schedule;
    }
    // Same-coin pair: flip the second member's coin at t = 0, mix the two
    // (now mixed-coin) trajectories at the meet point, flip back at t = n,
    // and let the remaining n free steps return every site to itself.
    CoinSchedule schedule(2 * spec.n, CoinLayer::identity(spec.n));
    schedule[0].coins[x1] = pauli(1);
    schedule[spec.n].coins[x1] = pauli(1);
    const int f0 = c0, f1 = 1 - c1;
    Coin mix;
    mix(f0, f0) = tl.v(0, 0);
    mix(f0, f1) = tl.v(0, 1);
    mix(f1, f0) = tl.v(1, 0);
    mix(f1, f1) = tl.v(1, 1);
    schedule[meet.t_meet].coins[meet.x_meet] = mix;
    return schedule;
}

CoinSchedule realize_unitary_exact(const Matrix& v, const WalkSpec& spec) {
    spec.validate();
    require_unitary(v);
    if (v.rows() != spec.dim())
        throw std::invalid_argument("realize_unitary_exact: dimension mismatch");
    if (!spec.universal()) {
        std::ostringstream msg;
        msg << "realize_unitary_exact: spec (n=" << spec.n << ", delta0=" << spec.delta0
            << ", delta1=" << spec.delta1 << ") is not universal; closed subspaces:";
        for (const auto& orbit : orbit_partition(spec)) {
            msg << " {";
            for (size_t k = 0; k < orbit.size(); ++k) msg << (k ? "," : "") << orbit[k];
            msg << "}";
        }
        throw std::runtime_error(msg.str());
    }
    CoinSchedule schedule;
    for (const auto& factor : two_level_decompose(v)) {
        CoinSchedule part = realize_two_level(factor, spec);
        schedule.insert(schedule.end(), part.begin(), part.end());
    }
    return schedule;
}

std::pair<int, std::vector<TwoLevelUnitary>> total_effect_factorize(
    const CoinSchedule& schedule, const WalkSpec& spec) {
    spec.validate();
    const int T = static_cast<int>(schedule.size());
    std::vector<TwoLevelUnitary> factors;
    factors.reserve(static_cast<size_t>(T) * spec.n);
    for (int t = 0; t < T; ++t) {
        if (static_cast<int>(schedule[t].coins.size()) != spec.n)
            throw std::invalid_argument("total_effect_factorize: malformed schedule");
        for (int x = 0; x < spec.n; ++x) {
            TwoLevelUnitary f;
            f.v = schedule[t].coins[x];
            f.i0 = spec.index(0, spec.wrap(x - t * spec.delta0));
            f.i1 = spec.index(1, spec.wrap(x - t * spec.delta1));
            factors.push_back(f);
        }
    }
    return {T, factors};
}

}  // namespace dtqw
