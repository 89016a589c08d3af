#include "dtqw/walk.hpp"

#include <algorithm>

namespace dtqw {

State basis_state(const WalkSpec& spec, int c, int x) {
    spec.validate();
    if (c < 0 || c > 1 || x < 0 || x >= spec.n)
        throw std::invalid_argument("basis_state: label out of range");
    State psi = State::Zero(spec.dim());
    psi(spec.index(c, x)) = 1.0;
    return psi;
}

State apply_coin_layer(const State& state, const CoinLayer& layer) {
    State out = state;
    apply_coin_layer_inplace(out, layer);
    return out;
}

void apply_coin_layer_inplace(State& state, const CoinLayer& layer) {
    const int n = static_cast<int>(layer.coins.size());
    if (state.size() != 2 * n)
        throw std::invalid_argument("apply_coin_layer: state/layer dimension mismatch");
    for (int x = 0; x < n; ++x) {
        const Coin& u = layer.coins[x];
        const Complex a0 = state(x);
        const Complex a1 = state(n + x);
        state(x) = u(0, 0) * a0 + u(0, 1) * a1;
        state(n + x) = u(1, 0) * a0 + u(1, 1) * a1;
    }
}

void apply_coin_layer_adjoint_inplace(State& state, const CoinLayer& layer) {
    const int n = static_cast<int>(layer.coins.size());
    if (state.size() != 2 * n)
        throw std::invalid_argument("apply_coin_layer: state/layer dimension mismatch");
    for (int x = 0; x < n; ++x) {
        const Coin& u = layer.coins[x];
        const Complex a0 = state(x);
        const Complex a1 = state(n + x);
        state(x) = std::conj(u(0, 0)) * a0 + std::conj(u(1, 0)) * a1;
        state(n + x) = std::conj(u(0, 1)) * a0 + std::conj(u(1, 1)) * a1;
    }
}

State apply_shift(const State& state, const WalkSpec& spec) {
    State out(state.size());
    State scratch = state;
    apply_shift_inplace(scratch, spec, out);
    return scratch;
}

void apply_shift_inplace(State& state, const WalkSpec& spec, State& scratch) {
    const int n = spec.n;
    if (state.size() != 2 * n)
        throw std::invalid_argument("apply_shift: state/spec dimension mismatch");
    scratch.resize(2 * n);
    for (int c = 0; c < 2; ++c)
        for (int x = 0; x < n; ++x)
            scratch(spec.index(c, spec.wrap(x + spec.delta(c)))) = state(spec.index(c, x));
    state.swap(scratch);
}

void apply_shift_adjoint_inplace(State& state, const WalkSpec& spec, State& scratch) {
    const int n = spec.n;
    if (state.size() != 2 * n)
        throw std::invalid_argument("apply_shift: state/spec dimension mismatch");
    scratch.resize(2 * n);
    for (int c = 0; c < 2; ++c)
        for (int x = 0; x < n; ++x)
            scratch(spec.index(c, x)) = state(spec.index(c, spec.wrap(x + spec.delta(c))));
    state.swap(scratch);
}

State evolve(const State& state, const CoinSchedule& schedule, const WalkSpec& spec,
             int t0, int t1) {
    const int T = static_cast<int>(schedule.size());
    if (t0 < 0 || t1 < t0 || t1 > T)
        throw std::out_of_range("evolve: step indices out of range");
    State psi = state;
    State scratch(psi.size());
    for (int t = t0; t < t1; ++t) {
        apply_coin_layer_inplace(psi, schedule[t]);
        apply_shift_inplace(psi, spec, scratch);
    }
    return psi;
}

Matrix full_unitary(const CoinSchedule& schedule, const WalkSpec& spec) {
    spec.validate();
    const int d = spec.dim();
    const int T = static_cast<int>(schedule.size());
    Matrix u(d, d);
    for (int i = 0; i < d; ++i) {
        State e = State::Zero(d);
        e(i) = 1.0;
        u.col(i) = evolve(e, schedule, spec, 0, T);
    }
    return u;
}

Matrix shift_matrix(const WalkSpec& spec) {
    spec.validate();
    Matrix s = Matrix::Zero(spec.dim(), spec.dim());
    for (int c = 0; c < 2; ++c)
        for (int x = 0; x < spec.n; ++x)
            s(spec.index(c, spec.wrap(x + spec.delta(c))), spec.index(c, x)) = 1.0;
    return s;
}

namespace {

int find_root(std::vector<int>& parent, int i) {
    while (parent[i] != i) {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    return i;
}

void unite(std::vector<int>& parent, int a, int b) {
    parent[find_root(parent, a)] = find_root(parent, b);
}

}  // namespace

std::vector<std::vector<int>> orbit_partition(const WalkSpec& spec) {
    spec.validate();
    const int d = spec.dim();
    std::vector<int> parent(d);
    std::iota(parent.begin(), parent.end(), 0);
    const int rel = spec.delta0 - spec.delta1;
    for (int x = 0; x < spec.n; ++x) {
        unite(parent, spec.index(0, x), spec.index(1, x));
        unite(parent, spec.index(0, x), spec.index(1, spec.wrap(x + rel)));
    }
    std::vector<std::vector<int>> groups;
    std::vector<int> group_of(d, -1);
    for (int i = 0; i < d; ++i) {
        int r = find_root(parent, i);
        if (group_of[r] < 0) {
            group_of[r] = static_cast<int>(groups.size());
            groups.emplace_back();
        }
        groups[group_of[r]].push_back(i);
    }
    return groups;
}

}  // namespace dtqw
