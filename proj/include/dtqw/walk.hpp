#pragma once

// Discrete-time quantum walk on a cycle graph: states, coin layers, the
// coin-conditioned shift, time-ordered evolution and the assembled walk
// unitary.
//
// Basis convention used everywhere in this library: the walker lives on
// 2n basis vectors |c,x> with coin c in {0,1} and site x in {0..n-1},
// flattened coin-major as i = c*n + x.

#include <complex>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace dtqw {

using Complex = std::complex<double>;
using State = Eigen::VectorXcd;    // 2n amplitudes, coin-major
using Matrix = Eigen::MatrixXcd;   // dense 2n x 2n
using Coin = Eigen::Matrix2cd;     // single-site coin operator

/// Cycle size and the per-coin shift offsets.
struct WalkSpec {
    int n;
    int delta0 = 0;
    int delta1 = 1;

    int dim() const { return 2 * n; }

    int delta(int c) const { return c == 0 ? delta0 : delta1; }

    /// Site arithmetic modulo n with the result always in [0, n).
    int wrap(int x) const {
        int r = x % n;
        return r < 0 ? r + n : r;
    }

    int index(int c, int x) const { return c * n + x; }

    /// True iff every U(2n) element is reachable by some coin schedule.
    bool universal() const {
        return delta0 != delta1 && std::gcd(std::abs(delta0 - delta1), n) == 1;
    }

    void validate() const {
        if (n < 2) throw std::invalid_argument("WalkSpec: n must be >= 2");
    }
};

/// One layer of the walk: a coin operator per site.
struct CoinLayer {
    std::vector<Coin> coins;

    static CoinLayer identity(int n) {
        CoinLayer layer;
        layer.coins.assign(n, Coin::Identity());
        return layer;
    }
};

/// T layers of per-site coins; the program of the walk.
using CoinSchedule = std::vector<CoinLayer>;

State basis_state(const WalkSpec& spec, int c, int x);

/// Multiplies the coin 2-vector at each site by the layer's coin operator.
State apply_coin_layer(const State& state, const CoinLayer& layer);

/// In-place variants used by the training hot path.
void apply_coin_layer_inplace(State& state, const CoinLayer& layer);
void apply_coin_layer_adjoint_inplace(State& state, const CoinLayer& layer);

/// Moves the amplitude of |c,x> to |c, x+delta_c mod n>.
State apply_shift(const State& state, const WalkSpec& spec);

void apply_shift_inplace(State& state, const WalkSpec& spec, State& scratch);
void apply_shift_adjoint_inplace(State& state, const WalkSpec& spec, State& scratch);

/// Applies S*C^(t) for t = t0 .. t1-1 in time order.
State evolve(const State& state, const CoinSchedule& schedule, const WalkSpec& spec,
             int t0, int t1);

/// The full 2n x 2n walk unitary U_{T,0}; column i is the evolved basis state i.
Matrix full_unitary(const CoinSchedule& schedule, const WalkSpec& spec);

/// Dense matrix of the shift operator S (a permutation matrix).
Matrix shift_matrix(const WalkSpec& spec);

/// Minimal subsets of the 2n basis indices closed under every walk, computed
/// in the co-moving frame that factors out the free shift: the coin ties the
/// two coin sectors of a site, and layers at different times tie sites
/// differing by delta0 - delta1.  Returns a single full set iff the spec is
/// universal.
std::vector<std::vector<int>> orbit_partition(const WalkSpec& spec);

}  // namespace dtqw
