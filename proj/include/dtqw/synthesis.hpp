#pragma once

// Exact compilation of unitaries into coin schedules: two-level
// factorization by column elimination, the meet-point construction that
// realizes a single two-level unitary as a walk, and the total-effect
// factorization of an arbitrary schedule.

#include <utility>
#include <vector>

#include "dtqw/walk.hpp"

namespace dtqw {

/// A unitary acting on span{|i0>, |i1>} (flat coin-major indices) and as
/// identity elsewhere.  v is expressed in the ordered basis (i0, i1).
struct TwoLevelUnitary {
    Coin v;
    int i0;
    int i1;

    int coin0(const WalkSpec& spec) const { return i0 / spec.n; }
    int site0(const WalkSpec& spec) const { return i0 % spec.n; }
    int coin1(const WalkSpec& spec) const { return i1 / spec.n; }
    int site1(const WalkSpec& spec) const { return i1 % spec.n; }

    /// Dense dim x dim embedding.
    Matrix embed(int dim) const;
};

/// Step and site at which the two trajectories of a basis pair coincide.
struct MeetPoint {
    int t_meet;
    int x_meet;
};

/// Factors V into two-level unitaries such that, with list index 0 applied
/// first to a state, their product reconstructs V.  Identity factors are
/// dropped; entries below 1e-12 in modulus are treated as already zero.
std::vector<TwoLevelUnitary> two_level_decompose(const Matrix& v);

/// Multiplies factors back together (index 0 applied first).
Matrix reconstruct(const std::vector<TwoLevelUnitary>& factors, int dim);

/// Solves for the unique meeting step of the pair's trajectories.  For a
/// same-coin pair the second trajectory runs with the flipped coin, matching
/// the sigma1 pre/post flips used by realize_two_level.
MeetPoint solve_meet(const WalkSpec& spec, int i0, int i1);

/// Schedule whose full unitary equals the embedding of tl: T = n layers for
/// a mixed-coin pair, T = 2n with coin flips at t = 0 and t = n otherwise.
CoinSchedule realize_two_level(const TwoLevelUnitary& tl, const WalkSpec& spec);

/// Exact compilation: decompose V, realize each factor, concatenate.
CoinSchedule realize_unitary_exact(const Matrix& v, const WalkSpec& spec);

/// Rewrites a schedule as S^T times a time-ordered product of two-level
/// factors, one per (site, layer) coin, each supported on the pair
/// {|0, x - t*delta0>, |1, x - t*delta1>}.  Returns (T, factors) with list
/// index 0 applied first.
std::pair<int, std::vector<TwoLevelUnitary>> total_effect_factorize(
    const CoinSchedule& schedule, const WalkSpec& spec);

}  // namespace dtqw
