#include <doctest.h>

#include "test_util.hpp"

using namespace dtqw;
using dtqw::test::dense_coin_matrix;
using dtqw::test::dense_walk_product;
using dtqw::test::max_abs_diff;
using dtqw::test::random_schedule;

TEST_CASE("WalkSpec universality flag") {
    CHECK(WalkSpec{2, 0, 1}.universal());
    CHECK(WalkSpec{5, 1, -1}.universal());
    CHECK_FALSE(WalkSpec{4, 0, 2}.universal());
    CHECK_FALSE(WalkSpec{6, 1, 4}.universal());
    CHECK_FALSE(WalkSpec{3, 1, 1}.universal());
    CHECK_THROWS_AS((WalkSpec{1, 0, 1}.validate()), std::invalid_argument);
}

TEST_CASE("apply_coin_layer identity and permutation cases") {
    WalkSpec spec{2, 0, 1};
    auto rng = make_rng(7, Stream::States);
    State psi = haar_state(4, rng);
    CHECK(max_abs_diff(apply_coin_layer(psi, CoinLayer::identity(2)), psi) < 1e-15);

    CoinLayer layer = CoinLayer::identity(2);
    layer.coins[0] = pauli(1);
    State flipped = apply_coin_layer(basis_state(spec, 0, 0), layer);
    CHECK(max_abs_diff(flipped, basis_state(spec, 1, 0)) < 1e-15);
}

TEST_CASE("apply_coin_layer matches the dense matrix-vector oracle") {
    WalkSpec spec{3, 0, 1};
    auto rng = make_rng(11, Stream::States);
    CoinLayer layer = random_schedule(spec, 1, rng)[0];
    State psi = haar_state(6, rng);
    State expected = dense_coin_matrix(layer) * psi;
    CHECK(max_abs_diff(apply_coin_layer(psi, layer), expected) < 1e-12);
    CHECK(apply_coin_layer(psi, layer).norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("apply_coin_layer rejects mismatched dimensions") {
    State psi = State::Zero(6);
    CHECK_THROWS_AS(apply_coin_layer(psi, CoinLayer::identity(2)), std::invalid_argument);
}

TEST_CASE("apply_shift moves amplitudes by the coin-conditioned offset") {
    WalkSpec spec{2, 0, 1};
    CHECK(max_abs_diff(apply_shift(basis_state(spec, 1, 0), spec), basis_state(spec, 1, 1)) <
          1e-15);
    CHECK(max_abs_diff(apply_shift(basis_state(spec, 0, 1), spec), basis_state(spec, 0, 1)) <
          1e-15);
}

TEST_CASE("apply_shift on (n=5, 1, -1) has order 5") {
    WalkSpec spec{5, 1, -1};
    auto rng = make_rng(13, Stream::States);
    State psi = haar_state(10, rng);
    State cycled = psi;
    for (int i = 0; i < 5; ++i) cycled = apply_shift(cycled, spec);
    CHECK(max_abs_diff(cycled, psi) < 1e-14);
}

TEST_CASE("shift maps the standard basis bijectively") {
    WalkSpec spec{5, 2, -3};
    Matrix s = shift_matrix(spec);
    CHECK(max_abs_diff(s * s.adjoint(), Matrix::Identity(10, 10)) < 1e-15);
    for (int i = 0; i < 10; ++i) CHECK(s.col(i).cwiseAbs().maxCoeff() == doctest::Approx(1.0));
}

TEST_CASE("evolve: empty window, composition, and identity-coin power") {
    WalkSpec spec{3, 0, 1};
    auto rng = make_rng(17, Stream::States);
    CoinSchedule schedule = random_schedule(spec, 6, rng);
    State psi = haar_state(6, rng);

    CHECK(max_abs_diff(evolve(psi, schedule, spec, 2, 2), psi) < 1e-15);

    State two_stage = evolve(evolve(psi, schedule, spec, 0, 3), schedule, spec, 3, 6);
    CHECK(max_abs_diff(two_stage, evolve(psi, schedule, spec, 0, 6)) < 1e-12);

    CoinSchedule identity_coins(spec.n, CoinLayer::identity(spec.n));
    Matrix s = shift_matrix(spec);
    Matrix sn = Matrix::Identity(6, 6);
    for (int i = 0; i < spec.n; ++i) sn = s * sn;
    CHECK(max_abs_diff(evolve(psi, identity_coins, spec, 0, spec.n), State(sn * psi)) < 1e-13);

    CHECK_THROWS_AS(evolve(psi, schedule, spec, 0, 7), std::out_of_range);
    CHECK_THROWS_AS(evolve(psi, schedule, spec, 4, 2), std::out_of_range);
}

TEST_CASE("full_unitary: T=0 and the Hadamard walk layer") {
    WalkSpec spec{4, 1, -1};
    CHECK(max_abs_diff(full_unitary({}, spec), Matrix::Identity(8, 8)) < 1e-15);

    const Coin hadamard = (Coin() << 1, 1, 1, -1).finished() / std::sqrt(2.0);
    CoinSchedule schedule(1, CoinLayer::identity(4));
    for (auto& coin : schedule[0].coins) coin = hadamard;
    // Hand-built S * (H (x) I) with Kronecker structure.
    Matrix h_layer = Matrix::Zero(8, 8);
    for (int x = 0; x < 4; ++x)
        for (int ci = 0; ci < 2; ++ci)
            for (int cj = 0; cj < 2; ++cj) h_layer(ci * 4 + x, cj * 4 + x) = hadamard(ci, cj);
    Matrix expected = shift_matrix(spec) * h_layer;
    CHECK(max_abs_diff(full_unitary(schedule, spec), expected) < 1e-14);
}

TEST_CASE("full_unitary equals the dense time-ordered product and is unitary") {
    auto rng = make_rng(23, Stream::States);
    for (const WalkSpec& spec : {WalkSpec{2, 0, 1}, WalkSpec{5, 2, 1}, WalkSpec{4, -1, 2}}) {
        CoinSchedule schedule = random_schedule(spec, 10, rng);
        Matrix u = full_unitary(schedule, spec);
        CHECK(max_abs_diff(u, dense_walk_product(schedule, spec)) < 1e-10);
        CHECK(max_abs_diff(u.adjoint() * u, Matrix::Identity(spec.dim(), spec.dim())) < 1e-10);
    }
}

TEST_CASE("norm is preserved by every walk operation") {
    WalkSpec spec{5, 3, 1};
    auto rng = make_rng(29, Stream::States);
    CoinSchedule schedule = random_schedule(spec, 8, rng);
    State psi = haar_state(10, rng);
    CHECK(evolve(psi, schedule, spec, 0, 8).norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("orbit_partition sizes follow gcd of the shift difference") {
    auto sizes = [](const WalkSpec& spec) {
        std::vector<size_t> out;
        for (const auto& orbit : orbit_partition(spec)) out.push_back(orbit.size());
        return out;
    };
    CHECK(sizes(WalkSpec{2, 0, 1}) == std::vector<size_t>{4});
    CHECK(sizes(WalkSpec{4, 0, 2}) == std::vector<size_t>({4, 4}));
    CHECK(sizes(WalkSpec{6, 1, 4}) == std::vector<size_t>({4, 4, 4}));
    CHECK(orbit_partition(WalkSpec{5, 0, 1}).size() == 1);
}

TEST_CASE("orbit_partition matches reachability on the interaction graph") {
    // Oracle: breadth-first closure over coin edges (same-site sectors) and
    // relative-shift edges, on the 2n-vertex graph.
    WalkSpec spec{4, 0, 2};
    const int rel = spec.delta0 - spec.delta1;
    std::vector<int> color(spec.dim(), -1);
    int colors = 0;
    for (int start = 0; start < spec.dim(); ++start) {
        if (color[start] >= 0) continue;
        std::vector<int> queue{start};
        color[start] = colors;
        while (!queue.empty()) {
            int i = queue.back();
            queue.pop_back();
            int c = i / spec.n, x = i % spec.n;
            int neighbors[3] = {spec.index(1 - c, x),
                                spec.index(c, spec.wrap(x + rel)),
                                spec.index(c, spec.wrap(x - rel))};
            for (int nb : neighbors)
                if (color[nb] < 0) {
                    color[nb] = colors;
                    queue.push_back(nb);
                }
        }
        ++colors;
    }
    auto orbits = orbit_partition(spec);
    CHECK(static_cast<int>(orbits.size()) == colors);
    for (const auto& orbit : orbits)
        for (int i : orbit) CHECK(color[i] == color[orbit.front()]);
}
