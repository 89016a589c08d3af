#include <doctest.h>

#include "dtqw/training.hpp"
#include "test_util.hpp"

using namespace dtqw;
using dtqw::test::expm_series;
using dtqw::test::max_abs_diff;

namespace {

double max_abs_diff2(const Coin& a, const Coin& b) { return (a - b).cwiseAbs().maxCoeff(); }

SitePhaseTable phases_for(std::initializer_list<double> values) {
    SitePhaseTable table;
    table.a = values;
    return table;
}

}  // namespace

TEST_CASE("realize_full: identity, coin flip, and the exponential oracle") {
    CHECK(max_abs_diff2(realize_full({{0, 0, 0, 0}}), Coin::Identity()) < 1e-15);

    Coin flip = realize_full({{0, M_PI / 2, 0, 0}});
    CHECK(max_abs_diff2(flip, Complex(0, 1) * pauli(1)) < 1e-14);

    auto rng = make_rng(31, Stream::States);
    std::uniform_real_distribution<double> uni(-3.0, 3.0);
    for (int trial = 0; trial < 25; ++trial) {
        CoinAngles angles{{uni(rng), uni(rng), uni(rng), uni(rng)}};
        Matrix expected = Matrix::Identity(2, 2);
        for (int j = 0; j < 4; ++j)
            expected = expected * expm_series(Complex(0, angles.alpha[j]) * Matrix(pauli(j)));
        // Right-to-left application order: alpha3 factor outermost.
        Matrix oracle = expm_series(Complex(0, angles.alpha[3]) * Matrix(pauli(3))) *
                        expm_series(Complex(0, angles.alpha[2]) * Matrix(pauli(2))) *
                        expm_series(Complex(0, angles.alpha[1]) * Matrix(pauli(1))) *
                        expm_series(Complex(0, angles.alpha[0]) * Matrix(pauli(0)));
        CHECK(max_abs_diff(Matrix(realize_full(angles)), oracle) < 1e-12);
    }
}

TEST_CASE("every realized coin is unitary for every variant") {
    auto rng = make_rng(37, Stream::Tables);
    std::uniform_real_distribution<double> uni(-7.0, 7.0);
    SitePhaseTable phases = sample_phase_table(3, rng);
    AxisNoiseTable noise = sample_axis_noise(4, 3, 0.3, rng);
    const std::vector<CoinModel> models = {
        CoinModel::full(), CoinModel::fixed_phase(phases), CoinModel::x_rotation(phases),
        CoinModel::noisy_axis(phases, noise), CoinModel::correlated(phases)};
    for (const auto& model : models) {
        std::vector<double> p(model.params_per_coin());
        for (int trial = 0; trial < 20; ++trial) {
            for (auto& v : p) v = uni(rng);
            Coin c = model.realize(trial % 3, trial % 4, p);
            CHECK(max_abs_diff2(c.adjoint() * c, Coin::Identity()) < 1e-12);
        }
    }
}

TEST_CASE("fixed-phase variant equals the full variant with alpha0 = a^(x)") {
    auto rng = make_rng(41, Stream::Tables);
    SitePhaseTable phases = sample_phase_table(2, rng);
    CoinModel fixed = CoinModel::fixed_phase(phases);
    std::uniform_real_distribution<double> uni(-5.0, 5.0);
    for (int trial = 0; trial < 20; ++trial) {
        int x = trial % 2;
        double p[3] = {uni(rng), uni(rng), uni(rng)};
        Coin via_variant = fixed.realize(x, 0, std::span<const double>(p, 3));
        Coin via_full = realize_full({{phases.a[x], p[0], p[1], p[2]}});
        CHECK(max_abs_diff2(via_variant, via_full) < 1e-14);
    }
}

TEST_CASE("x-rotation at alpha = 0 is the pure site phase") {
    CoinModel model = CoinModel::x_rotation(phases_for({0.7, 1.9}));
    double zero = 0.0;
    Coin c = model.realize(1, 0, std::span<const double>(&zero, 1));
    CHECK(max_abs_diff2(c, std::exp(Complex(0, 1.9)) * Coin::Identity()) < 1e-15);
}

TEST_CASE("noisy axis with theta = 0 reduces to the x-rotation") {
    SitePhaseTable phases = phases_for({0.4, 2.2});
    AxisNoiseTable noise;
    noise.T = 1;
    noise.n = 2;
    noise.theta = {0.0, 0.0};
    noise.phi = {1.0, 2.5};
    CoinModel noisy = CoinModel::noisy_axis(phases, noise);
    CoinModel xrot = CoinModel::x_rotation(phases);
    double alpha = 0.83;
    std::span<const double> p(&alpha, 1);
    CHECK(max_abs_diff2(noisy.realize(0, 0, p), xrot.realize(0, 0, p)) < 1e-15);
}

TEST_CASE("correlated variant at a = 0, alpha = pi gives the identity") {
    CoinModel model = CoinModel::correlated(phases_for({0.0}));
    double alpha = M_PI;
    Coin c = model.realize(0, 0, std::span<const double>(&alpha, 1));
    CHECK(max_abs_diff2(c, Coin::Identity()) < 1e-14);
}

TEST_CASE("noisy-axis generator is Hermitian with unit operator norm") {
    auto rng = make_rng(43, Stream::Tables);
    SitePhaseTable phases = sample_phase_table(2, rng);
    AxisNoiseTable noise = sample_axis_noise(3, 2, 0.5, rng);
    CoinModel model = CoinModel::noisy_axis(phases, noise);
    std::vector<Coin> gens;
    double alpha = 0.3;
    for (int t = 0; t < 3; ++t)
        for (int x = 0; x < 2; ++x) {
            model.generators(x, t, std::span<const double>(&alpha, 1), gens);
            const Coin& g = gens[0];
            CHECK(max_abs_diff2(g, g.adjoint()) < 1e-14);
            CHECK(max_abs_diff2(g * g, Coin::Identity()) < 1e-14);
        }
}

TEST_CASE("parameter_count per variant") {
    CHECK(parameter_count(CoinVariant::Full, 4, 2) == 32);
    CHECK(parameter_count(CoinVariant::XRotation, 20, 2) == 40);
    CHECK(parameter_count(CoinVariant::FixedPhase, 10, 5) == 150);
    CHECK(parameter_count(CoinVariant::NoisyAxis, 7, 3) == 21);
    CHECK(parameter_count(CoinVariant::Correlated, 7, 3) == 21);
}

TEST_CASE("missing tables are a configuration error") {
    CoinModel model = CoinModel::x_rotation(phases_for({0.1}));
    double alpha = 0.2;
    CHECK_THROWS_AS(model.realize(1, 0, std::span<const double>(&alpha, 1)), std::runtime_error);
}

TEST_CASE("site phases shift the walk unitary by more than a global phase") {
    // Same free parameters, different phase tables; compare the induced
    // one-layer walk unitaries with the phase-invariant distance.
    WalkSpec spec{2, 0, 1};
    SitePhaseTable equal = phases_for({0.3, 0.3});
    SitePhaseTable unequal = phases_for({0.3, 1.7});
    ParameterTensor params = ParameterTensor::zeros(1, 2, 1);
    params.at(0, 0, 0) = 0.9;
    params.at(0, 1, 0) = -0.4;
    Matrix u_equal = full_unitary(realize_schedule(params, CoinModel::x_rotation(equal)), spec);
    Matrix u_unequal =
        full_unitary(realize_schedule(params, CoinModel::x_rotation(unequal)), spec);
    CHECK(distance_unitary(u_equal, u_unequal) > 0.05);
    // sqrt(1 - |.|^2) amplifies rounding near zero; 1e-6 is the honest floor.
    CHECK(distance_unitary(u_equal, std::exp(Complex(0, 0.77)) * u_equal) < 1e-6);
}
