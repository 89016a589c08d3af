#include "dtqw/training.hpp"

#include <cmath>

namespace dtqw {

ParameterTensor ParameterTensor::zeros(int T, int n, int k) {
    ParameterTensor p;
    p.T = T;
    p.n = n;
    p.k = k;
    p.values.assign(static_cast<size_t>(T) * n * k, 0.0);
    return p;
}

ParameterTensor random_parameters(int T, int n, int k, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(-2.0 * M_PI, 2.0 * M_PI);
    ParameterTensor p = ParameterTensor::zeros(T, n, k);
    for (auto& v : p.values) v = uni(rng);
    return p;
}

CoinSchedule realize_schedule(const ParameterTensor& params, const CoinModel& model) {
    if (params.k != model.params_per_coin())
        throw std::invalid_argument("realize_schedule: parameter layout does not match variant");
    CoinSchedule schedule(params.T, CoinLayer::identity(params.n));
    for (int t = 0; t < params.T; ++t)
        for (int x = 0; x < params.n; ++x)
            schedule[t].coins[x] = model.realize(x, t, params.coin_params(t, x));
    return schedule;
}

void Povm2::validate() const {
    const int n = static_cast<int>(m0.rows());
    if (m0.cols() != n || m1.rows() != n || m1.cols() != n)
        throw std::invalid_argument("Povm2: blocks must be square and same size");
    double dev = (m0.adjoint() * m0 + m1.adjoint() * m1 - Matrix::Identity(n, n))
                     .cwiseAbs()
                     .maxCoeff();
    if (dev > 1e-10)
        throw std::invalid_argument("Povm2: completeness violated (deviation " +
                                    std::to_string(dev) + ")");
}

Matrix qft_target(int dim) {
    Matrix f(dim, dim);
    const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
    for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k)
            f(j, k) = norm * std::exp(Complex(0, 2.0 * M_PI * j * k / dim));
    return f;
}

Povm2 sample_povm_target(int n, std::mt19937_64& rng) {
    Matrix w = haar_unitary(2 * n, rng);
    Povm2 povm{w.block(0, 0, n, n), w.block(n, 0, n, n)};
    povm.validate();
    return povm;
}

namespace {

// Scratch buffers reused across SGD updates.
struct GradWorkspace {
    std::vector<State> states;
    State phi;
    State scratch;
    std::vector<Coin> gens;
};

// Forward/backward sweep computing the loss and (optionally) the gradient
// for a generic initial state psi0 and desired final state phiT.
double sweep(const ParameterTensor& params, const CoinSchedule& schedule, const WalkSpec& spec,
             const CoinModel& model, const State& psi0, const State& phiT, GradWorkspace& ws,
             ParameterTensor* gradient) {
    const int T = params.T;
    const int n = params.n;

    ws.states.resize(T + 1);
    ws.states[0] = psi0;
    for (int t = 0; t < T; ++t) {
        ws.states[t + 1] = ws.states[t];
        apply_coin_layer_inplace(ws.states[t + 1], schedule[t]);
        apply_shift_inplace(ws.states[t + 1], spec, ws.scratch);
    }
    const double loss_value = 0.5 * (ws.states[T] - phiT).squaredNorm();
    if (!gradient) return loss_value;

    *gradient = ParameterTensor::zeros(T, n, params.k);
    ws.phi = phiT;
    for (int t = T - 1; t >= 0; --t) {
        apply_shift_adjoint_inplace(ws.phi, spec, ws.scratch);
        apply_coin_layer_adjoint_inplace(ws.phi, schedule[t]);
        const State& psi = ws.states[t];
        for (int x = 0; x < n; ++x) {
            model.generators(x, t, params.coin_params(t, x), ws.gens);
            const Complex p0 = ws.phi(x), p1 = ws.phi(n + x);
            const Complex s0 = psi(x), s1 = psi(n + x);
            // d(layer)/dalpha_j is i * coin_x * G_j supported on site x only,
            // so the entry reduces to the on-site sandwich <Phi_x|G_j|Psi_x>.
            for (size_t j = 0; j < ws.gens.size(); ++j) {
                const Coin& g = ws.gens[j];
                const Complex mixed = std::conj(p0) * (g(0, 0) * s0 + g(0, 1) * s1) +
                                      std::conj(p1) * (g(1, 0) * s0 + g(1, 1) * s1);
                gradient->at(t, x, static_cast<int>(j)) = std::imag(mixed);
            }
        }
    }
    return loss_value;
}

State povm_initial_state(const WalkSpec& spec, const State& psi_p) {
    State psi0 = State::Zero(spec.dim());
    psi0.head(spec.n) = psi_p;
    return psi0;
}

State povm_desired_state(const WalkSpec& spec, const State& psi_p, const Povm2& target) {
    State phi(spec.dim());
    phi.head(spec.n) = target.m0 * psi_p;
    phi.tail(spec.n) = target.m1 * psi_p;
    return phi;
}

}  // namespace

double loss(const ParameterTensor& params, const WalkSpec& spec, const CoinModel& model,
            const State& psi, const Matrix& target) {
    GradWorkspace ws;
    CoinSchedule schedule = realize_schedule(params, model);
    return sweep(params, schedule, spec, model, psi, target * psi, ws, nullptr);
}

ParameterTensor grad(const ParameterTensor& params, const WalkSpec& spec, const CoinModel& model,
                     const State& psi, const Matrix& target) {
    GradWorkspace ws;
    ParameterTensor g;
    CoinSchedule schedule = realize_schedule(params, model);
    sweep(params, schedule, spec, model, psi, target * psi, ws, &g);
    return g;
}

double povm_loss(const ParameterTensor& params, const WalkSpec& spec, const CoinModel& model,
                 const State& psi_p, const Povm2& target) {
    target.validate();
    GradWorkspace ws;
    CoinSchedule schedule = realize_schedule(params, model);
    return sweep(params, schedule, spec, model, povm_initial_state(spec, psi_p),
                 povm_desired_state(spec, psi_p, target), ws, nullptr);
}

ParameterTensor povm_grad(const ParameterTensor& params, const WalkSpec& spec,
                          const CoinModel& model, const State& psi_p, const Povm2& target) {
    target.validate();
    GradWorkspace ws;
    ParameterTensor g;
    CoinSchedule schedule = realize_schedule(params, model);
    sweep(params, schedule, spec, model, povm_initial_state(spec, psi_p),
          povm_desired_state(spec, psi_p, target), ws, &g);
    return g;
}

void sgd_step(ParameterTensor& params, const ParameterTensor& gradient, double eta) {
    if (params.T != gradient.T || params.n != gradient.n || params.k != gradient.k)
        throw std::invalid_argument("sgd_step: shape mismatch");
    if (eta <= 0) throw std::invalid_argument("sgd_step: eta must be positive");
    for (size_t i = 0; i < params.values.size(); ++i)
        params.values[i] -= eta * gradient.values[i];
}

double distance_unitary(const Matrix& u, const Matrix& v) {
    if (u.rows() != v.rows() || u.cols() != v.cols())
        throw std::invalid_argument("distance_unitary: dimension mismatch");
    const double dim = static_cast<double>(u.rows());
    const Complex trace = (u * v.adjoint()).trace();
    const double overlap = std::abs(trace) / dim;
    if (overlap > 0.5) {
        // 1 - overlap^2 cancels catastrophically when u ~ e^{i phi} v; use the
        // identity 1 - |m| = ||u - (m/|m|) v||_F^2 / (2 dim) instead.
        const Complex phase = trace / std::abs(trace);
        const double resid2 = (u - phase * v).squaredNorm();
        return std::sqrt(std::min(1.0, resid2 * (1.0 + overlap) / (2.0 * dim)));
    }
    double radicand = 1.0 - overlap * overlap;
    if (radicand < 0) radicand = 0;
    return std::sqrt(radicand);
}

double distance_povm(const Povm2& a, const Povm2& b) {
    if (a.m0.rows() != b.m0.rows())
        throw std::invalid_argument("distance_povm: dimension mismatch");
    const double n = static_cast<double>(a.m0.rows());
    double sum = 0;
    for (int j = 0; j < 2; ++j) {
        const Matrix& aj = (j == 0) ? a.m0 : a.m1;
        const Matrix& bj = (j == 0) ? b.m0 : b.m1;
        const double ta = std::real((aj.adjoint() * aj).trace());
        const double tb = std::real((bj.adjoint() * bj).trace());
        const double cross = std::abs((aj.adjoint() * bj).trace());
        double radicand = ta * ta + tb * tb - 2.0 * cross * cross;
        if (radicand < 0) radicand = 0;
        sum += std::sqrt(radicand);
    }
    return sum / (2.0 * n * std::sqrt(2.0));
}

Povm2 walk_povm(const Matrix& u, const WalkSpec& spec) {
    return {u.block(0, 0, spec.n, spec.n), u.block(spec.n, 0, spec.n, spec.n)};
}

double hadamard_test_gradient(const ParameterTensor& params, const WalkSpec& spec,
                              const CoinModel& model, const State& psi, const Matrix& target,
                              int j, int x, int t) {
    if (model.variant() != CoinVariant::Full)
        throw std::invalid_argument("hadamard_test_gradient: requires the Full variant");
    if (t < 0 || t >= params.T || x < 0 || x >= params.n || j < 0 || j >= params.k)
        throw std::out_of_range("hadamard_test_gradient: invalid index");
    CoinSchedule schedule = realize_schedule(params, model);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

    std::vector<Coin> gens;
    model.generators(x, t, params.coin_params(t, x), gens);
    const Coin& g = gens[j];

    // One circuit per sign: the controlled operator acts as G_j on site x and
    // as sign * identity elsewhere (both unitary since G_j is).  Averaging the
    // two sigma3 readouts cancels the off-site overlap, leaving the on-site
    // sandwich that equals the gradient entry.
    auto readout = [&](double sign) {
        // Ancilla-conditioned branches after the first Hadamard.
        State block0 = inv_sqrt2 * psi;
        State block1 = block0;

        block0 = target * block0;

        block1 = evolve(block1, schedule, spec, 0, t);
        const Complex a0 = block1(x), a1 = block1(spec.n + x);
        block1 *= sign;
        block1(x) = g(0, 0) * a0 + g(0, 1) * a1;
        block1(spec.n + x) = g(1, 0) * a0 + g(1, 1) * a1;
        block1 = evolve(block1, schedule, spec, t, params.T);

        // Ancilla phase gate diag(1, -i), then the closing Hadamard.
        block1 *= Complex(0, -1);
        const State out0 = inv_sqrt2 * (block0 + block1);
        const State out1 = inv_sqrt2 * (block0 - block1);
        return out0.squaredNorm() - out1.squaredNorm();
    };
    return 0.5 * (readout(1.0) + readout(-1.0));
}

void TrainConfig::validate() const {
    if (eta <= 0) throw std::invalid_argument("TrainConfig: eta must be positive");
    if (T <= 0) throw std::invalid_argument("TrainConfig: T must be positive");
    if (max_updates <= 0) throw std::invalid_argument("TrainConfig: max_updates must be positive");
    if (eval_every <= 0) throw std::invalid_argument("TrainConfig: eval_every must be positive");
    if (stop_distance < 0) throw std::invalid_argument("TrainConfig: stop_distance must be >= 0");
}

TrainTrace train(const TrainConfig& config, const WalkSpec& spec, const CoinModel& model,
                 const TargetOp& target, std::mt19937_64& state_rng,
                 std::optional<ParameterTensor> init) {
    config.validate();
    spec.validate();
    const int k = model.params_per_coin();
    const bool unitary_target = std::holds_alternative<Matrix>(target);
    if (unitary_target) {
        const Matrix& v = std::get<Matrix>(target);
        if (v.rows() != spec.dim())
            throw std::invalid_argument("train: target dimension does not match spec");
    } else {
        const Povm2& p = std::get<Povm2>(target);
        p.validate();
        if (p.m0.rows() != spec.n)
            throw std::invalid_argument("train: POVM dimension does not match spec");
    }

    TrainTrace trace;
    ParameterTensor params =
        init ? std::move(*init) : random_parameters(config.T, spec.n, k, state_rng);
    if (params.T != config.T || params.n != spec.n || params.k != k)
        throw std::invalid_argument("train: init parameter shape mismatch");

    GradWorkspace ws;
    ParameterTensor gradient;
    const int sample_dim = unitary_target ? spec.dim() : spec.n;

    auto eval_distance = [&]() {
        Matrix u = full_unitary(realize_schedule(params, model), spec);
        if (unitary_target) return distance_unitary(u, std::get<Matrix>(target));
        return distance_povm(walk_povm(u, spec), std::get<Povm2>(target));
    };

    for (long u = 0; u < config.max_updates; ++u) {
        State sample = haar_state(sample_dim, state_rng);
        State psi0 = unitary_target ? sample : povm_initial_state(spec, sample);
        State phiT = unitary_target
                         ? State(std::get<Matrix>(target) * sample)
                         : povm_desired_state(spec, sample, std::get<Povm2>(target));
        CoinSchedule schedule = realize_schedule(params, model);
        const double loss_value = sweep(params, schedule, spec, model, psi0, phiT, ws, &gradient);
        if (!std::isfinite(loss_value))
            throw std::runtime_error("train: non-finite loss at update " + std::to_string(u));

        if (u % config.eval_every == 0) {
            const double d = eval_distance();
            trace.records.push_back({u, loss_value, d});
            if (config.stop_distance > 0 && d < config.stop_distance) {
                trace.updates_run = u;
                trace.final_distance = d;
                trace.final_params = std::move(params);
                return trace;
            }
        }
        sgd_step(params, gradient, config.eta);
    }

    const double d = eval_distance();
    const double final_loss = trace.records.empty() ? 0.0 : trace.records.back().loss;
    trace.records.push_back({config.max_updates, final_loss, d});
    trace.updates_run = config.max_updates;
    trace.final_distance = d;
    trace.final_params = std::move(params);
    return trace;
}

}  // namespace dtqw
