#include "dtqw/rng.hpp"

#include <cmath>

namespace dtqw {

std::mt19937_64 make_rng(std::uint64_t master_seed, Stream stream, std::uint64_t substream) {
    std::seed_seq seq{
        static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
        static_cast<std::uint32_t>(static_cast<std::uint64_t>(stream)),
        static_cast<std::uint32_t>(substream), static_cast<std::uint32_t>(substream >> 32)};
    return std::mt19937_64(seq);
}

State haar_state(int dim, std::mt19937_64& rng) {
    if (dim < 1) throw std::invalid_argument("haar_state: dim must be >= 1");
    std::normal_distribution<double> gauss(0.0, 1.0);
    State psi(dim);
    for (int i = 0; i < dim; ++i) psi(i) = Complex(gauss(rng), gauss(rng));
    psi /= psi.norm();
    return psi;
}

Matrix haar_unitary(int dim, std::mt19937_64& rng) {
    if (dim < 1) throw std::invalid_argument("haar_unitary: dim must be >= 1");
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; ++j) {
        Complex d = r(j, j);
        double m = std::abs(d);
        q.col(j) *= (m > 0 ? d / m : Complex(1, 0));
    }
    return q;
}

SitePhaseTable sample_phase_table(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(0.0, 2.0 * M_PI);
    SitePhaseTable table;
    table.a.resize(n);
    for (int x = 0; x < n; ++x) table.a[x] = uni(rng);
    return table;
}

AxisNoiseTable sample_axis_noise(int T, int n, double theta_stddev, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, theta_stddev);
    std::uniform_real_distribution<double> uni(0.0, 2.0 * M_PI);
    AxisNoiseTable table;
    table.T = T;
    table.n = n;
    table.theta.resize(static_cast<size_t>(T) * n);
    table.phi.resize(static_cast<size_t>(T) * n);
    for (auto& v : table.theta) v = gauss(rng);
    for (auto& v : table.phi) v = uni(rng);
    return table;
}

}  // namespace dtqw
