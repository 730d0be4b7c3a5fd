// Colored noise generation and the shifted-noise accumulator.

#include "nmqsd/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace nmqsd {

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
    // splitmix64 over master_seed advanced by the index
    std::uint64_t x = master_seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

double RandomStream::uniform() {
    // 53-bit mantissa, in (0, 1]
    return (double((eng_() >> 11)) + 1.0) * (1.0 / 9007199254740992.0);
}

double RandomStream::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

Complex RandomStream::complex_normal(double var_total) {
    const double s = std::sqrt(0.5 * var_total);
    return {s * normal(), s * normal()};
}

NoisePath sample_ou_path(double gamma, double dt, int n_steps, std::uint64_t seed) {
    if (gamma <= 0.0 || dt <= 0.0) throw std::invalid_argument("sample_ou_path: gamma, dt must be > 0");
    if (n_steps < 0) throw std::invalid_argument("sample_ou_path: n_steps must be >= 0");
    RandomStream rng(seed);
    NoisePath path;
    path.dt = dt;
    path.values.resize(n_steps + 1);
    const double var = 0.5 * gamma;  // stationary M[|z|^2] = alpha(0,0)
    const double decay = std::exp(-gamma * dt);
    const double wvar = var * (1.0 - decay * decay);
    path.values[0] = rng.complex_normal(var);
    for (int k = 0; k < n_steps; ++k)
        path.values[k + 1] = decay * path.values[k] + rng.complex_normal(wvar);
    return path;
}

NoisePath sample_general_path(const Kernel& kernel, double dt, int n_steps, std::uint64_t seed) {
    if (dt <= 0.0 || n_steps < 0) throw std::invalid_argument("sample_general_path: bad grid");
    const int n = n_steps + 1;
    Matrix cov(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) cov(j, k) = kernel.eval(j * dt, k * dt);
    Eigen::SelfAdjointEigenSolver<Matrix> es((cov + cov.adjoint()) / 2.0);
    Eigen::VectorXd ev = es.eigenvalues();
    const double ev_max = ev.maxCoeff();
    if (ev.minCoeff() < -1e-6 * ev_max)
        throw std::runtime_error("sample_general_path: covariance significantly non-PSD, min eigenvalue " +
                                 std::to_string(ev.minCoeff()));
    RandomStream rng(seed);
    Vector xi(n);
    for (int k = 0; k < n; ++k) xi(k) = rng.complex_normal(1.0);
    Vector scaled(n);
    for (int k = 0; k < n; ++k) scaled(k) = std::sqrt(std::max(ev(k), 0.0)) * xi(k);
    Vector z = es.eigenvectors() * scaled;

    NoisePath path;
    path.dt = dt;
    path.values.assign(z.data(), z.data() + n);
    return path;
}

ShiftAccumulator ShiftAccumulator::ou(double gamma) {
    if (gamma <= 0.0) throw std::invalid_argument("ShiftAccumulator: gamma must be > 0");
    ShiftAccumulator acc;
    acc.is_ou_ = true;
    acc.gamma_ = gamma;
    return acc;
}

ShiftAccumulator ShiftAccumulator::general(Kernel kernel) {
    ShiftAccumulator acc;
    acc.is_ou_ = false;
    acc.kernel_ = std::move(kernel);
    return acc;
}

void ShiftAccumulator::update(Complex l_dag_expectation, double dt) {
    if (is_ou_) {
        // exact integrator of dm/dt = -gamma m + (gamma/2) <L^+>_t, first order in dt
        memory_ = std::exp(-gamma_ * dt) * (memory_ + 0.5 * gamma_ * l_dag_expectation * dt);
        return;
    }
    if (history_.empty()) dt_ = dt;
    history_.push_back(l_dag_expectation);
    // samples at s = 0, dt, ..., k dt; memory targets t = (k+1) dt, matching
    // the OU recursion's timing: trapezoid over [0, k dt] plus a forward
    // rectangle for the final strip (the sample at t is not known yet).
    const auto n = history_.size();
    const double t = double(n) * dt_;
    Complex m{0.0, 0.0};
    if (n >= 2) {
        for (std::size_t j = 0; j < n; ++j) {
            const double w = (j == 0 || j == n - 1) ? 0.5 : 1.0;
            m += w * std::conj(kernel_.eval(t, double(j) * dt_)) * history_[j];
        }
    }
    m += std::conj(kernel_.eval(t, double(n - 1) * dt_)) * history_.back();
    memory_ = m * dt_;
}

void ShiftAccumulator::reset() {
    memory_ = {0.0, 0.0};
    history_.clear();
}

}  // namespace nmqsd
