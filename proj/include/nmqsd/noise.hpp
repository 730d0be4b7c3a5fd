// noise.hpp — colored complex Gaussian processes z_t with M[z_t z_s^*] =
// alpha(t,s), M[z_t z_s] = 0, and the shifted-noise memory accumulator.

#pragma once

#include "nmqsd/kernel.hpp"
#include "nmqsd/linalg.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace nmqsd {

// Per-trajectory seed from a master seed and a trajectory index (splitmix64),
// so parallel ensembles are reproducible regardless of scheduling.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index);

// mt19937_64 with a hand-rolled Box-Muller so streams are identical across
// standard libraries (std::normal_distribution is implementation-defined).
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : eng_(seed) {}

    double uniform();  // (0, 1]
    double normal();   // N(0, 1)

    // Complex Gaussian with M[|z|^2] = var_total, M[z^2] = 0:
    // independent Re/Im, each with variance var_total/2.
    Complex complex_normal(double var_total);

private:
    std::mt19937_64 eng_;
    bool has_spare_{false};
    double spare_{0.0};
};

struct NoisePath {
    double dt{0.0};
    std::vector<Complex> values;  // z_0 .. z_N on the uniform grid
};

// Exact discrete OU recursion: z_{k+1} = e^{-gamma dt} z_k + w_k; reproduces
// the grid covariance exactly (no Euler-Maruyama bias).
NoisePath sample_ou_path(double gamma, double dt, int n_steps, std::uint64_t seed);

// Generic sampler through factorization of the grid covariance matrix
// C_jk = alpha(t_j, t_k); Hermitian eigendecomposition with small negative
// eigenvalues clipped at -1e-12, significantly non-PSD covariances rejected.
NoisePath sample_general_path(const Kernel& kernel, double dt, int n_steps, std::uint64_t seed);

// Running memory integral m(t) = int_0^t alpha(t,s)^* <L^+>_s ds entering the
// shifted noise z~_t = z_t + m(t).
class ShiftAccumulator {
public:
    // OU closed recursion: m <- e^{-gamma dt} (m + (gamma/2) <L^+>_t dt)
    static ShiftAccumulator ou(double gamma);
    // stored-history trapezoid convolution for any stationary kernel
    static ShiftAccumulator general(Kernel kernel);

    void update(Complex l_dag_expectation, double dt);
    Complex memory() const { return memory_; }
    void reset();

private:
    ShiftAccumulator() = default;
    bool is_ou_{true};
    double gamma_{0.0};
    Complex memory_{0.0};
    Kernel kernel_{Kernel::ornstein_uhlenbeck(1.0)};
    double dt_{0.0};
    std::vector<Complex> history_;  // <L^+> samples at 0, dt, 2dt, ...
};

}  // namespace nmqsd
