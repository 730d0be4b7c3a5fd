// oracle.hpp — brute-force validation: unitary evolution of system (x)
// discretized bath under the total Hamiltonian, traced over the bath.

#pragma once

#include "nmqsd/kernel.hpp"
#include "nmqsd/model.hpp"

#include <vector>

namespace nmqsd {

struct DiscretizedBath {
    std::vector<double> omega;  // mode frequencies (may be negative)
    std::vector<double> g2;     // squared couplings, >= 0
    double l2_residual_rel{0.0};   // relative L2 error of the fitted alpha on [0, t_max]
    double t_max{0.0};

    // induced correlation sum_j g2_j exp(-i omega_j tau)
    Complex alpha(double tau) const;
};

// Places modes by nonnegative-least-squares quadrature of the kernel's
// correlation function on [0, t_max] over a dense frequency grid (the
// strongest n_modes are kept and refit, with local grid refinement).
DiscretizedBath fit_bath(const Kernel& kernel, int n_modes, double t_max);

struct OracleSeries {
    std::vector<double> t;
    std::vector<Matrix> rho;   // reduced system state
    double norm_drift{0.0};    // max | ||psi|| - 1 | over the run
};

// Joint pure-state evolution at zero temperature (vacuum bath). For L
// proportional to sigma_- the dynamics closes in the 0/1-excitation sector
// (dimension 2 + n_modes) and is solved by exact diagonalization; otherwise a
// dense RK4 on the full tensor space (dim * fock_cutoff^n_modes <= 4096).
OracleSeries evolve_total(const Model& model, const DiscretizedBath& bath, const Vector& psi0,
                          double dt, int n_steps, int stride = 1, int fock_cutoff = 2);

// First-order estimate of the excited-population error induced by the kernel
// mismatch delta-alpha, propagated through the dissipative model's amplitude
// equation. Used to widen the oracle gate honestly.
double population_error_estimate(const DiscretizedBath& bath, const Kernel& kernel, double omega,
                                 double lambda, double gamma, double t_max);

}  // namespace nmqsd
