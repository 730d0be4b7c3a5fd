// master.hpp — deterministic density-matrix propagators for every master
// equation variant, plus trace/hermiticity/positivity diagnostics.
// Positivity is monitored, never enforced: its violation is a result, not a
// bug to fix silently.

#pragma once

#include "nmqsd/kernel.hpp"
#include "nmqsd/model.hpp"
#include "nmqsd/obar.hpp"

#include <optional>
#include <vector>

namespace nmqsd {

struct Diagnostics {
    double trace_error{0.0};        // |tr rho - 1|
    double hermiticity_error{0.0};  // max |rho - rho^+|
    double min_eigenvalue{0.0};
    std::optional<double> bloch_norm;  // ||<sigma>|| for dim = 2
};

Diagnostics diagnostics(const Matrix& rho);

// rho' = -i[H,rho] + L rho L^+ - 1/2 {L^+L, rho}
Matrix lindblad_rhs(const Model& model, const Matrix& rho);

// post-Markov equation with time-dependent g0, g1, g2
Matrix first_order_master_rhs(const Model& model, const Coefficients& c, const Matrix& rho);

// rho' = -i[H,rho] + [L, rho Obar0^+] + [Obar0 rho, L^+]
Matrix functional_zeroth_master_rhs(const Model& model, const Matrix& obar0, const Matrix& rho);

// single RK4 steps (coefficients evaluated at stage times by the caller's kernel)
Matrix step_lindblad(const Matrix& rho, const Model& model, double dt);
Matrix step_first_order_master(const Matrix& rho, const Model& model, const Kernel& kernel,
                               double t, double dt);
// frozen asymptotic coefficients (OU long-time limit: 1/2, 1/2gamma, 1/4gamma)
Matrix step_first_order_longtime(const Matrix& rho, const Model& model, double gamma, double dt);

struct MasterSeries {
    std::vector<double> t;
    std::vector<Matrix> rho;
    std::vector<Diagnostics> diag;
};

MasterSeries run_lindblad(const Model& model, Matrix rho0, double dt, int n_steps, int stride = 1);
MasterSeries run_first_order(const Model& model, const Kernel& kernel, Matrix rho0, double dt,
                             int n_steps, int stride = 1);
MasterSeries run_longtime(const Model& model, double gamma, Matrix rho0, double dt, int n_steps,
                          int stride = 1);
// co-evolves Obar0 jointly with rho (RK4 on the coupled system); OU kernel
MasterSeries run_functional_zeroth(const Model& model, const Kernel& kernel, Matrix rho0,
                                   double dt, int n_steps, int stride = 1);
// the exact master equation for the dissipative model: Obar = F(t) sigma_-
MasterSeries run_exact_dissipative(double omega, double lambda, const Kernel& kernel, Matrix rho0,
                                   double dt, int n_steps, int stride = 1);

// ---------- quantum Brownian motion ----------

enum class QbmVariant { Zeroth, First, CaldeiraLeggett };

struct QbmConfig {
    int n_levels{30};
    double omega0{1.0};  // harmonic V(q) = omega0^2 q^2 / 2
    double eta{0.1};
    double cutoff{20.0};
    double kT{0.0};
};

// rho' = -i[H,rho] - g0R [q,[q,rho]] - i g0I [q^2,rho]
//        (+ g1R [q,[p,rho]] + i g1I [q,{p,rho}] for First)
// CaldeiraLeggett: -i[H,rho] - i (eta/2)[q,{p,rho}] - eta kT [q,[q,rho]]
Matrix qbm_rhs(const Matrix& rho, const Matrix& q, const Matrix& p, const Matrix& H,
               QbmVariant variant, const QbmCoeffRow& g, double eta, double kT);

struct QbmSeries {
    std::vector<double> t;
    std::vector<Matrix> rho;
    std::vector<Diagnostics> diag;
    bool truncation_trusted{true};   // top two Fock levels stayed below 1e-3
    double max_top2_population{0.0};
};

QbmSeries run_qbm(const QbmConfig& cfg, QbmVariant variant, Matrix rho0, double dt, int n_steps,
                  int stride = 1);

}  // namespace nmqsd
