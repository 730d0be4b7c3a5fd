// kernel.hpp — bath correlation functions alpha(t,s) and the derived
// time-dependent coefficients g0..g6.

#pragma once

#include "nmqsd/linalg.hpp"

#include <string>
#include <vector>

namespace nmqsd {

enum class KernelType { OrnsteinUhlenbeck, Delta, Ohmic, Tabulated };

// g0 = int_0^t alpha(t,s) ds
// g1 = int_0^t alpha(t,s)(t-s) ds
// g2 = int_0^t int_0^s alpha(t,s) alpha(s,u) (t-s) du ds
struct Coefficients {
    Complex g0{0.0}, g1{0.0}, g2{0.0};
};

// Second-order coefficients (quadrature of their integral definitions):
// g3 = 1/2 int alpha(t,s)(t-s)^2 ds
// g4 = 1/2 int alpha(t,s) alpha(s,s) (t-s)^2 ds
// g5 = 1/2 int int alpha(t,s) alpha(s,u) (t-s)^2 du ds
// g6 = int int int alpha(t,s) alpha(s,u) alpha(s,v) (t-s)^2 dv du ds
struct HigherCoefficients {
    Complex g3{0.0}, g4{0.0}, g5{0.0}, g6{0.0};
};

struct QbmCoeffRow {
    double t, g0R, g0I, g1R, g1I;
};

class Kernel {
public:
    // alpha(t,s) = (gamma/2) exp(-gamma|t-s|)
    static Kernel ornstein_uhlenbeck(double gamma);
    // alpha(t,s) = delta(t-s); distributional, eval() rejects
    static Kernel delta();
    // alpha(t-s) = (eta/pi) int_0^cutoff dw w (coth(w/2kT) cos(w tau) - i sin(w tau))
    static Kernel ohmic(double eta, double cutoff, double kT);
    // alpha sampled on a uniform lag grid [0, lag_max]; Hermitian extension for t<s
    static Kernel tabulated(double lag_step, std::vector<Complex> values);

    KernelType type() const { return type_; }
    double gamma() const { return gamma_; }
    double eta() const { return eta_; }
    double cutoff() const { return cutoff_; }
    double kT() const { return kT_; }

    // alpha(t,s); satisfies alpha(t,s) = conj(alpha(s,t))
    Complex eval(double t, double s) const;

    // alpha(tau) for stationary kernels, tau >= 0
    Complex eval_lag(double tau) const;

    Coefficients coefficients(double t) const;
    HigherCoefficients higher_coefficients(double t) const;

    // Real/imaginary decomposition of g0, g1 on a grid (Ohmic variant).
    std::vector<QbmCoeffRow> qbm_coeff_table(const std::vector<double>& t_grid) const;

    // Stationary variance alpha(0,0); finite for all variants except Delta.
    double variance() const;

private:
    Kernel() = default;
    Coefficients coefficients_quadrature(double t) const;

    KernelType type_{KernelType::OrnsteinUhlenbeck};
    double gamma_{1.0};
    double eta_{0.0}, cutoff_{0.0}, kT_{0.0};
    double lag_step_{0.0};
    std::vector<Complex> table_;
};

// Coefficients memoized on a uniform time grid (step = grid_dt); lookup by
// linear interpolation. One table serves every trajectory at a fixed dt.
class CoefficientTable {
public:
    CoefficientTable() = default;
    CoefficientTable(const Kernel& kernel, double t_max, double grid_dt);
    Coefficients at(double t) const;
    double t_max() const { return t_max_; }

private:
    double grid_dt_{0.0}, t_max_{0.0};
    std::vector<Coefficients> rows_;
};

}  // namespace nmqsd
