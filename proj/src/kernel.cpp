// Bath correlation kernels and coefficient integrals.

#include "nmqsd/kernel.hpp"

#include "nmqsd/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace nmqsd {

namespace {

// coth(w / 2kT) with the T->0 limit handled analytically as 1.
double coth_half(double w, double kT) {
    if (kT <= 0.0) return 1.0;
    const double x = w / (2.0 * kT);
    if (x < 1e-4) return 1.0 / x + x / 3.0;
    if (x > 20.0) return 1.0;
    return 1.0 / std::tanh(x);
}

// Ohmic integrals are smooth in w but oscillate at frequency t; at least a
// few Gauss panels per oscillation keeps the 16-point rule exact.
int ohmic_panels(double cutoff, double t) {
    const int osc = static_cast<int>(std::ceil(cutoff * std::abs(t) / 3.0));
    return std::max(8, osc);
}


// g0 and g1 for the Ohmic kernel, reduced to single w-integrals (the time
// integral of the spectral form is analytic).
Coefficients ohmic_g0g1(double eta, double cutoff, double kT, double t) {
    Coefficients c;
    if (t == 0.0) return c;
    const int np = ohmic_panels(cutoff, t);
    auto f0 = [&](double w) -> Complex {
        const double x = w * t;
        return {coth_half(w, kT) * std::sin(x), -(1.0 - std::cos(x))};
    };
    auto f1 = [&](double w) -> Complex {
        const double x = w * t;
        if (x < 1e-6)
            return {coth_half(w, kT) * w * t * t * 0.5, -t * x * x / 3.0};
        return {coth_half(w, kT) * (std::cos(x) - 1.0 + x * std::sin(x)) / w,
                -(std::sin(x) / w - t * std::cos(x))};
    };
    auto r0 = quad::gauss_legendre_checked(f0, 0.0, cutoff, np, 1e-9);
    auto r1 = quad::gauss_legendre_checked(f1, 0.0, cutoff, np, 1e-9);
    if (!r0.converged || !r1.converged)
        throw std::runtime_error("Kernel: ohmic coefficient quadrature did not converge, error estimate " +
                                 std::to_string(std::max(r0.error_estimate, r1.error_estimate)));
    c.g0 = (eta / M_PI) * r0.value;
    c.g1 = (eta / M_PI) * r1.value;
    return c;
}

}  // namespace

Kernel Kernel::ornstein_uhlenbeck(double gamma) {
    if (gamma <= 0.0) throw std::invalid_argument("Kernel: gamma must be > 0");
    Kernel k;
    k.type_ = KernelType::OrnsteinUhlenbeck;
    k.gamma_ = gamma;
    return k;
}

Kernel Kernel::delta() {
    Kernel k;
    k.type_ = KernelType::Delta;
    return k;
}

Kernel Kernel::ohmic(double eta, double cutoff, double kT) {
    if (cutoff <= 0.0) throw std::invalid_argument("Kernel: cutoff must be > 0");
    if (kT < 0.0) throw std::invalid_argument("Kernel: kT must be >= 0");
    Kernel k;
    k.type_ = KernelType::Ohmic;
    k.eta_ = eta;
    k.cutoff_ = cutoff;
    k.kT_ = kT;
    return k;
}

Kernel Kernel::tabulated(double lag_step, std::vector<Complex> values) {
    if (lag_step <= 0.0 || values.size() < 2)
        throw std::invalid_argument("Kernel: tabulated grid needs lag_step > 0 and >= 2 samples");
    Kernel k;
    k.type_ = KernelType::Tabulated;
    k.lag_step_ = lag_step;
    k.table_ = std::move(values);
    return k;
}

Complex Kernel::eval_lag(double tau) const {
    switch (type_) {
        case KernelType::OrnsteinUhlenbeck:
            return 0.5 * gamma_ * std::exp(-gamma_ * std::abs(tau));
        case KernelType::Delta:
            throw std::invalid_argument("Kernel: delta kernel is distributional, no pointwise value");
        case KernelType::Ohmic: {
            const double t = std::abs(tau);
            auto f = [&](double w) -> Complex {
                return w * Complex{coth_half(w, kT_) * std::cos(w * t), -std::sin(w * t)};
            };
            const Complex v =
                (eta_ / M_PI) *
                quad::gauss_legendre_panels(f, 0.0, cutoff_, ohmic_panels(cutoff_, t));
            return tau >= 0.0 ? v : std::conj(v);
        }
        case KernelType::Tabulated: {
            const double t = std::abs(tau);
            const double x = t / lag_step_;
            const auto i = static_cast<std::size_t>(x);
            if (i + 1 >= table_.size()) {
                if (std::abs(x - double(table_.size() - 1)) < 1e-9) {
                    const Complex v = table_.back();
                    return tau >= 0.0 ? v : std::conj(v);
                }
                throw std::out_of_range("Kernel: tabulated lag out of range");
            }
            const double f = x - double(i);
            const Complex v = (1.0 - f) * table_[i] + f * table_[i + 1];
            return tau >= 0.0 ? v : std::conj(v);
        }
    }
    throw std::logic_error("Kernel: unknown type");
}

Complex Kernel::eval(double t, double s) const {
    if (t < 0.0 || s < 0.0) throw std::invalid_argument("Kernel: times must be >= 0");
    return eval_lag(t - s);
}

double Kernel::variance() const {
    switch (type_) {
        case KernelType::OrnsteinUhlenbeck:
            return 0.5 * gamma_;
        case KernelType::Delta:
            throw std::invalid_argument("Kernel: delta kernel has no finite variance");
        case KernelType::Ohmic:
        case KernelType::Tabulated:
            return eval_lag(0.0).real();
    }
    throw std::logic_error("Kernel: unknown type");
}

Coefficients Kernel::coefficients(double t) const {
    if (t < 0.0) throw std::invalid_argument("Kernel: t must be >= 0");
    Coefficients c;
    if (t == 0.0) return c;
    switch (type_) {
        case KernelType::OrnsteinUhlenbeck: {
            const double x = gamma_ * t;
            const double ex = std::exp(-x);
            c.g0 = 0.5 * (1.0 - ex);
            c.g1 = (1.0 - ex - x * ex) / (2.0 * gamma_);
            c.g2 = (1.0 - ex - x * ex - 0.5 * x * x * ex) / (4.0 * gamma_);
            return c;
        }
        case KernelType::Delta:
            // Markov limit of the coefficient integrals for t > 0.
            c.g0 = 0.5;
            return c;
        case KernelType::Ohmic:
            c = ohmic_g0g1(eta_, cutoff_, kT_, t);
            // g2 via the generic double quadrature (only needed off the QBM
            // path, where [L^+,L]L = 0 kills the term anyway)
            c.g2 = coefficients_quadrature(t).g2;
            return c;
        case KernelType::Tabulated:
            return coefficients_quadrature(t);
    }
    throw std::logic_error("Kernel: unknown type");
}

Coefficients Kernel::coefficients_quadrature(double t) const {
    Coefficients c;
    const double scale = variance() * t + 1e-30;
    const double tol = 1e-11 * scale;
    auto a = [&](double tt, double ss) { return eval(tt, ss); };

    auto r0 = quad::adaptive_simpson([&](double s) { return a(t, s); }, 0.0, t, tol);
    auto r1 = quad::adaptive_simpson([&](double s) { return a(t, s) * (t - s); }, 0.0, t, tol);
    auto inner_g0 = [&](double s) {
        return quad::adaptive_simpson([&](double u) { return a(s, u); }, 0.0, s, tol).value;
    };
    auto r2 = quad::adaptive_simpson(
        [&](double s) { return a(t, s) * (t - s) * inner_g0(s); }, 0.0, t, tol * 10.0);
    if (!r0.converged || !r1.converged || !r2.converged)
        throw std::runtime_error("Kernel: coefficient quadrature did not converge, error estimate " +
                                 std::to_string(std::max({r0.error_estimate, r1.error_estimate,
                                                          r2.error_estimate})));
    c.g0 = r0.value;
    c.g1 = r1.value;
    c.g2 = r2.value;
    return c;
}

HigherCoefficients Kernel::higher_coefficients(double t) const {
    if (t < 0.0) throw std::invalid_argument("Kernel: t must be >= 0");
    HigherCoefficients h;
    if (t == 0.0 || type_ == KernelType::Delta) return h;

    const double scale = variance() * t + 1e-30;
    const double tol = 1e-11 * scale;
    auto a = [&](double tt, double ss) { return eval(tt, ss); };
    auto inner_g0 = [&](double s) {
        return quad::adaptive_simpson([&](double u) { return a(s, u); }, 0.0, s, tol).value;
    };

    auto r3 = quad::adaptive_simpson(
        [&](double s) { return 0.5 * a(t, s) * (t - s) * (t - s); }, 0.0, t, tol);
    const Complex a_diag = eval_lag(0.0);
    auto r4 = quad::adaptive_simpson(
        [&](double s) { return 0.5 * a(t, s) * a_diag * (t - s) * (t - s); }, 0.0, t, tol);
    auto r5 = quad::adaptive_simpson(
        [&](double s) { return 0.5 * a(t, s) * (t - s) * (t - s) * inner_g0(s); }, 0.0, t,
        tol * 10.0);
    // innermost pair of g6: int_0^s du alpha(s,u) int_0^u dv alpha(s,v)
    auto inner_g6 = [&](double s) {
        auto run = [&](double u) {
            return quad::adaptive_simpson([&](double v) { return a(s, v); }, 0.0, u, tol).value;
        };
        return quad::adaptive_simpson([&](double u) { return a(s, u) * run(u); }, 0.0, s,
                                      tol * 10.0)
            .value;
    };
    auto r6 = quad::adaptive_simpson(
        [&](double s) { return a(t, s) * (t - s) * (t - s) * inner_g6(s); }, 0.0, t, tol * 100.0);

    if (!r3.converged || !r4.converged || !r5.converged || !r6.converged)
        throw std::runtime_error("Kernel: higher coefficient quadrature did not converge");
    h.g3 = r3.value;
    h.g4 = r4.value;
    h.g5 = r5.value;
    h.g6 = r6.value;
    return h;
}

std::vector<QbmCoeffRow> Kernel::qbm_coeff_table(const std::vector<double>& t_grid) const {
    if (type_ != KernelType::Ohmic)
        throw std::invalid_argument("Kernel: qbm_coeff_table requires the ohmic variant");
    std::vector<QbmCoeffRow> rows;
    rows.reserve(t_grid.size());
    for (double t : t_grid) {
        const Coefficients c = ohmic_g0g1(eta_, cutoff_, kT_, t);
        rows.push_back({t, c.g0.real(), c.g0.imag(), c.g1.real(), c.g1.imag()});
    }
    return rows;
}

CoefficientTable::CoefficientTable(const Kernel& kernel, double t_max, double grid_dt)
    : grid_dt_(grid_dt), t_max_(t_max) {
    if (grid_dt <= 0.0 || t_max < 0.0)
        throw std::invalid_argument("CoefficientTable: bad grid");
    const auto n = static_cast<std::size_t>(std::ceil(t_max / grid_dt)) + 1;
    rows_.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i) rows_.push_back(kernel.coefficients(double(i) * grid_dt));
}

Coefficients CoefficientTable::at(double t) const {
    if (rows_.empty()) throw std::logic_error("CoefficientTable: empty");
    const double x = t / grid_dt_;
    if (x < 0.0 || t > t_max_ + grid_dt_)
        throw std::out_of_range("CoefficientTable: t outside table");
    const auto i = std::min(static_cast<std::size_t>(x), rows_.size() - 2);
    const double f = x - double(i);
    Coefficients c;
    c.g0 = (1.0 - f) * rows_[i].g0 + f * rows_[i + 1].g0;
    c.g1 = (1.0 - f) * rows_[i].g1 + f * rows_[i + 1].g1;
    c.g2 = (1.0 - f) * rows_[i].g2 + f * rows_[i + 1].g2;
    return c;
}

}  // namespace nmqsd
