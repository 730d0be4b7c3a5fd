// quadrature.hpp — adaptive Simpson and fixed-order Gauss-Legendre panels.
// All integrands in this project are smooth on their domains, so these two
// rules cover everything the kernel coefficients need.

#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>

namespace nmqsd::quad {

struct Result {
    std::complex<double> value{0.0, 0.0};
    double error_estimate{0.0};
    bool converged{true};
};

namespace detail {

template <typename F>
void adaptive_simpson_rec(const F& f, double a, double b,
                          std::complex<double> fa, std::complex<double> fm,
                          std::complex<double> fb, std::complex<double> whole,
                          double tol, int depth, Result& out) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const std::complex<double> flm = f(lm), frm = f(rm);
    const std::complex<double> left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const std::complex<double> right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const std::complex<double> delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        out.value += left + right + delta / 15.0;
        out.error_estimate += std::abs(delta) / 15.0;
        if (depth <= 0 && std::abs(delta) > 15.0 * tol) out.converged = false;
        return;
    }
    adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, out);
    adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, out);
}

}  // namespace detail

// Adaptive Simpson on [a,b]; tol is an absolute tolerance on the result.
template <typename F>
Result adaptive_simpson(const F& f, double a, double b, double tol = 1e-12,
                        int max_depth = 30) {
    Result out;
    if (a == b) return out;
    const std::complex<double> fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const std::complex<double> whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth, out);
    return out;
}

// 16-point Gauss-Legendre nodes/weights on [-1,1].
inline const double* gl16_nodes() {
    static const double x[16] = {
        -0.9894009349916499, -0.9445750230732326, -0.8656312023878318,
        -0.7554044083550030, -0.6178762444026438, -0.4580167776572274,
        -0.2816035507792589, -0.0950125098376374, 0.0950125098376374,
        0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
        0.7554044083550030,  0.8656312023878318,  0.9445750230732326,
        0.9894009349916499};
    return x;
}
inline const double* gl16_weights() {
    static const double w[16] = {
        0.0271524594117541, 0.0622535239386479, 0.0951585116824928,
        0.1246289712555339, 0.1495959888165767, 0.1691565193950025,
        0.1826034150449236, 0.1894506104550685, 0.1894506104550685,
        0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
        0.1246289712555339, 0.0951585116824928, 0.0622535239386479,
        0.0271524594117541};
    return w;
}

// Composite 16-point Gauss-Legendre over n_panels equal panels.
template <typename F>
std::complex<double> gauss_legendre_panels(const F& f, double a, double b,
                                           int n_panels) {
    if (n_panels < 1) throw std::invalid_argument("gauss_legendre_panels: n_panels < 1");
    const double* x = gl16_nodes();
    const double* w = gl16_weights();
    std::complex<double> sum{0.0, 0.0};
    const double h = (b - a) / n_panels;
    for (int p = 0; p < n_panels; ++p) {
        const double c = a + (p + 0.5) * h;
        std::complex<double> s{0.0, 0.0};
        for (int k = 0; k < 16; ++k) s += w[k] * f(c + 0.5 * h * x[k]);
        sum += 0.5 * h * s;
    }
    return sum;
}

// Panel-doubling Richardson check: integrate with n and 2n panels, report the
// difference as the error estimate.
template <typename F>
Result gauss_legendre_checked(const F& f, double a, double b, int n_panels,
                              double tol = 1e-10) {
    Result out;
    if (a == b) return out;
    const std::complex<double> coarse = gauss_legendre_panels(f, a, b, n_panels);
    const std::complex<double> fine = gauss_legendre_panels(f, a, b, 2 * n_panels);
    out.value = fine;
    out.error_estimate = std::abs(fine - coarse);
    out.converged = out.error_estimate <= tol * (1.0 + std::abs(fine));
    return out;
}

}  // namespace nmqsd::quad
