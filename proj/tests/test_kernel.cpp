// Kernel evaluation and coefficient integrals, with independent quadrature
// oracles for the closed forms.

#include "nmqsd/kernel.hpp"
#include "nmqsd/quadrature.hpp"

#include <doctest.h>

#include <cmath>

using namespace nmqsd;

namespace {

// independent oracle: adaptive quadrature of the defining integrals, using
// only Kernel::eval
Complex g0_quad(const Kernel& k, double t) {
    return quad::adaptive_simpson([&](double s) { return k.eval(t, s); }, 0.0, t, 1e-14).value;
}
Complex g1_quad(const Kernel& k, double t) {
    return quad::adaptive_simpson([&](double s) { return k.eval(t, s) * (t - s); }, 0.0, t, 1e-14)
        .value;
}
Complex g2_quad(const Kernel& k, double t) {
    auto inner = [&](double s) {
        return quad::adaptive_simpson([&](double u) { return k.eval(s, u); }, 0.0, s, 1e-14).value;
    };
    return quad::adaptive_simpson([&](double s) { return k.eval(t, s) * (t - s) * inner(s); }, 0.0,
                                  t, 1e-13)
        .value;
}

}  // namespace

TEST_SUITE("kernel") {

TEST_CASE("eval and hermitian symmetry") {
    const auto ou = Kernel::ornstein_uhlenbeck(2.0);
    CHECK(ou.eval(0.3, 0.3).real() == doctest::Approx(1.0).epsilon(1e-14));

    const auto ou10 = Kernel::ornstein_uhlenbeck(10.0);
    CHECK(ou10.eval(0.4, 0.3).real() == doctest::Approx(5.0 * std::exp(-1.0)).epsilon(1e-12));

    // alpha(t,s) = conj(alpha(s,t)) exactly for OU and Ohmic
    const auto ohm = Kernel::ohmic(1.0, 20.0, 0.5);
    for (double a : {0.1, 0.7})
        for (double b : {0.2, 0.4}) {
            CHECK(std::abs(ou10.eval(a, b) - std::conj(ou10.eval(b, a))) == 0.0);
            CHECK(std::abs(ohm.eval(a, b) - std::conj(ohm.eval(b, a))) == 0.0);
        }

    // Ohmic at zero lag, kT=0: (eta/pi) int_0^L w dw = L^2/(2 pi)
    const auto ohm0 = Kernel::ohmic(1.0, 20.0, 0.0);
    CHECK(ohm0.eval(0.5, 0.5).real() ==
          doctest::Approx(20.0 * 20.0 / (2.0 * M_PI)).epsilon(1e-10));

    CHECK_THROWS_AS(Kernel::delta().eval(0.1, 0.2), std::invalid_argument);
    const auto tab = Kernel::tabulated(0.1, {Complex{1.0}, Complex{0.5}, Complex{0.25}});
    CHECK_THROWS_AS(tab.eval(1.0, 0.0), std::out_of_range);
}

TEST_CASE("OU closed forms vs independent quadrature") {
    for (double gamma : {0.5, 1.0, 10.0}) {
        const auto k = Kernel::ornstein_uhlenbeck(gamma);
        for (int i = 1; i <= 8; ++i) {
            const double t = (10.0 / gamma) * i / 8.0;
            const auto c = k.coefficients(t);
            CHECK(std::abs(c.g0 - g0_quad(k, t)) / std::abs(c.g0) < 1e-8);
            CHECK(std::abs(c.g1 - g1_quad(k, t)) / std::abs(c.g1) < 1e-8);
            CHECK(std::abs(c.g2 - g2_quad(k, t)) / std::abs(c.g2) < 1e-8);
        }
    }
}

TEST_CASE("OU coefficient values and asymptotics") {
    const auto k = Kernel::ornstein_uhlenbeck(10.0);
    const auto c = k.coefficients(0.1);  // gamma t = 1
    CHECK(c.g0.real() == doctest::Approx(0.5 * (1.0 - std::exp(-1.0))).epsilon(1e-14));
    CHECK(c.g1.real() == doctest::Approx((1.0 - 2.0 * std::exp(-1.0)) / 20.0).epsilon(1e-12));
    CHECK(c.g2.real() == doctest::Approx((1.0 - 2.5 * std::exp(-1.0)) / 40.0).epsilon(1e-12));

    // t >> 1/gamma: (g0, gamma g1, gamma g2) -> (1/2, 1/2, 1/4) to 1e-6 at gamma t = 30
    const auto inf = k.coefficients(3.0);
    CHECK(inf.g0.real() == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(10.0 * inf.g1.real() == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(10.0 * inf.g2.real() == doctest::Approx(0.25).epsilon(1e-6));

    const auto zero = k.coefficients(0.0);
    CHECK(std::abs(zero.g0) == 0.0);
    CHECK(std::abs(zero.g1) == 0.0);
    CHECK(std::abs(zero.g2) == 0.0);

    // delta kernel: Markov values for t > 0
    const auto d = Kernel::delta().coefficients(0.5);
    CHECK(d.g0.real() == doctest::Approx(0.5));
    CHECK(std::abs(d.g1) == 0.0);
    CHECK(std::abs(d.g2) == 0.0);
}

TEST_CASE("higher coefficients g3..g6") {
    const auto k = Kernel::ornstein_uhlenbeck(10.0);
    const auto z = k.higher_coefficients(0.0);
    CHECK(std::abs(z.g3) == 0.0);
    CHECK(std::abs(z.g6) == 0.0);

    // long-time limits from the closed-form integrals of the OU kernel:
    // g3 -> 1/(2 gamma^2), g4 -> 1/(4 gamma), g5 -> 1/(4 gamma^2),
    // g6 -> 1/(8 gamma^2). At gamma t = 10 the g3 tail is exactly
    // e^{-gamma t}(t^2/4 + t/2gamma + 1/2gamma^2); assert both.
    const double g = 10.0;
    const auto h = k.higher_coefficients(1.0);
    const double tail3 = std::exp(-10.0) * (0.25 + 0.05 + 0.005);
    CHECK(h.g3.real() == doctest::Approx(1.0 / (2.0 * g * g) - tail3).epsilon(1e-7));
    const auto far = k.higher_coefficients(3.0);
    CHECK(far.g3.real() == doctest::Approx(1.0 / (2.0 * g * g)).epsilon(1e-6));
    CHECK(far.g4.real() == doctest::Approx(1.0 / (4.0 * g)).epsilon(1e-6));
    CHECK(far.g5.real() == doctest::Approx(1.0 / (4.0 * g * g)).epsilon(1e-4));
    CHECK(far.g6.real() == doctest::Approx(1.0 / (8.0 * g * g)).epsilon(1e-4));

    // spot value frozen from the defining integrals at gamma t = 1
    const auto h1 = k.higher_coefficients(0.1);
    CHECK(h1.g3.real() == doctest::Approx(4.01506985e-4).epsilon(1e-6));
    CHECK(h1.g4.real() == doctest::Approx(2.00753493e-3).epsilon(1e-6));
    CHECK(h1.g5.real() == doctest::Approx(4.74703922e-5).epsilon(1e-5));
    CHECK(h1.g6.real() == doctest::Approx(7.84919254e-6).epsilon(1e-4));
}

TEST_CASE("ohmic coefficients: values, limits, symmetries") {
    const double eta = 0.1, L = 20.0;
    const auto k0 = Kernel::ohmic(eta, L, 0.0);

    // kT = 0 closed forms:
    //   g0R = (eta/pi)(1 - cos(Lt))/t, g0I = -(eta/pi)(L - sin(Lt)/t)
    //   g1I = -(eta/pi)(Si(Lt) - sin(Lt)),
    //   g1R = (eta/pi)((1 - cos(Lt)) - Cin(Lt))
    for (double t : {0.05, 0.2}) {
        const auto c = k0.coefficients(t);
        const double x = L * t;
        CHECK(c.g0.real() ==
              doctest::Approx((eta / M_PI) * (1.0 - std::cos(x)) / t).epsilon(1e-9));
        CHECK(c.g0.imag() ==
              doctest::Approx(-(eta / M_PI) * (L - std::sin(x) / t)).epsilon(1e-9));
    }
    // frozen spot values (independent quadrature of the tau-space definitions)
    const auto c05 = k0.coefficients(0.05);
    CHECK(c05.g1.real() == doctest::Approx(0.00699919).epsilon(1e-5));
    CHECK(c05.g1.imag() == doctest::Approx(-0.00332991).epsilon(1e-5));

    // cross-check the w-space reduction against tau-space quadrature of eval()
    for (double t : {0.1, 0.5}) {
        const auto c = k0.coefficients(t);
        CHECK(std::abs(c.g0 - g0_quad(k0, t)) < 1e-7);
        CHECK(std::abs(c.g1 - g1_quad(k0, t)) < 1e-7);
    }

    // QBM table: all four coefficients vanish at t = 0
    const auto kT50 = Kernel::ohmic(eta, L, 50.0);
    const auto table = kT50.qbm_coeff_table({0.0, 0.1, 0.5});
    CHECK(table[0].g0R == 0.0);
    CHECK(table[0].g0I == 0.0);
    CHECK(table[0].g1R == 0.0);
    CHECK(table[0].g1I == 0.0);
    CHECK_THROWS_AS(Kernel::ornstein_uhlenbeck(1.0).qbm_coeff_table({0.0}),
                    std::invalid_argument);
}

TEST_CASE("tabulated kernel round trip") {
    const auto ou = Kernel::ornstein_uhlenbeck(4.0);
    std::vector<Complex> samples;
    const double step = 1e-3;
    for (int i = 0; i <= 2000; ++i) samples.push_back(ou.eval_lag(i * step));
    const auto tab = Kernel::tabulated(step, samples);
    for (double t : {0.3, 0.9}) {
        const auto a = ou.coefficients(t);
        const auto b = tab.coefficients(t);
        CHECK(std::abs(a.g0 - b.g0) < 1e-6);
        CHECK(std::abs(a.g1 - b.g1) < 1e-6);
        CHECK(std::abs(a.g2 - b.g2) < 1e-6);
    }
}

TEST_CASE("coefficient table memoization") {
    const auto k = Kernel::ornstein_uhlenbeck(10.0);
    const CoefficientTable table(k, 1.0, 1e-3);
    // exact on grid points, O((gamma grid_dt)^2) between them
    for (double t : {0.0, 0.123, 0.5, 1.0}) {
        const auto a = table.at(t);
        const auto b = k.coefficients(t);
        CHECK(std::abs(a.g0 - b.g0) < 1e-12);
        CHECK(std::abs(a.g2 - b.g2) < 1e-12);
    }
    const auto mid = table.at(0.12345);
    CHECK(std::abs(mid.g0 - k.coefficients(0.12345).g0) < 1e-5);
    CHECK_THROWS_AS(table.at(2.0), std::out_of_range);
}

}  // TEST_SUITE
