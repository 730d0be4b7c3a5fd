// obar.hpp — the O-bar(t) operator schemes replacing the functional
// derivative in the QSD equation: first/second order short-memory expansions,
// the functional-expansion zeroth order, and the exactly solvable
// dissipative-model form.

#pragma once

#include "nmqsd/kernel.hpp"
#include "nmqsd/model.hpp"

namespace nmqsd {

// O-bar(t) = g0 L - i g1 [H,L] - g2 [L^+,L]L
Matrix obar_first_order(const Model& model, const Coefficients& c);

// Second-order expansion (functional-zeroth approximation of the operator):
// adds g3 [H,[H,L]], g4 [L^+,L]L, g5 and g6 commutator strings. Carries the
// accuracy caveat of its derivation and is excluded from acceptance gating.
Matrix obar_second_order(const Model& model, const Coefficients& c, const HigherCoefficients& h);

class ObarScheme {
public:
    enum class Kind { FirstOrder, SecondOrder, FunctionalZeroth, ExactDissipative };

    static ObarScheme first_order() { return ObarScheme(Kind::FirstOrder); }
    static ObarScheme second_order() { return ObarScheme(Kind::SecondOrder); }
    static ObarScheme functional_zeroth(int dim);
    static ObarScheme exact_dissipative();

    Kind kind() const { return kind_; }

    // O-bar(t); all schemes give the zero matrix at t = 0.
    Matrix value(const Model& model, const Kernel& kernel, double t) const;

    // Advance co-evolved state by one RK4 step of the trajectory grid;
    // no-op for the noise-free expansion schemes.
    ObarScheme stepped(const Model& model, const Kernel& kernel, double dt) const;

    // co-evolved state access (tests / diagnostics)
    const Matrix& obar0() const { return obar0_; }
    Complex riccati_f() const { return f_; }

private:
    explicit ObarScheme(Kind k) : kind_(k) {}

    Kind kind_;
    Matrix obar0_;     // FunctionalZeroth: O-bar_0(t), co-evolved
    Complex f_{0.0};   // ExactDissipative: F(t) with O-bar = F sigma_-
};

// dO-bar_0/dt = (gamma/2) L - gamma O-bar_0 - i[H, O-bar_0] - [L^+ O-bar_0, O-bar_0]
// (OU kernel only; the n=1 coupling term of the hierarchy is dropped)
Matrix functional_zeroth_rhs(const Model& model, double gamma, const Matrix& obar0);

// dF/dt = lambda gamma / 2 + (i omega - gamma) F + lambda F^2, F(0) = 0.
// Derived from the ansatz O-hat(t,s) = f(t,s) sigma_- and the consistency
// condition; the oracle module gates this independently.
Complex riccati_rhs(double omega, double lambda, double gamma, Complex f);

// One RK4 step of the Riccati equation.
Complex riccati_step(double omega, double lambda, double gamma, Complex f, double dt);

}  // namespace nmqsd
