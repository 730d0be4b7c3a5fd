// O-bar operator schemes.

#include "nmqsd/obar.hpp"

#include <stdexcept>

namespace nmqsd {

Matrix obar_first_order(const Model& model, const Coefficients& c) {
    return c.g0 * model.L - kI * c.g1 * model.HL - c.g2 * model.LdL_c_L;
}

Matrix obar_second_order(const Model& model, const Coefficients& c, const HigherCoefficients& h) {
    const Matrix& H = model.H;
    const Matrix& L = model.L;
    const Matrix& Ld = model.L_dag;
    Matrix out = obar_first_order(model, c);
    out -= h.g3 * commutator(H, model.HL);
    out -= h.g4 * model.LdL_c_L;
    out += kI * h.g5 *
           (commutator(H, model.LdL_c_L) + commutator(Matrix(Ld * model.HL), L) +
            commutator(model.LdL, model.HL));
    out += h.g6 * (commutator(Matrix(Ld * model.LdL_c_L), L) + commutator(model.LdL, model.LdL_c_L));
    return out;
}

ObarScheme ObarScheme::functional_zeroth(int dim) {
    ObarScheme s(Kind::FunctionalZeroth);
    s.obar0_ = Matrix::Zero(dim, dim);
    return s;
}

ObarScheme ObarScheme::exact_dissipative() { return ObarScheme(Kind::ExactDissipative); }

Matrix functional_zeroth_rhs(const Model& model, double gamma, const Matrix& obar0) {
    return 0.5 * gamma * model.L - gamma * obar0 - kI * commutator(model.H, obar0) -
           commutator(Matrix(model.L_dag * obar0), obar0);
}

Complex riccati_rhs(double omega, double lambda, double gamma, Complex f) {
    return 0.5 * lambda * gamma + (kI * omega - gamma) * f + lambda * f * f;
}

Complex riccati_step(double omega, double lambda, double gamma, Complex f, double dt) {
    const Complex k1 = riccati_rhs(omega, lambda, gamma, f);
    const Complex k2 = riccati_rhs(omega, lambda, gamma, f + 0.5 * dt * k1);
    const Complex k3 = riccati_rhs(omega, lambda, gamma, f + 0.5 * dt * k2);
    const Complex k4 = riccati_rhs(omega, lambda, gamma, f + dt * k3);
    return f + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Matrix ObarScheme::value(const Model& model, const Kernel& kernel, double t) const {
    switch (kind_) {
        case Kind::FirstOrder:
            return obar_first_order(model, kernel.coefficients(t));
        case Kind::SecondOrder:
            return obar_second_order(model, kernel.coefficients(t), kernel.higher_coefficients(t));
        case Kind::FunctionalZeroth:
            return obar0_;
        case Kind::ExactDissipative: {
            const auto form = dissipative_form(model);
            if (!form)
                throw std::invalid_argument("ObarScheme: exact scheme requires the dissipative model");
            return f_ * pauli_basis().sm;
        }
    }
    throw std::logic_error("ObarScheme: unknown kind");
}

ObarScheme ObarScheme::stepped(const Model& model, const Kernel& kernel, double dt) const {
    switch (kind_) {
        case Kind::FirstOrder:
        case Kind::SecondOrder:
            return *this;
        case Kind::FunctionalZeroth: {
            if (kernel.type() != KernelType::OrnsteinUhlenbeck)
                throw std::invalid_argument("ObarScheme: functional-zeroth evolution requires the OU kernel");
            const double g = kernel.gamma();
            ObarScheme next = *this;
            const Matrix k1 = functional_zeroth_rhs(model, g, obar0_);
            const Matrix k2 = functional_zeroth_rhs(model, g, obar0_ + 0.5 * dt * k1);
            const Matrix k3 = functional_zeroth_rhs(model, g, obar0_ + 0.5 * dt * k2);
            const Matrix k4 = functional_zeroth_rhs(model, g, obar0_ + dt * k3);
            next.obar0_ = obar0_ + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            return next;
        }
        case Kind::ExactDissipative: {
            if (kernel.type() != KernelType::OrnsteinUhlenbeck)
                throw std::invalid_argument("ObarScheme: exact scheme requires the OU kernel");
            const auto form = dissipative_form(model);
            if (!form)
                throw std::invalid_argument("ObarScheme: exact scheme requires the dissipative model");
            ObarScheme next = *this;
            next.f_ = riccati_step(form->omega, form->lambda, kernel.gamma(), f_, dt);
            return next;
        }
    }
    throw std::logic_error("ObarScheme: unknown kind");
}

}  // namespace nmqsd
