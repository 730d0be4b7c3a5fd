// model.hpp — the physics problem definition: system Hamiltonian H and
// coupling (Lindblad) operator L, with the operator products every scheme
// reuses.

#pragma once

#include "nmqsd/linalg.hpp"

#include <optional>

namespace nmqsd {

struct Model {
    Matrix H, L;
    int dim{0};

    // cached products
    Matrix L_dag;    // L^+
    Matrix LdL;      // L^+ L
    Matrix HL;       // [H, L]
    Matrix LdL_c;    // [L^+, L]
    Matrix LdL_c_L;  // [L^+, L] L

    Model(Matrix hamiltonian, Matrix coupling)
        : H(std::move(hamiltonian)), L(std::move(coupling)) {
        require_square(H, "Model");
        require_same_dim(H, L, "Model");
        if (!is_hermitian(H, 1e-12))
            throw std::invalid_argument("Model: H must be Hermitian within 1e-12");
        dim = int(H.rows());
        L_dag = L.adjoint();
        LdL = L_dag * L;
        HL = commutator(H, L);
        LdL_c = commutator(L_dag, L);
        LdL_c_L = LdL_c * L;
    }

    // H = (omega/2) sigma_z, L = lambda sigma_-
    static Model dissipative(double omega, double lambda) {
        const auto p = pauli_basis();
        return Model(0.5 * omega * p.sz, lambda * p.sm);
    }

    // H = (omega/2) sigma_x, L = lambda sigma_z
    static Model driven(double omega, double lambda) {
        const auto p = pauli_basis();
        return Model(0.5 * omega * p.sx, lambda * p.sz);
    }
};

struct DissipativeForm {
    double omega, lambda;
};

// Detects H = (omega/2) sigma_z, L = lambda sigma_- (real lambda > 0), the
// shape required by the exactly solvable scheme.
inline std::optional<DissipativeForm> dissipative_form(const Model& model, double tol = 1e-12) {
    if (model.dim != 2) return std::nullopt;
    const auto p = pauli_basis();
    const Complex l10 = model.L(1, 0);
    if (std::abs(l10.imag()) > tol || l10.real() <= 0.0) return std::nullopt;
    if ((model.L - l10 * p.sm).cwiseAbs().maxCoeff() > tol) return std::nullopt;
    const Complex h00 = model.H(0, 0);
    if (std::abs(h00.imag()) > tol) return std::nullopt;
    if ((model.H - h00.real() * p.sz).cwiseAbs().maxCoeff() > tol) return std::nullopt;
    return DissipativeForm{2.0 * h00.real(), l10.real()};
}

}  // namespace nmqsd
