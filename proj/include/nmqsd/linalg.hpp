// linalg.hpp — dense complex matrix/vector helpers shared by every module.
//
// Basis conventions, fixed repo-wide:
//   * two-level systems: index 0 = excited |+>, index 1 = ground |->
//   * oscillators: Fock index ascending, 0 = vacuum
// All operators are dimensionless with hbar = 1.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <complex>
#include <stdexcept>

namespace nmqsd {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

constexpr Complex kI{0.0, 1.0};

// Default elementwise tolerance for algebraic identities; tests may override.
constexpr double kAlgebraTol = 1e-10;

inline void require_square(const Matrix& a, const char* who) {
    if (a.rows() != a.cols() || a.rows() < 1)
        throw std::invalid_argument(std::string(who) + ": matrix must be square, dim >= 1");
}

inline void require_same_dim(const Matrix& a, const Matrix& b, const char* who) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}

// ab - ba
inline Matrix commutator(const Matrix& a, const Matrix& b) {
    require_square(a, "commutator");
    require_same_dim(a, b, "commutator");
    return a * b - b * a;
}

// ab + ba
inline Matrix anticommutator(const Matrix& a, const Matrix& b) {
    require_square(a, "anticommutator");
    require_same_dim(a, b, "anticommutator");
    return a * b + b * a;
}

// <psi|op|psi> ; psi is assumed normalized by the caller
inline Complex expectation(const Matrix& op, const Vector& psi) {
    if (op.rows() != psi.size())
        throw std::invalid_argument("expectation: dimension mismatch");
    return psi.adjoint() * op * psi;
}

// op - <op> I  (the paper's Delta_t)
inline Matrix delta_op(const Matrix& op, const Vector& psi) {
    const Complex e = expectation(op, psi);
    return op - e * Matrix::Identity(op.rows(), op.cols());
}

inline bool is_hermitian(const Matrix& a, double tol = kAlgebraTol) {
    return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

struct PauliBasis {
    Matrix sx, sy, sz, sp, sm;
};

inline PauliBasis pauli_basis() {
    PauliBasis p;
    p.sx = Matrix::Zero(2, 2);
    p.sx << 0, 1, 1, 0;
    p.sy = Matrix::Zero(2, 2);
    p.sy << 0, -kI, kI, 0;
    p.sz = Matrix::Zero(2, 2);
    p.sz << 1, 0, 0, -1;
    p.sp = 0.5 * (p.sx + kI * p.sy);  // |+><-|
    p.sm = 0.5 * (p.sx - kI * p.sy);  // |-><+|
    return p;
}

struct LadderOps {
    Matrix q, p;       // q=(a+a^+)/sqrt2, p=i(a^+-a)/sqrt2, both Hermitian
    Matrix a, a_dag;
};

inline LadderOps ladder_ops(int n_levels) {
    if (n_levels < 2) throw std::invalid_argument("ladder_ops: n_levels must be >= 2");
    LadderOps out;
    out.a = Matrix::Zero(n_levels, n_levels);
    for (int n = 1; n < n_levels; ++n) out.a(n - 1, n) = std::sqrt(double(n));
    out.a_dag = out.a.adjoint();
    const double r = 1.0 / std::sqrt(2.0);
    out.q = r * (out.a + out.a_dag);
    out.p = kI * r * (out.a_dag - out.a);
    return out;
}

// Smallest eigenvalue of a (numerically) Hermitian matrix.
inline double min_eigenvalue(const Matrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> es((a + a.adjoint()) / 2.0);
    return es.eigenvalues().minCoeff();
}

// 0.5 * sum of singular values of (a-b), i.e. the trace distance for states.
inline double trace_distance(const Matrix& a, const Matrix& b) {
    Eigen::SelfAdjointEigenSolver<Matrix> es((a - b + (a - b).adjoint()) / 2.0);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace nmqsd
