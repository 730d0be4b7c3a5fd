// Pauli algebra, ladder operators, expectation helpers.

#include "nmqsd/linalg.hpp"
#include "nmqsd/noise.hpp"

#include <doctest.h>

using namespace nmqsd;

namespace {

Matrix random_matrix(RandomStream& rng, int dim) {
    Matrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = Complex{rng.normal(), rng.normal()};
    return m;
}

Vector random_state(RandomStream& rng, int dim) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = Complex{rng.normal(), rng.normal()};
    return v / v.norm();
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("commutator identities") {
    const auto p = pauli_basis();
    CHECK(((commutator(p.sz, p.sm) + 2.0 * p.sm).cwiseAbs().maxCoeff()) < kAlgebraTol);

    RandomStream rng(42);
    for (int rep = 0; rep < 20; ++rep) {
        const Matrix a = random_matrix(rng, 4);
        const Matrix b = random_matrix(rng, 4);
        const Matrix c = random_matrix(rng, 4);
        CHECK(commutator(a, a).cwiseAbs().maxCoeff() < kAlgebraTol);
        // antisymmetry and bilinearity
        CHECK((commutator(a, b) + commutator(b, a)).cwiseAbs().maxCoeff() < kAlgebraTol);
        const Complex mu{0.7, -0.3};
        CHECK((commutator(Matrix(mu * a + c), b) - mu * commutator(a, b) - commutator(c, b))
                  .cwiseAbs()
                  .maxCoeff() < 1e-9);
    }
    CHECK_THROWS_AS(commutator(Matrix::Zero(2, 2), Matrix::Zero(3, 3)), std::invalid_argument);
}

TEST_CASE("canonical commutator on the truncated oscillator") {
    const auto lad = ladder_ops(20);
    const Matrix c = commutator(lad.q, lad.p);
    // i I on the leading 19x19 block; the last diagonal entry carries the
    // truncation defect
    for (int i = 0; i < 19; ++i)
        for (int j = 0; j < 19; ++j) {
            const Complex want = (i == j) ? kI : Complex{0.0, 0.0};
            CHECK(std::abs(c(i, j) - want) < 1e-12);
        }
    CHECK(std::abs(c(19, 19) - kI * (1.0 - 20.0)) < 1e-12);
}

TEST_CASE("expectation values") {
    const auto p = pauli_basis();
    Vector plus(2), chi(2), mix(2);
    plus << 1, 0;
    chi << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    mix << 3.0 / std::sqrt(10.0), 1.0 / std::sqrt(10.0);  // (|-> + 3|+>)/sqrt10

    CHECK(expectation(p.sz, plus).real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(expectation(p.sx, chi).real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(expectation(Matrix(p.sp * p.sm), mix).real() == doctest::Approx(0.9).epsilon(1e-12));

    // Hermitian operators give real expectations
    RandomStream rng(7);
    for (int rep = 0; rep < 50; ++rep) {
        const Matrix a = random_matrix(rng, 3);
        const Matrix h = a + a.adjoint();
        const Vector psi = random_state(rng, 3);
        CHECK(std::abs(expectation(h, psi).imag()) < 1e-12);
    }
    CHECK_THROWS_AS(expectation(Matrix::Identity(3, 3), plus), std::invalid_argument);
}

TEST_CASE("delta_op removes the mean") {
    const auto p = pauli_basis();
    Vector plus(2);
    plus << 1, 0;
    CHECK((delta_op(p.sz, plus) - (p.sz - Matrix::Identity(2, 2))).cwiseAbs().maxCoeff() <
          kAlgebraTol);
    CHECK(delta_op(Matrix::Identity(2, 2), plus).cwiseAbs().maxCoeff() < kAlgebraTol);

    RandomStream rng(11);
    for (int rep = 0; rep < 100; ++rep) {
        const Matrix a = random_matrix(rng, 3);
        const Vector psi = random_state(rng, 3);
        CHECK(std::abs(expectation(delta_op(a, psi), psi)) < 1e-12);
    }
}

TEST_CASE("pauli basis") {
    const auto p = pauli_basis();
    Vector minus(2);
    minus << 0, 1;
    CHECK(((p.sp * minus) - Vector::Unit(2, 0)).cwiseAbs().maxCoeff() < kAlgebraTol);
    CHECK((p.sx * p.sx - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < kAlgebraTol);
    Matrix proj = Matrix::Zero(2, 2);
    proj(0, 0) = 1.0;
    CHECK((p.sp * p.sm - proj).cwiseAbs().maxCoeff() < kAlgebraTol);
    // sx sy = i sz and cyclic
    CHECK((p.sx * p.sy - kI * p.sz).cwiseAbs().maxCoeff() == 0.0);
    CHECK((p.sy * p.sz - kI * p.sx).cwiseAbs().maxCoeff() == 0.0);
    CHECK((p.sz * p.sx - kI * p.sy).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("ladder operators") {
    CHECK_THROWS_AS(ladder_ops(1), std::invalid_argument);
    const auto two = ladder_ops(2);
    const auto p = pauli_basis();
    CHECK((two.q - p.sx / std::sqrt(2.0)).cwiseAbs().maxCoeff() < kAlgebraTol);

    const auto lad = ladder_ops(30);
    CHECK(is_hermitian(lad.q));
    CHECK(is_hermitian(lad.p));
    // tr(q^2) = sum_k (k + 1/2) minus the truncation edge term N/2, i.e. N(N-1)/2
    const double tr = (lad.q * lad.q).trace().real();
    CHECK(tr == doctest::Approx(30.0 * 29.0 / 2.0).epsilon(1e-12));
}

}  // TEST_SUITE
