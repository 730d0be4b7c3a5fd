// Master-equation propagators.

#include "nmqsd/master.hpp"

#include <cmath>
#include <stdexcept>

namespace nmqsd {

namespace {

void check_finite(const Matrix& rho, double t) {
    if (!rho.allFinite())
        throw std::runtime_error("master: propagator produced NaN/Inf at t = " + std::to_string(t));
}

Diagnostics make_diag(const Matrix& rho) { return diagnostics(rho); }

// generic RK4 over rho with a time-dependent right-hand side
template <typename Rhs>
Matrix rk4_step(const Matrix& rho, double t, double dt, const Rhs& rhs) {
    const Matrix k1 = rhs(t, rho);
    const Matrix k2 = rhs(t + 0.5 * dt, rho + 0.5 * dt * k1);
    const Matrix k3 = rhs(t + 0.5 * dt, rho + 0.5 * dt * k2);
    const Matrix k4 = rhs(t + dt, rho + dt * k3);
    return rho + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

template <typename Rhs>
MasterSeries run_generic(Matrix rho0, double dt, int n_steps, int stride, const Rhs& rhs) {
    MasterSeries out;
    out.t.push_back(0.0);
    out.rho.push_back(rho0);
    out.diag.push_back(make_diag(rho0));
    Matrix rho = std::move(rho0);
    for (int k = 0; k < n_steps; ++k) {
        const double t = k * dt;
        rho = rk4_step(rho, t, dt, rhs);
        check_finite(rho, t + dt);
        if ((k + 1) % stride == 0 || k + 1 == n_steps) {
            out.t.push_back(t + dt);
            out.rho.push_back(rho);
            out.diag.push_back(make_diag(rho));
        }
    }
    return out;
}

}  // namespace

Diagnostics diagnostics(const Matrix& rho) {
    Diagnostics d;
    d.trace_error = std::abs(rho.trace() - Complex{1.0, 0.0});
    d.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    d.min_eigenvalue = min_eigenvalue(rho);
    if (rho.rows() == 2) {
        const auto p = pauli_basis();
        const double bx = (rho * p.sx).trace().real();
        const double by = (rho * p.sy).trace().real();
        const double bz = (rho * p.sz).trace().real();
        d.bloch_norm = std::sqrt(bx * bx + by * by + bz * bz);
    }
    return d;
}

Matrix lindblad_rhs(const Model& m, const Matrix& rho) {
    return -kI * commutator(m.H, rho) + m.L * rho * m.L_dag -
           0.5 * anticommutator(m.LdL, rho);
}

Matrix first_order_master_rhs(const Model& m, const Coefficients& c, const Matrix& rho) {
    const Matrix& L = m.L;
    const Matrix& Ld = m.L_dag;
    Matrix out = -kI * commutator(m.H, rho);
    out += (c.g0 + std::conj(c.g0)) * (L * rho * Ld);
    out -= c.g0 * (m.LdL * rho);
    out -= std::conj(c.g0) * (rho * m.LdL);
    out += kI * c.g1 * commutator(Ld, Matrix(m.HL * rho));
    out -= kI * std::conj(c.g1) * commutator(Matrix(rho * commutator(Ld, m.H)), L);
    out += c.g2 * commutator(Ld, Matrix(m.LdL_c_L * rho));
    out += std::conj(c.g2) * commutator(Matrix(rho * Ld * m.LdL_c), L);
    return out;
}

Matrix functional_zeroth_master_rhs(const Model& m, const Matrix& obar0, const Matrix& rho) {
    return -kI * commutator(m.H, rho) + commutator(m.L, Matrix(rho * obar0.adjoint())) +
           commutator(Matrix(obar0 * rho), m.L_dag);
}

Matrix step_lindblad(const Matrix& rho, const Model& model, double dt) {
    return rk4_step(rho, 0.0, dt, [&](double, const Matrix& r) { return lindblad_rhs(model, r); });
}

Matrix step_first_order_master(const Matrix& rho, const Model& model, const Kernel& kernel,
                               double t, double dt) {
    return rk4_step(rho, t, dt, [&](double tt, const Matrix& r) {
        return first_order_master_rhs(model, kernel.coefficients(tt), r);
    });
}

Matrix step_first_order_longtime(const Matrix& rho, const Model& model, double gamma, double dt) {
    const Coefficients c{0.5, 0.5 / gamma, 0.25 / gamma};
    return rk4_step(rho, 0.0, dt,
                    [&](double, const Matrix& r) { return first_order_master_rhs(model, c, r); });
}

MasterSeries run_lindblad(const Model& model, Matrix rho0, double dt, int n_steps, int stride) {
    return run_generic(std::move(rho0), dt, n_steps, stride,
                       [&](double, const Matrix& r) { return lindblad_rhs(model, r); });
}

MasterSeries run_first_order(const Model& model, const Kernel& kernel, Matrix rho0, double dt,
                             int n_steps, int stride) {
    return run_generic(std::move(rho0), dt, n_steps, stride, [&](double t, const Matrix& r) {
        return first_order_master_rhs(model, kernel.coefficients(t), r);
    });
}

MasterSeries run_longtime(const Model& model, double gamma, Matrix rho0, double dt, int n_steps,
                          int stride) {
    const Coefficients c{0.5, 0.5 / gamma, 0.25 / gamma};
    return run_generic(std::move(rho0), dt, n_steps, stride,
                       [&](double, const Matrix& r) { return first_order_master_rhs(model, c, r); });
}

MasterSeries run_functional_zeroth(const Model& model, const Kernel& kernel, Matrix rho0,
                                   double dt, int n_steps, int stride) {
    if (kernel.type() != KernelType::OrnsteinUhlenbeck)
        throw std::invalid_argument("run_functional_zeroth: OU kernel required");
    const double gamma = kernel.gamma();

    // joint RK4 on (Obar0, rho) keeps the coupled system order-4 consistent
    MasterSeries out;
    Matrix rho = std::move(rho0);
    Matrix ob = Matrix::Zero(model.dim, model.dim);
    out.t.push_back(0.0);
    out.rho.push_back(rho);
    out.diag.push_back(make_diag(rho));
    for (int k = 0; k < n_steps; ++k) {
        const Matrix a1 = functional_zeroth_rhs(model, gamma, ob);
        const Matrix b1 = functional_zeroth_master_rhs(model, ob, rho);
        const Matrix a2 = functional_zeroth_rhs(model, gamma, ob + 0.5 * dt * a1);
        const Matrix b2 = functional_zeroth_master_rhs(model, ob + 0.5 * dt * a1, rho + 0.5 * dt * b1);
        const Matrix a3 = functional_zeroth_rhs(model, gamma, ob + 0.5 * dt * a2);
        const Matrix b3 = functional_zeroth_master_rhs(model, ob + 0.5 * dt * a2, rho + 0.5 * dt * b2);
        const Matrix a4 = functional_zeroth_rhs(model, gamma, ob + dt * a3);
        const Matrix b4 = functional_zeroth_master_rhs(model, ob + dt * a3, rho + dt * b3);
        ob += dt / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
        rho += dt / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
        check_finite(rho, (k + 1) * dt);
        if ((k + 1) % stride == 0 || k + 1 == n_steps) {
            out.t.push_back((k + 1) * dt);
            out.rho.push_back(rho);
            out.diag.push_back(make_diag(rho));
        }
    }
    return out;
}

MasterSeries run_exact_dissipative(double omega, double lambda, const Kernel& kernel, Matrix rho0,
                                   double dt, int n_steps, int stride) {
    if (kernel.type() != KernelType::OrnsteinUhlenbeck)
        throw std::invalid_argument("run_exact_dissipative: OU kernel required");
    const double gamma = kernel.gamma();
    const Model model = Model::dissipative(omega, lambda);
    const Matrix sm = pauli_basis().sm;

    MasterSeries out;
    Matrix rho = std::move(rho0);
    Complex f{0.0, 0.0};
    out.t.push_back(0.0);
    out.rho.push_back(rho);
    out.diag.push_back(make_diag(rho));
    auto mass = [&](Complex fv, const Matrix& r) {
        return functional_zeroth_master_rhs(model, Matrix(fv * sm), r);
    };
    for (int k = 0; k < n_steps; ++k) {
        const Complex a1 = riccati_rhs(omega, lambda, gamma, f);
        const Matrix b1 = mass(f, rho);
        const Complex a2 = riccati_rhs(omega, lambda, gamma, f + 0.5 * dt * a1);
        const Matrix b2 = mass(f + 0.5 * dt * a1, rho + 0.5 * dt * b1);
        const Complex a3 = riccati_rhs(omega, lambda, gamma, f + 0.5 * dt * a2);
        const Matrix b3 = mass(f + 0.5 * dt * a2, rho + 0.5 * dt * b2);
        const Complex a4 = riccati_rhs(omega, lambda, gamma, f + dt * a3);
        const Matrix b4 = mass(f + dt * a3, rho + dt * b3);
        f += dt / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
        rho += dt / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
        check_finite(rho, (k + 1) * dt);
        if ((k + 1) % stride == 0 || k + 1 == n_steps) {
            out.t.push_back((k + 1) * dt);
            out.rho.push_back(rho);
            out.diag.push_back(make_diag(rho));
        }
    }
    return out;
}

Matrix qbm_rhs(const Matrix& rho, const Matrix& q, const Matrix& p, const Matrix& H,
               QbmVariant variant, const QbmCoeffRow& g, double eta, double kT) {
    Matrix out = -kI * commutator(H, rho);
    if (variant == QbmVariant::CaldeiraLeggett) {
        out -= kI * (0.5 * eta) * commutator(q, anticommutator(p, rho));
        out -= (eta * kT) * commutator(q, commutator(q, rho));
        return out;
    }
    out -= g.g0R * commutator(q, commutator(q, rho));
    out -= kI * g.g0I * commutator(Matrix(q * q), rho);
    if (variant == QbmVariant::First) {
        out += g.g1R * commutator(q, commutator(p, rho));
        out += kI * g.g1I * commutator(q, anticommutator(p, rho));
    }
    return out;
}

QbmSeries run_qbm(const QbmConfig& cfg, QbmVariant variant, Matrix rho0, double dt, int n_steps,
                  int stride) {
    const auto lad = ladder_ops(cfg.n_levels);
    const Matrix H = 0.5 * (lad.p * lad.p) + 0.5 * cfg.omega0 * cfg.omega0 * (lad.q * lad.q);
    const Kernel kernel = Kernel::ohmic(cfg.eta, cfg.cutoff, cfg.kT);

    // coefficients memoized on the half-step grid the RK4 stages touch
    std::vector<double> grid;
    grid.reserve(2 * n_steps + 1);
    for (int k = 0; k <= 2 * n_steps; ++k) grid.push_back(0.5 * k * dt);
    const auto table = (variant == QbmVariant::CaldeiraLeggett)
                           ? std::vector<QbmCoeffRow>{}
                           : kernel.qbm_coeff_table(grid);
    auto g_at = [&](double t) -> QbmCoeffRow {
        if (table.empty()) return {t, 0, 0, 0, 0};
        const auto i = std::min(static_cast<std::size_t>(std::llround(t / (0.5 * dt))),
                                table.size() - 1);
        return table[i];
    };

    QbmSeries out;
    Matrix rho = std::move(rho0);
    const int n = cfg.n_levels;
    auto top2 = [&](const Matrix& r) { return (r(n - 1, n - 1) + r(n - 2, n - 2)).real(); };
    out.t.push_back(0.0);
    out.rho.push_back(rho);
    out.diag.push_back(make_diag(rho));
    out.max_top2_population = top2(rho);
    for (int k = 0; k < n_steps; ++k) {
        const double t = k * dt;
        rho = rk4_step(rho, t, dt, [&](double tt, const Matrix& r) {
            return qbm_rhs(r, lad.q, lad.p, H, variant, g_at(tt), cfg.eta, cfg.kT);
        });
        check_finite(rho, t + dt);
        out.max_top2_population = std::max(out.max_top2_population, top2(rho));
        if ((k + 1) % stride == 0 || k + 1 == n_steps) {
            out.t.push_back(t + dt);
            out.rho.push_back(rho);
            out.diag.push_back(make_diag(rho));
        }
    }
    // population leaking into the top Fock levels means the truncation can no
    // longer be trusted
    out.truncation_trusted = out.max_top2_population <= 1e-3;
    return out;
}

}  // namespace nmqsd
