// System (x) discretized-bath oracle.

#include "nmqsd/oracle.hpp"

#include "nmqsd/obar.hpp"

#include <Eigen/QR>

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace nmqsd {

namespace {

// Lawson-Hanson nonnegative least squares: min ||A x - b||, x >= 0.
Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, int max_iter = 400) {
    const int n = int(A.cols());
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    std::vector<bool> passive(n, false);
    Eigen::VectorXd w = A.transpose() * (b - A * x);
    const double tol = 1e-10 * A.cwiseAbs().maxCoeff() * b.cwiseAbs().maxCoeff();

    auto solve_passive = [&](const std::vector<bool>& set) -> Eigen::VectorXd {
        std::vector<int> idx;
        for (int j = 0; j < n; ++j)
            if (set[j]) idx.push_back(j);
        Eigen::MatrixXd Ap(A.rows(), idx.size());
        for (std::size_t c = 0; c < idx.size(); ++c) Ap.col(c) = A.col(idx[c]);
        Eigen::VectorXd zp = Ap.colPivHouseholderQr().solve(b);
        Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
        for (std::size_t c = 0; c < idx.size(); ++c) z(idx[c]) = zp(c);
        return z;
    };

    for (int it = 0; it < max_iter; ++it) {
        // pick the most violated zero constraint
        int best = -1;
        double best_w = tol;
        for (int j = 0; j < n; ++j)
            if (!passive[j] && w(j) > best_w) {
                best_w = w(j);
                best = j;
            }
        if (best < 0) break;
        passive[best] = true;

        Eigen::VectorXd z = solve_passive(passive);
        while (true) {
            bool feasible = true;
            double alpha = 1.0;
            for (int j = 0; j < n; ++j)
                if (passive[j] && z(j) <= 0.0) {
                    feasible = false;
                    alpha = std::min(alpha, x(j) / (x(j) - z(j)));
                }
            if (feasible) break;
            x += alpha * (z - x);
            for (int j = 0; j < n; ++j)
                if (passive[j] && x(j) <= 1e-14) passive[j] = false;
            z = solve_passive(passive);
        }
        x = z;
        w = A.transpose() * (b - A * x);
    }
    return x;
}

struct FitGrid {
    std::vector<double> tau;
    std::vector<Complex> target;
};

FitGrid sample_target(const Kernel& kernel, double t_max, int n_tau) {
    FitGrid g;
    g.tau.resize(n_tau);
    g.target.resize(n_tau);
    for (int i = 0; i < n_tau; ++i) {
        g.tau[i] = t_max * double(i) / double(n_tau - 1);
        g.target[i] = kernel.eval_lag(g.tau[i]);
    }
    return g;
}

// least-squares weights for fixed frequencies; returns (weights, residual)
std::pair<Eigen::VectorXd, double> weights_for(const FitGrid& grid,
                                               const std::vector<double>& omegas) {
    const int m = int(grid.tau.size());
    const int n = int(omegas.size());
    Eigen::MatrixXd A(2 * m, n);
    Eigen::VectorXd b(2 * m);
    for (int i = 0; i < m; ++i) {
        b(i) = grid.target[i].real();
        b(m + i) = grid.target[i].imag();
        for (int j = 0; j < n; ++j) {
            A(i, j) = std::cos(omegas[j] * grid.tau[i]);
            A(m + i, j) = -std::sin(omegas[j] * grid.tau[i]);
        }
    }
    Eigen::VectorXd x = nnls(A, b);
    const double resid = (A * x - b).norm() / std::max(b.norm(), 1e-300);
    return {x, resid};
}

}  // namespace

Complex DiscretizedBath::alpha(double tau) const {
    Complex s{0.0, 0.0};
    for (std::size_t j = 0; j < omega.size(); ++j)
        s += g2[j] * std::exp(Complex{0.0, -omega[j] * tau});
    return s;
}

DiscretizedBath fit_bath(const Kernel& kernel, int n_modes, double t_max) {
    if (n_modes < 1) throw std::invalid_argument("fit_bath: n_modes must be >= 1");
    if (t_max <= 0.0) throw std::invalid_argument("fit_bath: t_max must be > 0");

    // frequency window wide enough for the kernel's bandwidth
    double w_max = 0.0;
    switch (kernel.type()) {
        case KernelType::OrnsteinUhlenbeck:
            w_max = 8.0 * kernel.gamma();
            break;
        case KernelType::Ohmic:
            w_max = 1.5 * kernel.cutoff();
            break;
        case KernelType::Tabulated:
            w_max = 32.0 / t_max * 3.0;
            break;
        case KernelType::Delta:
            throw std::invalid_argument("fit_bath: delta kernel has no finite-mode representation");
    }

    const FitGrid grid = sample_target(kernel, t_max, 601);

    // round 1: dense uniform candidates; keep the strongest n_modes
    std::vector<double> cand;
    const int n_cand = 241;
    for (int j = 0; j < n_cand; ++j)
        cand.push_back(-w_max + 2.0 * w_max * double(j) / double(n_cand - 1));
    auto [w1, r1] = weights_for(grid, cand);
    std::vector<int> order(cand.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return w1(a) > w1(b); });

    std::vector<double> omegas;
    for (int j = 0; j < n_modes && j < int(order.size()); ++j)
        if (w1(order[j]) > 0.0) omegas.push_back(cand[order[j]]);
    if (omegas.empty()) omegas.push_back(0.0);
    std::sort(omegas.begin(), omegas.end());

    // local refinement rounds around the kept nodes
    double spacing = 2.0 * w_max / double(n_cand - 1);
    for (int round = 0; round < 3; ++round) {
        std::vector<double> local;
        for (double w0 : omegas)
            for (int j = -4; j <= 4; ++j) local.push_back(w0 + spacing * double(j) / 4.0);
        std::sort(local.begin(), local.end());
        auto [wl, rl] = weights_for(grid, local);
        std::vector<int> lorder(local.size());
        std::iota(lorder.begin(), lorder.end(), 0);
        std::sort(lorder.begin(), lorder.end(), [&](int a, int b) { return wl(a) > wl(b); });
        std::vector<double> kept;
        for (int j = 0; j < int(lorder.size()) && int(kept.size()) < n_modes; ++j)
            if (wl(lorder[j]) > 0.0) kept.push_back(local[lorder[j]]);
        if (!kept.empty()) omegas = kept;
        std::sort(omegas.begin(), omegas.end());
        spacing /= 4.0;
    }

    auto [wf, rf] = weights_for(grid, omegas);
    DiscretizedBath bath;
    bath.t_max = t_max;
    for (std::size_t j = 0; j < omegas.size(); ++j)
        if (wf(j) > 0.0) {
            bath.omega.push_back(omegas[j]);
            bath.g2.push_back(wf(j));
        }
    bath.l2_residual_rel = rf;
    return bath;
}

OracleSeries evolve_total(const Model& model, const DiscretizedBath& bath, const Vector& psi0,
                          double dt, int n_steps, int stride, int fock_cutoff) {
    const int n_modes = int(bath.omega.size());
    const auto diss = dissipative_form(model);
    OracleSeries out;

    if (diss) {
        // 0/1-excitation sector: basis |-,vac>, |+,vac>, |-,1_j>
        const int d = 2 + n_modes;
        Matrix h = Matrix::Zero(d, d);
        h(0, 0) = -0.5 * diss->omega;
        h(1, 1) = +0.5 * diss->omega;
        for (int j = 0; j < n_modes; ++j) {
            h(2 + j, 2 + j) = -0.5 * diss->omega + bath.omega[j];
            const double g = std::sqrt(bath.g2[j]);
            h(1, 2 + j) = diss->lambda * g;
            h(2 + j, 1) = diss->lambda * g;
        }
        Eigen::SelfAdjointEigenSolver<Matrix> es(h);
        Vector joint = Vector::Zero(d);
        joint(0) = psi0(1);  // ground amplitude
        joint(1) = psi0(0);  // excited amplitude
        const Vector c = es.eigenvectors().adjoint() * joint;

        for (int k = 0; k <= n_steps; ++k) {
            if (k % stride != 0 && k != n_steps) continue;
            const double t = k * dt;
            Vector phase(d);
            for (int i = 0; i < d; ++i)
                phase(i) = std::exp(Complex{0.0, -es.eigenvalues()(i) * t}) * c(i);
            const Vector psit = es.eigenvectors() * phase;
            out.norm_drift = std::max(out.norm_drift, std::abs(psit.norm() - 1.0));
            Matrix rho = Matrix::Zero(2, 2);
            rho(0, 0) = std::norm(psit(1));
            rho(1, 0) = psit(1) * std::conj(psit(0));
            rho(0, 1) = std::conj(rho(1, 0));
            rho(1, 1) = std::norm(psit(0));
            for (int j = 0; j < n_modes; ++j) rho(1, 1) += std::norm(psit(2 + j));
            out.t.push_back(t);
            out.rho.push_back(rho);
        }
        return out;
    }

    // generic dense path: full tensor space, vacuum bath, RK4
    long total = model.dim;
    for (int j = 0; j < n_modes; ++j) {
        total *= fock_cutoff;
        if (total > 4096) throw std::invalid_argument("evolve_total: dimension bound 4096 exceeded");
    }
    const long d = total;
    Matrix htot = Matrix::Zero(d, d);
    // operators built by kron products: system first, then modes
    auto kron = [](const Matrix& a, const Matrix& b) {
        Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
        for (int i = 0; i < a.rows(); ++i)
            for (int j = 0; j < a.cols(); ++j)
                out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        return out;
    };
    Matrix a1 = Matrix::Zero(fock_cutoff, fock_cutoff);
    for (int n = 1; n < fock_cutoff; ++n) a1(n - 1, n) = std::sqrt(double(n));
    const Matrix id_f = Matrix::Identity(fock_cutoff, fock_cutoff);

    Matrix hs = model.H;
    Matrix Lfull = model.L;
    for (int j = 0; j < n_modes; ++j) {
        hs = kron(hs, id_f);
        Lfull = kron(Lfull, id_f);
    }
    htot = hs;
    for (int j = 0; j < n_modes; ++j) {
        Matrix aj = Matrix::Identity(model.dim, model.dim);
        for (int m = 0; m < n_modes; ++m) aj = kron(aj, m == j ? a1 : id_f);
        // coupling g (L a^+ + L^+ a) and mode energy omega a^+ a
        const double g = std::sqrt(bath.g2[j]);
        htot += g * (Lfull * aj.adjoint() + Lfull.adjoint() * aj);
        htot += bath.omega[j] * (aj.adjoint() * aj);
    }

    Vector psi = Vector::Zero(d);
    // vacuum bath: the first block carries the system amplitudes
    for (int i = 0; i < model.dim; ++i) psi(i * (d / model.dim)) = psi0(i);

    auto rhs = [&](const Vector& v) { return Vector(-kI * (htot * v)); };
    auto reduce = [&](const Vector& v) {
        const long bdim = d / model.dim;
        Matrix rho = Matrix::Zero(model.dim, model.dim);
        for (int i = 0; i < model.dim; ++i)
            for (int j = 0; j < model.dim; ++j)
                for (long b = 0; b < bdim; ++b)
                    rho(i, j) += v(i * bdim + b) * std::conj(v(j * bdim + b));
        return rho;
    };

    out.t.push_back(0.0);
    out.rho.push_back(reduce(psi));
    for (int k = 0; k < n_steps; ++k) {
        const Vector k1 = rhs(psi);
        const Vector k2 = rhs(psi + 0.5 * dt * k1);
        const Vector k3 = rhs(psi + 0.5 * dt * k2);
        const Vector k4 = rhs(psi + dt * k3);
        psi += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        out.norm_drift = std::max(out.norm_drift, std::abs(psi.norm() - 1.0));
        if ((k + 1) % stride == 0 || k + 1 == n_steps) {
            out.t.push_back((k + 1) * dt);
            out.rho.push_back(reduce(psi));
        }
    }
    return out;
}

double population_error_estimate(const DiscretizedBath& bath, const Kernel& kernel, double omega,
                                 double lambda, double gamma, double t_max) {
    // delta-Atilde(t) = -lambda^2 int_0^t dt' int_0^t' ds dalpha(t'-s) e^{i omega (t'-s)} Atilde(s),
    // with Atilde from the Riccati solution; the population error is
    // |2 Re(conj(Atilde) delta-Atilde)| at the initial excited amplitude scale (<= 1).
    const int n = 800;
    const double h = t_max / n;
    std::vector<Complex> atil(n + 1), dal(n + 1);
    Complex f{0.0, 0.0};
    Complex logA{0.0, 0.0};
    atil[0] = 1.0;
    dal[0] = bath.alpha(0.0) - kernel.eval_lag(0.0);
    for (int k = 0; k < n; ++k) {
        // Atilde' = -lambda F Atilde with F from the Riccati equation
        const Complex f_next = riccati_step(omega, lambda, gamma, f, h);
        logA -= 0.5 * h * lambda * (f + f_next);
        f = f_next;
        atil[k + 1] = std::exp(logA);
        const double tau = (k + 1) * h;
        dal[k + 1] = bath.alpha(tau) - kernel.eval_lag(tau);
    }
    // inner convolution I(t') = int_0^t' dalpha(t'-s) e^{i omega (t'-s)} Atilde(s) ds
    double worst = 0.0;
    Complex outer{0.0, 0.0};
    for (int k = 1; k <= n; ++k) {
        Complex inner{0.0, 0.0};
        for (int j = 0; j <= k; ++j) {
            const double w = (j == 0 || j == k) ? 0.5 : 1.0;
            const double tau = (k - j) * h;
            inner += w * dal[k - j] * std::exp(Complex{0.0, omega * tau}) * atil[j];
        }
        outer += inner * h * h;
        worst = std::max(worst, 2.0 * std::abs(atil[k]) * std::abs(lambda * lambda * outer));
    }
    return worst;
}

}  // namespace nmqsd
