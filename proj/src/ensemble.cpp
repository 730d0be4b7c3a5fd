// Monte Carlo ensemble runner and comparisons.

#include "nmqsd/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace nmqsd {

ObservableSet ObservableSet::pauli() {
    const auto p = pauli_basis();
    ObservableSet s;
    s.names = {"sx", "sy", "sz"};
    s.ops = {p.sx, p.sy, p.sz};
    return s;
}

EnsembleAccumulator::EnsembleAccumulator(std::vector<double> t_grid, std::size_t n_obs, int dim)
    : t_(std::move(t_grid)),
      sum_(t_.size(), std::vector<double>(n_obs, 0.0)),
      sum_sq_(t_.size(), std::vector<double>(n_obs, 0.0)),
      rho_sum_(t_.size(), Matrix::Zero(dim, dim)) {}

void EnsembleAccumulator::add(const TrajectoryResult& traj) {
    if (traj.t.size() != t_.size())
        throw std::invalid_argument("EnsembleAccumulator: time grid mismatch");
    for (std::size_t i = 0; i < t_.size(); ++i) {
        for (std::size_t o = 0; o < sum_[i].size(); ++o) {
            const double v = traj.observables[i][o];
            sum_[i][o] += v;
            sum_sq_[i][o] += v * v;
        }
        const Vector& psi = traj.states[i];
        rho_sum_[i] += psi * psi.adjoint();
    }
    ++n_;
}

void EnsembleAccumulator::merge(const EnsembleAccumulator& other) {
    if (other.t_.size() != t_.size())
        throw std::invalid_argument("EnsembleAccumulator: merge grid mismatch");
    for (std::size_t i = 0; i < t_.size(); ++i) {
        for (std::size_t o = 0; o < sum_[i].size(); ++o) {
            sum_[i][o] += other.sum_[i][o];
            sum_sq_[i][o] += other.sum_sq_[i][o];
        }
        rho_sum_[i] += other.rho_sum_[i];
    }
    n_ += other.n_;
    failed_ += other.failed_;
}

double EnsembleAccumulator::mean(std::size_t i, std::size_t o) const {
    return sum_[i][o] / double(n_);
}

double EnsembleAccumulator::standard_error(std::size_t i, std::size_t o) const {
    if (n_ < 2) return 0.0;
    const double m = mean(i, o);
    const double var = std::max(0.0, (sum_sq_[i][o] - double(n_) * m * m) / double(n_ - 1));
    return std::sqrt(var / double(n_));
}

Matrix EnsembleAccumulator::rho_hat(std::size_t i) const { return rho_sum_[i] / double(n_); }

EnsembleAccumulator run_ensemble(const Model& model, const ObarScheme& scheme,
                                 const Kernel& kernel, const Vector& psi0, double dt, int n_steps,
                                 int n_traj, std::uint64_t master_seed,
                                 const EnsembleOptions& opts) {
    if (n_traj < 1) throw std::invalid_argument("run_ensemble: n_traj must be >= 1");
    if (n_steps % opts.stride != 0)
        throw std::invalid_argument("run_ensemble: n_steps must be a multiple of the stride");

    std::vector<double> t_grid;
    for (int k = 0; k <= n_steps; k += opts.stride) t_grid.push_back(k * dt);

    TrajectoryOptions topt;
    topt.stride = opts.stride;
    topt.stepper = opts.stepper;
    topt.record_states = true;

    // fixed-size batches merged in index order: results are bit-identical for
    // any thread count
    constexpr int kBatch = 32;
    const int n_batches = (n_traj + kBatch - 1) / kBatch;
    std::vector<EnsembleAccumulator> parts(
        n_batches, EnsembleAccumulator(t_grid, opts.observables.ops.size(), model.dim));

    auto run_batch = [&](int b) {
        const int lo = b * kBatch;
        const int hi = std::min(n_traj, lo + kBatch);
        for (int j = lo; j < hi; ++j) {
            try {
                const auto traj =
                    run_trajectory(model, scheme, kernel, psi0, dt, n_steps,
                                   derive_seed(master_seed, std::uint64_t(j)),
                                   opts.observables.ops, topt);
                parts[b].add(traj);
            } catch (const std::runtime_error&) {
                parts[b].count_failure();
            }
        }
    };

    const int n_threads = std::max(1, opts.threads);
    if (n_threads == 1) {
        for (int b = 0; b < n_batches; ++b) run_batch(b);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int w = 0; w < n_threads; ++w)
            pool.emplace_back([&] {
                for (int b = next.fetch_add(1); b < n_batches; b = next.fetch_add(1)) run_batch(b);
            });
        for (auto& th : pool) th.join();
    }

    EnsembleAccumulator acc(t_grid, opts.observables.ops.size(), model.dim);
    for (const auto& p : parts) acc.merge(p);
    if (acc.n_failed() > 0 && double(acc.n_failed()) > 0.01 * double(n_traj))
        throw std::runtime_error("run_ensemble: more than 1% of trajectories aborted (" +
                                 std::to_string(acc.n_failed()) + " of " + std::to_string(n_traj) + ")");
    return acc;
}

double ComparisonReport::max_abs_z_in(double t_lo, double t_hi) const {
    double m = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t_lo || t[i] > t_hi || t[i] == 0.0) continue;
        for (double v : z[i]) m = std::max(m, std::abs(v));
    }
    return m;
}

ComparisonReport compare(const EnsembleAccumulator& acc, const std::vector<Matrix>& rho_ref,
                         const ObservableSet& observables) {
    if (rho_ref.size() != acc.times().size())
        throw std::invalid_argument("compare: reference grid mismatch");
    ComparisonReport rep;
    rep.t = acc.times();
    rep.z.resize(rep.t.size());
    rep.trace_distance.resize(rep.t.size());
    for (std::size_t i = 0; i < rep.t.size(); ++i) {
        rep.z[i].resize(observables.ops.size(), 0.0);
        for (std::size_t o = 0; o < observables.ops.size(); ++o) {
            const double ref = (rho_ref[i] * observables.ops[o]).trace().real();
            const double dev = acc.mean(i, o) - ref;
            const double se = acc.standard_error(i, o);
            rep.z[i][o] = se > 0.0 ? dev / se : 0.0;
            if (rep.t[i] > 0.0) rep.max_abs_z = std::max(rep.max_abs_z, std::abs(rep.z[i][o]));
        }
        rep.trace_distance[i] = trace_distance(acc.rho_hat(i), rho_ref[i]);
        rep.max_trace_distance = std::max(rep.max_trace_distance, rep.trace_distance[i]);
    }
    return rep;
}

NovikovReport novikov_check(const Model& model, const Kernel& kernel, const Vector& psi0,
                            double dt, int n_steps, int n_traj, std::uint64_t master_seed) {
    const double t_final = n_steps * dt;
    const Matrix obar_dag = obar_first_order(model, kernel.coefficients(t_final)).adjoint();

    // per-trajectory Y = P z_t - P Obar^+ ; M[Y] should vanish
    Matrix mean = Matrix::Zero(model.dim, model.dim);
    Matrix m2_re = Matrix::Zero(model.dim, model.dim);
    Matrix m2_im = Matrix::Zero(model.dim, model.dim);
    for (int j = 0; j < n_traj; ++j) {
        const auto seed = derive_seed(master_seed, std::uint64_t(j));
        NoisePath path = (kernel.type() == KernelType::OrnsteinUhlenbeck)
                             ? sample_ou_path(kernel.gamma(), dt, n_steps, seed)
                             : sample_general_path(kernel, dt, n_steps, seed);
        Vector psi = psi0;
        for (int k = 0; k < n_steps; ++k)
            psi = step_linear_qsd(psi, model, kernel.coefficients(k * dt),
                                  kernel.coefficients((k + 1) * dt), path.values[k], dt);
        const Matrix P = psi * psi.adjoint();
        const Matrix Y = P * path.values[n_steps] - P * obar_dag;
        mean += Y;
        m2_re += Y.real().cwiseProduct(Y.real()).cast<Complex>();
        m2_im += Y.imag().cwiseProduct(Y.imag()).cast<Complex>();
    }
    mean /= double(n_traj);

    NovikovReport rep;
    rep.t = t_final;
    rep.lhs_minus_rhs_mean = mean;
    for (int r = 0; r < model.dim; ++r)
        for (int c = 0; c < model.dim; ++c) {
            const double var_re =
                std::max(0.0, (m2_re(r, c).real() - n_traj * mean(r, c).real() * mean(r, c).real()) /
                                  double(n_traj - 1));
            const double var_im =
                std::max(0.0, (m2_im(r, c).real() - n_traj * mean(r, c).imag() * mean(r, c).imag()) /
                                  double(n_traj - 1));
            const double se_re = std::sqrt(var_re / n_traj);
            const double se_im = std::sqrt(var_im / n_traj);
            if (se_re > 0.0)
                rep.max_abs_z = std::max(rep.max_abs_z, std::abs(mean(r, c).real()) / se_re);
            if (se_im > 0.0)
                rep.max_abs_z = std::max(rep.max_abs_z, std::abs(mean(r, c).imag()) / se_im);
        }
    return rep;
}

}  // namespace nmqsd
