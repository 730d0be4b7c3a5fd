// ensemble.hpp — Monte Carlo orchestration: run N trajectories on a worker
// pool, accumulate observable means and the reconstructed density matrix with
// error bars, compare against master-equation references.

#pragma once

#include "nmqsd/master.hpp"
#include "nmqsd/qsd.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nmqsd {

struct ObservableSet {
    std::vector<std::string> names;
    std::vector<Matrix> ops;

    static ObservableSet pauli();  // sigma_x, sigma_y, sigma_z
};

class EnsembleAccumulator {
public:
    EnsembleAccumulator() = default;
    EnsembleAccumulator(std::vector<double> t_grid, std::size_t n_obs, int dim);

    void add(const TrajectoryResult& traj);
    void merge(const EnsembleAccumulator& other);

    int n_trajectories() const { return n_; }
    int n_failed() const { return failed_; }
    void count_failure() { ++failed_; }
    const std::vector<double>& times() const { return t_; }
    std::size_t n_observables() const { return sum_.empty() ? 0 : sum_[0].size(); }

    double mean(std::size_t time_idx, std::size_t obs_idx) const;
    // standard error = sample std / sqrt(n)
    double standard_error(std::size_t time_idx, std::size_t obs_idx) const;
    // rho_hat = (1/n) sum |psi><psi| ; PSD by construction
    Matrix rho_hat(std::size_t time_idx) const;

private:
    int n_{0};
    int failed_{0};
    std::vector<double> t_;
    std::vector<std::vector<double>> sum_, sum_sq_;  // [time][obs]
    std::vector<Matrix> rho_sum_;                    // [time]
};

struct EnsembleOptions {
    int stride{10};
    int threads{1};
    StepperKind stepper{StepperKind::Nonlinear};
    ObservableSet observables = ObservableSet::pauli();
};

// Deterministic for a given master_seed independent of thread count:
// per-trajectory seeds come from derive_seed(master_seed, index) and partial
// accumulators merge in fixed batch order.
EnsembleAccumulator run_ensemble(const Model& model, const ObarScheme& scheme,
                                 const Kernel& kernel, const Vector& psi0, double dt, int n_steps,
                                 int n_traj, std::uint64_t master_seed,
                                 const EnsembleOptions& opts = {});

struct ComparisonReport {
    std::vector<double> t;
    std::vector<std::vector<double>> z;   // [time][obs] signed z-scores
    std::vector<double> trace_distance;   // [time] 1/2 ||rho_hat - rho_ref||_1
    double max_abs_z{0.0};
    double max_trace_distance{0.0};

    // restrict the max-|z| statistic to a time window (skips t=0 where the
    // standard error vanishes)
    double max_abs_z_in(double t_lo, double t_hi) const;
};

// Reference states must live on the accumulator's time grid.
ComparisonReport compare(const EnsembleAccumulator& acc, const std::vector<Matrix>& rho_ref,
                         const ObservableSet& observables);

struct NovikovReport {
    double t{0.0};
    double max_abs_z{0.0};
    Matrix lhs_minus_rhs_mean;  // M[P z_t - P Obar(t)^+]
};

// Statistical check of the Gaussian-noise relation M[P_t z_t] =
// int alpha(t,s)^* M[P_t O-hat(t,s)^+] ds on linear-QSD trajectories, with
// the first-order O-hat (advisory: the operator itself is approximate).
NovikovReport novikov_check(const Model& model, const Kernel& kernel, const Vector& psi0,
                            double dt, int n_steps, int n_traj, std::uint64_t master_seed);

}  // namespace nmqsd
