// qsd.hpp — stochastic trajectory integrators: nonlinear norm-preserving QSD
// with a pluggable O-bar scheme, the explicit first-order form, the linear
// equation, and the Markov (white noise, Stratonovich) limit.

#pragma once

#include "nmqsd/model.hpp"
#include "nmqsd/noise.hpp"
#include "nmqsd/obar.hpp"

#include <span>
#include <string>
#include <vector>

namespace nmqsd {

struct TrajectoryState {
    Vector psi;   // normalized
    double t{0.0};
    ShiftAccumulator shift;
    ObarScheme scheme;

    TrajectoryState(Vector psi0, ShiftAccumulator acc, ObarScheme sch);
};

// One Heun step of the nonlinear equation
//   dpsi = [-iH + Delta(L) z~ - Delta(L^+) Obar + <Delta(L^+) Obar>] psi dt
// with the noise value frozen across the step and explicit renormalization
// afterwards. The shifted noise z~ = z + memory is assembled here; the shift
// accumulator is advanced with <L^+> at the step start.
void step_nonlinear_qsd(TrajectoryState& state, const Model& model, const Kernel& kernel,
                        Complex z, double dt);

// Same drift expanded explicitly in g0/g1/g2 (term-by-term form); equal to
// step_nonlinear_qsd with the first-order scheme to rounding.
void step_first_order_qsd(TrajectoryState& state, const Model& model, const Kernel& kernel,
                          Complex z, double dt);

// Linear (norm-losing) first-order equation; no renormalization, caller
// tracks the norm. Returns the new unnormalized state.
Vector step_linear_qsd(const Vector& psi, const Model& model, const Coefficients& c_t,
                       const Coefficients& c_next, Complex z, double dt);

// Markov-limit Stratonovich equation driven by complex white noise
// (z of variance 1/dt held constant over the step).
void step_markov_qsd(TrajectoryState& state, const Model& model, Complex z, double dt);

struct TrajectoryResult {
    std::vector<double> t;
    std::vector<std::string> names;
    std::vector<std::vector<double>> observables;  // [time][observable]
    std::vector<double> norm;                      // pre-renormalization norm
    std::vector<Vector> states;                    // recorded normalized states
};

enum class StepperKind { Nonlinear, FirstOrderExplicit, Markov, Linear };

struct TrajectoryOptions {
    int stride{1};
    StepperKind stepper{StepperKind::Nonlinear};
    bool record_states{false};
};

// Samples a noise path for the kernel (OU recursion, general factorization,
// or white noise for the delta kernel), iterates the chosen stepper, records
// observables. Deterministic per seed.
TrajectoryResult run_trajectory(const Model& model, const ObarScheme& scheme,
                                const Kernel& kernel, const Vector& psi0, double dt, int n_steps,
                                std::uint64_t seed, std::span<const Matrix> observables,
                                const TrajectoryOptions& opts = {});

// Default step heuristic: resolve the fastest of bath and system scales.
double default_dt(double gamma, double omega, double lambda);

}  // namespace nmqsd
