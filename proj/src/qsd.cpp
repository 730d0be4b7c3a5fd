// Stochastic trajectory steppers.

#include "nmqsd/qsd.hpp"

#include <cmath>
#include <stdexcept>

namespace nmqsd {

namespace {

void check_finite(const Vector& psi, double t) {
    if (!psi.allFinite())
        throw std::runtime_error("qsd: trajectory produced NaN/Inf at t = " + std::to_string(t));
}

// Drift of the nonlinear norm-preserving equation for a given O-bar matrix.
Vector nonlinear_drift(const Vector& psi, const Model& model, const Matrix& obar, Complex zt) {
    const double n2 = psi.squaredNorm();
    const Vector Lp = model.L * psi;
    const Complex eL = Complex(psi.adjoint() * Lp) / n2;
    const Complex eLd = std::conj(eL);
    const Vector Obp = obar * psi;
    const Complex eOb = Complex(psi.adjoint() * Obp) / n2;
    const Vector LdObp = model.L_dag * Obp;
    const Complex eLdOb = Complex(psi.adjoint() * LdObp) / n2;

    Vector d = -kI * (model.H * psi);
    d += zt * (Lp - eL * psi);
    d -= LdObp - eLd * Obp;
    d += (eLdOb - eLd * eOb) * psi;
    return d;
}

Complex l_dag_expectation(const Vector& psi, const Model& model) {
    return Complex(psi.adjoint() * model.L_dag * psi) / psi.squaredNorm();
}

}  // namespace

TrajectoryState::TrajectoryState(Vector psi0, ShiftAccumulator acc, ObarScheme sch)
    : psi(std::move(psi0)), shift(std::move(acc)), scheme(std::move(sch)) {
    const double n = psi.norm();
    if (std::abs(n - 1.0) > 1e-8)
        throw std::invalid_argument("TrajectoryState: psi0 must be normalized");
    psi /= n;
}

void step_nonlinear_qsd(TrajectoryState& state, const Model& model, const Kernel& kernel,
                        Complex z, double dt) {
    const Complex zt = z + state.shift.memory();
    const Matrix ob0 = state.scheme.value(model, kernel, state.t);
    const ObarScheme next = state.scheme.stepped(model, kernel, dt);
    const Matrix ob1 = next.value(model, kernel, state.t + dt);

    const Complex eLd0 = l_dag_expectation(state.psi, model);
    const Vector d1 = nonlinear_drift(state.psi, model, ob0, zt);
    const Vector pred = state.psi + dt * d1;
    const Vector d2 = nonlinear_drift(pred, model, ob1, zt);
    state.psi += 0.5 * dt * (d1 + d2);
    check_finite(state.psi, state.t);
    state.psi /= state.psi.norm();

    state.shift.update(eLd0, dt);
    state.scheme = next;
    state.t += dt;
}

void step_first_order_qsd(TrajectoryState& state, const Model& model, const Kernel& kernel,
                          Complex z, double dt) {
    const Complex zt = z + state.shift.memory();
    const Coefficients c0 = kernel.coefficients(state.t);
    const Coefficients c1 = kernel.coefficients(state.t + dt);

    // the four-line explicit drift: Hamiltonian, noise, then one
    // (Delta(L^+)X - <Delta(L^+)X>) block per coefficient
    auto drift = [&](const Vector& psi, const Coefficients& c) -> Vector {
        const double n2 = psi.squaredNorm();
        auto block = [&](const Matrix& x, Complex coeff) -> Vector {
            const Vector xp = x * psi;
            const Complex eLd = std::conj(Complex(psi.adjoint() * (model.L * psi)) / n2);
            const Complex eX = Complex(psi.adjoint() * xp) / n2;
            const Vector LdXp = model.L_dag * xp;
            const Complex eLdX = Complex(psi.adjoint() * LdXp) / n2;
            return coeff * (LdXp - eLd * xp - (eLdX - eLd * eX) * psi);
        };
        Vector d = -kI * (model.H * psi);
        const Vector Lp = model.L * psi;
        const Complex eL = Complex(psi.adjoint() * Lp) / n2;
        d += zt * (Lp - eL * psi);
        d -= block(model.L, c.g0);
        d += kI * block(model.HL, c.g1);
        d -= block(model.LdL_c_L, c.g2);
        return d;
    };

    const Complex eLd0 = l_dag_expectation(state.psi, model);
    const Vector d1 = drift(state.psi, c0);
    const Vector pred = state.psi + dt * d1;
    const Vector d2 = drift(pred, c1);
    state.psi += 0.5 * dt * (d1 + d2);
    check_finite(state.psi, state.t);
    state.psi /= state.psi.norm();

    state.shift.update(eLd0, dt);
    state.t += dt;
}

Vector step_linear_qsd(const Vector& psi, const Model& model, const Coefficients& c_t,
                       const Coefficients& c_next, Complex z, double dt) {
    auto drift = [&](const Vector& p, const Coefficients& c) -> Vector {
        Vector d = -kI * (model.H * p);
        d += z * (model.L * p);
        d -= c.g0 * (model.LdL * p);
        d += kI * c.g1 * (model.L_dag * (model.HL * p));
        d += c.g2 * (model.L_dag * (model.LdL_c_L * p));
        return d;
    };
    const Vector d1 = drift(psi, c_t);
    const Vector d2 = drift(psi + dt * d1, c_next);
    Vector out = psi + 0.5 * dt * (d1 + d2);
    check_finite(out, 0.0);
    return out;
}

void step_markov_qsd(TrajectoryState& state, const Model& model, Complex z, double dt) {
    auto drift = [&](const Vector& psi) -> Vector {
        const double n2 = psi.squaredNorm();
        const Vector Lp = model.L * psi;
        const Complex eL = Complex(psi.adjoint() * Lp) / n2;
        const Complex eLd = std::conj(eL);
        const Vector LdLp = model.LdL * psi;
        const Complex eLdL = Complex(psi.adjoint() * LdLp) / n2;
        Vector d = -kI * (model.H * psi);
        d += (z + eLd) * (Lp - eL * psi);
        d -= 0.5 * (LdLp - eLdL * psi);
        return d;
    };
    const Vector d1 = drift(state.psi);
    const Vector pred = state.psi + dt * d1;
    const Vector d2 = drift(pred);
    state.psi += 0.5 * dt * (d1 + d2);
    check_finite(state.psi, state.t);
    state.psi /= state.psi.norm();
    state.t += dt;
}

double default_dt(double gamma, double omega, double lambda) {
    double dt = 1e-2;
    if (gamma > 0.0) dt = std::min(dt, 0.1 / gamma);
    if (omega > 0.0) dt = std::min(dt, 0.1 / omega);
    if (lambda > 0.0) dt = std::min(dt, 0.1 / (lambda * lambda));
    return dt;
}

TrajectoryResult run_trajectory(const Model& model, const ObarScheme& scheme,
                                const Kernel& kernel, const Vector& psi0, double dt, int n_steps,
                                std::uint64_t seed, std::span<const Matrix> observables,
                                const TrajectoryOptions& opts) {
    if (dt <= 0.0 || n_steps < 0) throw std::invalid_argument("run_trajectory: bad grid");

    // the delta kernel is distributional: white-noise increments inside the
    // Markov stepper stand in for it
    const bool markov = (kernel.type() == KernelType::Delta) || (opts.stepper == StepperKind::Markov);
    const StepperKind stepper = markov ? StepperKind::Markov : opts.stepper;
    NoisePath path;
    RandomStream white(seed);  // used in markov mode
    if (!markov) {
        path = (kernel.type() == KernelType::OrnsteinUhlenbeck)
                   ? sample_ou_path(kernel.gamma(), dt, n_steps, seed)
                   : sample_general_path(kernel, dt, n_steps, seed);
    }

    ShiftAccumulator shift = (kernel.type() == KernelType::OrnsteinUhlenbeck)
                                 ? ShiftAccumulator::ou(kernel.gamma())
                                 : ShiftAccumulator::general(kernel);
    TrajectoryState state(psi0, shift, scheme);

    // linear mode keeps its own unnormalized state
    Vector lin_psi = state.psi;

    TrajectoryResult out;
    for (const auto& obs : observables) require_same_dim(obs, model.H, "run_trajectory");
    out.names.reserve(observables.size());
    for (std::size_t i = 0; i < observables.size(); ++i)
        out.names.push_back("obs" + std::to_string(i));

    auto record = [&](double t, const Vector& psi, double norm) {
        out.t.push_back(t);
        std::vector<double> row;
        row.reserve(observables.size());
        const Vector ref = psi / psi.norm();
        for (const auto& obs : observables) row.push_back(expectation(obs, ref).real());
        out.observables.push_back(std::move(row));
        out.norm.push_back(norm);
        if (opts.record_states) out.states.push_back(psi);
    };

    record(0.0, stepper == StepperKind::Linear ? lin_psi : state.psi, 1.0);
    for (int k = 0; k < n_steps; ++k) {
        const double t = k * dt;
        switch (stepper) {
            case StepperKind::Nonlinear:
                step_nonlinear_qsd(state, model, kernel, path.values[k], dt);
                break;
            case StepperKind::FirstOrderExplicit:
                step_first_order_qsd(state, model, kernel, path.values[k], dt);
                break;
            case StepperKind::Markov:
                step_markov_qsd(state, model, white.complex_normal(1.0 / dt), dt);
                break;
            case StepperKind::Linear:
                lin_psi = step_linear_qsd(lin_psi, model, kernel.coefficients(t),
                                          kernel.coefficients(t + dt), path.values[k], dt);
                state.t += dt;
                break;
        }
        if ((k + 1) % opts.stride == 0 || k + 1 == n_steps) {
            const Vector& cur = stepper == StepperKind::Linear ? lin_psi : state.psi;
            record(state.t, cur, cur.norm());
        }
    }
    return out;
}

}  // namespace nmqsd
