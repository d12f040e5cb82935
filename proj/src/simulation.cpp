#include "tbmo/simulation.hpp"

#include <cmath>
#include <string>

namespace tbmo {

NumericalBlowup::NumericalBlowup(std::size_t node, double time)
    : std::runtime_error("numerical blowup: non-finite state at node " + std::to_string(node) +
                         " (t = " + std::to_string(time) + ")"),
      node_(node)
{
}

ControlSchedule::ControlSchedule(double horizon)
    : horizon_(horizon), values_(kControlIntervals)
{
    check();
}

ControlSchedule::ControlSchedule(double horizon, std::vector<ControlValue> values)
    : horizon_(horizon), values_(std::move(values))
{
    check();
}

ControlSchedule ControlSchedule::constant(double horizon, ControlValue u)
{
    return ControlSchedule(horizon, std::vector<ControlValue>(kControlIntervals, u));
}

ControlSchedule ControlSchedule::from_decision(double horizon, std::span<const double> x)
{
    if (x.size() != kDecisionSize) {
        throw std::invalid_argument("ControlSchedule: decision vector must have 120 entries, got " +
                                    std::to_string(x.size()));
    }
    std::vector<ControlValue> values(kControlIntervals);
    for (std::size_t k = 0; k < kControlIntervals; ++k) {
        values[k] = {x[2 * k], x[2 * k + 1]};
    }
    return ControlSchedule(horizon, std::move(values));
}

std::vector<double> ControlSchedule::to_decision() const
{
    std::vector<double> x(kDecisionSize);
    for (std::size_t k = 0; k < kControlIntervals; ++k) {
        x[2 * k] = values_[k].u1;
        x[2 * k + 1] = values_[k].u2;
    }
    return x;
}

void ControlSchedule::check() const
{
    if (!(std::isfinite(horizon_) && horizon_ > 0.0)) {
        throw std::invalid_argument("ControlSchedule: horizon must be positive");
    }
    if (values_.size() != kControlIntervals) {
        throw std::invalid_argument("ControlSchedule: expected 60 intervals, got " +
                                    std::to_string(values_.size()));
    }
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (!values_[k].admissible()) {
            throw std::invalid_argument("ControlSchedule: control on interval " + std::to_string(k) +
                                        " outside [0,1]");
        }
    }
}

const ControlValue& Trajectory::control_at_node(std::size_t node) const
{
    const std::size_t k = std::min(node / substeps, kControlIntervals - 1);
    return schedule[k];
}

StateVector rk4_step(const StateVector& x, const DerivativeFn& field, double h)
{
    const StateVector k1 = field(x);
    const StateVector k2 = field(x + (0.5 * h) * k1);
    const StateVector k3 = field(x + (0.5 * h) * k2);
    const StateVector k4 = field(x + h * k3);
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

StateVector rk4_step(const StateVector& x, const ControlValue& u, const ModelParameters& p, double h)
{
    const StateVector k1 = rhs(x, u, p);
    const StateVector k2 = rhs(x + (0.5 * h) * k1, u, p);
    const StateVector k3 = rhs(x + (0.5 * h) * k2, u, p);
    const StateVector k4 = rhs(x + h * k3, u, p);
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

namespace {

bool finite(const StateVector& x)
{
    return std::isfinite(x.s) && std::isfinite(x.l1) && std::isfinite(x.i) && std::isfinite(x.l2) &&
           std::isfinite(x.r);
}

double burden(const StateVector& x) { return x.i + x.l2; }

/// Integrates one control interval; returns the end state and writes the
/// interval's trapezoid contribution to the f1 integral.
StateVector integrate_interval(StateVector x, const ControlValue& u, const ModelParameters& p, double h,
                               std::size_t substeps, std::size_t first_node, double& contribution)
{
    double interior = 0.0;
    const double start = burden(x);
    for (std::size_t j = 0; j < substeps; ++j) {
        x = rk4_step(x, u, p, h);
        if (!finite(x)) {
            throw NumericalBlowup(first_node + j + 1, static_cast<double>(first_node + j + 1) * h);
        }
        if (j + 1 < substeps) {
            interior += burden(x);
        }
    }
    contribution = h * (0.5 * start + interior + 0.5 * burden(x));
    return x;
}

} // namespace

Trajectory simulate(const ModelParameters& p, const ControlSchedule& schedule, std::size_t substeps)
{
    if (substeps == 0) {
        throw std::invalid_argument("simulate: substeps must be at least 1");
    }
    const std::size_t nodes = kControlIntervals * substeps + 1;
    const double h = schedule.interval_width() / static_cast<double>(substeps);

    Trajectory traj{.times = {}, .states = {}, .schedule = schedule, .substeps = substeps};
    traj.times.reserve(nodes);
    traj.states.reserve(nodes);

    StateVector x = initial_state(p.n);
    traj.times.push_back(0.0);
    traj.states.push_back(x);
    for (std::size_t k = 0; k < kControlIntervals; ++k) {
        const ControlValue& u = schedule[k];
        for (std::size_t j = 0; j < substeps; ++j) {
            x = rk4_step(x, u, p, h);
            const std::size_t node = traj.states.size();
            const double t = schedule.horizon() * static_cast<double>(node) / static_cast<double>(nodes - 1);
            if (!finite(x)) {
                throw NumericalBlowup(node, t);
            }
            traj.times.push_back(t);
            traj.states.push_back(x);
        }
    }
    return traj;
}

double trapezoid(std::span<const double> samples, double h)
{
    if (samples.size() < 2) {
        throw std::invalid_argument("trapezoid: need at least 2 samples");
    }
    if (!(h > 0.0)) {
        throw std::invalid_argument("trapezoid: spacing must be positive");
    }
    double interior = 0.0;
    for (std::size_t j = 1; j + 1 < samples.size(); ++j) {
        interior += samples[j];
    }
    return h * (0.5 * samples.front() + interior + 0.5 * samples.back());
}

double eval_f1(const Trajectory& traj)
{
    std::vector<double> samples;
    samples.reserve(traj.states.size());
    for (const auto& x : traj.states) {
        samples.push_back(burden(x));
    }
    return trapezoid(samples, traj.step());
}

namespace {

struct EffortIntegrals {
    double u1;
    double u2;
};

EffortIntegrals effort(const ControlSchedule& schedule)
{
    double s1 = 0.0;
    double s2 = 0.0;
    for (const auto& u : schedule.values()) {
        s1 += u.u1 * u.u1;
        s2 += u.u2 * u.u2;
    }
    const double n = static_cast<double>(kControlIntervals);
    return {schedule.horizon() * s1 / n, schedule.horizon() * s2 / n};
}

} // namespace

double eval_f2(const ControlSchedule& schedule)
{
    double sum = 0.0;
    for (const auto& u : schedule.values()) {
        sum += u.u1 * u.u1 + u.u2 * u.u2;
    }
    // T * sum / 60 keeps the u = 1 anchor exact (5 * 120 / 60 = 10).
    return schedule.horizon() * sum / static_cast<double>(kControlIntervals);
}

double eval_weighted_cost(const Trajectory& traj, const WeightedCostConfig& cfg)
{
    if (!(cfg.w1 >= 0.0) || !(cfg.w2 >= 0.0)) {
        throw std::invalid_argument("eval_weighted_cost: weights must be nonnegative");
    }
    const EffortIntegrals e = effort(traj.schedule);
    return eval_f1(traj) + cfg.w1 * e.u1 + cfg.w2 * e.u2;
}

Objectives evaluate_objectives(const ModelParameters& p, const ControlSchedule& schedule, std::size_t substeps)
{
    return {eval_f1(simulate(p, schedule, substeps)), eval_f2(schedule)};
}

ObjectiveGradient::ObjectiveGradient(ModelParameters p, std::size_t substeps)
    : params_(p), substeps_(substeps)
{
    if (substeps_ == 0) {
        throw std::invalid_argument("ObjectiveGradient: substeps must be at least 1");
    }
}

double ObjectiveGradient::f1_with_gradient(std::span<const double> x, std::span<double> grad,
                                           double step_scale) const
{
    if (x.size() != kDecisionSize || grad.size() != kDecisionSize) {
        throw std::invalid_argument("ObjectiveGradient: decision and gradient must have 120 entries");
    }
    const double h = params_.horizon / static_cast<double>(kControlIntervals * substeps_);
    auto control = [&](std::size_t k) { return ControlValue{x[2 * k], x[2 * k + 1]}; };

    std::vector<StateVector> boundary(kControlIntervals + 1);
    std::vector<double> piece(kControlIntervals);
    boundary[0] = initial_state(params_.n);
    for (std::size_t k = 0; k < kControlIntervals; ++k) {
        boundary[k + 1] =
            integrate_interval(boundary[k], control(k), params_, h, substeps_, k * substeps_, piece[k]);
    }
    double f1 = 0.0;
    for (double q : piece) {
        f1 += q;
    }

    for (std::size_t k = 0; k < kControlIntervals; ++k) {
        for (std::size_t c = 0; c < 2; ++c) {
            const double base = x[2 * k + c];
            double step = step_scale * (1.0 + std::abs(base));
            if (base + step > 1.0) {
                step = -step;
            }
            step = (base + step) - base;
            ControlValue u = control(k);
            (c == 0 ? u.u1 : u.u2) = base + step;

            // Accumulate piecewise differences so the shared prefix cancels exactly.
            double q = 0.0;
            StateVector y = integrate_interval(boundary[k], u, params_, h, substeps_, k * substeps_, q);
            double diff = q - piece[k];
            for (std::size_t j = k + 1; j < kControlIntervals; ++j) {
                y = integrate_interval(y, control(j), params_, h, substeps_, j * substeps_, q);
                diff += q - piece[j];
            }
            grad[2 * k + c] = diff / step;
        }
    }
    return f1;
}

} // namespace tbmo
