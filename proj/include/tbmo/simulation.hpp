#ifndef TBMO_SIMULATION_HPP
#define TBMO_SIMULATION_HPP

#include "tbmo/model.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace tbmo {

inline constexpr std::size_t kControlIntervals = 60;
inline constexpr std::size_t kDecisionSize = 2 * kControlIntervals;
inline constexpr std::size_t kDefaultSubsteps = 4;

/// Thrown when an integrated state stops being finite.
class NumericalBlowup : public std::runtime_error {
public:
    NumericalBlowup(std::size_t node, double time);
    std::size_t node() const { return node_; }

private:
    std::size_t node_;
};

/// Piecewise-constant (u1, u2) on 60 equal intervals over [0, T].
class ControlSchedule {
public:
    explicit ControlSchedule(double horizon = 5.0);
    ControlSchedule(double horizon, std::vector<ControlValue> values);

    static ControlSchedule constant(double horizon, ControlValue u);

    /// Decision-vector layout is interleaved: x[2k] = u1 on interval k, x[2k+1] = u2.
    static ControlSchedule from_decision(double horizon, std::span<const double> x);
    std::vector<double> to_decision() const;

    double horizon() const { return horizon_; }
    double interval_width() const { return horizon_ / static_cast<double>(kControlIntervals); }
    std::span<const ControlValue> values() const { return values_; }
    const ControlValue& operator[](std::size_t k) const { return values_[k]; }

    bool operator==(const ControlSchedule&) const = default;

private:
    void check() const;

    double horizon_;
    std::vector<ControlValue> values_;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<StateVector> states;
    ControlSchedule schedule;
    std::size_t substeps{kDefaultSubsteps};

    /// Step between consecutive nodes.
    double step() const { return schedule.interval_width() / static_cast<double>(substeps); }
    /// Control held on the interval that starts at node `node` (the final node reuses the last interval).
    const ControlValue& control_at_node(std::size_t node) const;
};

/// Relative-cost weights of the single weighted functional.
struct WeightedCostConfig {
    double w1{0.0};
    double w2{0.0};
};

using DerivativeFn = std::function<StateVector(const StateVector&)>;

/// Classical RK4 step for an autonomous field; exposed so the scheme can be checked on test laws.
StateVector rk4_step(const StateVector& x, const DerivativeFn& field, double h);

/// One RK4 step of the TB model with the control held constant.
StateVector rk4_step(const StateVector& x, const ControlValue& u, const ModelParameters& p, double h);

Trajectory simulate(const ModelParameters& p, const ControlSchedule& schedule,
                    std::size_t substeps = kDefaultSubsteps);

double trapezoid(std::span<const double> samples, double h);

double eval_f1(const Trajectory& traj);
double eval_f2(const ControlSchedule& schedule);
double eval_weighted_cost(const Trajectory& traj, const WeightedCostConfig& cfg);

/// Objective values (f1, f2) of a schedule; one simulation.
struct Objectives {
    double f1;
    double f2;
};
Objectives evaluate_objectives(const ModelParameters& p, const ControlSchedule& schedule,
                               std::size_t substeps = kDefaultSubsteps);

/// Evaluates f1 and its forward-difference gradient with respect to the 120-entry
/// decision vector. Perturbing interval k only changes the trajectory after node k,
/// so each coordinate re-integrates from the stored interval-k state onward.
class ObjectiveGradient {
public:
    ObjectiveGradient(ModelParameters p, std::size_t substeps = kDefaultSubsteps);

    /// Returns f1 at x and fills grad (size 120). `step_scale` is the relative FD step.
    double f1_with_gradient(std::span<const double> x, std::span<double> grad,
                            double step_scale = 1e-7) const;

private:
    ModelParameters params_;
    std::size_t substeps_;
};

} // namespace tbmo

#endif // TBMO_SIMULATION_HPP
