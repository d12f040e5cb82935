#ifndef TBMO_SCALARIZATION_HPP
#define TBMO_SCALARIZATION_HPP

#include "tbmo/model.hpp"
#include "tbmo/nlp.hpp"
#include "tbmo/pareto.hpp"
#include "tbmo/simulation.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace tbmo {

/// Weights of the goal-attainment and Chebyshev scalarizations; w1 + w2 = 1.
struct WeightVector {
    double w1{0.5};
    double w2{0.5};

    void validate() const;
};

struct ReferencePoint {
    double z1{0.0};
    double z2{0.0};
};

/// Biobjective problem over a box-constrained decision vector.
struct BiObjectiveProblem {
    std::size_t dimension{0};
    std::vector<double> lower;
    std::vector<double> upper;
    std::function<ObjectivePoint(std::span<const double>)> evaluate;
    /// Optional: fills both objective gradients and returns the evaluations it consumed.
    std::function<std::size_t(std::span<const double> x, std::span<double> g1, std::span<double> g2)> gradient;
};

/// Minimize f1 subject to f2 <= eps.
SolveReport epsilon_constraint(const BiObjectiveProblem& pb, double eps, std::span<const double> x0,
                               const NlpOptions& opts = {});

/// Minimize alpha >= 0 subject to w_i (f_i - z_i) <= alpha. The auxiliary coordinate is
/// stripped from the returned decision; `objective` carries the achieved alpha.
SolveReport goal_attainment(const BiObjectiveProblem& pb, const WeightVector& w, const ReferencePoint& z,
                            std::span<const double> x0, const NlpOptions& opts = {});

/// Minimize max_i w_i (f_i - z_i) + rho * sum_i w_i (f_i - z_i) through its epigraph form.
/// `objective` carries the achieved augmented value.
SolveReport chebyshev(const BiObjectiveProblem& pb, const WeightVector& w, const ReferencePoint& z,
                      std::span<const double> x0, const NlpOptions& opts = {}, double augmentation = 1e-4);

/// Evenly spaced weights (k/(count-1), 1 - k/(count-1)), k = 0..count-1.
std::vector<WeightVector> weight_grid(std::size_t count);

// ---------------------------------------------------------------------------
// TB control problem

struct SolverSettings {
    std::size_t budget{20000};
    std::size_t substeps{kDefaultSubsteps};
    double constraint_tol{1e-6};
    double stationarity_tol{1e-6};
    double chebyshev_augmentation{1e-4};

    NlpOptions nlp_options() const;

    bool operator==(const SolverSettings&) const = default;
};

/// The 120-variable (f1, f2) problem, with gradients from ObjectiveGradient and the closed-form f2.
BiObjectiveProblem make_control_problem(const ModelParameters& p, std::size_t substeps = kDefaultSubsteps);

/// One evaluated trade-off outcome. `level` is the eps bound for the eps-constraint
/// method and w1 for the weight-based methods.
struct FrontPoint {
    double level{0.0};
    ObjectivePoint objectives;
    ControlSchedule schedule;
    SolveReport solve;
    std::string error; ///< nonempty when the solve threw and no point was produced
};

/// Where a front came from; written into every output file so it can be re-run.
struct FrontProvenance {
    std::string method{"epsilon-constraint"};
    ModelParameters params;
    SolverSettings settings;
    std::size_t levels{0};
    ReferencePoint reference; ///< z* of the weight-based methods
    std::uint64_t seed{0};
};

struct TradeoffFront {
    std::vector<FrontPoint> points;
    FrontProvenance provenance;

    std::vector<ObjectivePoint> objective_points() const;
    /// Successful, nondominated points in input order.
    std::vector<FrontPoint> pareto_view() const;
};

/// Largest attainable f2, reached at u = 1 (2T).
double max_control_effort(const ModelParameters& p);

FrontPoint solve_epsilon_constraint(const ModelParameters& p, double eps, const ControlSchedule& x0,
                                    const SolverSettings& s = {});

/// eps_k = f2max * k / (levels - 1), each solve warm-started from the previous one.
TradeoffFront epsilon_ladder(const ModelParameters& p, std::size_t levels, const SolverSettings& s = {});

FrontPoint solve_goal_attainment(const ModelParameters& p, const WeightVector& w, const ReferencePoint& z,
                                 const ControlSchedule& x0, const SolverSettings& s = {});

FrontPoint solve_chebyshev(const ModelParameters& p, const WeightVector& w, const ReferencePoint& z,
                           const ControlSchedule& x0, const SolverSettings& s = {});

/// Estimated ideal point: f1 at u = 1 and f2 = 0.
ReferencePoint estimate_ideal(const ModelParameters& p, std::size_t substeps = kDefaultSubsteps);

} // namespace tbmo

#endif // TBMO_SCALARIZATION_HPP
