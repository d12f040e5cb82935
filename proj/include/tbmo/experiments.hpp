#ifndef TBMO_EXPERIMENTS_HPP
#define TBMO_EXPERIMENTS_HPP

#include "tbmo/metrics.hpp"
#include "tbmo/scalarization.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tbmo {

enum class Method { epsilon_constraint, goal_attainment, chebyshev };

std::string_view to_string(Method m);
Method method_from_string(std::string_view s);

enum class SweepAxis { beta, n, eps1, eps2, method };

std::string_view to_string(SweepAxis a);
SweepAxis axis_from_string(std::string_view s);

/// Base configuration of the sweeps: beta = 100, N = 30000, eps1 = eps2 = 0.5.
ModelParameters sweep_base();

/// Front of a weight-based method over weight_grid(count), reference z.
/// Solves run in grid order, each warm-started from the previous schedule (u = 0 first).
TradeoffFront weighted_front(const ModelParameters& p, Method method, std::size_t count, const ReferencePoint& z,
                             const SolverSettings& s = {});

/// Front produced by one method with `levels` eps levels or weight vectors.
TradeoffFront method_front(const ModelParameters& p, Method method, std::size_t levels,
                           const SolverSettings& s = {});

struct SweepSpec {
    SweepAxis axis{SweepAxis::beta};
    std::vector<double> values;   ///< numeric axes
    std::vector<Method> methods;  ///< method axis
    ModelParameters base{sweep_base()};
    std::size_t levels{100};
    SolverSettings solver;
    std::uint64_t seed{0};

    void validate() const;
};

/// Parameters of `base` with the swept quantity replaced.
ModelParameters with_axis_value(const ModelParameters& base, SweepAxis axis, double value);

struct SweepResult {
    SweepAxis axis{SweepAxis::beta};
    double value{0.0};                     ///< numeric axes
    Method method{Method::epsilon_constraint};
    TradeoffFront front;
    std::string error; ///< nonempty when the whole value failed
};

/// One front per axis value with every other parameter at `spec.base`.
std::vector<SweepResult> run_sweep(const SweepSpec& spec);

inline constexpr std::array<double, 5> kRepresentativeLevels{0.0, 2.5, 5.0, 7.5, 10.0};

/// For each level, the least-f1 point with f2 <= level + 1e-6 (or the least-f2 point
/// when none qualifies).
std::vector<FrontPoint> representative_solutions(const TradeoffFront& front,
                                                 std::span<const double> levels = kRepresentativeLevels);

struct MethodScore {
    Method method{Method::epsilon_constraint};
    TradeoffFront front;
    NormalizedFront normalized;
    double hypervolume{0.0};
    std::size_t successful_solves{0};
    bool flagged{false}; ///< no successful solve
};

struct ComparisonReport {
    std::vector<MethodScore> methods;
    ObjectivePoint ideal; ///< union bounds used for normalization
    ObjectivePoint nadir;

    const MethodScore& score(Method m) const;
};

/// Scores fronts against the union ideal/nadir with the nadir as hypervolume reference.
ComparisonReport score_fronts(std::vector<std::pair<Method, TradeoffFront>> fronts);

ComparisonReport compare_methods(const ModelParameters& base, std::size_t weight_count = 100,
                                 std::size_t ladder_levels = 100, const SolverSettings& s = {});

} // namespace tbmo

#endif // TBMO_EXPERIMENTS_HPP
