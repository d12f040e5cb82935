#ifndef TBMO_METRICS_HPP
#define TBMO_METRICS_HPP

#include "tbmo/pareto.hpp"

#include <span>
#include <stdexcept>
#include <vector>

namespace tbmo {

/// Thrown when a front spans zero width in some objective.
class DegenerateRange : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ObjectiveBounds {
    ObjectivePoint ideal;
    ObjectivePoint nadir;
};

/// Componentwise minimum and maximum of the points.
ObjectiveBounds ideal_and_nadir(std::span<const ObjectivePoint> points);

struct NormalizedFront {
    std::vector<ObjectivePoint> points;
    ObjectivePoint ideal;
    ObjectivePoint nadir;
};

/// Affine map sending ideal to (0,0) and nadir to (1,1).
NormalizedFront normalize_front(std::span<const ObjectivePoint> points, const ObjectivePoint& ideal,
                                const ObjectivePoint& nadir);

/// Area dominated by the points and bounded by `reference`. Points not strictly
/// better than the reference in both objectives add no area.
double hypervolume_2d(std::span<const ObjectivePoint> points, const ObjectivePoint& reference);

} // namespace tbmo

#endif // TBMO_METRICS_HPP
