#include "tbmo/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace tbmo {

ObjectiveBounds ideal_and_nadir(std::span<const ObjectivePoint> points)
{
    if (points.empty()) {
        throw std::invalid_argument("ideal_and_nadir: empty point set");
    }
    ObjectiveBounds b{points.front(), points.front()};
    for (const auto& p : points) {
        b.ideal.f1 = std::min(b.ideal.f1, p.f1);
        b.ideal.f2 = std::min(b.ideal.f2, p.f2);
        b.nadir.f1 = std::max(b.nadir.f1, p.f1);
        b.nadir.f2 = std::max(b.nadir.f2, p.f2);
    }
    if (!(b.nadir.f1 > b.ideal.f1) || !(b.nadir.f2 > b.ideal.f2)) {
        throw DegenerateRange("ideal_and_nadir: zero range in at least one objective");
    }
    return b;
}

NormalizedFront normalize_front(std::span<const ObjectivePoint> points, const ObjectivePoint& ideal,
                                const ObjectivePoint& nadir)
{
    const double range1 = nadir.f1 - ideal.f1;
    const double range2 = nadir.f2 - ideal.f2;
    if (!(range1 > 0.0) || !(range2 > 0.0)) {
        throw DegenerateRange("normalize_front: nadir must exceed ideal in both objectives");
    }
    NormalizedFront out{{}, ideal, nadir};
    out.points.reserve(points.size());
    for (const auto& p : points) {
        out.points.push_back({(p.f1 - ideal.f1) / range1, (p.f2 - ideal.f2) / range2});
    }
    return out;
}

double hypervolume_2d(std::span<const ObjectivePoint> points, const ObjectivePoint& reference)
{
    std::vector<ObjectivePoint> inside;
    for (const auto& p : points) {
        if (std::isfinite(p.f1) && std::isfinite(p.f2) && p.f1 < reference.f1 && p.f2 < reference.f2) {
            inside.push_back(p);
        }
    }
    std::vector<ObjectivePoint> front = pareto_filter(inside);
    std::sort(front.begin(), front.end(), [](const auto& a, const auto& b) { return a.f1 < b.f1; });

    // Nondominated and sorted on f1 ascending means f2 is descending: sum vertical strips.
    double area = 0.0;
    for (std::size_t k = 0; k < front.size(); ++k) {
        const double right = k + 1 < front.size() ? front[k + 1].f1 : reference.f1;
        area += (right - front[k].f1) * (reference.f2 - front[k].f2);
    }
    return area;
}

} // namespace tbmo
