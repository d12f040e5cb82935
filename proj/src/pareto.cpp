#include "tbmo/pareto.hpp"

#include <algorithm>
#include <numeric>

namespace tbmo {

std::vector<std::size_t> nondominated_indices(std::span<const ObjectivePoint> points)
{
    // Staircase sweep in (f1, f2) order: a point survives iff its f2 is strictly
    // below every f2 seen before it.
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (points[a].f1 != points[b].f1) {
            return points[a].f1 < points[b].f1;
        }
        return points[a].f2 < points[b].f2;
    });

    std::vector<std::size_t> keep;
    bool have_best = false;
    ObjectivePoint best{};
    for (std::size_t idx : order) {
        const ObjectivePoint& p = points[idx];
        if (!have_best || p.f2 < best.f2) {
            keep.push_back(idx);
            best = p;
            have_best = true;
        }
        // Equal f2 with larger-or-equal f1 is either dominated or an exact duplicate of
        // `best`; stable sorting puts the first occurrence of a duplicate first.
    }
    std::sort(keep.begin(), keep.end());
    return keep;
}

std::vector<ObjectivePoint> pareto_filter(std::span<const ObjectivePoint> points)
{
    std::vector<ObjectivePoint> out;
    for (std::size_t idx : nondominated_indices(points)) {
        out.push_back(points[idx]);
    }
    return out;
}

} // namespace tbmo
