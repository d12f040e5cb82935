#ifndef TBMO_PARETO_HPP
#define TBMO_PARETO_HPP

#include <span>
#include <vector>

namespace tbmo {

/// Objective values (f1, f2) of one solution; both minimized.
struct ObjectivePoint {
    double f1{0.0};
    double f2{0.0};

    bool operator==(const ObjectivePoint&) const = default;
};

/// True iff a is no worse than b in both objectives and strictly better in one.
constexpr bool dominates(const ObjectivePoint& a, const ObjectivePoint& b)
{
    return a.f1 <= b.f1 && a.f2 <= b.f2 && (a.f1 < b.f1 || a.f2 < b.f2);
}

/// Indices of the nondominated points, in input order. Exact duplicates keep
/// only their first occurrence.
std::vector<std::size_t> nondominated_indices(std::span<const ObjectivePoint> points);

std::vector<ObjectivePoint> pareto_filter(std::span<const ObjectivePoint> points);

} // namespace tbmo

#endif // TBMO_PARETO_HPP
