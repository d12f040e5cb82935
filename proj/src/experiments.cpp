#include "tbmo/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tbmo {

std::string_view to_string(Method m)
{
    switch (m) {
    case Method::epsilon_constraint:
        return "epsilon-constraint";
    case Method::goal_attainment:
        return "goal-attainment";
    case Method::chebyshev:
        return "chebyshev";
    }
    return "unknown";
}

Method method_from_string(std::string_view s)
{
    if (s == "epsilon-constraint" || s == "epsilon") {
        return Method::epsilon_constraint;
    }
    if (s == "goal-attainment" || s == "goal") {
        return Method::goal_attainment;
    }
    if (s == "chebyshev") {
        return Method::chebyshev;
    }
    throw std::invalid_argument("unknown method '" + std::string(s) + "'");
}

std::string_view to_string(SweepAxis a)
{
    switch (a) {
    case SweepAxis::beta:
        return "beta";
    case SweepAxis::n:
        return "N";
    case SweepAxis::eps1:
        return "eps1";
    case SweepAxis::eps2:
        return "eps2";
    case SweepAxis::method:
        return "method";
    }
    return "unknown";
}

SweepAxis axis_from_string(std::string_view s)
{
    if (s == "beta") {
        return SweepAxis::beta;
    }
    if (s == "N" || s == "n") {
        return SweepAxis::n;
    }
    if (s == "eps1") {
        return SweepAxis::eps1;
    }
    if (s == "eps2") {
        return SweepAxis::eps2;
    }
    if (s == "method") {
        return SweepAxis::method;
    }
    throw std::invalid_argument("unknown sweep axis '" + std::string(s) + "'");
}

ModelParameters sweep_base() { return default_parameters(100.0, 30000.0, 0.5, 0.5); }

TradeoffFront weighted_front(const ModelParameters& p, Method method, std::size_t count, const ReferencePoint& z,
                             const SolverSettings& s)
{
    if (method == Method::epsilon_constraint) {
        throw std::invalid_argument("weighted_front: eps-constraint is not a weight-based method");
    }
    TradeoffFront front;
    front.provenance.method = std::string(to_string(method));
    front.provenance.params = p;
    front.provenance.settings = s;
    front.provenance.levels = count;
    front.provenance.reference = z;

    ControlSchedule warm(p.horizon);
    for (const WeightVector& w : weight_grid(count)) {
        try {
            FrontPoint fp = method == Method::goal_attainment ? solve_goal_attainment(p, w, z, warm, s)
                                                              : solve_chebyshev(p, w, z, warm, s);
            warm = fp.schedule;
            front.points.push_back(std::move(fp));
        } catch (const std::exception& ex) {
            FrontPoint failed{w.w1, {NAN, NAN}, warm, {}, ex.what()};
            failed.solve.status = SolveStatus::infeasible;
            front.points.push_back(std::move(failed));
        }
    }
    return front;
}

TradeoffFront method_front(const ModelParameters& p, Method method, std::size_t levels, const SolverSettings& s)
{
    if (method == Method::epsilon_constraint) {
        TradeoffFront front = epsilon_ladder(p, levels, s);
        front.provenance.method = std::string(to_string(method));
        return front;
    }
    return weighted_front(p, method, levels, estimate_ideal(p, s.substeps), s);
}

void SweepSpec::validate() const
{
    base.validate();
    if (axis == SweepAxis::method ? methods.empty() : values.empty()) {
        throw std::invalid_argument("SweepSpec: no values to sweep");
    }
    if (levels < 2) {
        throw std::invalid_argument("SweepSpec: levels must be at least 2");
    }
    if (solver.budget == 0 || solver.substeps == 0) {
        throw std::invalid_argument("SweepSpec: budget and substeps must be positive");
    }
}

ModelParameters with_axis_value(const ModelParameters& base, SweepAxis axis, double value)
{
    ModelParameters p = base;
    switch (axis) {
    case SweepAxis::beta:
        p.beta = value;
        break;
    case SweepAxis::n:
        p.n = value;
        break;
    case SweepAxis::eps1:
        p.eps1 = value;
        break;
    case SweepAxis::eps2:
        p.eps2 = value;
        break;
    case SweepAxis::method:
        throw std::invalid_argument("with_axis_value: the method axis has no numeric value");
    }
    p.validate();
    return p;
}

std::vector<SweepResult> run_sweep(const SweepSpec& spec)
{
    spec.validate();
    std::vector<SweepResult> results;
    auto run_one = [&](SweepResult r, const ModelParameters& p, Method m) {
        try {
            r.front = method_front(p, m, spec.levels, spec.solver);
            r.front.provenance.seed = spec.seed;
        } catch (const std::exception& ex) {
            r.error = ex.what();
        }
        results.push_back(std::move(r));
    };

    if (spec.axis == SweepAxis::method) {
        for (Method m : spec.methods) {
            run_one(SweepResult{spec.axis, 0.0, m, {}, {}}, spec.base, m);
        }
        return results;
    }
    for (double v : spec.values) {
        SweepResult r{spec.axis, v, Method::epsilon_constraint, {}, {}};
        ModelParameters p;
        try {
            p = with_axis_value(spec.base, spec.axis, v);
        } catch (const std::exception& ex) {
            r.error = ex.what();
            results.push_back(std::move(r));
            continue;
        }
        run_one(std::move(r), p, Method::epsilon_constraint);
    }
    return results;
}

namespace {

bool usable(const FrontPoint& fp)
{
    return fp.error.empty() && fp.solve.status != SolveStatus::infeasible && std::isfinite(fp.objectives.f1) &&
           std::isfinite(fp.objectives.f2);
}

} // namespace

std::vector<FrontPoint> representative_solutions(const TradeoffFront& front, std::span<const double> levels)
{
    const FrontPoint* least_effort = nullptr;
    for (const auto& fp : front.points) {
        if (usable(fp) && (!least_effort || fp.objectives.f2 < least_effort->objectives.f2)) {
            least_effort = &fp;
        }
    }
    if (!least_effort) {
        throw std::invalid_argument("representative_solutions: front has no usable points");
    }

    std::vector<FrontPoint> picks;
    for (double level : levels) {
        const FrontPoint* best = nullptr;
        for (const auto& fp : front.points) {
            if (usable(fp) && fp.objectives.f2 <= level + 1e-6 &&
                (!best || fp.objectives.f1 < best->objectives.f1)) {
                best = &fp;
            }
        }
        picks.push_back(best ? *best : *least_effort);
    }
    return picks;
}

const MethodScore& ComparisonReport::score(Method m) const
{
    for (const auto& s : methods) {
        if (s.method == m) {
            return s;
        }
    }
    throw std::out_of_range("ComparisonReport: method not present");
}

ComparisonReport score_fronts(std::vector<std::pair<Method, TradeoffFront>> fronts)
{
    ComparisonReport report;
    std::vector<ObjectivePoint> all;
    for (auto& [method, front] : fronts) {
        MethodScore s;
        s.method = method;
        s.front = std::move(front);
        for (const auto& fp : s.front.points) {
            if (usable(fp)) {
                all.push_back(fp.objectives);
                ++s.successful_solves;
            }
        }
        s.flagged = s.successful_solves == 0;
        report.methods.push_back(std::move(s));
    }

    const ObjectiveBounds bounds = ideal_and_nadir(all);
    report.ideal = bounds.ideal;
    report.nadir = bounds.nadir;
    for (auto& s : report.methods) {
        std::vector<ObjectivePoint> pts;
        for (const auto& fp : s.front.points) {
            if (usable(fp)) {
                pts.push_back(fp.objectives);
            }
        }
        s.normalized = normalize_front(pts, bounds.ideal, bounds.nadir);
        s.hypervolume = s.flagged ? 0.0 : hypervolume_2d(s.normalized.points, {1.0, 1.0});
    }
    return report;
}

ComparisonReport compare_methods(const ModelParameters& base, std::size_t weight_count, std::size_t ladder_levels,
                                 const SolverSettings& s)
{
    const ReferencePoint z = estimate_ideal(base, s.substeps);
    std::vector<std::pair<Method, TradeoffFront>> fronts;
    TradeoffFront eps = epsilon_ladder(base, ladder_levels, s);
    eps.provenance.method = std::string(to_string(Method::epsilon_constraint));
    fronts.emplace_back(Method::epsilon_constraint, std::move(eps));
    fronts.emplace_back(Method::goal_attainment, weighted_front(base, Method::goal_attainment, weight_count, z, s));
    fronts.emplace_back(Method::chebyshev, weighted_front(base, Method::chebyshev, weight_count, z, s));
    return score_fronts(std::move(fronts));
}

} // namespace tbmo
