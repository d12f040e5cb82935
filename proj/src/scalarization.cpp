#include "tbmo/scalarization.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tbmo {

void WeightVector::validate() const
{
    if (!(w1 >= 0.0) || !(w2 >= 0.0) || std::abs(w1 + w2 - 1.0) > 1e-12) {
        throw std::invalid_argument("WeightVector: weights must be nonnegative and sum to 1");
    }
}

namespace {

void check_problem(const BiObjectiveProblem& pb, std::span<const double> x0)
{
    if (!pb.evaluate) {
        throw std::invalid_argument("scalarization: problem has no evaluate callable");
    }
    if (x0.size() != pb.dimension || pb.lower.size() != pb.dimension || pb.upper.size() != pb.dimension) {
        throw std::invalid_argument("scalarization: dimension mismatch");
    }
}

/// Epigraph form shared by goal attainment and Chebyshev. The auxiliary variable is
/// stored as a = aux / scale with scale = twice the largest weighted term at x0, so that
/// x0 starts strictly inside the box at a = 1/2 and every constraint is O(1).
struct Epigraph {
    NlpProblem nlp;
    std::vector<double> start;
    double scale{1.0};
};

Epigraph make_epigraph(const BiObjectiveProblem& pb, const WeightVector& w, const ReferencePoint& z,
                       std::span<const double> x0, double aux_lower, double augmentation)
{
    check_problem(pb, x0);
    w.validate();
    if (!std::isfinite(z.z1) || !std::isfinite(z.z2)) {
        throw std::invalid_argument("scalarization: reference point must be finite");
    }

    const std::size_t n = pb.dimension;
    Epigraph e;
    const ObjectivePoint f0 = pb.evaluate(x0);
    const double largest = std::max(w.w1 * (f0.f1 - z.z1), w.w2 * (f0.f2 - z.z2));
    e.scale = largest > 0.0 ? 2.0 * largest : 1.0;
    e.start.assign(x0.begin(), x0.end());
    e.start.push_back(largest > 0.0 ? 0.5 : std::max(largest, aux_lower));

    e.nlp.dimension = n + 1;
    e.nlp.constraints = 2;
    e.nlp.lower = pb.lower;
    e.nlp.lower.push_back(aux_lower);
    e.nlp.upper = pb.upper;
    e.nlp.upper.push_back(1.0);

    const double scale = e.scale;
    e.nlp.evaluate = [&pb, w, z, n, scale, augmentation](std::span<const double> x, std::span<double> c) {
        const ObjectivePoint f = pb.evaluate(x.first(n));
        const double t1 = w.w1 * (f.f1 - z.z1) / scale;
        const double t2 = w.w2 * (f.f2 - z.z2) / scale;
        const double a = x[n];
        c[0] = t1 - a;
        c[1] = t2 - a;
        return a + augmentation * (t1 + t2);
    };
    if (pb.gradient) {
        e.nlp.gradient = [&pb, w, n, scale, augmentation](std::span<const double> x, std::span<double> grad,
                                                            std::span<double> jac) {
            std::vector<double> g1(n);
            std::vector<double> g2(n);
            const std::size_t used = pb.gradient(x.first(n), g1, g2);
            const std::size_t m = n + 1;
            for (std::size_t i = 0; i < n; ++i) {
                const double d1 = w.w1 * g1[i] / scale;
                const double d2 = w.w2 * g2[i] / scale;
                grad[i] = augmentation * (d1 + d2);
                jac[i] = d1;
                jac[m + i] = d2;
            }
            grad[n] = 1.0;
            jac[n] = -1.0;
            jac[m + n] = -1.0;
            return used;
        };
    }
    return e;
}

SolveReport strip_auxiliary(SolveReport r, std::size_t n, double scale)
{
    if (r.decision.size() == n + 1) {
        r.decision.pop_back();
    }
    r.objective *= scale;
    return r;
}

SolveReport solve_epigraph_once(const BiObjectiveProblem& pb, const WeightVector& w, const ReferencePoint& z,
                                std::span<const double> x0, std::size_t budget, const NlpOptions& opts,
                                double aux_lower, double augmentation)
{
    Epigraph e = make_epigraph(pb, w, z, x0, aux_lower, augmentation);
    if (budget < 2) {
        SolveReport r;
        r.decision.assign(x0.begin(), x0.end());
        r.objective = NAN;
        r.constraint_violation = NAN;
        r.evaluations = 1;
        r.status = SolveStatus::infeasible;
        return r;
    }
    NlpOptions o = opts;
    o.budget = budget - 1;
    SolveReport r = strip_auxiliary(solve_nlp(e.nlp, e.start, o), pb.dimension, e.scale);
    r.evaluations += 1;
    return r;
}

/// A quarter of the budget at the scale of x0; if that does not converge, the rest at
/// the scale of the point reached.
SolveReport solve_epigraph(const BiObjectiveProblem& pb, const WeightVector& w, const ReferencePoint& z,
                           std::span<const double> x0, const NlpOptions& opts, double aux_lower, double augmentation)
{
    SolveReport first =
        solve_epigraph_once(pb, w, z, x0, std::max<std::size_t>(1, opts.budget / 4), opts, aux_lower, augmentation);
    if (first.status == SolveStatus::converged || first.evaluations >= opts.budget) {
        return first;
    }
    SolveReport second = solve_epigraph_once(pb, w, z, first.decision, opts.budget - first.evaluations, opts,
                                             aux_lower, augmentation);
    const std::size_t used = first.evaluations + second.evaluations;
    const bool keep_first = second.status == SolveStatus::infeasible ||
                            (first.status != SolveStatus::infeasible && first.objective < second.objective);
    SolveReport out = keep_first ? std::move(first) : std::move(second);
    out.evaluations = used;
    return out;
}

} // namespace

SolveReport epsilon_constraint(const BiObjectiveProblem& pb, double eps, std::span<const double> x0,
                               const NlpOptions& opts)
{
    check_problem(pb, x0);
    if (!std::isfinite(eps)) {
        throw std::invalid_argument("epsilon_constraint: bound must be finite");
    }
    NlpProblem nlp;
    nlp.dimension = pb.dimension;
    nlp.constraints = 1;
    nlp.lower = pb.lower;
    nlp.upper = pb.upper;
    nlp.evaluate = [&pb, eps](std::span<const double> x, std::span<double> c) {
        const ObjectivePoint f = pb.evaluate(x);
        c[0] = f.f2 - eps;
        return f.f1;
    };
    if (pb.gradient) {
        nlp.gradient = [&pb](std::span<const double> x, std::span<double> grad, std::span<double> jac) {
            return pb.gradient(x, grad, jac);
        };
    }
    return solve_nlp(nlp, x0, opts);
}

SolveReport goal_attainment(const BiObjectiveProblem& pb, const WeightVector& w, const ReferencePoint& z,
                            std::span<const double> x0, const NlpOptions& opts)
{
    return solve_epigraph(pb, w, z, x0, opts, 0.0, 0.0);
}

SolveReport chebyshev(const BiObjectiveProblem& pb, const WeightVector& w, const ReferencePoint& z,
                      std::span<const double> x0, const NlpOptions& opts, double augmentation)
{
    if (!(augmentation >= 0.0)) {
        throw std::invalid_argument("chebyshev: augmentation must be nonnegative");
    }
    return solve_epigraph(pb, w, z, x0, opts, -1.0, augmentation);
}

std::vector<WeightVector> weight_grid(std::size_t count)
{
    if (count < 2) {
        throw std::invalid_argument("weight_grid: count must be at least 2");
    }
    std::vector<WeightVector> grid;
    grid.reserve(count);
    const double last = static_cast<double>(count - 1);
    for (std::size_t k = 0; k < count; ++k) {
        const double w1 = static_cast<double>(k) / last;
        grid.push_back({w1, 1.0 - w1});
    }
    return grid;
}

NlpOptions SolverSettings::nlp_options() const
{
    NlpOptions o;
    o.budget = budget;
    o.constraint_tol = constraint_tol;
    o.stationarity_tol = stationarity_tol;
    return o;
}

BiObjectiveProblem make_control_problem(const ModelParameters& p, std::size_t substeps)
{
    p.validate();
    BiObjectiveProblem pb;
    pb.dimension = kDecisionSize;
    pb.lower.assign(kDecisionSize, 0.0);
    pb.upper.assign(kDecisionSize, 1.0);
    pb.evaluate = [p, substeps](std::span<const double> x) {
        const Objectives o = evaluate_objectives(p, ControlSchedule::from_decision(p.horizon, x), substeps);
        return ObjectivePoint{o.f1, o.f2};
    };
    pb.gradient = [p, grad = ObjectiveGradient(p, substeps)](std::span<const double> x, std::span<double> g1,
                                                             std::span<double> g2) {
        grad.f1_with_gradient(x, g1);
        const double unit = 2.0 * p.horizon / static_cast<double>(kControlIntervals);
        for (std::size_t i = 0; i < x.size(); ++i) {
            g2[i] = unit * x[i];
        }
        return kDecisionSize;
    };
    return pb;
}

std::vector<ObjectivePoint> TradeoffFront::objective_points() const
{
    std::vector<ObjectivePoint> out;
    out.reserve(points.size());
    for (const auto& fp : points) {
        out.push_back(fp.objectives);
    }
    return out;
}

std::vector<FrontPoint> TradeoffFront::pareto_view() const
{
    std::vector<ObjectivePoint> ok;
    std::vector<std::size_t> source;
    for (std::size_t k = 0; k < points.size(); ++k) {
        const auto& fp = points[k];
        if (fp.error.empty() && fp.solve.status != SolveStatus::infeasible && std::isfinite(fp.objectives.f1) &&
            std::isfinite(fp.objectives.f2)) {
            ok.push_back(fp.objectives);
            source.push_back(k);
        }
    }
    std::vector<FrontPoint> out;
    for (std::size_t idx : nondominated_indices(ok)) {
        out.push_back(points[source[idx]]);
    }
    return out;
}

double max_control_effort(const ModelParameters& p)
{
    return eval_f2(ControlSchedule::constant(p.horizon, {1.0, 1.0}));
}

namespace {

FrontPoint make_front_point(const ModelParameters& p, double level, SolveReport report, std::size_t substeps)
{
    ControlSchedule schedule = ControlSchedule::from_decision(p.horizon, report.decision);
    const Objectives o = evaluate_objectives(p, schedule, substeps);
    return FrontPoint{level, {o.f1, o.f2}, std::move(schedule), std::move(report), {}};
}

} // namespace

FrontPoint solve_epsilon_constraint(const ModelParameters& p, double eps, const ControlSchedule& x0,
                                    const SolverSettings& s)
{
    const double f2max = max_control_effort(p);
    if (!(eps >= 0.0) || eps > f2max) {
        throw std::invalid_argument("solve_epsilon_constraint: eps must lie in [0, " + std::to_string(f2max) + "]");
    }
    if (eps == 0.0) {
        // f2 has a nonnegative integrand, so u = 0 is the only feasible schedule.
        SolveReport r;
        r.decision.assign(kDecisionSize, 0.0);
        r.evaluations = 1;
        r.status = SolveStatus::converged;
        FrontPoint fp = make_front_point(p, eps, std::move(r), s.substeps);
        fp.solve.objective = fp.objectives.f1;
        return fp;
    }
    const BiObjectiveProblem pb = make_control_problem(p, s.substeps);
    const std::vector<double> start = x0.to_decision();
    return make_front_point(p, eps, epsilon_constraint(pb, eps, start, s.nlp_options()), s.substeps);
}

TradeoffFront epsilon_ladder(const ModelParameters& p, std::size_t levels, const SolverSettings& s)
{
    if (levels < 2) {
        throw std::invalid_argument("epsilon_ladder: need at least 2 levels");
    }
    const double f2max = max_control_effort(p);
    TradeoffFront front;
    front.provenance.params = p;
    front.provenance.settings = s;
    front.provenance.levels = levels;
    front.points.reserve(levels);
    ControlSchedule warm(p.horizon);
    for (std::size_t k = 0; k < levels; ++k) {
        const double eps =
            k + 1 == levels ? f2max : f2max * static_cast<double>(k) / static_cast<double>(levels - 1);
        try {
            FrontPoint fp = solve_epsilon_constraint(p, eps, warm, s);
            warm = fp.schedule;
            front.points.push_back(std::move(fp));
        } catch (const std::exception& ex) {
            FrontPoint failed{eps, {NAN, NAN}, warm, {}, ex.what()};
            failed.solve.status = SolveStatus::infeasible;
            front.points.push_back(std::move(failed));
        }
    }
    return front;
}

FrontPoint solve_goal_attainment(const ModelParameters& p, const WeightVector& w, const ReferencePoint& z,
                                 const ControlSchedule& x0, const SolverSettings& s)
{
    const BiObjectiveProblem pb = make_control_problem(p, s.substeps);
    const std::vector<double> start = x0.to_decision();
    return make_front_point(p, w.w1, goal_attainment(pb, w, z, start, s.nlp_options()), s.substeps);
}

FrontPoint solve_chebyshev(const ModelParameters& p, const WeightVector& w, const ReferencePoint& z,
                           const ControlSchedule& x0, const SolverSettings& s)
{
    const BiObjectiveProblem pb = make_control_problem(p, s.substeps);
    const std::vector<double> start = x0.to_decision();
    return make_front_point(p, w.w1,
                            chebyshev(pb, w, z, start, s.nlp_options(), s.chebyshev_augmentation), s.substeps);
}

ReferencePoint estimate_ideal(const ModelParameters& p, std::size_t substeps)
{
    const Objectives full = evaluate_objectives(p, ControlSchedule::constant(p.horizon, {1.0, 1.0}), substeps);
    return {full.f1, 0.0};
}

} // namespace tbmo
