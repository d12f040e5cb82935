#include "tbmo/experiments.hpp"
#include "tbmo/metrics.hpp"
#include "tbmo/pareto.hpp"
#include "tbmo/scalarization.hpp"
#include "tbmo/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <vector>

using namespace tbmo;

namespace {

struct Outcome {
    bool pass{false};
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

using LadderKey = std::tuple<double, double, double, double>;

const TradeoffFront& ladder(const ModelParameters& p)
{
    static std::map<LadderKey, TradeoffFront> cache;
    const LadderKey key{p.beta, p.n, p.eps1, p.eps2};
    auto it = cache.find(key);
    if (it == cache.end()) {
        it = cache.emplace(key, epsilon_ladder(p, 100)).first;
    }
    return it->second;
}

ModelParameters base_with(double beta, double n, double eps1, double eps2)
{
    return default_parameters(beta, n, eps1, eps2);
}

std::vector<ModelParameters> table_battery()
{
    std::vector<ModelParameters> out;
    for (double beta : {75.0, 100.0, 150.0, 175.0}) {
        for (double n : {30000.0, 40000.0, 60000.0}) {
            for (double e1 : {0.25, 0.5, 0.75}) {
                for (double e2 : {0.25, 0.5, 0.75}) {
                    out.push_back(default_parameters(beta, n, e1, e2));
                }
            }
        }
    }
    return out;
}

template <class Visit>
void for_each_battery_trajectory(Visit visit)
{
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (const ModelParameters& p : table_battery()) {
        for (int k = 0; k < 20; ++k) {
            std::vector<double> x(kDecisionSize);
            for (double& v : x) {
                v = unit(rng);
            }
            visit(p, simulate(p, ControlSchedule::from_decision(p.horizon, x)));
        }
    }
}

Outcome conservation()
{
    double worst = 0.0;
    for_each_battery_trajectory([&](const ModelParameters& p, const Trajectory& t) {
        for (const StateVector& s : t.states) {
            worst = std::max(worst, std::abs(s.s + s.l1 + s.i + s.l2 + s.r - p.n) / p.n);
        }
    });
    return {worst <= 1e-10, fmt("max |sum - N|/N = %.3e over 2160 runs (tol 1e-10)", worst)};
}

Outcome nonnegativity()
{
    double worst = 0.0;
    for_each_battery_trajectory([&](const ModelParameters& p, const Trajectory& t) {
        for (const StateVector& s : t.states) {
            for (double v : s.as_array()) {
                worst = std::min(worst, v / p.n);
            }
        }
    });
    return {worst >= -1e-9, fmt("min component/N = %.3e (tol -1e-9)", worst)};
}

Outcome integrator_order()
{
    const ModelParameters p;
    const double coarse = evaluate_objectives(p, ControlSchedule(p.horizon), kDefaultSubsteps).f1;
    const double fine = evaluate_objectives(p, ControlSchedule(p.horizon), 2 * kDefaultSubsteps).f1;
    const double rel = std::abs(fine - coarse) / std::abs(fine);
    return {rel <= 1e-6, fmt("f1 %.6f vs %.6f, relative change %.3e (tol 1e-6)", coarse, fine, rel)};
}

Outcome f2_anchors()
{
    const double hi = eval_f2(ControlSchedule::constant(5.0, {1.0, 1.0}));
    const double lo = eval_f2(ControlSchedule::constant(5.0, {0.0, 0.0}));
    return {hi == 10.0 && lo == 0.0, fmt("f2(u=1) = %.17g, f2(u=0) = %.17g", hi, lo)};
}

Outcome ladder_structure()
{
    const ModelParameters p = sweep_base();
    const auto start = std::chrono::steady_clock::now();
    const TradeoffFront& front = ladder(p);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    double worst_excess = -1e300;
    double worst_rise = 0.0;
    for (std::size_t k = 0; k < front.points.size(); ++k) {
        const FrontPoint& fp = front.points[k];
        worst_excess = std::max(worst_excess, fp.objectives.f2 - fp.level);
        if (k > 0) {
            const double prev = front.points[k - 1].objectives.f1;
            worst_rise = std::max(worst_rise, (fp.objectives.f1 - prev) / prev);
        }
    }
    const Objectives free_run = evaluate_objectives(p, ControlSchedule(p.horizon));
    const FrontPoint& first = front.points.front();
    const bool level0 = first.level == 0.0 && first.objectives.f1 == free_run.f1 && first.objectives.f2 == 0.0 &&
                        first.schedule == ControlSchedule(p.horizon);
    const bool pass = front.points.size() == 100 && worst_excess <= 1e-6 && worst_rise <= 1e-3 && level0 &&
                      seconds <= 600.0;
    return {pass, fmt("max f2-eps %.3e, max relative f1 rise %.3e, level 0 exact %.0f, %.1f s", worst_excess,
                      worst_rise, level0 ? 1.0 : 0.0, seconds)};
}

Outcome beta_ordering()
{
    const std::vector<double> betas{75, 100, 150, 175};
    std::vector<const TradeoffFront*> fronts;
    for (double b : betas) {
        fronts.push_back(&ladder(base_with(b, 30000, 0.5, 0.5)));
    }
    double worst = 1e300;
    bool pass = true;
    for (std::size_t k = 0; k < 100; ++k) {
        const double eps = fronts[0]->points[k].level;
        for (std::size_t j = 0; j + 1 < fronts.size(); ++j) {
            const double lo = fronts[j]->points[k].objectives.f1;
            const double hi = fronts[j + 1]->points[k].objectives.f1;
            const double margin = (hi - lo) / hi;
            worst = std::min(worst, margin);
            pass = pass && (eps <= 5.0 ? hi > lo : margin >= -1e-3);
        }
    }
    return {pass, fmt("smallest relative f1 gap between consecutive beta fronts %.3e", worst)};
}

Outcome population_invariance()
{
    const TradeoffFront& small = ladder(base_with(100, 30000, 0.5, 0.5));
    const TradeoffFront& large = ladder(base_with(100, 60000, 0.5, 0.5));
    double schedule_gap = 0.0;
    double fraction_gap = 0.0;
    for (std::size_t k = 0; k < 100; ++k) {
        const ControlSchedule& a = small.points[k].schedule;
        const ControlSchedule& b = large.points[k].schedule;
        for (std::size_t i = 0; i < kControlIntervals; ++i) {
            schedule_gap = std::max({schedule_gap, std::abs(a[i].u1 - b[i].u1), std::abs(a[i].u2 - b[i].u2)});
        }
        const Trajectory ta = simulate(small.provenance.params, a);
        const Trajectory tb = simulate(large.provenance.params, b);
        for (std::size_t j = 0; j < ta.states.size(); ++j) {
            const double fa = (ta.states[j].i + ta.states[j].l2) / 30000.0;
            const double fb = (tb.states[j].i + tb.states[j].l2) / 60000.0;
            fraction_gap = std::max(fraction_gap, std::abs(fa - fb) / std::abs(fb));
        }
    }
    return {schedule_gap <= 1e-2 && fraction_gap <= 1e-3,
            fmt("max schedule difference %.3e (tol 1e-2), max (I+L2)/N relative difference %.3e (tol 1e-3)",
                schedule_gap, fraction_gap)};
}

double f1_at_five(const ModelParameters& p)
{
    const std::array<double, 1> level{5.0};
    return representative_solutions(ladder(p), level).front().objectives.f1;
}

Outcome efficacy_monotonicity()
{
    std::vector<double> by_eps1;
    std::vector<double> by_eps2;
    for (double e : {0.25, 0.5, 0.75}) {
        by_eps1.push_back(f1_at_five(base_with(100, 30000, e, 0.5)));
        by_eps2.push_back(f1_at_five(base_with(100, 30000, 0.5, e)));
    }
    const bool pass = by_eps1[0] > by_eps1[1] && by_eps1[1] > by_eps1[2] && by_eps2[0] > by_eps2[1] &&
                      by_eps2[1] > by_eps2[2] && by_eps2[2] < by_eps1[2];
    std::string detail = fmt("eps1 sweep f1 %.2f > %.2f > %.2f; ", by_eps1[0], by_eps1[1], by_eps1[2]);
    detail += fmt("eps2 sweep f1 %.2f > %.2f > %.2f", by_eps2[0], by_eps2[1], by_eps2[2]);
    return {pass, detail};
}

Outcome method_comparison()
{
    const ModelParameters p = sweep_base();
    const ReferencePoint z = estimate_ideal(p);
    TradeoffFront eps = ladder(p);
    eps.provenance.method = std::string(to_string(Method::epsilon_constraint));
    std::vector<std::pair<Method, TradeoffFront>> fronts;
    fronts.emplace_back(Method::epsilon_constraint, std::move(eps));
    fronts.emplace_back(Method::goal_attainment, weighted_front(p, Method::goal_attainment, 100, z));
    fronts.emplace_back(Method::chebyshev, weighted_front(p, Method::chebyshev, 100, z));
    const ComparisonReport r = score_fronts(std::move(fronts));
    const double he = r.score(Method::epsilon_constraint).hypervolume;
    const double hg = r.score(Method::goal_attainment).hypervolume;
    const double hc = r.score(Method::chebyshev).hypervolume;
    const bool pass = he > hg && he > hc && std::abs(hg - hc) <= 0.02 && he >= 0.75;
    return {pass, fmt("HV eps-constraint %.5f, goal attainment %.5f, Chebyshev %.5f", he, hg, hc)};
}

/// Staircase area by inclusion over a uniform sample of the reference box.
double monte_carlo_hv(const std::vector<ObjectivePoint>& pts, std::mt19937_64& rng, std::size_t samples)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::size_t hits = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        const double a = unit(rng);
        const double b = unit(rng);
        for (const ObjectivePoint& q : pts) {
            if (q.f1 <= a && q.f2 <= b) {
                ++hits;
                break;
            }
        }
    }
    return static_cast<double>(hits) / static_cast<double>(samples);
}

Outcome hypervolume_oracle()
{
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> size(1, 20);
    const ObjectivePoint ref{1.0, 1.0};
    double worst_sigma = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<ObjectivePoint> pts(size(rng));
        for (auto& q : pts) {
            q = {unit(rng), unit(rng)};
        }
        const double exact = hypervolume_2d(pts, ref);
        const std::size_t samples = 1000000;
        const double mc = monte_carlo_hv(pts, rng, samples);
        const double se = std::sqrt(std::max(mc * (1 - mc), 1e-12) / static_cast<double>(samples));
        worst_sigma = std::max(worst_sigma, std::abs(exact - mc) / se);
    }
    const std::vector<ObjectivePoint> single{{0.5, 0.5}};
    const std::vector<ObjectivePoint> pair{{0.25, 0.75}, {0.75, 0.25}};
    const double h1 = hypervolume_2d(single, ref);
    const double h2 = hypervolume_2d(pair, ref);
    return {worst_sigma <= 3.0 && h1 == 0.25 && h2 == 0.3125,
            fmt("worst deviation %.2f standard errors (tol 3), hand cases %.17g and %.17g", worst_sigma, h1, h2)};
}

Outcome pareto_oracle()
{
    std::mt19937_64 rng(303);
    std::uniform_int_distribution<std::size_t> size(0, 200);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> grid(0, 7);
    std::size_t mismatches = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<ObjectivePoint> pts(size(rng));
        for (auto& q : pts) {
            q = trial % 2 ? ObjectivePoint{unit(rng), unit(rng)} : ObjectivePoint{grid(rng) / 7.0, grid(rng) / 7.0};
        }
        std::vector<ObjectivePoint> expected;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            bool beaten = false;
            for (std::size_t j = 0; j < pts.size() && !beaten; ++j) {
                beaten = pts[j].f1 <= pts[i].f1 && pts[j].f2 <= pts[i].f2 &&
                         (pts[j].f1 < pts[i].f1 || pts[j].f2 < pts[i].f2);
            }
            if (!beaten && std::find(expected.begin(), expected.end(), pts[i]) == expected.end()) {
                expected.push_back(pts[i]);
            }
        }
        std::vector<ObjectivePoint> got = pareto_filter(pts);
        const auto less = [](const ObjectivePoint& a, const ObjectivePoint& b) {
            return std::tie(a.f1, a.f2) < std::tie(b.f1, b.f2);
        };
        std::sort(got.begin(), got.end(), less);
        std::sort(expected.begin(), expected.end(), less);
        mismatches += got != expected;
    }
    return {mismatches == 0, fmt("%.0f of 1000 sets differ from brute force", static_cast<double>(mismatches))};
}

Outcome toy_scalarization()
{
    BiObjectiveProblem pb;
    pb.dimension = 1;
    pb.lower = {0.0};
    pb.upper = {1.0};
    pb.evaluate = [](std::span<const double> x) { return ObjectivePoint{x[0] * x[0], (1 - x[0]) * (1 - x[0])}; };
    double oracle = 0.0;
    double best = 1e300;
    for (int k = 0; k <= 10000; ++k) {
        const double x = k * 1e-4;
        const double v = std::max(0.5 * x * x, 0.5 * (1 - x) * (1 - x));
        if (v < best) {
            best = v;
            oracle = x;
        }
    }
    const std::vector<double> x0{0.9};
    const double ga = goal_attainment(pb, {0.5, 0.5}, {0, 0}, x0).decision.at(0);
    const double ch = chebyshev(pb, {0.5, 0.5}, {0, 0}, x0).decision.at(0);
    const bool pass = std::abs(oracle - 0.5) <= 1e-3 && std::abs(ga - 0.5) <= 1e-3 && std::abs(ch - 0.5) <= 1e-3;
    return {pass, fmt("grid oracle %.4f, goal attainment %.7f, Chebyshev %.7f (tol 1e-3)", oracle, ga, ch)};
}

} // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"conservation", conservation},
        {"nonnegativity", nonnegativity},
        {"integrator order", integrator_order},
        {"f2 anchors", f2_anchors},
        {"ladder structure", ladder_structure},
        {"beta ordering", beta_ordering},
        {"population invariance", population_invariance},
        {"efficacy monotonicity", efficacy_monotonicity},
        {"method comparison", method_comparison},
        {"hypervolume oracle", hypervolume_oracle},
        {"pareto oracle", pareto_oracle},
        {"toy scalarization", toy_scalarization},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
