#ifndef TBMO_NLP_HPP
#define TBMO_NLP_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace tbmo {

enum class SolveStatus { converged, budget_exhausted, infeasible };

std::string_view to_string(SolveStatus s);
SolveStatus status_from_string(std::string_view s);

struct SolveReport {
    std::vector<double> decision;
    double objective{0.0};
    double constraint_violation{0.0}; ///< max over constraints of max(c_j, 0)
    std::size_t evaluations{0};
    SolveStatus status{SolveStatus::infeasible};
};

/// Box-constrained problem with inequality constraints c_j(x) <= 0.
///
/// `evaluate` fills the objective and all constraint values at x in one call and
/// counts as one evaluation. `gradient`, when supplied, fills the objective
/// gradient and the row-major m-by-n constraint Jacobian and returns the number of
/// evaluations it consumed; otherwise forward differences are taken (n evaluations).
struct NlpProblem {
    std::size_t dimension{0};
    std::size_t constraints{0};
    std::vector<double> lower;
    std::vector<double> upper;
    std::function<double(std::span<const double> x, std::span<double> c)> evaluate;
    std::function<std::size_t(std::span<const double> x, std::span<double> grad, std::span<double> jac)>
        gradient;
};

struct NlpOptions {
    std::size_t budget{20000};
    double constraint_tol{1e-6};
    double stationarity_tol{1e-6};
    double fd_step{1e-7};
    std::size_t lbfgs_memory{10};
    std::size_t max_outer{60};
    double initial_penalty{10.0};
};

/// Minimizes the problem from x0 (projected into the box) under an evaluation budget.
/// The returned decision is the best feasible point seen, or the last iterate when none was feasible.
SolveReport solve_nlp(const NlpProblem& problem, std::span<const double> x0, const NlpOptions& opts = {});

using ScalarFn = std::function<double(std::span<const double>)>;

/// Convenience form over the unit box: objective plus a list of c(x) <= 0 callables.
SolveReport solve_nlp(const ScalarFn& objective, const std::vector<ScalarFn>& constraints,
                      std::span<const double> x0, const NlpOptions& opts = {});

} // namespace tbmo

#endif // TBMO_NLP_HPP
