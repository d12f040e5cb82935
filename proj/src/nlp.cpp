#include "tbmo/nlp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace tbmo {

std::string_view to_string(SolveStatus s)
{
    switch (s) {
    case SolveStatus::converged:
        return "converged";
    case SolveStatus::budget_exhausted:
        return "budget-exhausted";
    case SolveStatus::infeasible:
        return "infeasible";
    }
    return "unknown";
}

SolveStatus status_from_string(std::string_view s)
{
    if (s == "converged") {
        return SolveStatus::converged;
    }
    if (s == "budget-exhausted") {
        return SolveStatus::budget_exhausted;
    }
    if (s == "infeasible") {
        return SolveStatus::infeasible;
    }
    throw std::invalid_argument("unknown solve status '" + std::string(s) + "'");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

double max_violation(std::span<const double> c)
{
    double v = 0.0;
    for (double cj : c) {
        v = std::max(v, cj);
    }
    return v;
}

struct BudgetExhausted {};

/// Augmented-Lagrangian outer loop (PHR form) around a projected L-BFGS inner solver.
/// Owns all mutable state of one solve.
class AugmentedLagrangian {
public:
    AugmentedLagrangian(const NlpProblem& pb, const NlpOptions& opts)
        : pb_(pb), opts_(opts), n_(pb.dimension), m_(pb.constraints), lambda_(m_, 0.0),
          rho_(opts.initial_penalty)
    {
        if (!pb_.evaluate) {
            throw std::invalid_argument("solve_nlp: problem has no evaluate callable");
        }
        if (pb_.lower.size() != n_ || pb_.upper.size() != n_) {
            throw std::invalid_argument("solve_nlp: bound vectors must match the dimension");
        }
        for (std::size_t i = 0; i < n_; ++i) {
            if (!(pb_.lower[i] <= pb_.upper[i])) {
                throw std::invalid_argument("solve_nlp: empty box in coordinate " + std::to_string(i));
            }
        }
        if (opts_.budget == 0) {
            throw std::invalid_argument("solve_nlp: budget must be at least 1");
        }
    }

    SolveReport run(std::span<const double> x0)
    {
        if (x0.size() != n_) {
            throw std::invalid_argument("solve_nlp: x0 has wrong dimension");
        }
        std::vector<double> x(x0.begin(), x0.end());
        project(x);

        SolveStatus status = SolveStatus::budget_exhausted;
        std::vector<double> c(m_);
        try {
            double f = evaluate(x, c);
            objective_scale_ = 1.0 / std::max(1.0, std::isfinite(f) ? std::abs(f) : 1.0);
            double inner_tol = std::max(opts_.stationarity_tol, 1e-3);
            double previous_infeasibility = kInf;
            estimate_multipliers(x, f, c);

            for (std::size_t outer = 0; outer < opts_.max_outer; ++outer) {
                const bool inner_converged = minimize_merit(x, f, c, inner_tol);

                const double infeasibility = complementarity_gap(c);
                const bool stationary = inner_converged && inner_tol <= opts_.stationarity_tol;
                if (infeasibility <= opts_.constraint_tol && stationary) {
                    status = SolveStatus::converged;
                    break;
                }
                for (std::size_t j = 0; j < m_; ++j) {
                    lambda_[j] = std::min(std::max(0.0, lambda_[j] + rho_ * c[j]), 1e12);
                }
                if (infeasibility > opts_.constraint_tol && infeasibility > 0.25 * previous_infeasibility) {
                    rho_ = std::min(rho_ * 10.0, 1e12);
                }
                previous_infeasibility = infeasibility;
                inner_tol = std::max(opts_.stationarity_tol, 0.1 * inner_tol);
            }
        } catch (const BudgetExhausted&) {
            status = SolveStatus::budget_exhausted;
        }

        SolveReport report;
        report.evaluations = evaluations_;
        if (best_) {
            report.decision = best_->x;
            report.objective = best_->f;
            report.constraint_violation = best_->violation;
            report.status = status;
        } else {
            report.decision = x;
            report.objective = last_f_;
            report.constraint_violation = last_violation_;
            report.status = SolveStatus::infeasible;
        }
        return report;
    }

private:
    struct Best {
        std::vector<double> x;
        double f;
        double violation;
    };

    void project(std::span<double> x) const
    {
        for (std::size_t i = 0; i < n_; ++i) {
            x[i] = std::clamp(x[i], pb_.lower[i], pb_.upper[i]);
        }
    }

    double evaluate(std::span<const double> x, std::span<double> c)
    {
        if (evaluations_ >= opts_.budget) {
            throw BudgetExhausted{};
        }
        ++evaluations_;
        double f = kInf;
        try {
            f = pb_.evaluate(x, c);
        } catch (const std::runtime_error&) {
            std::fill(c.begin(), c.end(), kInf);
        }
        if (!std::isfinite(f)) {
            f = kInf;
        }
        const double violation = max_violation(c);
        last_f_ = f;
        last_violation_ = violation;
        if (std::isfinite(f) && violation <= opts_.constraint_tol && (!best_ || f < best_->f)) {
            best_ = Best{std::vector<double>(x.begin(), x.end()), f, violation};
        }
        return f;
    }

    /// Fills the objective gradient and constraint Jacobian (row-major).
    void gradients(std::span<const double> x, double f, std::span<const double> c, std::span<double> grad,
                   std::span<double> jac)
    {
        if (evaluations_ + n_ > opts_.budget) {
            throw BudgetExhausted{};
        }
        if (pb_.gradient) {
            evaluations_ += pb_.gradient(x, grad, jac);
            return;
        }
        std::vector<double> xp(x.begin(), x.end());
        std::vector<double> cp(m_);
        for (std::size_t i = 0; i < n_; ++i) {
            double step = opts_.fd_step * (1.0 + std::abs(x[i]));
            if (x[i] + step > pb_.upper[i]) {
                step = -step;
            }
            xp[i] = x[i] + step;
            step = xp[i] - x[i];
            ++evaluations_;
            const double fp = pb_.evaluate(xp, cp);
            grad[i] = (fp - f) / step;
            for (std::size_t j = 0; j < m_; ++j) {
                jac[j * n_ + i] = (cp[j] - c[j]) / step;
            }
            xp[i] = x[i];
        }
    }

    double merit(double f, std::span<const double> c) const
    {
        double v = objective_scale_ * f;
        for (std::size_t j = 0; j < m_; ++j) {
            const double shifted = std::max(0.0, lambda_[j] + rho_ * c[j]);
            v += (shifted * shifted - lambda_[j] * lambda_[j]) / (2.0 * rho_);
        }
        return v;
    }

    /// Gradient and Jacobian at x, reused while x is unchanged.
    void raw_gradients(std::span<const double> x, double f, std::span<const double> c)
    {
        if (raw_valid_ && std::equal(x.begin(), x.end(), raw_x_.begin())) {
            return;
        }
        raw_valid_ = false;
        raw_g_.assign(n_, 0.0);
        raw_j_.assign(m_ * n_, 0.0);
        gradients(x, f, c, raw_g_, raw_j_);
        raw_x_.assign(x.begin(), x.end());
        raw_valid_ = true;
    }

    void merit_gradient(std::span<const double> x, double f, std::span<const double> c, std::span<double> g)
    {
        raw_gradients(x, f, c);
        for (std::size_t i = 0; i < n_; ++i) {
            g[i] = objective_scale_ * raw_g_[i];
        }
        for (std::size_t j = 0; j < m_; ++j) {
            const double multiplier = std::max(0.0, lambda_[j] + rho_ * c[j]);
            if (multiplier == 0.0) {
                continue;
            }
            for (std::size_t i = 0; i < n_; ++i) {
                g[i] += multiplier * raw_j_[j * n_ + i];
            }
        }
    }

    /// Nonnegative least-squares multipliers at x0,
    /// fitted on the coordinates strictly inside the box.
    void estimate_multipliers(std::span<const double> x, double f, std::span<const double> c)
    {
        std::vector<std::size_t> active;
        for (std::size_t j = 0; j < m_; ++j) {
            if (std::isfinite(c[j])) {
                active.push_back(j);
            }
        }
        if (active.empty() || !std::isfinite(f)) {
            return;
        }
        raw_gradients(x, f, c);
        std::vector<double> r(n_, 0.0);
        for (std::size_t i = 0; i < n_; ++i) {
            if (x[i] > pb_.lower[i] && x[i] < pb_.upper[i]) {
                r[i] = objective_scale_ * raw_g_[i];
            }
        }
        auto row = [&](std::size_t j, std::size_t i) {
            return x[i] > pb_.lower[i] && x[i] < pb_.upper[i] ? raw_j_[j * n_ + i] : 0.0;
        };
        std::vector<double> lam(m_, 0.0);
        for (int sweep = 0; sweep < 200; ++sweep) {
            double change = 0.0;
            for (std::size_t j : active) {
                double norm2 = 0.0;
                double proj = 0.0;
                for (std::size_t i = 0; i < n_; ++i) {
                    const double a = row(j, i);
                    norm2 += a * a;
                    proj += a * r[i];
                }
                if (!(norm2 > 0.0)) {
                    continue;
                }
                const double updated = std::max(0.0, lam[j] - proj / norm2);
                const double delta = updated - lam[j];
                if (delta != 0.0) {
                    for (std::size_t i = 0; i < n_; ++i) {
                        r[i] += delta * row(j, i);
                    }
                    lam[j] = updated;
                    change = std::max(change, std::abs(delta));
                }
            }
            if (change <= 1e-12) {
                break;
            }
        }
        for (std::size_t j : active) {
            lambda_[j] = std::min(lam[j], 1e12);
        }
    }

    double complementarity_gap(std::span<const double> c) const
    {
        double gap = 0.0;
        for (std::size_t j = 0; j < m_; ++j) {
            gap = std::max(gap, std::abs(std::max(c[j], -lambda_[j] / rho_)));
        }
        return gap;
    }

    double projected_gradient_norm(std::span<const double> x, std::span<const double> g) const
    {
        double norm = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            const double moved = std::clamp(x[i] - g[i], pb_.lower[i], pb_.upper[i]);
            norm = std::max(norm, std::abs(moved - x[i]));
        }
        return norm;
    }

    bool is_free(std::size_t i, std::span<const double> x, std::span<const double> g) const
    {
        return !((x[i] <= pb_.lower[i] && g[i] > 0.0) || (x[i] >= pb_.upper[i] && g[i] < 0.0));
    }

    /// Quasi-Newton direction on the free variables via the two-loop recursion.
    std::vector<double> direction(std::span<const double> x, std::span<const double> g) const
    {
        std::vector<double> q(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            q[i] = is_free(i, x, g) ? g[i] : 0.0;
        }
        const std::size_t k = s_.size();
        std::vector<double> alpha(k);
        for (std::size_t a = k; a-- > 0;) {
            alpha[a] = dot(s_[a], q) / dot(y_[a], s_[a]);
            for (std::size_t i = 0; i < n_; ++i) {
                q[i] -= alpha[a] * y_[a][i];
            }
        }
        if (k > 0) {
            const double gamma = dot(s_.back(), y_.back()) / dot(y_.back(), y_.back());
            for (double& qi : q) {
                qi *= gamma;
            }
        }
        for (std::size_t a = 0; a < k; ++a) {
            const double b = dot(y_[a], q) / dot(y_[a], s_[a]);
            for (std::size_t i = 0; i < n_; ++i) {
                q[i] += s_[a][i] * (alpha[a] - b);
            }
        }
        for (std::size_t i = 0; i < n_; ++i) {
            q[i] = is_free(i, x, g) ? -q[i] : 0.0;
        }
        return q;
    }

    /// Projected L-BFGS on the merit function. Updates x, f, c in place and
    /// returns true when the projected gradient norm reaches `tol`.
    bool minimize_merit(std::vector<double>& x, double& f, std::vector<double>& c, double tol)
    {
        std::vector<double> g(n_);
        merit_gradient(x, f, c, g);
        double phi = merit(f, c);

        std::vector<double> trial(n_);
        std::vector<double> trial_c(m_);
        std::vector<double> trial_g(n_);
        constexpr std::size_t kMaxInner = 400;
        for (std::size_t iter = 0; iter < kMaxInner; ++iter) {
            if (projected_gradient_norm(x, g) <= tol) {
                return true;
            }
            bool steepest = s_.empty();
            std::vector<double> d = direction(x, g);
            if (!steepest && dot(g, d) >= 0.0) {
                clear_memory();
                steepest = true;
                d = direction(x, g);
            }

            bool accepted = false;
            double trial_f = kInf;
            while (!accepted) {
                double d_norm = 0.0;
                for (double di : d) {
                    d_norm = std::max(d_norm, std::abs(di));
                }
                if (d_norm == 0.0) {
                    return false;
                }
                double step = steepest ? 1.0 / d_norm : 1.0;
                for (int backtrack = 0; backtrack < 40; ++backtrack) {
                    for (std::size_t i = 0; i < n_; ++i) {
                        trial[i] = std::clamp(x[i] + step * d[i], pb_.lower[i], pb_.upper[i]);
                    }
                    double predicted = 0.0;
                    for (std::size_t i = 0; i < n_; ++i) {
                        predicted += g[i] * (trial[i] - x[i]);
                    }
                    if (predicted >= 0.0) {
                        step *= 0.5;
                        continue;
                    }
                    trial_f = evaluate(trial, trial_c);
                    const double trial_phi = merit(trial_f, trial_c);
                    if (trial_phi <= phi + 1e-4 * predicted) {
                        accepted = true;
                        break;
                    }
                    step *= 0.5;
                }
                if (!accepted) {
                    if (steepest) {
                        return false; // no descent possible at this resolution
                    }
                    clear_memory();
                    steepest = true;
                    d = direction(x, g);
                }
            }

            merit_gradient(trial, trial_f, trial_c, trial_g);
            std::vector<double> s(n_);
            std::vector<double> y(n_);
            for (std::size_t i = 0; i < n_; ++i) {
                s[i] = trial[i] - x[i];
                y[i] = trial_g[i] - g[i];
            }
            const double sy = dot(s, y);
            if (sy > 1e-12 * std::sqrt(dot(s, s) * dot(y, y))) {
                s_.push_back(std::move(s));
                y_.push_back(std::move(y));
                if (s_.size() > opts_.lbfgs_memory) {
                    s_.pop_front();
                    y_.pop_front();
                }
            }
            x = trial;
            c = trial_c;
            f = trial_f;
            g = trial_g;
            phi = merit(f, c);
        }
        return projected_gradient_norm(x, g) <= tol;
    }

    void clear_memory()
    {
        s_.clear();
        y_.clear();
    }

    const NlpProblem& pb_;
    NlpOptions opts_;
    std::size_t n_;
    std::size_t m_;
    std::vector<double> lambda_;
    double rho_;
    double objective_scale_{1.0};
    std::size_t evaluations_{0};
    std::deque<std::vector<double>> s_;
    std::deque<std::vector<double>> y_;
    std::optional<Best> best_;
    std::vector<double> raw_x_;
    std::vector<double> raw_g_;
    std::vector<double> raw_j_;
    bool raw_valid_{false};
    double last_f_{kInf};
    double last_violation_{kInf};
};

} // namespace

SolveReport solve_nlp(const NlpProblem& problem, std::span<const double> x0, const NlpOptions& opts)
{
    AugmentedLagrangian solver(problem, opts);
    return solver.run(x0);
}

SolveReport solve_nlp(const ScalarFn& objective, const std::vector<ScalarFn>& constraints,
                      std::span<const double> x0, const NlpOptions& opts)
{
    NlpProblem pb;
    pb.dimension = x0.size();
    pb.constraints = constraints.size();
    pb.lower.assign(pb.dimension, 0.0);
    pb.upper.assign(pb.dimension, 1.0);
    pb.evaluate = [&](std::span<const double> x, std::span<double> c) {
        for (std::size_t j = 0; j < constraints.size(); ++j) {
            c[j] = constraints[j](x);
        }
        return objective(x);
    };
    return solve_nlp(pb, x0, opts);
}

} // namespace tbmo
