#include "tbmo/model.hpp"

#include <cmath>

namespace tbmo {

namespace {

void require(bool ok, const char* field, const char* what)
{
    if (!ok) {
        throw std::invalid_argument(std::string("ModelParameters.") + field + ": " + what);
    }
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }
bool unit_closed(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }
bool unit_open(double v) { return std::isfinite(v) && v > 0.0 && v < 1.0; }

} // namespace

void ModelParameters::validate() const
{
    require(positive(beta), "beta", "must be positive");
    require(positive(mu), "mu", "must be positive");
    require(positive(delta), "delta", "must be positive");
    require(unit_closed(phi), "phi", "must lie in [0,1]");
    require(positive(omega), "omega", "must be positive");
    require(positive(omega_r), "omega_r", "must be positive");
    require(unit_closed(sigma), "sigma", "must lie in [0,1]");
    require(unit_closed(sigma_r), "sigma_r", "must lie in [0,1]");
    require(positive(tau0), "tau0", "must be positive");
    require(positive(tau1), "tau1", "must be positive");
    require(positive(tau2), "tau2", "must be positive");
    require(positive(n), "N", "must be positive");
    require(unit_open(eps1), "eps1", "must lie in (0,1)");
    require(unit_open(eps2), "eps2", "must lie in (0,1)");
    require(positive(horizon), "T", "must be positive");
}

ModelParameters default_parameters(double beta, double n, double eps1, double eps2)
{
    ModelParameters p;
    p.beta = beta;
    p.n = n;
    p.eps1 = eps1;
    p.eps2 = eps2;
    p.validate();
    return p;
}

StateVector initial_state(double n)
{
    if (!(std::isfinite(n) && n > 0.0)) {
        throw std::invalid_argument("initial_state: N must be positive");
    }
    StateVector x;
    x.l1 = 37.0 * n / 120.0;
    x.i = 4.0 * n / 120.0;
    x.l2 = 2.0 * n / 120.0;
    x.r = n / 120.0;
    // S takes the remainder so the compartments sum to N without rounding drift.
    x.s = n - x.l1 - x.i - x.l2 - x.r;
    return x;
}

StateVector rhs(const StateVector& x, const ControlValue& u, const ModelParameters& p)
{
    const double force = p.beta / p.n * x.i; // per-capita force of infection
    const double treat_i = p.tau0 + p.eps1 * u.u1;
    const double treat_l2 = p.tau2 + p.eps2 * u.u2;

    // Flows between compartments; each appears once with + and once with -.
    const double infect_s = force * x.s;
    const double reinfect_l2 = p.sigma * force * x.l2;
    const double reinfect_r = p.sigma_r * force * x.r;
    const double l1_to_i = p.phi * p.delta * x.l1;
    const double l1_to_l2 = (1.0 - p.phi) * p.delta * x.l1;
    const double l1_to_r = p.tau1 * x.l1;
    const double l2_to_i = p.omega * x.l2;
    const double r_to_i = p.omega_r * x.r;
    const double i_to_r = treat_i * x.i;
    const double l2_to_r = treat_l2 * x.l2;

    StateVector d;
    d.s = p.mu * p.n - infect_s - p.mu * x.s;
    d.l1 = infect_s + reinfect_l2 + reinfect_r - l1_to_i - l1_to_l2 - l1_to_r - p.mu * x.l1;
    d.i = l1_to_i + l2_to_i + r_to_i - i_to_r - p.mu * x.i;
    d.l2 = l1_to_l2 - reinfect_l2 - l2_to_i - l2_to_r - p.mu * x.l2;
    d.r = i_to_r + l1_to_r + l2_to_r - reinfect_r - r_to_i - p.mu * x.r;
    return d;
}

} // namespace tbmo
