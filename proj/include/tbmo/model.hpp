#ifndef TBMO_MODEL_HPP
#define TBMO_MODEL_HPP

#include <array>
#include <stdexcept>
#include <string>

namespace tbmo {

/// Epidemiological and efficacy constants of the controlled TB model.
/// Rates are per year, N is a head count, T is the horizon in years.
struct ModelParameters {
    double beta{100.0};      ///< transmission coefficient
    double mu{1.0 / 70.0};   ///< birth and death rate
    double delta{12.0};      ///< rate of leaving early latency
    double phi{0.05};        ///< proportion of L1 progressing to I
    double omega{0.0002};    ///< endogenous reactivation of L2
    double omega_r{0.00002}; ///< endogenous reactivation of R
    double sigma{0.25};      ///< reinfection factor for L2
    double sigma_r{0.25};    ///< reinfection factor for R
    double tau0{2.0};        ///< recovery rate of I under treatment
    double tau1{2.0};        ///< recovery rate of L1 under treatment
    double tau2{1.0};        ///< recovery rate of L2 under treatment
    double n{30000.0};       ///< total population
    double eps1{0.5};        ///< efficacy of the u1 control
    double eps2{0.5};        ///< efficacy of the u2 control
    double horizon{5.0};     ///< T

    /// Throws std::invalid_argument naming the first offending field.
    void validate() const;

    bool operator==(const ModelParameters&) const = default;
};

/// Table values with the four swept quantities supplied by the caller.
ModelParameters default_parameters(double beta, double n, double eps1, double eps2);

/// Compartment counts S, L1, I, L2, R at one instant.
struct StateVector {
    double s{0.0};
    double l1{0.0};
    double i{0.0};
    double l2{0.0};
    double r{0.0};

    double total() const { return s + l1 + i + l2 + r; }

    std::array<double, 5> as_array() const { return {s, l1, i, l2, r}; }

    StateVector& operator+=(const StateVector& o)
    {
        s += o.s;
        l1 += o.l1;
        i += o.i;
        l2 += o.l2;
        r += o.r;
        return *this;
    }

    friend StateVector operator+(StateVector a, const StateVector& b) { return a += b; }
    friend StateVector operator*(double k, const StateVector& v)
    {
        return {k * v.s, k * v.l1, k * v.i, k * v.l2, k * v.r};
    }

    bool operator==(const StateVector&) const = default;
};

/// Control intensities; both lie in [0, 1].
struct ControlValue {
    double u1{0.0};
    double u2{0.0};

    bool admissible() const { return u1 >= 0.0 && u1 <= 1.0 && u2 >= 0.0 && u2 <= 1.0; }

    bool operator==(const ControlValue&) const = default;
};

StateVector initial_state(double n);

/// Time derivative of the state under a fixed control. The five components sum to zero.
StateVector rhs(const StateVector& x, const ControlValue& u, const ModelParameters& p);

} // namespace tbmo

#endif // TBMO_MODEL_HPP
