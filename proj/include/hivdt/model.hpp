#ifndef HIVDT_MODEL_HPP
#define HIVDT_MODEL_HPP

#include <array>
#include <vector>

#include "hivdt/errors.hpp"

namespace hivdt {

/// Unvalidated model inputs, one field per rate plus the delay and step size.
struct ParameterValues {
    double lambda;    // source rate of CD4+ T cells (cells ul^-1 day^-1)
    double d;         // decay rate of healthy cells (day^-1)
    double beta;      // infection rate (ul virion^-1 day^-1)
    double a;         // death rate of infected cells (day^-1)
    double p;         // CTL clearance rate (ul cell^-1 day^-1)
    double mu;        // virus clearance rate (day^-1)
    double n_virions; // virions produced per infected cell (count)
    double c;         // CTL activation rate (ul^2 cell^-2 day^-1)
    double s;         // CTL decay rate (day^-1)
    double tau;       // intracellular delay (days)
    double h;         // step size (days)
};

/// Validated parameter set. Obtain through make_parameters; the denominator
/// function of the scheme is phi(h) = h, and tau = delay_steps * h.
struct Parameters {
    double lambda;
    double d;
    double beta;
    double a;
    double p;
    double mu;
    double n_virions;
    double c;
    double s;
    double tau;
    double h;
    int delay_steps; // m = tau / h

    bool operator==(const Parameters&) const = default;
};

/// Validates rates and the delay ratio and derives m = tau/h.
///
/// Throws NonPositiveParameter for a nonpositive or non-finite rate (beta is
/// allowed to be zero: the infection-free degenerate model is well defined),
/// NonIntegerDelayRatio when tau/h is not within 1e-9 of an integer.
Parameters make_parameters(const ParameterValues& raw);

/// One time step of the compartment vector, concentrations per microliter.
struct State {
    double x; // uninfected cells
    double y; // infected cells
    double v; // free virus
    double z; // CTL cells

    bool operator==(const State&) const = default;
};

bool all_nonnegative(const State& s);
bool all_positive(const State& s);

/// History window holding the last m+1 states (steps n-m .. n).
class DelayLine {
public:
    /// window is oldest-first and must have length m+1 for delay m >= 0.
    explicit DelayLine(std::vector<State> window);

    static DelayLine constant(const State& s, int delay_steps);

    /// Appends the state of step n+1, dropping step n-m.
    void push(const State& s);

    /// State at step n-k, valid for 0 <= k <= delay_steps().
    const State& at_lag(int k) const;

    const State& newest() const { return at_lag(0); }

    int delay_steps() const { return static_cast<int>(ring_.size()) - 1; }

    /// Copy of the window, oldest first.
    std::vector<State> snapshot() const;

private:
    std::vector<State> ring_;
    std::size_t oldest_ = 0;
};

/// Initial history psi_k for k = -m..0, oldest first.
struct InitialData {
    std::vector<State> history;
};

/// Validates the admissibility conditions: every entry nonnegative and the
/// k = 0 entry strictly positive in all coordinates.
InitialData make_initial_data(std::vector<State> history);

/// Constant history equal to a single (strictly positive) initial vector.
InitialData constant_history(const State& s0, int delay_steps);

/// Advances the scheme one step. With the newest window entry at step n,
/// returns step n+1, evaluated in the order X, Y, V, Z:
///
///   X' = (lambda*phi + X_n) / (1 + d*phi + beta*phi*V_n)
///   Y' = (Y_n + beta*phi*X_{n-m+1}*V_{n-m}) / (1 + a*phi + p*phi*Z_n)
///   V' = (V_n + a*N*phi*Y') / (1 + mu*phi)
///   Z' = (Z_n + c*phi*X_n*Y'*Z_n) / (1 + s*phi)
///
/// For m = 0 the term X_{n-m+1} is X', computed first in the sequence.
/// All denominators are >= 1 for nonnegative input, so the map is total.
State nsfd_step(const Parameters& par, const DelayLine& hist);

/// Residuals (difference quotient minus vector field) of the implicit form of
/// the scheme, evaluated at a proposed next state. The explicit step is the
/// exact solution of the implicit system, so nsfd_step output gives residuals
/// at rounding level; anything else is an independent check against it.
std::array<double, 4> implicit_residual(const Parameters& par, const DelayLine& hist, const State& next);

} // namespace hivdt

#endif
