#ifndef HIVDT_SIMULATE_HPP
#define HIVDT_SIMULATE_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "hivdt/lyapunov.hpp"
#include "hivdt/model.hpp"

namespace hivdt {

/// Q = min{d, a/2, mu}, the uniform decay rate of the weighted total Omega.
double bound_q(const Parameters& par);

/// N1 = a*N*lambda/Q, the ultimate bound of X, Y and V.
double bound_n1(const Parameters& par);

/// Per-step boundedness monitors. With S recorded steps and delay m:
///   omega[n]    = a*N*X_n + a*N*Y_{n+m} + (a/2)*V_{n+m},   n = 0..S-m
///   n2[n]       = c*X_n*beta*X_{n-m+1}*V_{n-m}/(p*s),      n = 0..S-1
///                 (the bound derived at step n, applying to Z_{n+1})
///   in_gamma[n] = state n+1 lies in the region Gamma,      n = 0..S-1
struct Monitors {
    std::vector<double> omega;
    std::vector<double> n2;
    std::vector<char> in_gamma;
};

struct TrajectoryRecord {
    Parameters params;
    std::vector<State> prehistory; // psi_k for k = -m..-1 (empty when m = 0)
    std::vector<double> times;     // t_n = n*h, n = 0..steps
    std::vector<State> states;     // step n = 0..steps
    std::optional<Monitors> monitors;
    std::optional<LyapunovSeries> lyapunov;
};

/// Iterates the scheme for the given number of steps from the initial
/// history. Monitors are filled in a second pass (omega looks m steps ahead).
TrajectoryRecord run(const Parameters& par, const InitialData& init, long steps, bool record_monitors);

struct ConvergenceVerdict {
    bool converged;
    std::optional<State> limit; // mean of the trailing window when converged
    long steps_used;
    double sup_error; // sup-norm relative distance to the window mean
};

/// Converged iff every state in the trailing window is within tol of the
/// window mean, per coordinate, relative with an absolute floor of 1e-6.
/// Throws WindowTooLarge when the window exceeds the recorded steps.
ConvergenceVerdict detect_convergence(const TrajectoryRecord& traj, double tol, std::size_t window);

/// Runs without recording the full trajectory, checking convergence every
/// `window` steps. Stops early on convergence or at max_steps. Divergence is
/// reported, not thrown.
ConvergenceVerdict run_to_convergence(const Parameters& par, const InitialData& init, long max_steps,
                                      double tol = 1e-6, std::size_t window = 100);

struct BoundsReport {
    double q;
    double n1;
    bool omega_limsup_ok; // recursion and envelope hold at every step
    bool z_bound_ok;      // Z <= per-step N2 over the trailing half
};

/// Verifies, within 1e-9 relative slack, the recursion
/// Omega_{n+1}*(1+Q*phi) <= a*N*lambda*phi + Omega_n, the explicit envelope
/// Omega_n <= rho^n*Omega_0 + N1*(1-rho^n) with rho = 1/(1+Q*phi), and the
/// per-step Z bound over the trailing half of the run (the bound involves
/// step-dependent quantities, so it is only meaningful asymptotically).
/// Throws MonitorsAbsent when the trajectory was recorded without monitors.
BoundsReport bounds_report(const TrajectoryRecord& traj);

/// First state index from which the trajectory never leaves Gamma again
/// (0 when it never does). Energy decrease is only guaranteed from here on.
/// Throws MonitorsAbsent when the trajectory was recorded without monitors.
long gamma_resident_from(const TrajectoryRecord& traj);

} // namespace hivdt

#endif
