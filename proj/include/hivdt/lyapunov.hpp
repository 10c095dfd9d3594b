#ifndef HIVDT_LYAPUNOV_HPP
#define HIVDT_LYAPUNOV_HPP

#include <cstddef>
#include <vector>

#include "hivdt/model.hpp"

namespace hivdt {

/// G(x) = x - ln(x) - 1: positive for x > 0 with its only zero at x = 1.
/// Throws DomainError for x <= 0.
double g(double x);

/// Energy toward the disease-free equilibrium. n1 is the analytic ultimate
/// bound a*N*lambda/Q (see bound_n1 in simulate.hpp). The history window must
/// be strictly positive in X; Y, V, Z enter linearly.
double lyapunov_e0(const Parameters& par, const DelayLine& hist, double n1);

/// Energy toward the endemic equilibrium without immune response. Valid for
/// r1 <= 1 < r0; X, Y, V coordinates of the window must be strictly positive.
double lyapunov_estar(const Parameters& par, const DelayLine& hist, const State& e_star, double n1);

/// Energy toward the endemic equilibrium with immune response. Requires
/// r1 > 1 (throws NotApplicable otherwise) and a strictly positive window.
double lyapunov_ebar(const Parameters& par, const DelayLine& hist, const State& e_bar);

enum class LyapunovTarget { E0, EStar, EBar };

struct LyapunovSeries {
    LyapunovTarget target;
    std::vector<double> values; // indexed by step n = 0..steps
    std::vector<double> deltas; // deltas[n] = values[n+1] - values[n]
};

struct TrajectoryRecord;

/// Evaluates the target's energy at every recorded step of a trajectory.
LyapunovSeries lyapunov_series(const TrajectoryRecord& traj, LyapunovTarget target);

struct MonotonicityVerdict {
    bool ok;
    std::size_t first_violation; // delta index, meaningful when !ok
    double worst_excess;         // largest delta beyond the allowed slack
};

/// Checks deltas[n] <= tol*(1 + |values[n]|) for every n >= first_delta.
MonotonicityVerdict check_monotone_from(const LyapunovSeries& series, std::size_t first_delta,
                                        double tol = 1e-9);

/// check_monotone_from starting at the delay horizon; steps before it are
/// excluded because the decrease argument needs a full history window.
MonotonicityVerdict check_monotone(const LyapunovSeries& series, int delay_steps, double tol = 1e-9);

} // namespace hivdt

#endif
