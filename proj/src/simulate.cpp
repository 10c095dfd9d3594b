#include "hivdt/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hivdt {

double bound_q(const Parameters& par)
{
    return std::min({par.d, par.a / 2.0, par.mu});
}

double bound_n1(const Parameters& par)
{
    return par.a * par.n_virions * par.lambda / bound_q(par);
}

namespace {

// State at step i, i in [-m, steps]; negative indices read the prehistory.
const State& state_at(const TrajectoryRecord& traj, long i)
{
    if (i < 0) {
        return traj.prehistory[traj.prehistory.size() + static_cast<std::size_t>(i)];
    }
    return traj.states[static_cast<std::size_t>(i)];
}

void fill_monitors(TrajectoryRecord& traj)
{
    const Parameters& par = traj.params;
    const long steps = static_cast<long>(traj.states.size()) - 1;
    const int m = par.delay_steps;
    const double n1 = bound_n1(par);

    Monitors mon;
    if (m <= steps) {
        mon.omega.reserve(static_cast<std::size_t>(steps - m) + 1);
        for (long n = 0; n + m <= steps; ++n) {
            const State& base = state_at(traj, n);
            const State& ahead = state_at(traj, n + m);
            mon.omega.push_back(par.a * par.n_virions * base.x + par.a * par.n_virions * ahead.y +
                                par.a / 2.0 * ahead.v);
        }
    }
    mon.n2.reserve(static_cast<std::size_t>(steps));
    mon.in_gamma.reserve(static_cast<std::size_t>(steps));
    for (long n = 0; n < steps; ++n) {
        // X_{n-m+1} resolves exactly as in the step map: the new X when m = 0.
        const double x_shift = (m >= 1) ? state_at(traj, n - m + 1).x : state_at(traj, n + 1).x;
        const double v_lag = state_at(traj, n - m).v;
        const double bound =
            par.c * state_at(traj, n).x * par.beta * x_shift * v_lag / (par.p * par.s);
        mon.n2.push_back(bound);

        const State& next = state_at(traj, n + 1);
        const bool inside = next.x > 0.0 && next.y > 0.0 && next.v > 0.0 && next.x <= n1 &&
                            next.y <= n1 && next.v <= n1 && next.z < bound;
        mon.in_gamma.push_back(inside ? 1 : 0);
    }
    traj.monitors = std::move(mon);
}

} // namespace

TrajectoryRecord run(const Parameters& par, const InitialData& init, long steps, bool record_monitors)
{
    if (steps < 1) {
        throw ValidationError("steps must be >= 1", "steps");
    }
    if (init.history.size() != static_cast<std::size_t>(par.delay_steps) + 1) {
        throw ValidationError("initial history must hold m+1 states", "initial");
    }

    TrajectoryRecord traj;
    traj.params = par;
    traj.prehistory.assign(init.history.begin(), init.history.end() - 1);
    traj.times.reserve(static_cast<std::size_t>(steps) + 1);
    traj.states.reserve(static_cast<std::size_t>(steps) + 1);
    traj.times.push_back(0.0);
    traj.states.push_back(init.history.back());

    DelayLine window{init.history};
    for (long n = 1; n <= steps; ++n) {
        const State next = nsfd_step(par, window);
        window.push(next);
        traj.times.push_back(static_cast<double>(n) * par.h);
        traj.states.push_back(next);
    }

    if (record_monitors) {
        fill_monitors(traj);
    }
    return traj;
}

namespace {

constexpr double kRelFloor = 1e-6; // denominator floor for zero-limit coordinates

double rel_gap(double value, double reference)
{
    return std::abs(value - reference) / std::max(std::abs(reference), kRelFloor);
}

// Sup over the window of the per-coordinate relative distance to the mean.
double window_variation(const std::vector<State>& window, State& mean_out)
{
    State mean{0.0, 0.0, 0.0, 0.0};
    for (const State& s : window) {
        mean.x += s.x;
        mean.y += s.y;
        mean.v += s.v;
        mean.z += s.z;
    }
    const double inv = 1.0 / static_cast<double>(window.size());
    mean = State{mean.x * inv, mean.y * inv, mean.v * inv, mean.z * inv};

    double sup = 0.0;
    for (const State& s : window) {
        sup = std::max({sup, rel_gap(s.x, mean.x), rel_gap(s.y, mean.y), rel_gap(s.v, mean.v),
                        rel_gap(s.z, mean.z)});
    }
    mean_out = mean;
    return sup;
}

} // namespace

ConvergenceVerdict detect_convergence(const TrajectoryRecord& traj, double tol, std::size_t window)
{
    if (window < 1 || window > traj.states.size()) {
        throw WindowTooLarge("window of " + std::to_string(window) + " exceeds " +
                             std::to_string(traj.states.size()) + " recorded states");
    }
    std::vector<State> tail(traj.states.end() - static_cast<long>(window), traj.states.end());
    State mean{};
    const double sup = window_variation(tail, mean);
    ConvergenceVerdict verdict;
    verdict.converged = sup <= tol;
    verdict.steps_used = static_cast<long>(traj.states.size()) - 1;
    verdict.sup_error = sup;
    if (verdict.converged) {
        verdict.limit = mean;
    }
    return verdict;
}

ConvergenceVerdict run_to_convergence(const Parameters& par, const InitialData& init, long max_steps,
                                      double tol, std::size_t window)
{
    if (init.history.size() != static_cast<std::size_t>(par.delay_steps) + 1) {
        throw ValidationError("initial history must hold m+1 states", "initial");
    }
    if (window < 1) {
        throw WindowTooLarge("window must be >= 1");
    }

    DelayLine hist{init.history};
    std::vector<State> tail;
    tail.reserve(window);
    tail.push_back(init.history.back());

    ConvergenceVerdict verdict;
    verdict.converged = false;
    verdict.steps_used = 0;
    verdict.sup_error = std::numeric_limits<double>::infinity();

    std::size_t fill = tail.size();
    std::size_t cursor = 0;
    for (long n = 1; n <= max_steps; ++n) {
        const State next = nsfd_step(par, hist);
        hist.push(next);
        if (tail.size() < window) {
            tail.push_back(next);
            fill = tail.size();
        } else {
            tail[cursor] = next;
            cursor = (cursor + 1) % window;
        }
        if (fill == window && n % static_cast<long>(window) == 0) {
            State mean{};
            const double sup = window_variation(tail, mean);
            verdict.steps_used = n;
            verdict.sup_error = sup;
            if (sup <= tol) {
                verdict.converged = true;
                verdict.limit = mean;
                return verdict;
            }
        }
        verdict.steps_used = n;
    }
    return verdict;
}

BoundsReport bounds_report(const TrajectoryRecord& traj)
{
    if (!traj.monitors.has_value()) {
        throw MonitorsAbsent("trajectory was recorded without monitors");
    }
    const Parameters& par = traj.params;
    const Monitors& mon = *traj.monitors;
    const double phi = par.h;
    const double q = bound_q(par);
    const double n1 = bound_n1(par);
    const double influx = par.a * par.n_virions * par.lambda * phi;
    const double rho = 1.0 / (1.0 + q * phi);
    constexpr double kSlack = 1e-9;

    bool omega_ok = true;
    double envelope = mon.omega.empty() ? 0.0 : mon.omega.front();
    for (std::size_t n = 0; n + 1 < mon.omega.size(); ++n) {
        const double rhs = influx + mon.omega[n];
        if (mon.omega[n + 1] * (1.0 + q * phi) > rhs + kSlack * std::max(1.0, rhs)) {
            omega_ok = false;
            break;
        }
        // rho^{n+1}*Omega_0 + N1*(1 - rho^{n+1}), accumulated incrementally
        envelope = rho * envelope + (1.0 - rho) * n1;
        if (mon.omega[n + 1] > envelope + kSlack * std::max(1.0, envelope)) {
            omega_ok = false;
            break;
        }
    }

    // The per-step Z bound is an asymptotic statement: the decaying influence
    // of Z_0 is ignored by the printed constant, so only the trailing half of
    // the run is held to it.
    bool z_ok = true;
    for (std::size_t n = mon.n2.size() / 2; n < mon.n2.size(); ++n) {
        const double bound = mon.n2[n];
        if (!std::isfinite(bound)) {
            continue;
        }
        if (traj.states[n + 1].z > bound + kSlack * std::max(1.0, bound)) {
            z_ok = false;
            break;
        }
    }

    return BoundsReport{q, n1, omega_ok, z_ok};
}

long gamma_resident_from(const TrajectoryRecord& traj)
{
    if (!traj.monitors.has_value()) {
        throw MonitorsAbsent("trajectory was recorded without monitors");
    }
    const auto& in_gamma = traj.monitors->in_gamma;
    long resident = 0;
    for (std::size_t i = 0; i < in_gamma.size(); ++i) {
        if (!in_gamma[i]) {
            resident = static_cast<long>(i) + 2; // in_gamma[i] describes state i+1
        }
    }
    return resident;
}

} // namespace hivdt
