#include "hivdt/lyapunov.hpp"

#include <cmath>
#include <string>

#include "hivdt/equilibria.hpp"
#include "hivdt/simulate.hpp"

namespace hivdt {

double g(double x)
{
    if (!(x > 0.0)) {
        throw DomainError("G(x) requires x > 0, got " + std::to_string(x));
    }
    return x - std::log(x) - 1.0;
}

namespace {

// Sum over the window pairs (X_{j+1}, V_j), j = n-m..n-1, of term(x, v).
template <typename Term>
double delay_pair_sum(const DelayLine& hist, Term term)
{
    double sum = 0.0;
    const int m = hist.delay_steps();
    for (int i = 0; i < m; ++i) {
        sum += term(hist.at_lag(m - 1 - i).x, hist.at_lag(m - i).v);
    }
    return sum;
}

} // namespace

double lyapunov_e0(const Parameters& par, const DelayLine& hist, double n1)
{
    const double phi = par.h;
    const double x0 = par.lambda / par.d;
    const State& cur = hist.newest();

    const double bracket = x0 * g(cur.x / x0) + cur.y + (1.0 + par.mu * phi) / par.n_virions * cur.v +
                           par.p / (par.c * n1) * (1.0 + par.s * phi) * cur.z;
    const double tail = delay_pair_sum(hist, [&](double x, double v) { return par.beta * x * v; });
    return bracket / phi + tail;
}

double lyapunov_estar(const Parameters& par, const DelayLine& hist, const State& e_star, double n1)
{
    const double phi = par.h;
    const State& cur = hist.newest();

    const double bracket = e_star.x * g(cur.x / e_star.x) + e_star.y * g(cur.y / e_star.y) +
                           (1.0 + par.mu * phi) * e_star.v / par.n_virions * g(cur.v / e_star.v) +
                           par.p * (1.0 + par.s * phi) / (par.c * n1) * cur.z;
    const double xv = e_star.x * e_star.v;
    const double tail =
        par.beta * xv * delay_pair_sum(hist, [&](double x, double v) { return g(x * v / xv); });
    return bracket / phi + tail;
}

double lyapunov_ebar(const Parameters& par, const DelayLine& hist, const State& e_bar)
{
    if (!(reproduction_numbers(par).r1 > 1.0)) {
        throw NotApplicable("immune endemic energy requires r1 > 1");
    }
    const double phi = par.h;
    const State& cur = hist.newest();

    const double xv = e_bar.x * e_bar.v;
    const double tail =
        par.beta * xv * delay_pair_sum(hist, [&](double x, double v) { return g(x * v / xv); });
    const double z_outer = par.p * e_bar.y * e_bar.z * g(cur.z / e_bar.z);
    const double bracket = e_bar.x * g(cur.x / e_bar.x) + e_bar.y * g(cur.y / e_bar.y) +
                           par.beta * xv * (1.0 + par.mu * phi) / par.mu * g(cur.v / e_bar.v) +
                           par.p * e_bar.z / (par.c * e_bar.x) * g(cur.z / e_bar.z);
    return tail + z_outer + bracket / phi;
}

LyapunovSeries lyapunov_series(const TrajectoryRecord& traj, LyapunovTarget target)
{
    const Parameters& par = traj.params;
    const EquilibriumSet eqs = equilibrium_set(par);
    const double n1 = bound_n1(par);

    if (target == LyapunovTarget::EStar && !eqs.e_star.has_value()) {
        throw NotApplicable("e_star does not exist (r0 <= 1)");
    }
    if (target == LyapunovTarget::EBar && !eqs.e_bar.has_value()) {
        throw NotApplicable("e_bar does not exist (r1 <= 1)");
    }

    auto eval = [&](const DelayLine& window) {
        switch (target) {
        case LyapunovTarget::E0:
            return lyapunov_e0(par, window, n1);
        case LyapunovTarget::EStar:
            return lyapunov_estar(par, window, *eqs.e_star, n1);
        case LyapunovTarget::EBar:
            return lyapunov_ebar(par, window, *eqs.e_bar);
        }
        throw Error("unreachable");
    };

    std::vector<State> initial = traj.prehistory;
    initial.push_back(traj.states.at(0));
    DelayLine window{std::move(initial)};

    LyapunovSeries series;
    series.target = target;
    series.values.reserve(traj.states.size());
    series.values.push_back(eval(window));
    for (std::size_t n = 1; n < traj.states.size(); ++n) {
        window.push(traj.states[n]);
        series.values.push_back(eval(window));
    }
    series.deltas.reserve(series.values.size() - 1);
    for (std::size_t n = 0; n + 1 < series.values.size(); ++n) {
        series.deltas.push_back(series.values[n + 1] - series.values[n]);
    }
    return series;
}

MonotonicityVerdict check_monotone(const LyapunovSeries& series, int delay_steps, double tol)
{
    return check_monotone_from(series, static_cast<std::size_t>(delay_steps), tol);
}

MonotonicityVerdict check_monotone_from(const LyapunovSeries& series, std::size_t first_delta,
                                        double tol)
{
    MonotonicityVerdict verdict{true, 0, 0.0};
    for (std::size_t n = first_delta; n < series.deltas.size(); ++n) {
        const double slack = tol * (1.0 + std::abs(series.values[n]));
        const double excess = series.deltas[n] - slack;
        if (excess > 0.0) {
            if (verdict.ok) {
                verdict.first_violation = n;
            }
            verdict.ok = false;
            if (excess > verdict.worst_excess) {
                verdict.worst_excess = excess;
            }
        }
    }
    return verdict;
}

} // namespace hivdt
