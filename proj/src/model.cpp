#include "hivdt/model.hpp"

#include <cmath>
#include <utility>

namespace hivdt {

namespace {

void require_positive(double value, const char* name)
{
    if (!(std::isfinite(value) && value > 0.0)) {
        throw NonPositiveParameter(name);
    }
}

} // namespace

Parameters make_parameters(const ParameterValues& raw)
{
    require_positive(raw.lambda, "lambda");
    require_positive(raw.d, "d");
    require_positive(raw.a, "a");
    require_positive(raw.p, "p");
    require_positive(raw.mu, "mu");
    require_positive(raw.n_virions, "N");
    require_positive(raw.c, "c");
    require_positive(raw.s, "s");
    require_positive(raw.h, "h");
    // beta = 0 switches the infection pathway off but leaves the scheme and
    // the reproduction numbers well defined, so only negatives are rejected.
    if (!(std::isfinite(raw.beta) && raw.beta >= 0.0)) {
        throw NonPositiveParameter("beta");
    }
    if (!(std::isfinite(raw.tau) && raw.tau >= 0.0)) {
        throw NonPositiveParameter("tau");
    }

    const double ratio = raw.tau / raw.h;
    const double rounded = std::round(ratio);
    if (!(std::abs(ratio - rounded) <= 1e-9)) {
        throw NonIntegerDelayRatio("tau/h = " + std::to_string(ratio) + " is not an integer");
    }

    return Parameters{raw.lambda, raw.d, raw.beta,      raw.a, raw.p, raw.mu,
                      raw.n_virions, raw.c, raw.s, raw.tau, raw.h, static_cast<int>(rounded)};
}

bool all_nonnegative(const State& s)
{
    return s.x >= 0.0 && s.y >= 0.0 && s.v >= 0.0 && s.z >= 0.0;
}

bool all_positive(const State& s)
{
    return s.x > 0.0 && s.y > 0.0 && s.v > 0.0 && s.z > 0.0;
}

DelayLine::DelayLine(std::vector<State> window) : ring_(std::move(window))
{
    if (ring_.empty()) {
        throw ValidationError("delay window must hold at least one state", "history");
    }
}

DelayLine DelayLine::constant(const State& s, int delay_steps)
{
    return DelayLine(std::vector<State>(static_cast<std::size_t>(delay_steps) + 1, s));
}

void DelayLine::push(const State& s)
{
    ring_[oldest_] = s;
    oldest_ = (oldest_ + 1) % ring_.size();
}

const State& DelayLine::at_lag(int k) const
{
    const auto size = ring_.size();
    if (k < 0 || static_cast<std::size_t>(k) >= size) {
        throw ValidationError("delay lookup outside window: lag " + std::to_string(k));
    }
    // newest element sits just before oldest_ in ring order
    const std::size_t newest = (oldest_ + size - 1) % size;
    return ring_[(newest + size - static_cast<std::size_t>(k)) % size];
}

std::vector<State> DelayLine::snapshot() const
{
    std::vector<State> out;
    out.reserve(ring_.size());
    for (int k = delay_steps(); k >= 0; --k) {
        out.push_back(at_lag(k));
    }
    return out;
}

InitialData make_initial_data(std::vector<State> history)
{
    if (history.empty()) {
        throw ValidationError("initial history must hold at least one state", "initial");
    }
    for (const State& s : history) {
        if (!all_nonnegative(s)) {
            throw ValidationError("initial history entries must be nonnegative", "initial");
        }
    }
    if (!all_positive(history.back())) {
        throw ValidationError("initial state at k = 0 must be strictly positive", "initial");
    }
    return InitialData{std::move(history)};
}

InitialData constant_history(const State& s0, int delay_steps)
{
    return make_initial_data(std::vector<State>(static_cast<std::size_t>(delay_steps) + 1, s0));
}

State nsfd_step(const Parameters& par, const DelayLine& hist)
{
    const double phi = par.h;
    const int m = par.delay_steps;
    const State& cur = hist.newest();
    const double v_lag = hist.at_lag(m).v; // V_{n-m}

    const double x_next = (par.lambda * phi + cur.x) / (1.0 + par.d * phi + par.beta * phi * cur.v);
    const double x_shift = (m >= 1) ? hist.at_lag(m - 1).x : x_next; // X_{n-m+1}
    const double y_next =
        (cur.y + par.beta * phi * x_shift * v_lag) / (1.0 + par.a * phi + par.p * phi * cur.z);
    const double v_next = (cur.v + par.a * par.n_virions * phi * y_next) / (1.0 + par.mu * phi);
    const double z_next = (cur.z + par.c * phi * cur.x * y_next * cur.z) / (1.0 + par.s * phi);

    return State{x_next, y_next, v_next, z_next};
}

std::array<double, 4> implicit_residual(const Parameters& par, const DelayLine& hist, const State& next)
{
    const double phi = par.h;
    const int m = par.delay_steps;
    const State& cur = hist.newest();
    const double v_lag = hist.at_lag(m).v;
    const double x_shift = (m >= 1) ? hist.at_lag(m - 1).x : next.x;

    std::array<double, 4> r;
    r[0] = (next.x - cur.x) / phi - (par.lambda - par.d * next.x - par.beta * next.x * cur.v);
    r[1] = (next.y - cur.y) / phi -
           (par.beta * x_shift * v_lag - par.a * next.y - par.p * next.y * cur.z);
    r[2] = (next.v - cur.v) / phi - (par.a * par.n_virions * next.y - par.mu * next.v);
    r[3] = (next.z - cur.z) / phi - (par.c * cur.x * next.y * cur.z - par.s * next.z);
    return r;
}

} // namespace hivdt
