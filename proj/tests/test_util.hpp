#ifndef HIVDT_TEST_UTIL_HPP
#define HIVDT_TEST_UTIL_HPP

#include <algorithm>
#include <cmath>
#include <random>

#include "hivdt/model.hpp"

namespace testutil {

// Shared fixed rates of the three reference regimes; beta and c select the
// attractor.
inline hivdt::Parameters regime(double beta, double c, double tau = 2.0, double h = 0.1)
{
    return hivdt::make_parameters({1.0, 0.1, beta, 0.2, 0.0001, 3.0, 750.0, c, 0.2, tau, h});
}

inline hivdt::Parameters disease_free(double h = 0.1) { return regime(0.00025, 0.005, 2.0, h); }
inline hivdt::Parameters no_immune(double h = 0.1) { return regime(0.0005, 0.01, 2.0, h); }
inline hivdt::Parameters immune(double h = 0.1) { return regime(0.0007, 0.1, 2.0, h); }

inline hivdt::State init_low() { return hivdt::State{5.0, 1.0, 1.0, 2.0}; }   // preset set-I
inline hivdt::State init_high() { return hivdt::State{15.0, 2.0, 1.0, 4.0}; } // preset set-II

inline double rel_err(double value, double reference, double floor = 1e-300)
{
    return std::abs(value - reference) / std::max(std::abs(reference), floor);
}

inline double sup_abs_gap(const hivdt::State& a, const hivdt::State& b)
{
    return std::max({std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.v - b.v),
                     std::abs(a.z - b.z)});
}

inline double sup_rel_gap(const hivdt::State& a, const hivdt::State& b, double floor = 1e-6)
{
    auto gap = [&](double v, double r) { return std::abs(v - r) / std::max(std::abs(r), floor); };
    return std::max({gap(a.x, b.x), gap(a.y, b.y), gap(a.v, b.v), gap(a.z, b.z)});
}

// Random parameters drawn from the literature ranges, tau snapped to an
// integer multiple of h.
inline hivdt::Parameters draw_parameters(std::mt19937_64& rng, double h = 0.1, double tau_max = 21.0)
{
    auto uni = [&](double lo, double hi) {
        return std::uniform_real_distribution<double>{lo, hi}(rng);
    };
    const int m = static_cast<int>(std::round(uni(7.0, tau_max) / h));
    return hivdt::make_parameters({uni(1.0, 10.0), uni(0.007, 0.1), uni(0.00025, 0.5),
                                   uni(0.2, 0.3), uni(1e-4, 4.048e-4), uni(2.06, 3.81),
                                   uni(6.25, 23599.9), uni(0.0051, 3.912), uni(0.004, 8.087),
                                   m * h, h});
}

inline hivdt::State draw_positive_state(std::mt19937_64& rng, double lo = 1e-2, double hi = 1e2)
{
    std::uniform_real_distribution<double> log_range{std::log(lo), std::log(hi)};
    auto draw = [&]() { return std::exp(log_range(rng)); };
    return hivdt::State{draw(), draw(), draw(), draw()};
}

inline hivdt::InitialData draw_history(std::mt19937_64& rng, int delay_steps)
{
    std::vector<hivdt::State> window;
    window.reserve(static_cast<std::size_t>(delay_steps) + 1);
    for (int k = 0; k <= delay_steps; ++k) {
        window.push_back(draw_positive_state(rng));
    }
    return hivdt::make_initial_data(std::move(window));
}

} // namespace testutil

#endif
