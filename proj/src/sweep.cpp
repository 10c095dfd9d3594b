#include "hivdt/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "hivdt/simulate.hpp"

namespace hivdt {

namespace {

constexpr double kMatchTol = 1e-2;
constexpr double kMatchFloor = 1e-6;
constexpr double kThresholdMargin = 0.05;

double attractor_gap(const State& observed, const State& target)
{
    auto gap = [](double o, double t) { return std::abs(o - t) / std::max(std::abs(t), kMatchFloor); };
    return std::max({gap(observed.x, target.x), gap(observed.y, target.y), gap(observed.v, target.v),
                     gap(observed.z, target.z)});
}

SweepCell evaluate_cell(const SweepGrid& grid, const InitialData& init, double beta, double c,
                        double tau)
{
    SweepCell cell;
    cell.beta = beta;
    cell.c = c;
    cell.tau = tau;
    cell.r0 = 0.0;
    cell.r1 = 0.0;
    cell.predicted = Regime::DiseaseFreeStable;
    cell.agree = false;
    cell.near_threshold = false;
    cell.sup_error = std::numeric_limits<double>::infinity();

    Parameters par;
    try {
        const Parameters& b = grid.base;
        par = make_parameters(ParameterValues{b.lambda, b.d, beta, b.a, b.p, b.mu, b.n_virions, c,
                                              b.s, tau, grid.h});
    }
    catch (const Error& e) {
        cell.error = e.what();
        return cell;
    }

    const EquilibriumSet eqs = equilibrium_set(par);
    cell.r0 = eqs.numbers.r0;
    cell.r1 = eqs.numbers.r1;
    const RegimeClassification prediction = classify_regime(eqs.numbers, eqs);
    cell.predicted = prediction.kind;
    cell.near_threshold = std::abs(cell.r0 - 1.0) <= kThresholdMargin ||
                          std::abs(cell.r1 - 1.0) <= kThresholdMargin;

    // The history length is tied to m = tau/h; a constant history is
    // re-expanded for the cell's own delay.
    const std::size_t need = static_cast<std::size_t>(par.delay_steps) + 1;
    InitialData cell_init;
    if (init.history.size() == need) {
        cell_init = init;
    }
    else {
        const bool constant = std::all_of(init.history.begin(), init.history.end(),
                                          [&](const State& s) { return s == init.history.back(); });
        if (!constant) {
            cell.error = "initial history length does not match the cell delay";
            return cell;
        }
        cell_init = constant_history(init.history.back(), par.delay_steps);
    }

    ConvergenceVerdict verdict;
    try {
        verdict = run_to_convergence(par, cell_init, grid.sim_budget);
    }
    catch (const Error& e) {
        cell.error = e.what();
        return cell;
    }
    if (!verdict.converged) {
        cell.sup_error = verdict.sup_error;
        return cell;
    }

    double best = std::numeric_limits<double>::infinity();
    std::optional<Regime> matched;
    auto consider = [&](const std::optional<State>& eq, Regime kind) {
        if (!eq.has_value()) {
            return;
        }
        const double gap = attractor_gap(*verdict.limit, *eq);
        if (gap < best) {
            best = gap;
            matched = kind;
        }
    };
    consider(eqs.e0, Regime::DiseaseFreeStable);
    consider(eqs.e_star, Regime::NoImmuneEndemic);
    consider(eqs.e_bar, Regime::ImmuneEndemic);

    cell.sup_error = best;
    if (matched.has_value() && best <= kMatchTol) {
        cell.observed = matched;
        cell.agree = (*matched == cell.predicted);
    }
    return cell;
}

} // namespace

std::vector<SweepCell> run_sweep(const SweepGrid& grid, const InitialData& init)
{
    struct Coord {
        double beta, c, tau;
    };
    std::vector<Coord> coords;
    const std::vector<double> taus =
        grid.tau_values.empty() ? std::vector<double>{grid.base.tau} : grid.tau_values;
    coords.reserve(grid.beta_values.size() * grid.c_values.size() * taus.size());
    for (double beta : grid.beta_values) {
        for (double c : grid.c_values) {
            for (double tau : taus) {
                coords.push_back(Coord{beta, c, tau});
            }
        }
    }

    std::vector<SweepCell> cells(coords.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next.fetch_add(1); i < coords.size(); i = next.fetch_add(1)) {
            cells[i] = evaluate_cell(grid, init, coords[i].beta, coords[i].c, coords[i].tau);
        }
    };

    const std::size_t n_threads =
        std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), coords.size());
    if (n_threads <= 1) {
        worker();
    }
    else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (std::size_t t = 0; t < n_threads; ++t) {
            pool.emplace_back(worker);
        }
        for (std::thread& t : pool) {
            t.join();
        }
    }
    return cells;
}

SweepSummary sweep_summary(const std::vector<SweepCell>& cells)
{
    if (cells.empty()) {
        throw EmptySweep("no cells to summarize");
    }
    SweepSummary summary;
    summary.total = cells.size();
    summary.near_threshold = 0;
    summary.counted = 0;
    summary.agreeing = 0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const SweepCell& cell = cells[i];
        if (cell.near_threshold) {
            ++summary.near_threshold;
            continue;
        }
        ++summary.counted;
        if (!cell.observed.has_value()) {
            summary.unresolved.push_back(i);
        }
        else if (cell.agree) {
            ++summary.agreeing;
        }
        else {
            summary.disagreeing.push_back(i);
        }
    }
    summary.agreement_rate =
        summary.counted == 0 ? 1.0
                             : static_cast<double>(summary.agreeing) / static_cast<double>(summary.counted);
    return summary;
}

} // namespace hivdt
