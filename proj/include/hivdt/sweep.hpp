#ifndef HIVDT_SWEEP_HPP
#define HIVDT_SWEEP_HPP

#include <optional>
#include <string>
#include <vector>

#include "hivdt/equilibria.hpp"
#include "hivdt/model.hpp"

namespace hivdt {

/// Grid over (beta, c) and optionally tau; every other rate comes from base.
struct SweepGrid {
    Parameters base;
    std::vector<double> beta_values;
    std::vector<double> c_values;
    std::vector<double> tau_values; // empty: keep base.tau
    double h;
    long sim_budget; // max steps per cell
};

struct SweepCell {
    double beta;
    double c;
    double tau;
    double r0;
    double r1;
    Regime predicted;
    std::optional<Regime> observed; // empty: unresolved
    bool agree;
    bool near_threshold; // r0 or r1 within 0.05 of the threshold value 1
    double sup_error;    // distance of the detected limit to the matched equilibrium
    std::string error;   // per-cell validation failure, empty when the cell ran
};

/// Simulates every cell to convergence, classifies the empirical attractor by
/// nearest equilibrium within 1e-2 relative (absolute floor 1e-6 per
/// coordinate), and compares against the threshold prediction. Cells run in
/// parallel; results are ordered by grid index (beta outer, c middle, tau
/// inner). Per-cell parameter errors are recorded, not thrown.
std::vector<SweepCell> run_sweep(const SweepGrid& grid, const InitialData& init);

struct SweepSummary {
    std::size_t total;
    std::size_t near_threshold; // excluded from the agreement statistic
    std::size_t counted;
    std::size_t agreeing;
    double agreement_rate;                  // agreeing / counted
    std::vector<std::size_t> disagreeing;   // counted cells whose kinds differ
    std::vector<std::size_t> unresolved;    // counted cells without a verdict
};

/// Aggregates a cell list; throws EmptySweep for an empty one.
SweepSummary sweep_summary(const std::vector<SweepCell>& cells);

} // namespace hivdt

#endif
