#ifndef HIVDT_CONFIG_HPP
#define HIVDT_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

#include "hivdt/lyapunov.hpp"
#include "hivdt/model.hpp"
#include "hivdt/sweep.hpp"

namespace hivdt {

/// A fully validated run description parsed from a flat key=value document.
///
/// Recognized keys: the eleven parameter fields (lambda, d, beta, a, p, mu,
/// N, c, s, tau, h), initial (preset "set-I"/"set-II" or 4 comma values for a
/// constant history), history (4*(m+1) values, oldest first, overrides
/// initial's expansion), exactly one of steps / t_end, monitors (comma list;
/// "omega"), lyapunov (e0 | estar | ebar), output, and the sweep keys
/// beta_values, c_values, tau_values, sim_budget. '#' starts a comment.
struct RunConfig {
    Parameters params;
    std::string initial_preset;  // empty when the history was given explicitly
    std::vector<State> history;  // expanded, m+1 entries, oldest first
    long steps;
    bool monitor_omega = false;
    std::optional<LyapunovTarget> lyapunov_target;
    std::string output;
    std::vector<double> beta_values;
    std::vector<double> c_values;
    std::vector<double> tau_values;
    long sim_budget = 1000000;

    bool operator==(const RunConfig&) const = default;
};

/// Parses and validates a configuration document. Unknown keys are rejected.
RunConfig parse_config(const std::string& text);

/// parse_config over the contents of a file; ValidationError when unreadable.
RunConfig load_config(const std::string& path);

/// Flat key=value rendering that parses back to an equal RunConfig.
std::string serialize_config(const RunConfig& cfg);

InitialData initial_data(const RunConfig& cfg);

/// Builds the grid for the sweep subcommand; requires beta_values and
/// c_values to be present.
SweepGrid sweep_grid(const RunConfig& cfg);

std::string to_string(LyapunovTarget target);
std::optional<LyapunovTarget> lyapunov_target_from_string(const std::string& name);

} // namespace hivdt

#endif
