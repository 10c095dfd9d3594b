#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hivdt/config.hpp"
#include "hivdt/csv.hpp"
#include "hivdt/equilibria.hpp"
#include "hivdt/lyapunov.hpp"
#include "hivdt/simulate.hpp"
#include "hivdt/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;      // parse/validation/io failures
constexpr int kExitCheckFailed = 2; // tool ran, a scientific check failed

// Relative outputs land in HIVDT_OUT_DIR when set, the current directory
// otherwise.
std::string resolve_output(const std::string& configured, const std::string& fallback)
{
    std::filesystem::path path = configured.empty() ? fallback : configured;
    if (const char* dir = std::getenv("HIVDT_OUT_DIR"); dir != nullptr && *dir != '\0' && path.is_relative()) {
        path = std::filesystem::path(dir) / path;
    }
    return path.string();
}

std::size_t write_csv_file(const std::string& path, const auto& emit)
{
    std::ofstream out{path, std::ios::binary};
    if (!out) {
        throw hivdt::SinkError("cannot open output file: " + path);
    }
    return emit(out);
}

// report-level precision; the CSV keeps the full 17 significant digits
std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string format_state(const hivdt::State& s)
{
    return "(" + fmt(s.x) + ", " + fmt(s.y) + ", " + fmt(s.v) + ", " + fmt(s.z) + ")";
}

int cmd_simulate(const std::string& config_path)
{
    const hivdt::RunConfig cfg = hivdt::load_config(config_path);
    hivdt::TrajectoryRecord traj =
        hivdt::run(cfg.params, hivdt::initial_data(cfg), cfg.steps, cfg.monitor_omega);
    if (cfg.lyapunov_target.has_value()) {
        traj.lyapunov = hivdt::lyapunov_series(traj, *cfg.lyapunov_target);
    }
    const std::string path = resolve_output(cfg.output, "trajectory.csv");
    const std::size_t bytes =
        write_csv_file(path, [&](std::ostream& out) { return hivdt::emit_csv(traj, out); });
    std::cout << "wrote " << bytes << " bytes to " << path << "\n";
    return kExitOk;
}

int cmd_equilibria(const std::string& config_path)
{
    const hivdt::RunConfig cfg = hivdt::load_config(config_path);
    const hivdt::EquilibriumSet eqs = hivdt::equilibrium_set(cfg.params);
    const hivdt::RegimeClassification regime = hivdt::classify_regime(eqs.numbers, eqs);

    std::cout << "R0 = " << fmt(eqs.numbers.r0) << "\n";
    std::cout << "R1 = " << fmt(eqs.numbers.r1) << "\n";
    std::cout << "E0 = " << format_state(eqs.e0) << "\n";
    std::cout << "E* = " << (eqs.e_star ? format_state(*eqs.e_star) : "absent") << "\n";
    std::cout << "Ebar = " << (eqs.e_bar ? format_state(*eqs.e_bar) : "absent") << "\n";
    std::cout << "regime = " << hivdt::to_string(regime.kind) << "\n";
    std::cout << "attractor = " << format_state(regime.predicted_attractor) << "\n";
    return kExitOk;
}

int cmd_lyapunov(const std::string& config_path, const std::string& target_flag)
{
    const hivdt::RunConfig cfg = hivdt::load_config(config_path);
    std::optional<hivdt::LyapunovTarget> target = cfg.lyapunov_target;
    if (!target_flag.empty()) {
        target = hivdt::lyapunov_target_from_string(target_flag);
        if (!target.has_value()) {
            throw hivdt::ValidationError("unknown lyapunov target: " + target_flag, "target");
        }
    }
    if (!target.has_value()) {
        throw hivdt::ValidationError("no lyapunov target given (config key or --target)", "target");
    }

    // monitors are always computed here: the decrease certificate is only
    // guaranteed once the trajectory stays inside the bounded region, so the
    // verdict needs the region residency even when omega is not emitted
    hivdt::TrajectoryRecord traj = hivdt::run(cfg.params, hivdt::initial_data(cfg), cfg.steps, true);
    traj.lyapunov = hivdt::lyapunov_series(traj, *target);
    const long resident = hivdt::gamma_resident_from(traj);
    if (!cfg.monitor_omega) {
        traj.monitors.reset();
    }

    const std::string path = resolve_output(cfg.output, "lyapunov.csv");
    const std::size_t bytes =
        write_csv_file(path, [&](std::ostream& out) { return hivdt::emit_csv(traj, out); });
    std::cout << "wrote " << bytes << " bytes to " << path << "\n";

    const int m = cfg.params.delay_steps;
    const hivdt::MonotonicityVerdict full = hivdt::check_monotone(*traj.lyapunov, m);
    const hivdt::MonotonicityVerdict certified = hivdt::check_monotone_from(
        *traj.lyapunov, static_cast<std::size_t>(std::max<long>(m, resident + m)));
    std::cout << "target = " << hivdt::to_string(*target) << "\n";
    std::cout << "initial value = " << fmt(traj.lyapunov->values.front()) << "\n";
    std::cout << "final value = " << fmt(traj.lyapunov->values.back()) << "\n";
    std::cout << "monotonicity: " << (certified.ok ? "PASS" : "FAIL") << "\n";
    if (certified.ok && !full.ok) {
        std::cout << "note: rises transiently at step " << full.first_violation
                  << " while outside the bounded region; decrease is certified from step "
                  << std::max<long>(m, resident + m) << " on\n";
    }
    if (!certified.ok) {
        std::cerr << "first increase at step " << certified.first_violation << " (excess "
                  << fmt(certified.worst_excess) << ")\n";
        return kExitCheckFailed;
    }
    return kExitOk;
}

int cmd_sweep(const std::string& config_path)
{
    const hivdt::RunConfig cfg = hivdt::load_config(config_path);
    const hivdt::SweepGrid grid = hivdt::sweep_grid(cfg);
    const std::vector<hivdt::SweepCell> cells = hivdt::run_sweep(grid, hivdt::initial_data(cfg));

    const std::string path = resolve_output(cfg.output, "sweep.csv");
    const std::size_t bytes =
        write_csv_file(path, [&](std::ostream& out) { return hivdt::emit_sweep_csv(cells, out); });
    std::cout << "wrote " << bytes << " bytes to " << path << "\n";

    const hivdt::SweepSummary summary = hivdt::sweep_summary(cells);
    std::cout << "cells = " << summary.total << " (near-threshold " << summary.near_threshold
              << ", counted " << summary.counted << ")\n";
    std::cout << "agreement rate = " << fmt(summary.agreement_rate) << "\n";
    for (std::size_t i : summary.disagreeing) {
        std::cerr << "disagreement at cell " << i << ": beta=" << fmt(cells[i].beta)
                  << " c=" << fmt(cells[i].c) << "\n";
    }
    for (std::size_t i : summary.unresolved) {
        std::cerr << "unresolved cell " << i << ": beta=" << fmt(cells[i].beta)
                  << " c=" << fmt(cells[i].c) << "\n";
    }
    if (!summary.disagreeing.empty() || !summary.unresolved.empty()) {
        return kExitCheckFailed;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Discrete-time simulator for a delayed within-host HIV model with CTL response"};
    app.require_subcommand(1);

    std::string config_path;
    std::string target_flag;

    CLI::App* simulate = app.add_subcommand("simulate", "run a trajectory and write it as CSV");
    simulate->add_option("config", config_path, "configuration file")->required();

    CLI::App* equilibria = app.add_subcommand("equilibria", "print thresholds, equilibria and regime");
    equilibria->add_option("config", config_path, "configuration file")->required();

    CLI::App* lyapunov =
        app.add_subcommand("lyapunov", "run a trajectory and verify the energy decrease certificate");
    lyapunov->add_option("config", config_path, "configuration file")->required();
    lyapunov->add_option("--target", target_flag, "e0, estar or ebar (overrides the config)");

    CLI::App* sweep = app.add_subcommand("sweep", "scan a (beta, c) grid and cross-check regimes");
    sweep->add_option("config", config_path, "configuration file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) {
            return cmd_simulate(config_path);
        }
        if (equilibria->parsed()) {
            return cmd_equilibria(config_path);
        }
        if (lyapunov->parsed()) {
            return cmd_lyapunov(config_path, target_flag);
        }
        if (sweep->parsed()) {
            return cmd_sweep(config_path);
        }
    }
    catch (const hivdt::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
