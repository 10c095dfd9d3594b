#include <doctest.h>

#include "hivdt/sweep.hpp"
#include "test_util.hpp"

using namespace hivdt;

namespace {

SweepGrid base_grid()
{
    return SweepGrid{testutil::no_immune(), {}, {}, {}, 0.1, 1000000};
}

} // namespace

TEST_CASE("the three reference cells agree with their predictions")
{
    SweepGrid grid = base_grid();
    grid.beta_values = {0.00025, 0.0005, 0.0007};
    grid.c_values = {0.005, 0.01, 0.1};
    const InitialData init = constant_history(testutil::init_low(), grid.base.delay_steps);
    const std::vector<SweepCell> cells = run_sweep(grid, init);
    REQUIRE(cells.size() == 9);

    auto cell_at = [&](double beta, double c) {
        for (const SweepCell& cell : cells) {
            if (cell.beta == beta && cell.c == c) {
                return cell;
            }
        }
        FAIL("cell not found");
        return cells.front();
    };
    CHECK(cell_at(0.00025, 0.005).observed == Regime::DiseaseFreeStable);
    CHECK(cell_at(0.0005, 0.01).observed == Regime::NoImmuneEndemic);
    CHECK(cell_at(0.0007, 0.1).observed == Regime::ImmuneEndemic);
    for (const SweepCell& cell : cells) {
        REQUIRE(cell.error.empty());
        REQUIRE(cell.observed.has_value());
        REQUIRE(cell.agree);
    }

    const SweepSummary summary = sweep_summary(cells);
    CHECK(summary.agreement_rate == 1.0);
    CHECK(summary.disagreeing.empty());
    CHECK(summary.unresolved.empty());
}

TEST_CASE("a zero infection rate resolves to the disease-free regime")
{
    SweepGrid grid = base_grid();
    grid.beta_values = {0.0};
    grid.c_values = {0.01};
    const InitialData init = constant_history(testutil::init_low(), grid.base.delay_steps);
    const std::vector<SweepCell> cells = run_sweep(grid, init);
    REQUIRE(cells.size() == 1);
    CHECK(cells[0].predicted == Regime::DiseaseFreeStable);
    CHECK(cells[0].observed == Regime::DiseaseFreeStable);
    CHECK(cells[0].agree);
    CHECK(cells[0].r0 == 0.0);
}

TEST_CASE("cells near the threshold are flagged")
{
    SweepGrid grid = base_grid();
    grid.beta_values = {0.0004}; // r0 = 1 with the shared rates
    grid.c_values = {0.01};
    grid.sim_budget = 1000;
    const InitialData init = constant_history(testutil::init_low(), grid.base.delay_steps);
    const std::vector<SweepCell> cells = run_sweep(grid, init);
    REQUIRE(cells.size() == 1);
    CHECK(cells[0].near_threshold);

    const SweepSummary summary = sweep_summary(cells);
    CHECK(summary.near_threshold == 1);
    CHECK(summary.counted == 0);
    CHECK(summary.agreement_rate == 1.0);
}

TEST_CASE("regime flips only across threshold crossings on a beta slice")
{
    SweepGrid grid = base_grid();
    grid.beta_values = {0.0001, 0.0002, 0.0006, 0.0008, 0.001};
    grid.c_values = {0.05};
    const InitialData init = constant_history(testutil::init_low(), grid.base.delay_steps);
    const std::vector<SweepCell> cells = run_sweep(grid, init);
    for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
        if (cells[i].near_threshold || cells[i + 1].near_threshold) {
            continue;
        }
        REQUIRE(cells[i].observed.has_value());
        REQUIRE(cells[i + 1].observed.has_value());
        if (*cells[i].observed != *cells[i + 1].observed) {
            const bool r0_crossed = (cells[i].r0 - 1.0) * (cells[i + 1].r0 - 1.0) < 0.0;
            const bool r1_crossed = (cells[i].r1 - 1.0) * (cells[i + 1].r1 - 1.0) < 0.0;
            REQUIRE((r0_crossed || r1_crossed));
        }
    }
}

TEST_CASE("per-cell validation failures do not abort the sweep")
{
    SweepGrid grid = base_grid();
    grid.beta_values = {-1.0, 0.0005};
    grid.c_values = {0.01};
    const InitialData init = constant_history(testutil::init_low(), grid.base.delay_steps);
    const std::vector<SweepCell> cells = run_sweep(grid, init);
    REQUIRE(cells.size() == 2);
    CHECK(!cells[0].error.empty());
    CHECK(!cells[0].observed.has_value());
    CHECK(!cells[0].agree);
    CHECK(cells[1].error.empty());
    CHECK(cells[1].agree);
}

TEST_CASE("a non-constant history cannot be re-expanded across delays")
{
    SweepGrid grid = base_grid();
    grid.beta_values = {0.0005};
    grid.c_values = {0.01};
    grid.tau_values = {1.0};
    std::vector<State> ramp(static_cast<std::size_t>(grid.base.delay_steps) + 1,
                            testutil::init_low());
    ramp.front().x = 4.0;
    const std::vector<SweepCell> cells = run_sweep(grid, make_initial_data(std::move(ramp)));
    REQUIRE(cells.size() == 1);
    CHECK(!cells[0].error.empty());
}

TEST_CASE("constant histories re-expand to the cell's own delay")
{
    SweepGrid grid = base_grid();
    grid.beta_values = {0.0005};
    grid.c_values = {0.01};
    grid.tau_values = {0.0, 1.0, 2.0};
    const InitialData init = constant_history(testutil::init_low(), grid.base.delay_steps);
    const std::vector<SweepCell> cells = run_sweep(grid, init);
    REQUIRE(cells.size() == 3);
    for (const SweepCell& cell : cells) {
        REQUIRE(cell.error.empty());
        CHECK(cell.observed == Regime::NoImmuneEndemic);
        CHECK(cell.agree);
    }
}

TEST_CASE("summaries of an empty list are rejected")
{
    CHECK_THROWS_AS(sweep_summary({}), EmptySweep);
}

TEST_CASE("an unresolved cell lowers the agreement rate and is listed")
{
    SweepCell good;
    good.predicted = Regime::DiseaseFreeStable;
    good.observed = Regime::DiseaseFreeStable;
    good.agree = true;
    good.near_threshold = false;
    SweepCell unresolved = good;
    unresolved.observed.reset();
    unresolved.agree = false;

    const SweepSummary summary = sweep_summary({good, unresolved});
    CHECK(summary.counted == 2);
    CHECK(summary.agreement_rate == 0.5);
    REQUIRE(summary.unresolved.size() == 1);
    CHECK(summary.unresolved[0] == 1);
}

TEST_CASE("sweeps are deterministic across runs")
{
    SweepGrid grid = base_grid();
    grid.beta_values = {0.00025, 0.0005, 0.0007};
    grid.c_values = {0.005, 0.1};
    const InitialData init = constant_history(testutil::init_low(), grid.base.delay_steps);
    const std::vector<SweepCell> first = run_sweep(grid, init);
    const std::vector<SweepCell> second = run_sweep(grid, init);
    REQUIRE(first.size() == second.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
        CHECK(first[i].beta == second[i].beta);
        CHECK(first[i].c == second[i].c);
        CHECK(first[i].tau == second[i].tau);
        CHECK(first[i].r0 == second[i].r0);
        CHECK(first[i].r1 == second[i].r1);
        CHECK(first[i].predicted == second[i].predicted);
        CHECK(first[i].observed == second[i].observed);
        CHECK(first[i].agree == second[i].agree);
        CHECK(first[i].sup_error == second[i].sup_error);
    }
}
