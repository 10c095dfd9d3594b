#include <doctest.h>

#include <cmath>
#include <random>

#include "hivdt/model.hpp"
#include "test_util.hpp"

using namespace hivdt;

namespace {

// Independent oracle: solves each implicit scheme equation as a scalar linear
// equation in the unknown next coordinate, assembled from the difference
// quotient directly. Requires delay m >= 1 so that X_{n-m+1} is history.
State linear_solve_step(const Parameters& par, const DelayLine& hist)
{
    const double phi = par.h;
    const int m = par.delay_steps;
    REQUIRE(m >= 1);
    const State& cur = hist.newest();
    const double x_shift = hist.at_lag(m - 1).x;
    const double v_lag = hist.at_lag(m).v;

    const double x = (par.lambda + cur.x / phi) / (1.0 / phi + par.d + par.beta * cur.v);
    const double y =
        (par.beta * x_shift * v_lag + cur.y / phi) / (1.0 / phi + par.a + par.p * cur.z);
    const double v = (par.a * par.n_virions * y + cur.v / phi) / (1.0 / phi + par.mu);
    const double z = (par.c * cur.x * y * cur.z + cur.z / phi) / (1.0 / phi + par.s);
    return State{x, y, v, z};
}

} // namespace

TEST_CASE("make_parameters derives the delay step count")
{
    const Parameters par = testutil::disease_free();
    CHECK(par.delay_steps == 20);
    CHECK(par.h == 0.1);
    CHECK(par.tau == 2.0);
}

TEST_CASE("make_parameters accepts a zero delay")
{
    const Parameters par = make_parameters({1, 0.1, 0.00025, 0.2, 0.0001, 3, 750, 0.005, 0.2, 0.0, 0.1});
    CHECK(par.delay_steps == 0);
}

TEST_CASE("make_parameters rejects a non-integer delay ratio")
{
    CHECK_THROWS_AS(make_parameters({1, 0.1, 0.00025, 0.2, 0.0001, 3, 750, 0.005, 0.2, 2.0, 0.3}),
                    NonIntegerDelayRatio);
}

TEST_CASE("make_parameters names the offending nonpositive field")
{
    ParameterValues raw{1, 0.1, 0.00025, 0.2, 0.0001, 3, 750, 0.005, 0.2, 2.0, 0.1};
    raw.d = 0.0;
    try {
        make_parameters(raw);
        FAIL("expected NonPositiveParameter");
    }
    catch (const NonPositiveParameter& e) {
        CHECK(e.field() == "d");
    }

    raw.d = 0.1;
    raw.mu = -3.0;
    CHECK_THROWS_AS(make_parameters(raw), NonPositiveParameter);

    raw.mu = 3.0;
    raw.h = 0.0;
    CHECK_THROWS_AS(make_parameters(raw), NonPositiveParameter);
}

TEST_CASE("make_parameters admits a zero infection rate but not a negative one")
{
    ParameterValues raw{1, 0.1, 0.0, 0.2, 0.0001, 3, 750, 0.005, 0.2, 2.0, 0.1};
    CHECK(make_parameters(raw).beta == 0.0);
    raw.beta = -1e-4;
    CHECK_THROWS_AS(make_parameters(raw), NonPositiveParameter);
}

TEST_CASE("delay line keeps a fixed-length window with lag lookup")
{
    DelayLine line{{State{1, 0, 0, 0}, State{2, 0, 0, 0}, State{3, 0, 0, 0}}};
    CHECK(line.delay_steps() == 2);
    CHECK(line.at_lag(0).x == 3);
    CHECK(line.at_lag(1).x == 2);
    CHECK(line.at_lag(2).x == 1);
    CHECK_THROWS_AS(line.at_lag(3), ValidationError);
    CHECK_THROWS_AS(line.at_lag(-1), ValidationError);

    line.push(State{4, 0, 0, 0});
    CHECK(line.at_lag(0).x == 4);
    CHECK(line.at_lag(2).x == 2);
    CHECK(line.snapshot().front().x == 2);
    CHECK(line.snapshot().back().x == 4);
}

TEST_CASE("initial data admits nonnegative history with a positive newest entry")
{
    CHECK_NOTHROW(make_initial_data({State{0, 0, 0, 0}, State{1, 1, 1, 1}}));
    CHECK_THROWS_AS(make_initial_data({State{1, 1, 1, 1}, State{1, 0, 1, 1}}), ValidationError);
    CHECK_THROWS_AS(make_initial_data({State{-1, 1, 1, 1}, State{1, 1, 1, 1}}), ValidationError);
    CHECK_THROWS_AS(make_initial_data({}), ValidationError);
}

TEST_CASE("the disease-free state is a fixed point of the step map")
{
    const Parameters par = testutil::disease_free();
    const State e0{par.lambda / par.d, 0.0, 0.0, 0.0};
    const State next = nsfd_step(par, DelayLine::constant(e0, par.delay_steps));
    CHECK(next.x == doctest::Approx(e0.x).epsilon(1e-14));
    CHECK(next.y == 0.0);
    CHECK(next.v == 0.0);
    CHECK(next.z == 0.0);
}

TEST_CASE("the no-immune endemic state is a fixed point of the step map")
{
    const Parameters par = testutil::no_immune();
    const State e_star{8.0, 1.0, 50.0, 0.0};
    const State next = nsfd_step(par, DelayLine::constant(e_star, par.delay_steps));
    CHECK(testutil::sup_abs_gap(next, e_star) <= 1e-12);
}

TEST_CASE("one step from the low initial set matches the linear-solve oracle")
{
    const Parameters par = testutil::disease_free();
    const DelayLine hist = DelayLine::constant(testutil::init_low(), par.delay_steps);

    const State expected = linear_solve_step(par, hist);
    const State actual = nsfd_step(par, hist);
    CHECK(testutil::rel_err(actual.x, expected.x) <= 1e-12);
    CHECK(testutil::rel_err(actual.y, expected.y) <= 1e-12);
    CHECK(testutil::rel_err(actual.v, expected.v) <= 1e-12);
    CHECK(testutil::rel_err(actual.z, expected.z) <= 1e-12);

    // 5.1 / 1.010025
    CHECK(actual.x == doctest::Approx(5.049381).epsilon(1e-6));
}

TEST_CASE("the virus update uses the freshly computed infected count")
{
    const Parameters par = testutil::disease_free();
    const DelayLine hist = DelayLine::constant(testutil::init_low(), par.delay_steps);
    const State next = nsfd_step(par, hist);

    const double phi = par.h;
    const State& cur = hist.newest();
    const double v_with_new_y =
        (cur.v + par.a * par.n_virions * phi * next.y) / (1.0 + par.mu * phi);
    const double v_with_old_y =
        (cur.v + par.a * par.n_virions * phi * cur.y) / (1.0 + par.mu * phi);
    CHECK(next.v == v_with_new_y);
    CHECK(next.v != v_with_old_y);
}

TEST_CASE("zero delay feeds the new X into the infection term")
{
    const Parameters par = make_parameters({1, 0.1, 0.0005, 0.2, 0.0001, 3, 750, 0.01, 0.2, 0.0, 0.1});
    const State cur{5.0, 1.0, 1.0, 2.0};
    const State next = nsfd_step(par, DelayLine::constant(cur, 0));

    const double phi = par.h;
    const double x_next = (par.lambda * phi + cur.x) / (1.0 + par.d * phi + par.beta * phi * cur.v);
    const double y_expected =
        (cur.y + par.beta * phi * x_next * cur.v) / (1.0 + par.a * phi + par.p * phi * cur.z);
    CHECK(next.x == x_next);
    CHECK(next.y == y_expected);
}

TEST_CASE("residuals of the explicit step vanish at rounding level")
{
    const Parameters par = testutil::no_immune();
    const DelayLine hist = DelayLine::constant(testutil::init_low(), par.delay_steps);
    const State next = nsfd_step(par, hist);
    const auto res = implicit_residual(par, hist, next);
    for (double r : res) {
        CHECK(std::abs(r) <= 1e-12 * (1.0 + 100.0)); // states here are O(100) at most
    }
}

TEST_CASE("residuals at the disease-free fixed point are exactly zero")
{
    const Parameters par = testutil::disease_free();
    const State e0{par.lambda / par.d, 0.0, 0.0, 0.0};
    const DelayLine hist = DelayLine::constant(e0, par.delay_steps);
    const auto res = implicit_residual(par, hist, e0);
    CHECK(res[0] == 0.0);
    CHECK(res[1] == 0.0);
    CHECK(res[2] == 0.0);
    CHECK(res[3] == 0.0);
}

TEST_CASE("perturbing the X output leaves a first residual of known size")
{
    const Parameters par = testutil::disease_free();
    const DelayLine hist = DelayLine::constant(testutil::init_low(), par.delay_steps);
    State next = nsfd_step(par, hist);
    next.x += 1.0;

    const double phi = par.h;
    // direct evaluation: the X equation is linear in X' with slope
    // 1/phi + d + beta*V_n, so a unit perturbation shifts the residual by
    // exactly that amount.
    const double expected = (1.0 + par.d * phi + par.beta * phi * hist.newest().v) / phi;
    const auto res = implicit_residual(par, hist, next);
    CHECK(res[0] == doctest::Approx(expected).epsilon(1e-12));
    CHECK(std::abs(res[0]) > 1.0);
}

TEST_CASE("property: strictly positive history yields strictly positive steps")
{
    std::mt19937_64 rng{20240ULL};
    for (int trial = 0; trial < 200; ++trial) {
        const Parameters par = testutil::draw_parameters(rng);
        DelayLine hist{testutil::draw_history(rng, par.delay_steps).history};
        for (int n = 0; n < 50; ++n) {
            const State next = nsfd_step(par, hist);
            REQUIRE(all_positive(next));
            hist.push(next);
        }
    }
}

TEST_CASE("property: the explicit step solves the implicit system exactly")
{
    std::mt19937_64 rng{7ULL};
    for (int trial = 0; trial < 1000; ++trial) {
        const Parameters par = testutil::draw_parameters(rng, 0.1, 10.0);
        const DelayLine hist{testutil::draw_history(rng, par.delay_steps).history};
        const State next = nsfd_step(par, hist);
        const auto res = implicit_residual(par, hist, next);

        const double phi = par.h;
        const State& cur = hist.newest();
        const double scales[4] = {
            std::abs(next.x - cur.x) / phi + par.lambda + par.d * next.x + par.beta * next.x * cur.v,
            std::abs(next.y - cur.y) / phi + par.beta * hist.at_lag(par.delay_steps - 1).x *
                                                 hist.at_lag(par.delay_steps).v +
                par.a * next.y + par.p * next.y * cur.z,
            std::abs(next.v - cur.v) / phi + par.a * par.n_virions * next.y + par.mu * next.v,
            std::abs(next.z - cur.z) / phi + par.c * cur.x * next.y * cur.z + par.s * next.z,
        };
        for (int i = 0; i < 4; ++i) {
            REQUIRE(std::abs(res[i]) <= 1e-12 * (1.0 + scales[i]));
        }
    }
}
