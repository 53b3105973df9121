#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "test_support.hpp"

#include "hitfit/errors.hpp"
#include "hitfit/model.hpp"
#include "hitfit/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace hitfit;
using test_support::make_grid;
using test_support::single_channel;
using test_support::zero_exposures;

namespace {

ExposureSet random_exposures(const TimeGrid& grid, SplitMix64& rng, double scale = 10.0) {
    std::vector<double> values(grid.size());
    for (double& v : values) {
        v = rng.next_uniform(0.0, scale);
    }
    return single_channel(grid, std::move(values));
}

} // namespace

TEST_CASE("rhs evaluates the drive, direct and rumor terms") {
    const auto grid = make_grid(3);
    const auto exposures = single_channel(grid, {3.0, 3.0, 3.0, 3.0});

    CHECK(rhs({{2.0}, 0.5, 0.1, 0.0}, exposures, 0, 4.0) == doctest::Approx(9.6).epsilon(1e-14));
    CHECK(rhs({{0.0}, 0.0, 0.0, 0.0}, exposures, 1, 123.0) == 0.0);

    const ExposureSet two{grid,
                          {{"a", test_support::constant_series(grid, 1.0)},
                           {"b", test_support::constant_series(grid, 1.0)}}};
    CHECK(rhs({{1.0, 1.0}, 0.0, 0.0, 0.0}, two, 0, 0.0) == doctest::Approx(2.0));
}

TEST_CASE("rhs rejects bad indices and channel mismatches") {
    const auto grid = make_grid(3);
    const auto exposures = zero_exposures(grid);
    CHECK_THROWS_AS((void)rhs({{1.0, 2.0}, 0.0, 0.0, 0.0}, exposures, 0, 0.0), DimensionMismatch);
    CHECK_THROWS_AS((void)rhs({{1.0}, 0.0, 0.0, 0.0}, exposures, 4, 0.0), InvalidArgument);
    CHECK_THROWS_AS((void)rhs({{1.0}, 0.0, 0.0, -1.0}, exposures, 0, 0.0), InvalidArgument);
}

TEST_CASE("zero dynamics hold the initial value exactly") {
    SplitMix64 rng(7);
    const auto grid = make_grid(10);
    const auto exposures = random_exposures(grid, rng);
    for (Integrator integrator : {Integrator::euler_forward, Integrator::rk4}) {
        const TimeSeries series = simulate({{0.0}, 0.0, 0.0, 5.0}, exposures, {integrator});
        for (double v : series.values()) {
            CHECK(v == 5.0);
        }
    }
}

TEST_CASE("Euler reproduces the geometric recursion for pure direct growth") {
    const auto grid = make_grid(10);
    const TimeSeries series = simulate({{0.0}, 0.1, 0.0, 1.0}, zero_exposures(grid));
    CHECK(series[10] == doctest::Approx(std::pow(1.1, 10)).epsilon(1e-13));
}

TEST_CASE("a single exposure impulse feeds interest one step later under Euler") {
    const auto grid = make_grid(5);
    const auto exposures = single_channel(grid, {10.0, 0.0, 0.0, 0.0, 0.0, 0.0});
    const TimeSeries series = simulate({{1.0}, 0.0, 0.0, 0.0}, exposures);
    const std::vector<double> expected{0.0, 10.0, 10.0, 10.0, 10.0, 10.0};
    CHECK(series.values() == expected);
}

TEST_CASE("quadratic self-excitation trips the blowup cap") {
    const auto grid = make_grid(10);
    try {
        (void)simulate({{0.0}, 0.0, 1.0, 10.0}, zero_exposures(grid), {Integrator::euler_forward, 1e12, true});
        FAIL("expected BlowupDetected");
    } catch (const BlowupDetected& e) {
        CHECK(std::string(e.code()) == "BlowupDetected");
        // 10 -> 110 -> 12210 -> 1.49e8 -> 2.2e16 exceeds the cap on step 4
        CHECK(std::string(e.what()).find("step 4") != std::string::npos);
    }
}

TEST_CASE("an initial value beyond the cap is already divergence") {
    const auto grid = make_grid(2);
    CHECK_THROWS_AS((void)simulate({{0.0}, 0.0, 0.0, 1e13}, zero_exposures(grid)), BlowupDetected);
}

TEST_CASE("clamping pins negative overshoot at zero, and can be disabled") {
    const auto grid = make_grid(3);
    const TimeSeries clamped = simulate({{0.0}, -5.0, 0.0, 1.0}, zero_exposures(grid));
    CHECK(clamped.values() == std::vector<double>{1.0, 0.0, 0.0, 0.0});

    const TimeSeries raw = simulate({{0.0}, -5.0, 0.0, 1.0}, zero_exposures(grid),
                                    {Integrator::euler_forward, 1e12, false});
    CHECK(raw[1] == doctest::Approx(-4.0));
}

TEST_CASE("interest responds linearly to exposures when D and P vanish") {
    SplitMix64 rng(11);
    const auto grid = make_grid(20);
    for (Integrator integrator : {Integrator::euler_forward, Integrator::rk4}) {
        std::vector<double> base(grid.size());
        for (double& v : base) {
            v = rng.next_uniform(0.0, 4.0);
        }
        std::vector<double> doubled(base.size());
        for (std::size_t i = 0; i < base.size(); ++i) {
            doubled[i] = 2.0 * base[i];
        }
        const TimeSeries one = simulate({{0.7}, 0.0, 0.0, 0.0}, single_channel(grid, base), {integrator});
        const TimeSeries two = simulate({{0.7}, 0.0, 0.0, 0.0}, single_channel(grid, doubled), {integrator});
        for (std::size_t k = 0; k < one.size(); ++k) {
            CHECK(two[k] == 2.0 * one[k]); // doubling is exact in binary floating point
        }
    }
}

TEST_CASE("the scaling covariance (k*c, D, P/k, k*I0) -> k*I holds pointwise") {
    SplitMix64 rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        const auto grid = make_grid(15);
        auto exposures = random_exposures(grid, rng);
        const double k = rng.next_uniform(0.2, 5.0);
        const HitParams base{{rng.next_uniform(0.0, 0.5)}, rng.next_uniform(-0.2, 0.2),
                             rng.next_uniform(0.0, 0.002), rng.next_uniform(0.0, 20.0)};
        const HitParams scaled{{k * base.media_gain[0]}, base.direct_rate, base.rumor_rate / k,
                               k * base.initial_interest};
        const SimOptions options{trial % 2 == 0 ? Integrator::euler_forward : Integrator::rk4, 1e12, true};
        const TimeSeries a = simulate(base, exposures, options);
        const TimeSeries b = simulate(scaled, exposures, options);
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(b[i] == doctest::Approx(k * a[i]).epsilon(1e-11));
        }
    }
}

TEST_CASE("raising the rumor coefficient never lowers a nonnegative trajectory") {
    SplitMix64 rng(5);
    const auto grid = make_grid(25);
    const auto exposures = random_exposures(grid, rng, 5.0);
    for (Integrator integrator : {Integrator::euler_forward, Integrator::rk4}) {
        std::vector<double> previous;
        for (double rumor : {0.0, 0.0005, 0.001, 0.002}) {
            const TimeSeries series = simulate({{0.3}, 0.05, rumor, 2.0}, exposures, {integrator});
            if (!previous.empty()) {
                for (std::size_t k = 0; k < series.size(); ++k) {
                    CHECK(series[k] >= previous[k]);
                }
            }
            previous = series.values();
        }
    }
}

TEST_CASE("simulate_segment restarts the dynamics inside the grid") {
    const auto grid = make_grid(9);
    const auto exposures = zero_exposures(grid);
    const std::vector<double> segment = simulate_segment({{0.0}, 0.1, 0.0, 1.0}, exposures, 3, 8);
    CHECK(segment.size() == 5);
    CHECK(segment[0] == 1.0);
    CHECK(segment[4] == doctest::Approx(std::pow(1.1, 4)));
    CHECK_THROWS_AS((void)simulate_segment({{0.0}, 0.0, 0.0, 1.0}, exposures, 5, 5), InvalidWindow);
    CHECK_THROWS_AS((void)simulate_segment({{0.0}, 0.0, 0.0, 1.0}, exposures, 0, 11), InvalidWindow);
}

TEST_CASE("halving the step improves Euler ~2x and RK4 ~16x against a fine reference") {
    // Constant exposure keeps the right-hand side smooth at every step size.
    const double total_days = 8.0;
    const HitParams params{{0.3}, 0.2, 0.01, 1.0};

    auto run = [&](double dt, Integrator integrator) {
        const int steps = static_cast<int>(total_days / dt);
        const TimeGrid grid{test_support::day0(), steps, dt};
        return simulate(params, test_support::single_channel(grid, std::vector<double>(grid.size(), 2.0)),
                        {integrator})
            .values();
    };

    const double reference_dt = 0.5 / 64.0;
    const std::vector<double> reference = run(reference_dt, Integrator::rk4);
    auto max_error = [&](double dt, Integrator integrator) {
        const std::vector<double> values = run(dt, integrator);
        const auto stride = static_cast<std::size_t>(dt / reference_dt + 0.5);
        double worst = 0.0;
        for (std::size_t k = 0; k < values.size(); ++k) {
            worst = std::max(worst, std::fabs(values[k] - reference[k * stride]));
        }
        return worst;
    };

    const double euler_ratio = max_error(0.5, Integrator::euler_forward) /
                               max_error(0.25, Integrator::euler_forward);
    CHECK(euler_ratio == doctest::Approx(2.0).epsilon(0.2));
    const double rk4_ratio = max_error(0.5, Integrator::rk4) / max_error(0.25, Integrator::rk4);
    CHECK(rk4_ratio == doctest::Approx(16.0).epsilon(0.2));
}
