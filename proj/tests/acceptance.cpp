// Acceptance suite: one test per release criterion, each printed as a
// single PASS/FAIL line. Run via ctest or directly:
//
//   ./acceptance
//
// Criterion 7 (full-archive reproduction) needs the multi-gigabyte
// reanalysis-derived dataset and is skipped unless
// GRIDMIX_REANALYSIS_DATASET points at a canonical dataset file built from
// it.

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>

#include "gridmix/costing.hpp"
#include "gridmix/dispatch.hpp"
#include "gridmix/io.hpp"
#include "gridmix/optimizer.hpp"
#include "gridmix/solar.hpp"
#include "gridmix/wind.hpp"
#include "support/dispatch_oracle.hpp"
#include "support/fixtures.hpp"
#include "support/quadrature.hpp"

using namespace gridmix;
using testsupport::random_config;
using testsupport::random_dataset;
using testsupport::reference_dispatch;
using testsupport::synthetic_dataset;

namespace {

double elapsed_ms(const std::function<void()>& f)
{
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

} // namespace

// Criterion 1: cost-model oracles.
TEST(Acceptance, Criterion1_CostModelOracles)
{
    FinancialParams fin; // T = 2, inflation 4%, nominal 8%
    const double closed = investment_cost(790.0, fin);
    const double quad =
        testsupport::investment_cost_quadrature(790.0, 2.0, 0.04, 0.08);
    EXPECT_NEAR(closed, quad, std::fabs(quad) * 1e-9);

    FinancialParams zero;
    zero.inflation = 0.0;
    zero.nominal_rate = 0.0;
    EXPECT_DOUBLE_EQ(investment_cost(790.0, zero), 790.0);

    const double at_zero = annual_payment(1000.0, 0.0, 25.0);
    EXPECT_DOUBLE_EQ(at_zero, 40.0);
    EXPECT_NEAR(annual_payment(1000.0, 1e-12, 25.0), at_zero,
                at_zero * 1e-6);
}

// Criterion 2: the six-hour golden dispatch instance.
TEST(Acceptance, Criterion2_DispatchGolden)
{
    const SimulationResult r = simulate(testsupport::toy_six_hour_config(),
                                        testsupport::toy_six_hours());
    EXPECT_DOUBLE_EQ(r.reliability, 0.5);
    EXPECT_DOUBLE_EQ(r.gas_share, 0.25);
    ASSERT_EQ(r.outages.size(), 1u);
    EXPECT_EQ(r.outages[0].duration, 3);
    ASSERT_EQ(r.outages[0].hourly_fraction_met.size(), 3u);
    for (const double f : r.outages[0].hourly_fraction_met) {
        EXPECT_DOUBLE_EQ(f, 0.5);
    }
}

// Criterion 3: simulate matches the straight-line oracle state for state on
// 1000+ randomized short datasets and configurations.
TEST(Acceptance, Criterion3_BruteForceEquivalence)
{
    std::mt19937_64 rng(101);
    std::uniform_int_distribution<std::size_t> len(1, 48);
    int checked = 0;
    for (int trial = 0; trial < 1200; ++trial) {
        const Dataset data = random_dataset(rng, len(rng));
        const GridConfig cfg = random_config(rng);
        const testsupport::RefRun ref = reference_dispatch(cfg, data);
        std::vector<HourState> trace;
        const SimulationResult r = simulate_with_trace(cfg, data, trace);
        ASSERT_EQ(trace.size(), ref.hours.size());
        for (std::size_t h = 0; h < trace.size(); ++h) {
            ASSERT_NEAR(trace[h].storage_level, ref.hours[h].level_end, 1e-9);
            ASSERT_NEAR(trace[h].served, ref.hours[h].served, 1e-9);
            ASSERT_NEAR(trace[h].gas_out, ref.hours[h].gas, 1e-9);
            ASSERT_NEAR(trace[h].charge, ref.hours[h].charge, 1e-9);
            ASSERT_NEAR(trace[h].discharge, ref.hours[h].discharge, 1e-9);
            ASSERT_NEAR(trace[h].curtailed, ref.hours[h].curtailed, 1e-9);
        }
        ASSERT_NEAR(r.reliability, ref.reliability, 1e-12);
        ASSERT_NEAR(r.gas_share, ref.gas_share, 1e-12);
        ++checked;
    }
    EXPECT_GE(checked, 1000);
}

// Criterion 4: dispatch invariants over randomized sweeps. Monotonicity is
// asserted in the gate-stable regimes (no dispatchable capacity, threshold
// 1, or no storage); with a fractional threshold the hour-start gas gate
// makes it provably false (see the pinned counterexample in test_dispatch).
TEST(Acceptance, Criterion4_InvariantSuite)
{
    std::mt19937_64 rng(103);

    for (int trial = 0; trial < 150; ++trial) {
        const Dataset data = random_dataset(rng, 96);
        const GridConfig cfg = random_config(rng);
        std::vector<HourState> trace;
        simulate_with_trace(cfg, data, trace);
        double level_at_start = cfg.storage_energy;
        for (const HourState& s : trace) {
            // Energy balance to 1e-9 GW.
            ASSERT_NEAR(s.renewable_gen + s.discharge + s.gas_out - s.charge -
                            s.curtailed - s.served,
                        0.0, 1e-9);
            // Storage bounds.
            ASSERT_GE(s.storage_level, 0.0);
            ASSERT_LE(s.storage_level, cfg.storage_energy);
            // Threshold gating at hour start.
            if (s.gas_out > 0.0) {
                ASSERT_LE(level_at_start, cfg.threshold_energy() + 1e-12);
            }
            level_at_start = s.storage_level;
        }
        // Myopia: prefix equality under truncation.
        std::uniform_int_distribution<std::size_t> split(1, data.hours());
        ASSERT_TRUE(myopia_check(cfg, data, split(rng)));
    }

    // Monotone reliability in overbuild (gate-stable regimes).
    for (int trial = 0; trial < 40; ++trial) {
        const Dataset data = random_dataset(rng, 96);
        GridConfig cfg = random_config(rng);
        switch (trial % 3) {
        case 0:
            cfg.dispatch_capacity = 0.0;
            break;
        case 1:
            cfg.threshold_fraction = 1.0;
            break;
        default:
            cfg.storage_energy = 0.0;
            break;
        }
        double previous = -1.0;
        for (double overbuild = 0.0; overbuild <= 4.0; overbuild += 0.2) {
            cfg.overbuild = overbuild;
            const double rel = simulate(cfg, data).reliability;
            ASSERT_GE(rel, previous - 1e-12);
            previous = rel;
        }
    }

    // Monotone reliability in dispatchable capacity (gate-stable regimes).
    for (int trial = 0; trial < 40; ++trial) {
        const Dataset data = random_dataset(rng, 96);
        GridConfig cfg = random_config(rng);
        if (trial % 2 == 0) {
            cfg.threshold_fraction = 1.0;
        } else {
            cfg.storage_energy = 0.0;
        }
        double previous = -1.0;
        for (double gas = 0.0; gas <= 2.5; gas += 0.125) {
            cfg.dispatch_capacity = gas;
            const double rel = simulate(cfg, data).reliability;
            ASSERT_GE(rel, previous - 1e-12);
            previous = rel;
        }
    }
}

// Criterion 5: physics spot checks.
TEST(Acceptance, Criterion5_PhysicsSpotChecks)
{
    SolarPanelSpec panel;
    // PV at standard conditions: 1000 W/m2 with the module at 25 C.
    const double t_amb_stc = (273.15 + 25.0) - 0.035 * 1000.0;
    EXPECT_NEAR(pv_power_per_m2(1000.0, t_amb_stc, panel), 210.0, 1e-9);

    TurbineSpec turbine;
    EXPECT_EQ(turbine_power(3.0, 1.225, turbine), 0.0);
    EXPECT_EQ(turbine_power(25.0, 1.225, turbine), 0.0);
    EXPECT_NEAR(turbine_power(10.0, 1.225, turbine), 2.32831285539174,
                1e-11);
    EXPECT_DOUBLE_EQ(turbine_power(20.0, 1.225, turbine), 4.1);

    // Tilt-zero identity: a flat panel sees exactly the horizontal
    // irradiance whenever the sun is above the horizon cutoff.
    SolarPanelSpec flat;
    flat.tilt_override_deg = 0.0;
    std::mt19937_64 rng(107);
    std::uniform_real_distribution<double> alt(1.0, 89.0);
    std::uniform_real_distribution<double> kt(0.05, 1.0);
    for (int i = 0; i < 500; ++i) {
        const double toa = 1361.0;
        const double ghi = toa * kt(rng);
        const double poa = in_plane_irradiance(
            ghi, toa, 45.0, flat, SunPosition{alt(rng), 180.0});
        ASSERT_NEAR(poa, ghi, ghi * 4.0 * 1e-16);
    }
}

// Criterion 6: performance. One simulation over the full 43-year hour count
// within 50 ms on a single core; a 10^4-point scan within 2 minutes on 8
// workers, with an optimum independent of the worker count.
TEST(Acceptance, Criterion6_Performance)
{
    const Dataset long_run = synthetic_dataset(376944); // 1980-2022 hours
    GridConfig cfg;
    cfg.overbuild = 5.0;
    cfg.wind_fraction = 0.65;
    cfg.storage_energy = 3.0;
    cfg.dispatch_capacity = 0.3;
    cfg.threshold_fraction = 0.05;

    double best_ms = 1e30;
    SimulationResult result;
    for (int i = 0; i < 5; ++i) {
        best_ms = std::min(
            best_ms, elapsed_ms([&] { result = simulate(cfg, long_run); }));
    }
    std::printf("        43-year simulation: %.2f ms (budget 50 ms)\n",
                best_ms);
    EXPECT_LE(best_ms, 50.0);
    EXPECT_GT(result.reliability, 0.0);

    const Dataset year = synthetic_dataset(8760);
    ScanSpec spec;
    for (int i = 0; i < 10; ++i) {
        spec.overbuild.push_back(0.5 + 0.5 * i);
    }
    for (int i = 0; i < 10; ++i) {
        spec.wind_fraction.push_back(double(i) / 9.0);
    }
    for (int i = 0; i < 5; ++i) {
        spec.storage_energy.push_back(double(i) * 1.5);
    }
    for (int i = 0; i < 5; ++i) {
        spec.dispatch_capacity.push_back(double(i) * 0.25);
    }
    for (int i = 0; i < 4; ++i) {
        spec.threshold_fraction.push_back(double(i) / 3.0);
    }
    ASSERT_EQ(spec.point_count(), 10000u);
    spec.min_reliability = 0.99;
    spec.max_gas_share = 0.02;

    ScanOptions options;
    options.workers = 8;
    ScanOutcome eight;
    const double scan_ms =
        elapsed_ms([&] { eight = scan(spec, year, options); });
    std::printf("        10^4-point scan (8 workers): %.1f s (budget 120 "
                "s)\n",
                scan_ms / 1000.0);
    EXPECT_LE(scan_ms, 120.0 * 1000.0);
    ASSERT_TRUE(eight.report.chosen.has_value());

    options.workers = 3;
    const ScanOutcome three = scan(spec, year, options);
    ASSERT_TRUE(three.report.chosen.has_value());
    EXPECT_EQ(three.report.annual_cost, eight.report.annual_cost);
    EXPECT_EQ(three.report.chosen->overbuild, eight.report.chosen->overbuild);
    EXPECT_EQ(three.report.chosen->wind_fraction,
              eight.report.chosen->wind_fraction);
    EXPECT_EQ(three.report.chosen->storage_energy,
              eight.report.chosen->storage_energy);
    EXPECT_EQ(three.report.chosen->dispatch_capacity,
              eight.report.chosen->dispatch_capacity);
    EXPECT_EQ(three.report.chosen->threshold_fraction,
              eight.report.chosen->threshold_fraction);
    for (std::size_t i = 0; i < eight.table.size(); ++i) {
        ASSERT_EQ(three.table[i].annual_cost, eight.table[i].annual_cost);
    }
}

// Criterion 7: full-archive reproduction (optional, non-gating). Needs the
// canonical dataset built from the 43-year reanalysis archive; point
// GRIDMIX_REANALYSIS_DATASET at it to enable. Checks the x10-overbuild
// reliability of the best wind/solar mix (no storage, no dispatchable)
// against 99.94% within 0.1 percentage points and reports the deviation.
TEST(Acceptance, Criterion7_FullArchiveReproduction)
{
    const char* path = std::getenv("GRIDMIX_REANALYSIS_DATASET");
    if (path == nullptr || *path == '\0') {
        GTEST_SKIP() << "set GRIDMIX_REANALYSIS_DATASET to the canonical "
                        "dataset built from the reanalysis archive to run "
                        "this criterion";
    }
    const Dataset data = read_dataset(path);
    ASSERT_GE(data.hours(), 370000u) << "expected the full 43-year epoch";

    std::vector<double> mixes;
    for (int i = 0; i <= 20; ++i) {
        mixes.push_back(double(i) / 20.0);
    }
    const ReliabilityCurve curve = reliability_curve({10.0}, mixes, data);
    double best = 0.0;
    double best_mix = 0.0;
    for (std::size_t j = 0; j < mixes.size(); ++j) {
        if (curve.values[0][j] > best) {
            best = curve.values[0][j];
            best_mix = mixes[j];
        }
    }
    const double deviation_pp = (best - 0.9994) * 100.0;
    std::printf("        x10 overbuild best mix: wind fraction %.2f, "
                "reliability %.4f%% (target 99.94%%, deviation %+.3f pp)\n",
                best_mix, best * 100.0, deviation_pp);
    EXPECT_NEAR(best, 0.9994, 0.001)
        << "deviation beyond +-0.1 pp: likely sources are the solar-position "
           "algorithm choice and the per-hour shear exponent derived from "
           "the two wind levels; see the run report";
}

// Criterion 8: optimizer dominance across nested constraint sets.
TEST(Acceptance, Criterion8_OptimizerDominance)
{
    const Dataset data = synthetic_dataset(14 * 24);
    ScanSpec spec;
    spec.overbuild = {0.5, 1.0, 2.0, 4.0, 8.0};
    spec.wind_fraction = {0.3, 0.5, 0.8};
    spec.storage_energy = {0.0, 2.0, 6.0};
    spec.dispatch_capacity = {0.0, 0.3, 0.8, 1.2};
    spec.threshold_fraction = {0.0, 0.3, 1.0};

    spec.min_reliability = 0.99;
    double previous = std::numeric_limits<double>::infinity();
    bool any_feasible = false;
    for (const double gas_cap : {0.0, 0.005, 0.01, 0.02, 0.1, 1.0}) {
        spec.max_gas_share = gas_cap;
        const ScanOutcome out = scan(spec, data);
        if (out.report.chosen) {
            any_feasible = true;
            EXPECT_LE(out.report.annual_cost,
                      previous * (1.0 + 1e-12) + 1e-6);
            previous = out.report.annual_cost;
        } else {
            EXPECT_FALSE(any_feasible)
                << "a relaxed constraint lost feasibility";
        }
    }
    EXPECT_TRUE(any_feasible);

    spec.max_gas_share = 0.02;
    previous = std::numeric_limits<double>::infinity();
    for (const double floor : {0.9999, 0.999, 0.99, 0.9, 0.5, 0.0}) {
        spec.min_reliability = floor;
        const ScanOutcome out = scan(spec, data);
        if (out.report.chosen) {
            EXPECT_LE(out.report.annual_cost,
                      previous * (1.0 + 1e-12) + 1e-6);
            previous = out.report.annual_cost;
        }
    }
    EXPECT_TRUE(std::isfinite(previous));
}

namespace {

// One line per criterion, printed as each test finishes.
class CriterionLinePrinter : public ::testing::EmptyTestEventListener {
    void OnTestEnd(const ::testing::TestInfo& info) override
    {
        if (info.result()->Skipped()) {
            std::printf("[%s] SKIPPED\n", info.name());
        } else {
            std::printf("[%s] %s\n", info.name(),
                        info.result()->Passed() ? "PASS" : "FAIL");
        }
        std::fflush(stdout);
    }
};

} // namespace

int main(int argc, char** argv)
{
    ::testing::InitGoogleTest(&argc, argv);
    ::testing::UnitTest::GetInstance()->listeners().Append(
        new CriterionLinePrinter);
    return RUN_ALL_TESTS();
}
