#pragma once

// Shared synthetic datasets and randomized generators for the test suite.
// Everything is seeded; tests are reproducible run to run.

#include <cmath>
#include <random>
#include <vector>

#include "gridmix/calendar.hpp"
#include "gridmix/dispatch.hpp"
#include "gridmix/timeseries.hpp"

namespace testsupport {

inline gridmix::HourStamp fixture_start()
{
    return gridmix::hour_of({2000, 1, 1, 0});
}

inline gridmix::Dataset make_dataset(std::vector<double> solar_cf,
                                     std::vector<double> wind_cf,
                                     std::vector<double> demand_gw,
                                     gridmix::HourStamp start = 0)
{
    if (start == 0) {
        start = fixture_start();
    }
    const gridmix::HourRange epoch{
        start, start + gridmix::HourStamp(demand_gw.size())};
    return gridmix::Dataset::assemble(epoch, std::move(solar_cf),
                                      std::move(wind_cf),
                                      std::move(demand_gw));
}

// The worked 6-hour instance: constant 1 GW demand, 2 GW of renewables for
// two hours then nothing. With 1 GWh of storage, a 0.5 threshold and 0.5 GW
// of backup this produces reliability 0.5, gas share 0.25, and one 3-hour
// outage at 50% served.
inline gridmix::Dataset toy_six_hours()
{
    return make_dataset({0, 0, 0, 0, 0, 0}, {1, 1, 0, 0, 0, 0},
                        {1, 1, 1, 1, 1, 1});
}

inline gridmix::GridConfig toy_six_hour_config()
{
    gridmix::GridConfig c;
    c.overbuild = 2.0;
    c.wind_fraction = 1.0;
    c.storage_energy = 1.0;
    c.dispatch_capacity = 0.5;
    c.threshold_fraction = 0.5;
    return c;
}

inline gridmix::Dataset random_dataset(std::mt19937_64& rng,
                                       std::size_t hours)
{
    std::uniform_real_distribution<double> cf(0.0, 1.0);
    std::uniform_real_distribution<double> load(0.2, 2.0);
    std::bernoulli_distribution calm(0.2);
    std::vector<double> solar(hours);
    std::vector<double> wind(hours);
    std::vector<double> demand(hours);
    for (std::size_t h = 0; h < hours; ++h) {
        solar[h] = calm(rng) ? 0.0 : cf(rng);
        wind[h] = calm(rng) ? 0.0 : cf(rng);
        demand[h] = load(rng);
    }
    return make_dataset(std::move(solar), std::move(wind), std::move(demand));
}

inline gridmix::GridConfig random_config(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::bernoulli_distribution coin(0.25);
    gridmix::GridConfig c;
    c.overbuild = 3.0 * uni(rng);
    c.wind_fraction = uni(rng);
    c.storage_energy = coin(rng) ? 0.0 : 5.0 * uni(rng);
    c.dispatch_capacity = coin(rng) ? 0.0 : 2.0 * uni(rng);
    c.threshold_fraction = coin(rng) ? (coin(rng) ? 1.0 : 0.0) : uni(rng);
    if (coin(rng)) {
        c.storage_power = 1.5 * uni(rng);
    }
    return c;
}

// Deterministic "weather-shaped" dataset: diurnal+seasonal solar, noisy
// seasonal wind, seasonal demand. Cheap to generate at any length.
inline gridmix::Dataset synthetic_dataset(std::size_t hours,
                                          std::uint64_t seed = 42)
{
    std::vector<double> solar(hours);
    std::vector<double> wind(hours);
    std::vector<double> demand(hours);
    std::uint64_t state = seed * 6364136223846793005ULL + 1442695040888963407ULL;
    auto noise = [&state]() {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return double(state >> 11) / double(1ULL << 53); // [0,1)
    };
    constexpr double two_pi = 6.283185307179586;
    for (std::size_t h = 0; h < hours; ++h) {
        const double hour_of_day = double(h % 24);
        const double day_of_year = double((h / 24) % 365);
        const double season = std::sin(two_pi * day_of_year / 365.0);
        const double sun =
            std::max(0.0, std::sin(two_pi * (hour_of_day - 6.0) / 24.0));
        solar[h] = std::min(1.0, sun * (0.55 + 0.25 * season));
        const double breeze =
            0.25 - 0.12 * season + 0.35 * noise() * noise();
        wind[h] = std::min(1.0, std::max(0.0, breeze));
        demand[h] = 1.0 - 0.15 * season +
                    0.08 * std::sin(two_pi * (hour_of_day - 18.0) / 24.0);
    }
    return make_dataset(std::move(solar), std::move(wind), std::move(demand));
}

} // namespace testsupport
