#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "gridmix/errors.hpp"
#include "gridmix/timeseries.hpp"

namespace gridmix {

// The five scan parameters of a single-node grid: how much renewable
// capacity is installed (as a multiple of peak demand), how it splits
// between wind and solar, how much storage energy exists, how much
// dispatchable capacity exists, and the storage level (as a fraction of
// storage capacity) at or below which dispatchable generation may run.
struct GridConfig {
    double overbuild = 1.0;
    double wind_fraction = 0.5;
    double storage_energy = 0.0;     // GWh
    double dispatch_capacity = 0.0;  // GW
    double threshold_fraction = 0.0; // of storage_energy
    // Optional charge/discharge power rating in GW. The dispatch rules are
    // energy-limited by default; this cap is off unless set.
    std::optional<double> storage_power;

    double threshold_energy() const
    {
        return threshold_fraction * storage_energy;
    }

    void validate() const
    {
        if (!(overbuild >= 0.0)) {
            fail_input("overbuild must be non-negative, got ", overbuild);
        }
        if (!(wind_fraction >= 0.0 && wind_fraction <= 1.0)) {
            fail_input("wind_fraction must be in [0,1], got ", wind_fraction);
        }
        if (!(storage_energy >= 0.0)) {
            fail_input("storage_energy must be non-negative, got ",
                       storage_energy);
        }
        if (!(dispatch_capacity >= 0.0)) {
            fail_input("dispatch_capacity must be non-negative, got ",
                       dispatch_capacity);
        }
        if (!(threshold_fraction >= 0.0 && threshold_fraction <= 1.0)) {
            fail_input("threshold_fraction must be in [0,1], got ",
                       threshold_fraction);
        }
        if (storage_power && !(*storage_power >= 0.0)) {
            fail_input("storage_power must be non-negative, got ",
                       *storage_power);
        }
    }
};

// Complete account of one simulated hour. With a one-hour timestep, GW and
// GWh are numerically interchangeable here.
struct HourState {
    double storage_level = 0.0; // GWh at end of hour
    double renewable_gen = 0.0; // GW
    double demand = 0.0;        // GW
    double residual = 0.0;      // demand - renewable_gen
    double gas_out = 0.0;       // dispatchable output, GW
    double charge = 0.0;        // into storage, GW
    double discharge = 0.0;     // out of storage, GW
    double served = 0.0;        // GW
    double curtailed = 0.0;     // surplus renewable thrown away, GW

    bool operator==(const HourState&) const = default;
};

// Shortfall hours below this are floating-point noise, not outages.
constexpr double kShortfallToleranceGw = 1e-9;

// One hour of the myopic operator rules.
//
// Surplus hours charge storage up to capacity and curtail the rest. Deficit
// hours draw storage down first (storage is energy-limited, so it may run
// straight through the threshold to empty). Dispatchable generation is
// permitted only when the hour began with storage at or below the threshold;
// when permitted, it serves the remaining deficit first and then restores
// storage toward the threshold with whatever capacity is left. Demand that
// no resource can cover goes unserved.
inline HourState step(double storage_level, double renewable_gen,
                      double demand, const GridConfig& config)
{
    const double threshold = config.threshold_energy();
    const double power_cap = config.storage_power.value_or(
        std::numeric_limits<double>::infinity());

    HourState s;
    s.renewable_gen = renewable_gen;
    s.demand = demand;
    s.residual = demand - renewable_gen;
    s.served = demand;

    if (s.residual < 0.0) {
        const double surplus = -s.residual;
        const double headroom = config.storage_energy - storage_level;
        s.charge = std::min({surplus, headroom, power_cap});
        s.curtailed = surplus - s.charge;
    } else if (s.residual > 0.0) {
        const bool gas_allowed = storage_level <= threshold;
        s.discharge = std::min({s.residual, storage_level, power_cap});
        double deficit = s.residual - s.discharge;
        if (gas_allowed) {
            const double to_load = std::min(config.dispatch_capacity, deficit);
            deficit -= to_load;
            const double level_now = storage_level - s.discharge;
            const double refill = std::max(0.0, threshold - level_now);
            const double recharge = std::min(
                {config.dispatch_capacity - to_load, refill, power_cap});
            s.gas_out = to_load + recharge;
            s.charge = recharge;
        }
        s.served = demand - deficit;
    }

    s.storage_level = std::clamp(storage_level + s.charge - s.discharge, 0.0,
                                 config.storage_energy);
    return s;
}

// Maximal run of consecutive hours in which demand was not fully served.
struct OutageEvent {
    HourStamp start = 0;  // first shortfall hour
    std::int64_t duration = 0;
    std::vector<double> hourly_fraction_met; // served/demand per hour
    double min_fraction_met = 1.0;
};

struct ShortfallHour {
    HourStamp hour = 0;
    double unserved_gw = 0.0;
};

struct SimulationResult {
    double reliability = 0.0;         // fraction of fully served hours
    double gas_share = 0.0;           // gas energy / total demand energy
    double lole_hours_per_year = 0.0; // (1 - reliability) * 8766
    std::vector<OutageEvent> outages;
    std::vector<ShortfallHour> shortfalls; // sparse per-hour shortfall trace

    // Epoch energy totals, GWh.
    double demand_energy = 0.0;
    double gas_energy = 0.0;
    double curtailed_energy = 0.0;
    double unserved_energy = 0.0;
};

constexpr double kHoursPerYear = 8766.0; // calendar average, leap years in

namespace detail {

template <typename Sink>
SimulationResult simulate_impl(const GridConfig& config, const Dataset& data,
                               Sink&& sink)
{
    config.validate();
    if (data.hours() == 0) {
        fail_input("cannot simulate an empty dataset");
    }

    const double wind_gw =
        config.overbuild * config.wind_fraction * data.peak_demand_gw;
    const double solar_gw =
        config.overbuild * (1.0 - config.wind_fraction) * data.peak_demand_gw;

    SimulationResult r;
    double level = config.storage_energy; // start full; the multi-decadal
                                          // epoch makes the transient moot
    std::size_t served_hours = 0;
    OutageEvent* open_outage = nullptr;

    const std::size_t n = data.hours();
    for (std::size_t h = 0; h < n; ++h) {
        const double renewable =
            wind_gw * data.wind_cf[h] + solar_gw * data.solar_cf[h];
        const HourState s = step(level, renewable, data.demand_gw[h], config);
        level = s.storage_level;
        sink(h, s);

        r.demand_energy += s.demand;
        r.gas_energy += s.gas_out;
        r.curtailed_energy += s.curtailed;

        const double unserved = s.demand - s.served;
        if (unserved > kShortfallToleranceGw) {
            const HourStamp stamp = data.epoch.begin + HourStamp(h);
            r.unserved_energy += unserved;
            r.shortfalls.push_back({stamp, unserved});
            const double fraction = s.served / s.demand;
            if (open_outage == nullptr) {
                r.outages.emplace_back();
                open_outage = &r.outages.back();
                open_outage->start = stamp;
            }
            open_outage->duration += 1;
            open_outage->hourly_fraction_met.push_back(fraction);
            open_outage->min_fraction_met =
                std::min(open_outage->min_fraction_met, fraction);
        } else {
            ++served_hours;
            open_outage = nullptr;
        }
    }

    r.reliability = double(served_hours) / double(n);
    r.gas_share = r.demand_energy > 0.0 ? r.gas_energy / r.demand_energy : 0.0;
    r.lole_hours_per_year = (1.0 - r.reliability) * kHoursPerYear;
    return r;
}

} // namespace detail

inline SimulationResult simulate(const GridConfig& config, const Dataset& data)
{
    return detail::simulate_impl(config, data,
                                 [](std::size_t, const HourState&) {});
}

inline SimulationResult simulate_with_trace(const GridConfig& config,
                                            const Dataset& data,
                                            std::vector<HourState>& trace)
{
    trace.clear();
    trace.reserve(data.hours());
    return detail::simulate_impl(
        config, data,
        [&trace](std::size_t, const HourState& s) { trace.push_back(s); });
}

// The operator rules use no information beyond the current hour, so the
// trace over any prefix must be unchanged by whatever follows it. Exposed as
// a verification hook: true iff the first split_hours states of the full run
// equal the trace of the truncated run, state for state.
inline bool myopia_check(const GridConfig& config, const Dataset& data,
                         std::size_t split_hours)
{
    if (split_hours > data.hours()) {
        fail_input("split hour ", split_hours, " beyond dataset of ",
                   data.hours(), " hours");
    }
    if (split_hours == 0) {
        return true;
    }
    std::vector<HourState> full;
    simulate_with_trace(config, data, full);
    std::vector<HourState> truncated;
    simulate_with_trace(config, data.prefix(split_hours), truncated);
    for (std::size_t h = 0; h < split_hours; ++h) {
        if (!(full[h] == truncated[h])) {
            return false;
        }
    }
    return true;
}

} // namespace gridmix
