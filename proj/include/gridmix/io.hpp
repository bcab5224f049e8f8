#pragma once

#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "gridmix/calendar.hpp"
#include "gridmix/csv.hpp"
#include "gridmix/dispatch.hpp"
#include "gridmix/generation.hpp"
#include "gridmix/optimizer.hpp"
#include "gridmix/timeseries.hpp"

namespace gridmix {

// ---------------------------------------------------------------------------
// Weather input: one file per grid cell, hourly rows.
// Columns: timestamp,ghi,toa,t_amb,v10,v50,p_surf,lat,lon
// Units: UTC, W/m2, W/m2, K, m/s, m/s, Pa, degrees, degrees.
// Missing values are not allowed.
// ---------------------------------------------------------------------------

inline std::vector<CellWeatherHour>
read_weather_file(const std::filesystem::path& path)
{
    CsvReader reader(path);
    const auto ts = reader.column("timestamp");
    const auto ghi = reader.column("ghi");
    const auto toa = reader.column("toa");
    const auto t_amb = reader.column("t_amb");
    const auto v10 = reader.column("v10");
    const auto v50 = reader.column("v50");
    const auto p_surf = reader.column("p_surf");
    const auto lat = reader.column("lat");
    const auto lon = reader.column("lon");

    std::vector<CellWeatherHour> hours;
    while (reader.next()) {
        CellWeatherHour w;
        try {
            w.timestamp = parse_timestamp(reader.cell(ts));
        } catch (const InputError& e) {
            reader.fail(e.what());
        }
        w.ghi = reader.number(ghi);
        w.toa = reader.number(toa);
        w.t_amb = reader.number(t_amb);
        w.v10 = reader.number(v10);
        w.v50 = reader.number(v50);
        w.p_surf = reader.number(p_surf);
        w.lat = reader.number(lat);
        w.lon = reader.number(lon);
        if (const char* defect = weather_defect(w)) {
            reader.fail(defect);
        }
        if (!hours.empty() && w.timestamp != hours.back().timestamp + 1) {
            reader.fail("timestamps must be consecutive hours");
        }
        hours.push_back(w);
    }
    if (hours.empty()) {
        fail_input(path.string(), ": no weather rows");
    }
    return hours;
}

// ---------------------------------------------------------------------------
// Capacity-factor files: timestamp,solar_cf,wind_cf. Written per cell when
// requested and for the continent-level aggregate (which doubles as the
// generation cache for demand-only rebuilds).
// ---------------------------------------------------------------------------

struct CapacityFactorSeries {
    HourRange epoch;
    std::vector<double> solar;
    std::vector<double> wind;
};

inline void write_capacity_factors(const std::filesystem::path& path,
                                   HourRange epoch,
                                   const std::vector<double>& solar,
                                   const std::vector<double>& wind)
{
    require(solar.size() == epoch.size() && wind.size() == epoch.size(),
            "capacity factor series do not match epoch");
    CsvWriter out(path);
    out.row("timestamp", "solar_cf", "wind_cf");
    for (std::size_t h = 0; h < solar.size(); ++h) {
        out.row(format_timestamp(epoch.begin + HourStamp(h)), solar[h],
                wind[h]);
    }
    out.close();
}

inline CapacityFactorSeries
read_capacity_factors(const std::filesystem::path& path)
{
    CsvReader reader(path);
    const auto ts = reader.column("timestamp");
    const auto solar = reader.column("solar_cf");
    const auto wind = reader.column("wind_cf");
    CapacityFactorSeries s;
    HourStamp expected = 0;
    while (reader.next()) {
        HourStamp stamp = 0;
        try {
            stamp = parse_timestamp(reader.cell(ts));
        } catch (const InputError& e) {
            reader.fail(e.what());
        }
        if (s.solar.empty()) {
            s.epoch.begin = stamp;
        } else if (stamp != expected) {
            reader.fail("timestamps must be consecutive hours");
        }
        expected = stamp + 1;
        s.solar.push_back(reader.number(solar));
        s.wind.push_back(reader.number(wind));
    }
    if (s.solar.empty()) {
        fail_input(path.string(), ": no capacity-factor rows");
    }
    s.epoch.end = expected;
    return s;
}

// ---------------------------------------------------------------------------
// Demand input: timestamp,country,load_mw with a blank load for missing
// hours. Hours absent from the file entirely also count as missing. Each
// country is gap-repaired on its own, then countries are summed into a
// single GW series.
// ---------------------------------------------------------------------------

inline DemandSeries read_demand_file(const std::filesystem::path& path)
{
    CsvReader reader(path);
    const auto ts_col = reader.column("timestamp");
    const auto country_col = reader.column("country");
    const auto load_col = reader.column("load_mw");

    constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
    struct Row {
        HourStamp hour;
        std::string country;
        double load_mw;
        int line;
    };
    std::vector<Row> rows;
    HourStamp lo = std::numeric_limits<HourStamp>::max();
    HourStamp hi = std::numeric_limits<HourStamp>::min();
    while (reader.next()) {
        Row r;
        try {
            r.hour = parse_timestamp(reader.cell(ts_col));
        } catch (const InputError& e) {
            reader.fail(e.what());
        }
        r.country = std::string(reader.cell(country_col));
        if (r.country.empty()) {
            reader.fail("country is blank");
        }
        r.load_mw =
            reader.empty_cell(load_col) ? kMissing : reader.number(load_col);
        r.line = reader.line_number();
        rows.push_back(std::move(r));
        lo = std::min(lo, rows.back().hour);
        hi = std::max(hi, rows.back().hour);
    }
    if (rows.empty()) {
        fail_input(path.string(), ": no demand rows");
    }

    const HourRange epoch{lo, hi + 1};
    std::map<std::string, std::vector<double>> per_country;
    for (const auto& r : rows) {
        auto [it, inserted] = per_country.try_emplace(
            r.country, epoch.size(), kMissing);
        auto& series = it->second;
        const auto idx = std::size_t(r.hour - epoch.begin);
        if (!is_missing(series[idx])) {
            fail_input(path.string(), ":", r.line, ": duplicate hour ",
                       format_timestamp(r.hour), " for country ", r.country);
        }
        series[idx] = r.load_mw;
    }

    std::vector<double> total_gw(epoch.size(), 0.0);
    for (const auto& [country, series] : per_country) {
        const DemandSeries repaired = repair_demand(series, epoch, country);
        for (std::size_t h = 0; h < total_gw.size(); ++h) {
            total_gw[h] += repaired.values[h] / 1000.0;
        }
    }
    return DemandSeries::from_values(std::move(total_gw), epoch);
}

// ---------------------------------------------------------------------------
// Canonical dataset: timestamp,solar_cf,wind_cf,demand_gw. This single file
// is the simulator's input.
// ---------------------------------------------------------------------------

inline void write_dataset(const std::filesystem::path& path,
                          const Dataset& data)
{
    CsvWriter out(path);
    out.row("timestamp", "solar_cf", "wind_cf", "demand_gw");
    for (std::size_t h = 0; h < data.hours(); ++h) {
        out.row(format_timestamp(data.epoch.begin + HourStamp(h)),
                data.solar_cf[h], data.wind_cf[h], data.demand_gw[h]);
    }
    out.close();
}

inline Dataset read_dataset(const std::filesystem::path& path)
{
    CsvReader reader(path);
    const auto ts = reader.column("timestamp");
    const auto solar = reader.column("solar_cf");
    const auto wind = reader.column("wind_cf");
    const auto demand = reader.column("demand_gw");

    HourRange epoch{0, 0};
    std::vector<double> solar_cf;
    std::vector<double> wind_cf;
    std::vector<double> demand_gw;
    while (reader.next()) {
        HourStamp stamp = 0;
        try {
            stamp = parse_timestamp(reader.cell(ts));
        } catch (const InputError& e) {
            reader.fail(e.what());
        }
        if (solar_cf.empty()) {
            epoch.begin = stamp;
        } else if (stamp != epoch.end) {
            reader.fail("timestamps must be consecutive hours");
        }
        epoch.end = stamp + 1;
        solar_cf.push_back(reader.number(solar));
        wind_cf.push_back(reader.number(wind));
        demand_gw.push_back(reader.number(demand));
    }
    if (solar_cf.empty()) {
        fail_input(path.string(), ": no dataset rows");
    }
    return Dataset::assemble(epoch, std::move(solar_cf), std::move(wind_cf),
                             std::move(demand_gw));
}

// ---------------------------------------------------------------------------
// Per-hour dispatch trace, for debugging and golden tests.
// ---------------------------------------------------------------------------

inline void write_trace(const std::filesystem::path& path, HourRange epoch,
                        const std::vector<HourState>& trace)
{
    CsvWriter out(path);
    out.row("hour", "storage_level", "gas_out", "served", "curtailed");
    for (std::size_t h = 0; h < trace.size(); ++h) {
        out.row(format_timestamp(epoch.begin + HourStamp(h)),
                trace[h].storage_level, trace[h].gas_out, trace[h].served,
                trace[h].curtailed);
    }
    out.close();
}

// ---------------------------------------------------------------------------
// Full scan table: the five parameters plus the three per-point metrics,
// flat-index order, so results can be re-analysed without re-simulation.
// ---------------------------------------------------------------------------

inline void write_scan_table(const std::filesystem::path& path,
                             const ScanSpec& spec,
                             const std::vector<PointMetrics>& table)
{
    CsvWriter out(path);
    out.row("overbuild", "wind_fraction", "storage_energy_gwh",
            "dispatch_capacity_gw", "threshold_fraction", "annual_cost_usd",
            "reliability", "gas_share");
    for (std::size_t i = 0; i < table.size(); ++i) {
        const GridConfig c = spec.config_at(i);
        out.row(c.overbuild, c.wind_fraction, c.storage_energy,
                c.dispatch_capacity, c.threshold_fraction,
                table[i].annual_cost, table[i].reliability,
                table[i].gas_share);
    }
    out.close();
}

} // namespace gridmix
