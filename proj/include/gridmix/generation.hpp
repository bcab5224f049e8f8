#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "gridmix/calendar.hpp"
#include "gridmix/errors.hpp"
#include "gridmix/solar.hpp"
#include "gridmix/wind.hpp"

namespace gridmix {

// One hour of raw meteorology at one grid cell.
struct CellWeatherHour {
    HourStamp timestamp = 0;
    double ghi = 0.0;    // surface shortwave down, W/m2
    double toa = 0.0;    // top-of-atmosphere shortwave, W/m2
    double t_amb = 0.0;  // 2 m air temperature, K
    double v10 = 0.0;    // 10 m wind speed magnitude, m/s
    double v50 = 0.0;    // 50 m wind speed magnitude, m/s
    double p_surf = 0.0; // surface pressure, Pa
    double lat = 0.0;    // degrees north
    double lon = 0.0;    // degrees east
};

// Reanalysis rounding may report ghi a hair above toa; anything past this
// relative slack is treated as corrupt data.
constexpr double kGhiOverToaTolerance = 0.02;

// Returns an error description, or nullptr if the sample is physically
// plausible.
inline const char* weather_defect(const CellWeatherHour& w)
{
    if (w.ghi < 0.0) {
        return "ghi is negative";
    }
    if (w.toa < 0.0) {
        return "toa is negative";
    }
    if (w.ghi > w.toa * (1.0 + kGhiOverToaTolerance) + 1e-9) {
        return "ghi exceeds toa beyond tolerance";
    }
    if (w.v10 < 0.0 || w.v50 < 0.0) {
        return "wind speed is negative";
    }
    if (!(w.p_surf > 0.0)) {
        return "surface pressure must be positive";
    }
    if (!(w.t_amb > 0.0)) {
        return "air temperature must be positive";
    }
    if (w.lat < -90.0 || w.lat > 90.0) {
        return "latitude out of range";
    }
    return nullptr;
}

struct CellCapacityFactors {
    std::vector<double> solar; // per-unit, [0,1]
    std::vector<double> wind;  // per-unit, [0,1]
    HourRange epoch;
};

inline double solar_capacity_factor(const CellWeatherHour& w,
                                    const SolarPanelSpec& panel)
{
    const SunPosition sun = solar_position(w.lat, w.lon, w.timestamp);
    const double poa = in_plane_irradiance(w.ghi, w.toa, w.lat, panel, sun);
    const double power = pv_power_per_m2(poa, w.t_amb, panel);
    // Nameplate for a square metre of module is eta_std * 1000 W.
    return std::clamp(power / (panel.eta_std * 1000.0), 0.0, 1.0);
}

inline double wind_capacity_factor(const CellWeatherHour& w,
                                   const TurbineSpec& turbine)
{
    const double v_hub = wind_speed_at_hub(w.v10, w.v50, turbine.hub_height);
    const double rho = air_density_at_hub(w.t_amb, w.p_surf,
                                          turbine.hub_height);
    return std::clamp(turbine_power(v_hub, rho, turbine) / turbine.rated_power,
                      0.0, 1.0);
}

// Per-unit solar and wind output for one cell over a contiguous hourly
// series. Rejects gaps, duplicates, and physically impossible samples.
inline CellCapacityFactors
cell_capacity_factors(std::span<const CellWeatherHour> hours,
                      const SolarPanelSpec& panel, const TurbineSpec& turbine)
{
    panel.validate();
    turbine.validate();
    if (hours.empty()) {
        fail_input("weather series is empty");
    }
    CellCapacityFactors out;
    out.epoch = HourRange{hours.front().timestamp,
                          hours.front().timestamp + HourStamp(hours.size())};
    out.solar.reserve(hours.size());
    out.wind.reserve(hours.size());
    HourStamp expected = hours.front().timestamp;
    for (const auto& w : hours) {
        if (w.timestamp != expected) {
            fail_input("weather series has a gap: expected ",
                       format_timestamp(expected), ", got ",
                       format_timestamp(w.timestamp));
        }
        if (const char* defect = weather_defect(w)) {
            fail_input("bad weather sample at ", format_timestamp(w.timestamp),
                       ": ", defect);
        }
        ++expected;
        out.solar.push_back(solar_capacity_factor(w, panel));
        out.wind.push_back(wind_capacity_factor(w, turbine));
    }
    return out;
}

} // namespace gridmix
