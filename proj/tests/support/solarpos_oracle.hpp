#pragma once

// Independent solar-position reference for cross-validation: the
// Astronomical Almanac low-precision algorithm (Michalsky 1988), accurate to
// about 0.01 degrees between 1950 and 2050. Deliberately a different
// published series than the library implementation so the two can check
// each other.

#include <cmath>
#include <numbers>

#include "gridmix/calendar.hpp"

namespace testsupport {

struct RefSunPosition {
    double altitude_deg;
    double azimuth_deg; // clockwise from north
};

inline RefSunPosition almanac_sun_position(double lat_deg, double lon_deg,
                                           gridmix::HourStamp t)
{
    constexpr double deg = std::numbers::pi / 180.0;

    gridmix::HourStamp days = t / 24;
    gridmix::HourStamp hour = t % 24;
    if (hour < 0) {
        days -= 1;
        hour += 24;
    }
    const double jd = 2440587.5 + double(days) + double(hour) / 24.0;
    const double n = jd - 2451545.0;

    auto wrap360 = [](double x) {
        x = std::fmod(x, 360.0);
        return x < 0.0 ? x + 360.0 : x;
    };

    const double mean_long = wrap360(280.460 + 0.9856474 * n);
    const double mean_anom = wrap360(357.528 + 0.9856003 * n) * deg;
    const double ecl_long =
        wrap360(mean_long + 1.915 * std::sin(mean_anom) +
                0.020 * std::sin(2.0 * mean_anom)) *
        deg;
    const double obliquity = (23.439 - 0.0000004 * n) * deg;

    double ra = std::atan2(std::cos(obliquity) * std::sin(ecl_long),
                           std::cos(ecl_long));
    if (ra < 0.0) {
        ra += 2.0 * std::numbers::pi;
    }
    const double decl = std::asin(std::sin(obliquity) * std::sin(ecl_long));

    const double n_midnight = (2440587.5 + double(days)) - 2451545.0;
    double gmst_hours = 6.697375 + 0.0657098242 * n_midnight +
                        1.0027379 * double(hour);
    gmst_hours = std::fmod(gmst_hours, 24.0);
    if (gmst_hours < 0.0) {
        gmst_hours += 24.0;
    }
    const double lmst_rad = (gmst_hours * 15.0 + lon_deg) * deg;

    double ha = lmst_rad - ra;
    ha = std::remainder(ha, 2.0 * std::numbers::pi);

    const double lat = lat_deg * deg;
    double sin_el = std::sin(decl) * std::sin(lat) +
                    std::cos(decl) * std::cos(lat) * std::cos(ha);
    sin_el = std::min(1.0, std::max(-1.0, sin_el));
    const double el = std::asin(sin_el);

    const double y = -std::cos(decl) * std::sin(ha);
    const double x = (std::sin(decl) - std::sin(lat) * sin_el) /
                     std::cos(lat);
    double az = std::atan2(y, x) / deg;
    if (az < 0.0) {
        az += 360.0;
    }
    return RefSunPosition{el / deg, az};
}

// Smallest angular distance between two compass bearings.
inline double azimuth_difference(double a, double b)
{
    const double d = std::fabs(std::fmod(a - b + 540.0, 360.0) - 180.0);
    return d;
}

} // namespace testsupport
