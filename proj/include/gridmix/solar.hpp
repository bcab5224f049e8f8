#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>

#include "gridmix/calendar.hpp"
#include "gridmix/errors.hpp"

namespace gridmix {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;

// Relative-efficiency polynomial coefficients for crystalline-silicon
// modules (Huld et al. 2010). Held in the panel parameters so a run
// configuration can audit or override them.
constexpr std::array<double, 6> kHuldCrystallineSi = {
    -0.017237, -0.040465, -0.004702, 0.000149, 0.000170, 0.000005};

struct SolarPanelSpec {
    double eta_std = 0.21;       // module efficiency at 1000 W/m2, 25 C
    double albedo = 0.3;         // ground reflectance
    double panel_azimuth = 180;  // degrees clockwise from north; 180 = south
    double temp_coupling = 0.035; // panel-over-ambient slope, K per (W/m2)
    std::array<double, 6> huld = kHuldCrystallineSi;
    // Tilt defaults to the latitude rule 0.76*lat + 3.1; a fixed override is
    // available for fixtures and sensitivity runs.
    std::optional<double> tilt_override_deg;

    double tilt_deg(double lat_deg) const
    {
        if (tilt_override_deg) {
            return *tilt_override_deg;
        }
        return 0.76 * lat_deg + 3.1;
    }

    void validate() const
    {
        if (!(eta_std > 0.0 && eta_std < 1.0)) {
            fail_input("panel eta_std must be in (0,1), got ", eta_std);
        }
        if (!(albedo >= 0.0 && albedo <= 1.0)) {
            fail_input("panel albedo must be in [0,1], got ", albedo);
        }
        if (tilt_override_deg &&
            !(*tilt_override_deg >= 0.0 && *tilt_override_deg < 90.0)) {
            fail_input("panel tilt must be in [0,90), got ",
                       *tilt_override_deg);
        }
    }
};

struct SunPosition {
    double altitude_deg = 0.0; // above horizon; negative at night
    double azimuth_deg = 0.0;  // clockwise from north, [0,360)
};

// Sun altitude/azimuth from a low-order series expansion of the solar
// ephemeris (Meeus-style mean elements, apparent longitude, and sidereal
// time). Unrefracted. Accuracy is on the order of 0.01 degrees across
// 1980-2050, which is ample for hourly irradiance work.
inline SunPosition solar_position(double lat_deg, double lon_deg, HourStamp t)
{
    const double jd = 2440587.5 + double(t) / 24.0; // Julian date of t
    const double d = jd - 2451545.0;                // days since J2000
    const double T = d / 36525.0;                   // Julian centuries

    auto wrap360 = [](double x) {
        x = std::fmod(x, 360.0);
        return x < 0.0 ? x + 360.0 : x;
    };

    const double mean_long =
        wrap360(280.46646 + T * (36000.76983 + T * 0.0003032));
    const double mean_anom_deg = 357.52911 + T * (35999.05029 - 0.0001537 * T);
    const double M = mean_anom_deg * kDegToRad;
    const double eq_center =
        std::sin(M) * (1.914602 - T * (0.004817 + 0.000014 * T)) +
        std::sin(2.0 * M) * (0.019993 - 0.000101 * T) +
        std::sin(3.0 * M) * 0.000289;
    const double omega = (125.04 - 1934.136 * T) * kDegToRad;
    const double apparent_long =
        (mean_long + eq_center - 0.00569 - 0.00478 * std::sin(omega)) *
        kDegToRad;

    const double eps0 =
        23.0 +
        (26.0 + (21.448 - T * (46.815 + T * (0.00059 - T * 0.001813))) / 60.0) /
            60.0;
    const double eps = (eps0 + 0.00256 * std::cos(omega)) * kDegToRad;

    const double sin_lambda = std::sin(apparent_long);
    const double right_asc =
        std::atan2(std::cos(eps) * sin_lambda, std::cos(apparent_long));
    const double decl = std::asin(std::sin(eps) * sin_lambda);

    const double gmst_deg = wrap360(280.46061837 + 360.98564736629 * d +
                                    T * T * (0.000387933 - T / 38710000.0));
    double hour_angle = (gmst_deg + lon_deg) * kDegToRad - right_asc;
    hour_angle = std::remainder(hour_angle, 2.0 * std::numbers::pi);

    const double lat = lat_deg * kDegToRad;
    const double sin_alt = std::sin(decl) * std::sin(lat) +
                           std::cos(decl) * std::cos(lat) *
                               std::cos(hour_angle);
    const double altitude =
        std::asin(std::clamp(sin_alt, -1.0, 1.0)) * kRadToDeg;

    // Azimuth from north, clockwise. At the poles the direction is
    // meaningless; report 0 there.
    double azimuth = 0.0;
    if (std::abs(std::cos(lat)) > 1e-12) {
        const double y = -std::cos(decl) * std::sin(hour_angle);
        const double x =
            (std::sin(decl) - std::sin(lat) * sin_alt) / std::cos(lat);
        azimuth = std::atan2(y, x) * kRadToDeg;
        if (azimuth < 0.0) {
            azimuth += 360.0;
        }
        if (azimuth >= 360.0) {
            azimuth -= 360.0;
        }
    }
    return SunPosition{altitude, azimuth};
}

// Diffuse horizontal irradiance from global horizontal via a logistic model
// of the clearness index k_t = ghi/toa. k_t is clamped to [0,1]; reanalysis
// rounding can push ghi slightly above toa. At toa = 0 (night) k_t is 0.
inline double diffuse_fraction(double ghi, double toa)
{
    double kt = 0.0;
    if (toa > 0.0) {
        kt = std::clamp(ghi / toa, 0.0, 1.0);
    }
    return ghi / (1.0 + std::exp(-5.0033 + 8.6025 * kt));
}

// Direct irradiance diverges as 1/sin(altitude); below this altitude the
// direct component is treated as zero.
constexpr double kHorizonAltitudeDeg = 1.0;

// Plane-of-array irradiance: direct beam + sky diffuse + ground reflected.
inline double in_plane_irradiance(double ghi, double toa, double lat_deg,
                                  const SolarPanelSpec& panel,
                                  const SunPosition& sun)
{
    if (ghi <= 0.0) {
        return 0.0;
    }
    const double tilt = panel.tilt_deg(lat_deg) * kDegToRad;
    const double cos_tilt = std::cos(tilt);

    const double dhi = diffuse_fraction(ghi, toa);
    const double reflected = ghi * panel.albedo * (1.0 - cos_tilt) / 2.0;
    const double diffuse = dhi * (1.0 + cos_tilt) / 2.0;

    double direct = 0.0;
    if (sun.altitude_deg >= kHorizonAltitudeDeg) {
        const double alt = sun.altitude_deg * kDegToRad;
        const double sin_alt = std::sin(alt);
        const double dni = (ghi - dhi) / sin_alt;
        const double cos_aoi =
            sin_alt * cos_tilt +
            std::cos(alt) * std::sin(tilt) *
                std::cos((panel.panel_azimuth - sun.azimuth_deg) * kDegToRad);
        if (cos_aoi > 0.0 && dni > 0.0) {
            direct = dni * cos_aoi;
        }
    }
    return direct + diffuse + reflected;
}

// Electrical output per square metre of module. Temperature-dependent
// relative efficiency follows the Huld polynomial in normalized irradiance
// G' = I/1000 and T' = T_panel - 25 C, with T_panel driven off ambient by the
// irradiance coupling term.
inline double pv_power_per_m2(double in_plane_wm2, double t_amb_k,
                              const SolarPanelSpec& panel)
{
    if (in_plane_wm2 <= 0.0) {
        return 0.0;
    }
    const double g = in_plane_wm2 / 1000.0;
    const double lg = std::log(g);
    const double t_panel_c =
        (t_amb_k - 273.15) + panel.temp_coupling * in_plane_wm2;
    const double dt = t_panel_c - 25.0;
    const auto& k = panel.huld;
    const double eta_rel = 1.0 + k[0] * lg + k[1] * lg * lg + k[2] * dt +
                           k[3] * dt * lg + k[4] * dt * lg * lg +
                           k[5] * dt * dt;
    return std::max(0.0, panel.eta_std * eta_rel * in_plane_wm2);
}

} // namespace gridmix
