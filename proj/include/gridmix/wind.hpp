#pragma once

#include <cmath>
#include <numbers>

#include "gridmix/errors.hpp"

namespace gridmix {

constexpr double kDryAirGasConstant = 287.05; // J/(kg K)
constexpr double kStandardGravity = 9.80665;  // m/s2

struct TurbineSpec {
    double rotor_diameter = 110.0; // m
    double hub_height = 100.0;     // m
    double rated_power = 4.1;      // MW
    double cut_in = 3.0;           // m/s
    double cut_out = 25.0;         // m/s
    double cp = 0.40;              // performance coefficient

    double swept_area() const
    {
        const double r = rotor_diameter / 2.0;
        return std::numbers::pi * r * r;
    }

    void validate() const
    {
        if (!(cut_in > 0.0 && cut_in < cut_out)) {
            fail_input("turbine cut-in/cut-out speeds invalid: ", cut_in, ", ",
                       cut_out);
        }
        if (!(rated_power > 0.0)) {
            fail_input("turbine rated power must be positive, got ",
                       rated_power);
        }
        if (!(cp > 0.0 && cp < 0.593)) {
            fail_input("turbine cp must be in (0, 0.593), got ", cp);
        }
    }
};

// Power-law extrapolation from the two measured levels (10 m and 50 m) to
// hub height. The shear exponent is derived per sample from the two levels
// themselves: a = ln(v50/v10) / ln(50/10). If either level is zero the
// exponent is undefined and the 50 m speed is used unscaled.
inline double wind_speed_at_hub(double v10, double v50, double hub_height_m)
{
    if (v10 <= 0.0 || v50 <= 0.0) {
        return v50;
    }
    const double shear = std::log(v50 / v10) / std::log(50.0 / 10.0);
    return v50 * std::pow(hub_height_m / 50.0, shear);
}

// Surface density from the ideal gas law, decayed to hub height with the
// isothermal barometric factor. The temperature profile over 100 m changes
// the answer by well under 0.1%.
inline double air_density_at_hub(double t_amb_k, double p_surf_pa,
                                 double hub_height_m)
{
    const double rho_surface = p_surf_pa / (kDryAirGasConstant * t_amb_k);
    const double decay =
        std::exp(-kStandardGravity * hub_height_m /
                 (kDryAirGasConstant * t_amb_k));
    return rho_surface * decay;
}

// Piecewise turbine curve: zero outside [cut_in, cut_out], cubic in between,
// capped at rated power. Returns MW.
inline double turbine_power(double v_hub, double rho,
                            const TurbineSpec& turbine)
{
    if (v_hub <= turbine.cut_in || v_hub >= turbine.cut_out) {
        return 0.0;
    }
    const double watts =
        0.5 * rho * turbine.swept_area() * turbine.cp * v_hub * v_hub * v_hub;
    return std::min(watts / 1e6, turbine.rated_power);
}

} // namespace gridmix
