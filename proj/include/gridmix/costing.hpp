#pragma once

#include <cmath>
#include <string_view>

#include "gridmix/dispatch.hpp"
#include "gridmix/errors.hpp"

namespace gridmix {

// Per-technology cost inputs. Solar, wind and dispatchable are priced per kW
// of capacity; storage is priced per kWh of energy capacity. All dollar
// figures are 2025 dollars.
struct TechCosting {
    double overnight = 0.0; // $/kW ($/kWh for storage)
    double fixed_om = 0.0;  // $/kW-yr ($/kWh-yr for storage)
    double lifetime = 1.0;  // years

    void validate(std::string_view name) const
    {
        if (!(overnight > 0.0) || !(fixed_om > 0.0) || !(lifetime >= 1.0)) {
            fail_input("cost table entry '", std::string(name),
                       "' must have positive overnight/O&M and lifetime >= 1");
        }
    }
};

struct CostTable {
    TechCosting solar{790.0, 10.0, 25.0};
    TechCosting wind{1540.0, 40.0, 25.0};
    TechCosting storage{200.0, 10.0, 15.0};        // per kWh
    TechCosting dispatchable{1000.0, 20.0, 30.0};

    void validate() const
    {
        solar.validate("solar");
        wind.validate("wind");
        storage.validate("storage");
        dispatchable.validate("dispatchable");
    }
};

struct FinancialParams {
    double build_time = 2.0;    // years
    double inflation = 0.04;    // /yr
    double nominal_rate = 0.08; // /yr

    double real_rate() const { return nominal_rate - inflation; }

    void validate() const
    {
        if (!(build_time > 0.0)) {
            fail_input("build_time must be positive, got ", build_time);
        }
        if (!(nominal_rate >= inflation && inflation >= 0.0)) {
            fail_input("financial rates must satisfy nominal >= inflation >= "
                       "0; got ",
                       nominal_rate, " and ", inflation);
        }
    }
};

namespace detail {

// J(b) = integral over [0,T] of tau*(T-tau)*e^(b*tau) dtau.
//
// The antiderivative (T/b^2)(e^(bT)+1) - (2/b^3)(e^(bT)-1) cancels
// catastrophically as b -> 0, so small |bT| switches to the power series
// J = sum_k b^k T^(k+3) / (k! (k+2)(k+3)), whose k=0 term is the exact
// b = 0 value T^3/6.
inline double spending_integral(double b, double build_time)
{
    const double bt = b * build_time;
    if (std::abs(bt) < 1e-2) {
        double term =
            build_time * build_time * build_time / 6.0; // k = 0 term
        double sum = term;
        for (int k = 1; k < 24; ++k) {
            term *= bt * double(k + 1) / (double(k) * double(k + 3));
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) {
                break;
            }
        }
        return sum;
    }
    const double ebt = std::exp(bt);
    const double t_over_b2 = build_time / (b * b);
    return t_over_b2 * (ebt + 1.0) - (2.0 / (b * b * b)) * (ebt - 1.0);
}

} // namespace detail

// Total investment per kW at construction start, from the overnight cost:
// spending follows a parabolic profile over the build period, escalated at
// the inflation rate and carried at the nominal rate to completion, then
// discounted back.
//
//   P0 = I_on * (6/T^3) * e^(-iT) * integral tau(T-tau) e^(pi tau) e^(i(T-tau))
//
// The exponentials combine to e^((pi-i) tau) under the integral.
inline double investment_cost(double overnight, const FinancialParams& fin)
{
    fin.validate();
    const double b = fin.inflation - fin.nominal_rate;
    const double t = fin.build_time;
    return overnight * (6.0 / (t * t * t)) * detail::spending_integral(b, t);
}

// Capital recovery: level annual payment that repays P0 over the lifetime at
// the real rate, with continuous compounding:
//
//   A = P0 * e^(rL) (e^r - 1) / (e^(rL) - 1)  =  P0 * (e^r - 1)/(1 - e^(-rL))
//
// The second form stays finite for large rL and degrades gracefully to the
// r = 0 limit P0/L.
inline double annual_payment(double p0, double real_rate, double lifetime)
{
    if (!(lifetime >= 1.0)) {
        fail_input("lifetime must be at least one year, got ", lifetime);
    }
    if (real_rate == 0.0) {
        return p0 / lifetime;
    }
    return p0 * std::expm1(real_rate) / -std::expm1(-real_rate * lifetime);
}

// $/kW-yr (or $/kWh-yr for storage) once the loan payment is stacked on the
// fixed O&M.
inline double annual_capacity_rate(const TechCosting& tech,
                                   const FinancialParams& fin)
{
    return annual_payment(investment_cost(tech.overnight, fin),
                          fin.real_rate(), tech.lifetime) +
           tech.fixed_om;
}

struct CostBreakdown {
    double solar = 0.0; // $/yr
    double wind = 0.0;
    double storage = 0.0;
    double dispatchable = 0.0;
    double total = 0.0; // always the exact sum of the four components

    // Installed quantities behind the dollars, for reporting.
    double solar_gw = 0.0;
    double wind_gw = 0.0;
    double storage_gwh = 0.0;
    double dispatchable_gw = 0.0;
};

// Annual system cost for a configuration: each technology's installed
// quantity times its annual rate, summed. Variable and fuel costs are out of
// scope; the dispatchable source runs rarely enough that they are noise.
inline CostBreakdown annual_system_cost(const GridConfig& config,
                                        double peak_demand_gw,
                                        const CostTable& costs,
                                        const FinancialParams& fin)
{
    config.validate();
    costs.validate();
    if (!(peak_demand_gw >= 0.0)) {
        fail_input("peak demand must be non-negative, got ", peak_demand_gw);
    }
    constexpr double kKwPerGw = 1e6; // also kWh per GWh

    CostBreakdown b;
    b.solar_gw = config.overbuild * (1.0 - config.wind_fraction) *
                 peak_demand_gw;
    b.wind_gw = config.overbuild * config.wind_fraction * peak_demand_gw;
    b.storage_gwh = config.storage_energy;
    b.dispatchable_gw = config.dispatch_capacity;

    b.solar = b.solar_gw * kKwPerGw * annual_capacity_rate(costs.solar, fin);
    b.wind = b.wind_gw * kKwPerGw * annual_capacity_rate(costs.wind, fin);
    b.storage =
        b.storage_gwh * kKwPerGw * annual_capacity_rate(costs.storage, fin);
    b.dispatchable = b.dispatchable_gw * kKwPerGw *
                     annual_capacity_rate(costs.dispatchable, fin);
    b.total = b.solar + b.wind + b.storage + b.dispatchable;
    return b;
}

} // namespace gridmix
