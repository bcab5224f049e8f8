#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "gridmix/costing.hpp"
#include "gridmix/dispatch.hpp"
#include "gridmix/errors.hpp"
#include "gridmix/generation.hpp"
#include "gridmix/optimizer.hpp"

namespace gridmix {

using json = nlohmann::json;

namespace detail {

inline void check_keys(const json& j, std::initializer_list<const char*> keys,
                       const std::string& context)
{
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const char* k : keys) {
            if (key == k) {
                known = true;
                break;
            }
        }
        if (!known) {
            fail_input("unknown key '", key, "' in ", context);
        }
    }
}

inline double num(const json& j, const char* key, double fallback)
{
    if (!j.contains(key)) {
        return fallback;
    }
    if (!j[key].is_number()) {
        fail_input("'", key, "' must be a number");
    }
    return j[key].get<double>();
}

inline std::vector<double> grid(const json& j, const char* key,
                                const std::string& context)
{
    if (!j.contains(key)) {
        fail_input("missing grid '", key, "' in ", context);
    }
    if (!j[key].is_array() || j[key].empty()) {
        fail_input("grid '", key, "' in ", context,
                   " must be a non-empty array of numbers");
    }
    std::vector<double> out;
    for (const auto& v : j[key]) {
        if (!v.is_number()) {
            fail_input("grid '", key, "' in ", context,
                       " must contain only numbers");
        }
        out.push_back(v.get<double>());
    }
    return out;
}

inline TechCosting tech_costing(const json& j, const char* name,
                                TechCosting base)
{
    if (!j.contains(name)) {
        return base;
    }
    const json& t = j[name];
    check_keys(t, {"overnight", "fixed_om", "lifetime"},
               std::string("costs.") + name);
    base.overnight = num(t, "overnight", base.overnight);
    base.fixed_om = num(t, "fixed_om", base.fixed_om);
    base.lifetime = num(t, "lifetime", base.lifetime);
    return base;
}

inline GridConfig grid_config(const json& j, const std::string& context)
{
    check_keys(j,
               {"overbuild", "wind_fraction", "storage_energy_gwh",
                "dispatch_capacity_gw", "threshold_fraction",
                "storage_power_gw"},
               context);
    GridConfig c;
    c.overbuild = num(j, "overbuild", c.overbuild);
    c.wind_fraction = num(j, "wind_fraction", c.wind_fraction);
    c.storage_energy = num(j, "storage_energy_gwh", c.storage_energy);
    c.dispatch_capacity = num(j, "dispatch_capacity_gw", c.dispatch_capacity);
    c.threshold_fraction = num(j, "threshold_fraction", c.threshold_fraction);
    if (j.contains("storage_power_gw") && !j["storage_power_gw"].is_null()) {
        c.storage_power = j["storage_power_gw"].get<double>();
    }
    c.validate();
    return c;
}

} // namespace detail

struct RequiredOverbuildSection {
    std::vector<double> targets;
    std::vector<double> storage_energy_gwh;
    double wind_fraction = 0.75;
    double bracket_max = 20.0;
    double resolution = 0.01;
};

struct CurveSection {
    std::vector<double> overbuild;
    std::vector<double> wind_fraction;
    std::optional<RequiredOverbuildSection> required_overbuild;
};

struct ScanSection {
    ScanSpec spec; // costs/financial filled in from the top level + overrides
};

// Everything a run needs, from one declarative JSON document. Paths and the
// worker count can be overridden from the environment (GRIDMIX_WEATHER_DIR,
// GRIDMIX_DEMAND_FILE, GRIDMIX_DATASET_FILE, GRIDMIX_OUTPUT_DIR,
// GRIDMIX_WORKERS).
struct RunConfig {
    std::filesystem::path weather_dir;
    std::filesystem::path demand_file;
    std::filesystem::path dataset_file;
    std::filesystem::path output_dir = ".";
    bool write_cell_profiles = false;

    SolarPanelSpec panel;
    TurbineSpec turbine;
    CostTable costs;
    FinancialParams financial;
    int workers = 1;

    std::optional<GridConfig> simulate_config;
    std::optional<ScanSection> scan;
    std::optional<CurveSection> curve;

    std::filesystem::path generation_cache() const
    {
        return output_dir / "generation_cf.csv";
    }

    static RunConfig load(const std::filesystem::path& path)
    {
        std::ifstream in(path);
        if (!in) {
            fail_input("cannot open config file: ", path.string());
        }
        json j;
        try {
            j = json::parse(in);
        } catch (const json::exception& e) {
            fail_input(path.string(), ": invalid JSON: ", e.what());
        }
        try {
            RunConfig c = from_json(j);
            c.apply_env_overrides();
            return c;
        } catch (const InputError& e) {
            fail_input(path.string(), ": ", e.what());
        } catch (const json::exception& e) {
            // Wrong JSON type for a known key.
            fail_input(path.string(), ": ", e.what());
        }
    }

    static RunConfig from_json(const json& j)
    {
        detail::check_keys(
            j,
            {"weather_dir", "demand_file", "dataset_file", "output_dir",
             "write_cell_profiles", "workers", "panel", "turbine", "financial",
             "costs", "simulate", "scan", "curve"},
            "config");
        RunConfig c;
        if (j.contains("weather_dir")) {
            c.weather_dir = j["weather_dir"].get<std::string>();
        }
        if (j.contains("demand_file")) {
            c.demand_file = j["demand_file"].get<std::string>();
        }
        if (j.contains("output_dir")) {
            c.output_dir = j["output_dir"].get<std::string>();
        }
        if (j.contains("dataset_file")) {
            c.dataset_file = j["dataset_file"].get<std::string>();
        } else {
            c.dataset_file = c.output_dir / "dataset.csv";
        }
        if (j.contains("write_cell_profiles")) {
            c.write_cell_profiles = j["write_cell_profiles"].get<bool>();
        }
        if (j.contains("workers")) {
            c.workers = j["workers"].get<int>();
            if (c.workers < 1) {
                fail_input("workers must be at least 1");
            }
        }

        if (j.contains("panel")) {
            const json& p = j["panel"];
            detail::check_keys(p,
                               {"eta_std", "albedo", "azimuth_deg",
                                "temp_coupling", "tilt_deg",
                                "huld_coefficients"},
                               "panel");
            c.panel.eta_std = detail::num(p, "eta_std", c.panel.eta_std);
            c.panel.albedo = detail::num(p, "albedo", c.panel.albedo);
            c.panel.panel_azimuth =
                detail::num(p, "azimuth_deg", c.panel.panel_azimuth);
            c.panel.temp_coupling =
                detail::num(p, "temp_coupling", c.panel.temp_coupling);
            if (p.contains("tilt_deg") && !p["tilt_deg"].is_null()) {
                c.panel.tilt_override_deg = p["tilt_deg"].get<double>();
            }
            if (p.contains("huld_coefficients")) {
                const auto coeffs =
                    detail::grid(p, "huld_coefficients", "panel");
                if (coeffs.size() != 6) {
                    fail_input("huld_coefficients must have 6 entries");
                }
                std::copy(coeffs.begin(), coeffs.end(), c.panel.huld.begin());
            }
            c.panel.validate();
        }

        if (j.contains("turbine")) {
            const json& t = j["turbine"];
            detail::check_keys(t,
                               {"rotor_diameter_m", "hub_height_m",
                                "rated_power_mw", "cut_in_ms", "cut_out_ms",
                                "cp"},
                               "turbine");
            c.turbine.rotor_diameter =
                detail::num(t, "rotor_diameter_m", c.turbine.rotor_diameter);
            c.turbine.hub_height =
                detail::num(t, "hub_height_m", c.turbine.hub_height);
            c.turbine.rated_power =
                detail::num(t, "rated_power_mw", c.turbine.rated_power);
            c.turbine.cut_in = detail::num(t, "cut_in_ms", c.turbine.cut_in);
            c.turbine.cut_out =
                detail::num(t, "cut_out_ms", c.turbine.cut_out);
            c.turbine.cp = detail::num(t, "cp", c.turbine.cp);
            c.turbine.validate();
        }

        if (j.contains("financial")) {
            const json& f = j["financial"];
            detail::check_keys(
                f, {"build_time_years", "inflation", "nominal_rate"},
                "financial");
            c.financial.build_time =
                detail::num(f, "build_time_years", c.financial.build_time);
            c.financial.inflation =
                detail::num(f, "inflation", c.financial.inflation);
            c.financial.nominal_rate =
                detail::num(f, "nominal_rate", c.financial.nominal_rate);
            c.financial.validate();
        }

        if (j.contains("costs")) {
            const json& costs = j["costs"];
            detail::check_keys(
                costs, {"solar", "wind", "storage", "dispatchable"}, "costs");
            c.costs.solar = detail::tech_costing(costs, "solar",
                                                 c.costs.solar);
            c.costs.wind = detail::tech_costing(costs, "wind", c.costs.wind);
            c.costs.storage =
                detail::tech_costing(costs, "storage", c.costs.storage);
            c.costs.dispatchable = detail::tech_costing(
                costs, "dispatchable", c.costs.dispatchable);
            c.costs.validate();
        }

        if (j.contains("simulate")) {
            c.simulate_config = detail::grid_config(j["simulate"], "simulate");
        }

        if (j.contains("scan")) {
            const json& s = j["scan"];
            detail::check_keys(s,
                               {"overbuild", "wind_fraction",
                                "storage_energy_gwh", "dispatch_capacity_gw",
                                "threshold_fraction", "min_reliability",
                                "max_gas_share", "cost_overrides"},
                               "scan");
            ScanSection section;
            section.spec.overbuild = detail::grid(s, "overbuild", "scan");
            section.spec.wind_fraction =
                detail::grid(s, "wind_fraction", "scan");
            section.spec.storage_energy =
                detail::grid(s, "storage_energy_gwh", "scan");
            section.spec.dispatch_capacity =
                detail::grid(s, "dispatch_capacity_gw", "scan");
            section.spec.threshold_fraction =
                detail::grid(s, "threshold_fraction", "scan");
            section.spec.min_reliability =
                detail::num(s, "min_reliability", 0.0);
            section.spec.max_gas_share = detail::num(s, "max_gas_share", 1.0);
            section.spec.costs = c.costs;
            section.spec.financial = c.financial;
            if (s.contains("cost_overrides")) {
                const json& o = s["cost_overrides"];
                detail::check_keys(
                    o, {"solar", "wind", "storage", "dispatchable"},
                    "scan.cost_overrides");
                section.spec.costs.solar = detail::tech_costing(
                    o, "solar", section.spec.costs.solar);
                section.spec.costs.wind =
                    detail::tech_costing(o, "wind", section.spec.costs.wind);
                section.spec.costs.storage = detail::tech_costing(
                    o, "storage", section.spec.costs.storage);
                section.spec.costs.dispatchable = detail::tech_costing(
                    o, "dispatchable", section.spec.costs.dispatchable);
            }
            section.spec.validate();
            c.scan = std::move(section);
        }

        if (j.contains("curve")) {
            const json& v = j["curve"];
            detail::check_keys(
                v, {"overbuild", "wind_fraction", "required_overbuild"},
                "curve");
            CurveSection section;
            section.overbuild = detail::grid(v, "overbuild", "curve");
            section.wind_fraction = detail::grid(v, "wind_fraction", "curve");
            if (v.contains("required_overbuild")) {
                const json& r = v["required_overbuild"];
                detail::check_keys(r,
                                   {"targets", "storage_energy_gwh",
                                    "wind_fraction", "bracket_max",
                                    "resolution"},
                                   "curve.required_overbuild");
                RequiredOverbuildSection ro;
                ro.targets = detail::grid(r, "targets", "required_overbuild");
                ro.storage_energy_gwh =
                    detail::grid(r, "storage_energy_gwh",
                                 "required_overbuild");
                ro.wind_fraction =
                    detail::num(r, "wind_fraction", ro.wind_fraction);
                ro.bracket_max =
                    detail::num(r, "bracket_max", ro.bracket_max);
                ro.resolution = detail::num(r, "resolution", ro.resolution);
                section.required_overbuild = std::move(ro);
            }
            c.curve = std::move(section);
        }
        return c;
    }

    void apply_env_overrides()
    {
        if (const char* v = std::getenv("GRIDMIX_WEATHER_DIR")) {
            weather_dir = v;
        }
        if (const char* v = std::getenv("GRIDMIX_DEMAND_FILE")) {
            demand_file = v;
        }
        if (const char* v = std::getenv("GRIDMIX_DATASET_FILE")) {
            dataset_file = v;
        }
        if (const char* v = std::getenv("GRIDMIX_OUTPUT_DIR")) {
            output_dir = v;
        }
        if (const char* v = std::getenv("GRIDMIX_WORKERS")) {
            workers = std::atoi(v);
            if (workers < 1) {
                fail_input("GRIDMIX_WORKERS must be a positive integer, got '",
                           v, "'");
            }
        }
    }
};

} // namespace gridmix
