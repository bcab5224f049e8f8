// gridmix command-line entry point.
//
// Subcommands:
//   build-dataset  weather + demand files -> canonical dataset
//   simulate       one dispatch simulation -> simulation_report.json
//   scan           exhaustive five-parameter scan -> scan table + optimum
//   curve          reliability and required-overbuild tables
//
// Exit codes: 0 success (an infeasible scan is still success), 1 input
// error, 2 internal invariant violation.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <numeric>
#include <string>

#include <CLI11.hpp>

#include "gridmix/config.hpp"
#include "gridmix/io.hpp"
#include "gridmix/optimizer.hpp"
#include "gridmix/pipeline.hpp"

namespace {

using gridmix::json;

json config_to_json(const gridmix::GridConfig& c)
{
    json j;
    j["overbuild"] = c.overbuild;
    j["wind_fraction"] = c.wind_fraction;
    j["storage_energy_gwh"] = c.storage_energy;
    j["dispatch_capacity_gw"] = c.dispatch_capacity;
    j["threshold_fraction"] = c.threshold_fraction;
    if (c.storage_power) {
        j["storage_power_gw"] = *c.storage_power;
    }
    return j;
}

json outage_to_json(const gridmix::OutageEvent& o)
{
    json j;
    j["start"] = gridmix::format_timestamp(o.start);
    j["duration_hours"] = o.duration;
    j["min_fraction_met"] = o.min_fraction_met;
    const double mean =
        std::accumulate(o.hourly_fraction_met.begin(),
                        o.hourly_fraction_met.end(), 0.0) /
        double(o.hourly_fraction_met.size());
    j["mean_fraction_met"] = mean;
    j["hourly_fraction_met"] = o.hourly_fraction_met;
    return j;
}

void write_json(const std::filesystem::path& path, const json& j)
{
    std::ofstream out(path);
    if (!out) {
        gridmix::fail_input("cannot open file for writing: ", path.string());
    }
    out << j.dump(2) << '\n';
    if (!out) {
        gridmix::fail_input("write failed: ", path.string());
    }
}

int cmd_build_dataset(const gridmix::RunConfig& config)
{
    const gridmix::BuildSummary summary = gridmix::build_dataset(config);
    std::cout << "dataset written: " << config.dataset_file.string() << "\n"
              << "  cells:       "
              << (summary.generation_from_cache
                      ? std::string("(generation reused from cache)")
                      : std::to_string(summary.cell_count))
              << "\n"
              << "  epoch:       "
              << gridmix::format_timestamp(summary.epoch.begin) << " .. "
              << gridmix::format_timestamp(summary.epoch.end) << " ("
              << summary.epoch.size() << " hours)\n"
              << "  peak demand: " << summary.peak_demand_gw << " GW\n"
              << "  mean demand: " << summary.mean_demand_gw << " GW\n";
    return 0;
}

int cmd_simulate(const gridmix::RunConfig& config, bool trace)
{
    if (!config.simulate_config) {
        gridmix::fail_input("config has no 'simulate' section");
    }
    if (!std::filesystem::exists(config.dataset_file)) {
        gridmix::fail_input("dataset file does not exist: ",
                            config.dataset_file.string(),
                            " (run build-dataset first)");
    }
    const gridmix::Dataset data = gridmix::read_dataset(config.dataset_file);
    const gridmix::GridConfig& grid = *config.simulate_config;

    gridmix::SimulationResult result;
    std::filesystem::create_directories(config.output_dir);
    if (trace) {
        std::vector<gridmix::HourState> states;
        result = gridmix::simulate_with_trace(grid, data, states);
        gridmix::write_trace(config.output_dir / "trace.csv", data.epoch,
                             states);
    } else {
        result = gridmix::simulate(grid, data);
    }

    json report;
    report["config"] = config_to_json(grid);
    report["initial_storage_level"] = "full";
    report["reliability"] = result.reliability;
    report["gas_share"] = result.gas_share;
    report["lole_hours_per_year"] = result.lole_hours_per_year;
    report["demand_energy_gwh"] = result.demand_energy;
    report["gas_energy_gwh"] = result.gas_energy;
    report["curtailed_energy_gwh"] = result.curtailed_energy;
    report["unserved_energy_gwh"] = result.unserved_energy;
    report["outage_count"] = result.outages.size();
    json outages = json::array();
    for (const auto& o : result.outages) {
        outages.push_back(outage_to_json(o));
    }
    report["outages"] = std::move(outages);
    write_json(config.output_dir / "simulation_report.json", report);

    std::cout << "reliability:  " << result.reliability << "\n"
              << "gas share:    " << result.gas_share << "\n"
              << "LOLE:         " << result.lole_hours_per_year
              << " hours/year\n"
              << "outages:      " << result.outages.size() << "\n"
              << "report:       "
              << (config.output_dir / "simulation_report.json").string()
              << "\n";
    return 0;
}

int cmd_scan(const gridmix::RunConfig& config, bool resume)
{
    if (!config.scan) {
        gridmix::fail_input("config has no 'scan' section");
    }
    if (!std::filesystem::exists(config.dataset_file)) {
        gridmix::fail_input("dataset file does not exist: ",
                            config.dataset_file.string(),
                            " (run build-dataset first)");
    }
    const gridmix::Dataset data = gridmix::read_dataset(config.dataset_file);
    const gridmix::ScanSpec& spec = config.scan->spec;

    std::filesystem::create_directories(config.output_dir);
    gridmix::ScanOptions options;
    options.workers = config.workers;
    options.checkpoint_path = config.output_dir / "scan_checkpoint.csv";
    options.resume = resume;

    const gridmix::ScanOutcome outcome = gridmix::scan(spec, data, options);
    gridmix::write_scan_table(config.output_dir / "scan_table.csv", spec,
                              outcome.table);

    const gridmix::OptimumReport& opt = outcome.report;
    json report;
    report["scan_complete"] = outcome.complete;
    report["evaluated_count"] = opt.evaluated_count;
    report["feasible_count"] = opt.feasible_count;
    report["constraints"] = {{"min_reliability", spec.min_reliability},
                             {"max_gas_share", spec.max_gas_share}};
    report["initial_storage_level"] = "full";
    report["feasible"] = opt.chosen.has_value();
    if (opt.chosen) {
        report["chosen"] = config_to_json(*opt.chosen);
        report["annual_cost_usd"] = opt.annual_cost;
        report["annual_cost_billion_usd"] = opt.annual_cost / 1e9;
        report["reliability"] = opt.reliability;
        report["gas_share"] = opt.gas_share;
        report["cost_breakdown"] = {
            {"solar_usd", opt.breakdown.solar},
            {"wind_usd", opt.breakdown.wind},
            {"storage_usd", opt.breakdown.storage},
            {"dispatchable_usd", opt.breakdown.dispatchable},
            {"total_usd", opt.breakdown.total},
            {"solar_gw", opt.breakdown.solar_gw},
            {"wind_gw", opt.breakdown.wind_gw},
            {"storage_gwh", opt.breakdown.storage_gwh},
            {"dispatchable_gw", opt.breakdown.dispatchable_gw}};
        json histogram = json::object();
        for (const auto& [duration, count] :
             opt.outages.duration_histogram) {
            histogram[std::to_string(duration)] = count;
        }
        report["outage_duration_histogram"] = std::move(histogram);
        report["outage_min_fraction_met"] = opt.outages.min_fraction_met;
    } else {
        report["message"] = "no feasible configuration";
    }
    write_json(config.output_dir / "optimum_report.json", report);

    std::cout << "evaluated: " << opt.evaluated_count << " of "
              << spec.point_count() << " grid points\n";
    if (!outcome.complete) {
        std::cout << "scan interrupted; rerun with --resume to continue\n";
    }
    if (opt.chosen) {
        std::cout << "optimum: cost $" << opt.annual_cost / 1e9
                  << "B/yr at overbuild " << opt.chosen->overbuild
                  << ", wind fraction " << opt.chosen->wind_fraction
                  << ", storage " << opt.chosen->storage_energy
                  << " GWh, dispatchable " << opt.chosen->dispatch_capacity
                  << " GW, threshold " << opt.chosen->threshold_fraction
                  << "\n";
    } else {
        std::cout << "no feasible configuration\n";
    }
    std::cout << "table:   "
              << (config.output_dir / "scan_table.csv").string() << "\n"
              << "report:  "
              << (config.output_dir / "optimum_report.json").string() << "\n";
    return 0;
}

int cmd_curve(const gridmix::RunConfig& config)
{
    if (!config.curve) {
        gridmix::fail_input("config has no 'curve' section");
    }
    if (!std::filesystem::exists(config.dataset_file)) {
        gridmix::fail_input("dataset file does not exist: ",
                            config.dataset_file.string(),
                            " (run build-dataset first)");
    }
    const gridmix::Dataset data = gridmix::read_dataset(config.dataset_file);
    const gridmix::CurveSection& section = *config.curve;

    std::filesystem::create_directories(config.output_dir);
    const gridmix::ReliabilityCurve curve = gridmix::reliability_curve(
        section.overbuild, section.wind_fraction, data);
    {
        gridmix::CsvWriter out(config.output_dir / "reliability_curve.csv");
        out.row("overbuild", "wind_fraction", "reliability");
        for (std::size_t i = 0; i < curve.overbuild.size(); ++i) {
            for (std::size_t j = 0; j < curve.wind_fraction.size(); ++j) {
                out.row(curve.overbuild[i], curve.wind_fraction[j],
                        curve.values[i][j]);
            }
        }
        out.close();
    }
    std::cout << "reliability curve: "
              << (config.output_dir / "reliability_curve.csv").string()
              << "\n";

    if (section.required_overbuild) {
        const auto& ro = *section.required_overbuild;
        gridmix::CsvWriter out(config.output_dir / "required_overbuild.csv");
        out.row("reliability_target", "storage_energy_gwh", "wind_fraction",
                "required_overbuild", "reachable");
        for (const double target : ro.targets) {
            for (const double storage : ro.storage_energy_gwh) {
                const auto overbuild = gridmix::required_overbuild(
                    target, storage, ro.wind_fraction, data, 0.0,
                    ro.bracket_max, ro.resolution);
                out.row(target, storage, ro.wind_fraction,
                        overbuild.value_or(-1.0),
                        overbuild ? "yes" : "no");
            }
        }
        out.close();
        std::cout << "required overbuild: "
                  << (config.output_dir / "required_overbuild.csv").string()
                  << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Single-node grid dispatch simulation and capacity-mix "
                 "optimization"};
    app.require_subcommand(1);

    std::string config_path;
    int workers_override = 0;
    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path,
                        "Path to the run configuration")
            ->required();
        cmd->add_option("--workers", workers_override,
                        "Parallel workers for scans (overrides the config)")
            ->check(CLI::PositiveNumber);
    };

    auto* build = app.add_subcommand("build-dataset",
                                     "Build the canonical dataset from "
                                     "weather and demand files");
    add_common(build);
    auto* sim =
        app.add_subcommand("simulate", "Run one dispatch simulation");
    add_common(sim);
    bool trace = false;
    sim->add_flag("--trace", trace, "Write the per-hour dispatch trace");
    auto* scan = app.add_subcommand(
        "scan", "Exhaustive scan for the minimum-cost feasible mix");
    add_common(scan);
    bool resume = false;
    scan->add_flag("--resume", resume,
                   "Continue from an existing scan checkpoint");
    auto* curve = app.add_subcommand(
        "curve", "Reliability and required-overbuild tables");
    add_common(curve);

    CLI11_PARSE(app, argc, argv);

    try {
        gridmix::RunConfig config = gridmix::RunConfig::load(config_path);
        if (workers_override > 0) {
            config.workers = workers_override;
        }
        if (build->parsed()) {
            return cmd_build_dataset(config);
        }
        if (sim->parsed()) {
            return cmd_simulate(config, trace);
        }
        if (scan->parsed()) {
            return cmd_scan(config, resume);
        }
        if (curve->parsed()) {
            return cmd_curve(config);
        }
        return 2;
    } catch (const gridmix::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
}
