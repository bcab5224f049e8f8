#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "gridmix/costing.hpp"
#include "gridmix/csv.hpp"
#include "gridmix/dispatch.hpp"
#include "gridmix/errors.hpp"

namespace gridmix {

// Work order for an exhaustive scan: one sorted value grid per GridConfig
// parameter, the two feasibility constraints, and the cost assumptions to
// price each point with.
struct ScanSpec {
    std::vector<double> overbuild;
    std::vector<double> wind_fraction;
    std::vector<double> storage_energy;
    std::vector<double> dispatch_capacity;
    std::vector<double> threshold_fraction;

    double min_reliability = 0.0;
    double max_gas_share = 1.0;

    CostTable costs;
    FinancialParams financial;

    void validate() const
    {
        auto check_grid = [](const std::vector<double>& g, const char* name) {
            if (g.empty()) {
                fail_input("scan grid '", name, "' is empty");
            }
            for (std::size_t i = 0; i < g.size(); ++i) {
                if (!std::isfinite(g[i])) {
                    fail_input("scan grid '", name,
                               "' contains a non-finite value");
                }
                if (i > 0 && !(g[i] > g[i - 1])) {
                    fail_input("scan grid '", name,
                               "' must be strictly increasing");
                }
            }
        };
        check_grid(overbuild, "overbuild");
        check_grid(wind_fraction, "wind_fraction");
        check_grid(storage_energy, "storage_energy");
        check_grid(dispatch_capacity, "dispatch_capacity");
        check_grid(threshold_fraction, "threshold_fraction");
        if (!(min_reliability >= 0.0 && min_reliability <= 1.0)) {
            fail_input("min_reliability must be in [0,1]");
        }
        if (!(max_gas_share >= 0.0 && max_gas_share <= 1.0)) {
            fail_input("max_gas_share must be in [0,1]");
        }
        costs.validate();
        financial.validate();
    }

    std::size_t point_count() const
    {
        return overbuild.size() * wind_fraction.size() *
               storage_energy.size() * dispatch_capacity.size() *
               threshold_fraction.size();
    }

    // Flat index is row-major in (overbuild, wind_fraction, storage_energy,
    // dispatch_capacity, threshold_fraction) over ascending grids, so index
    // order IS lexicographic order of the parameter tuple. The tie-break
    // rule "lowest cost, then lexicographically smallest tuple" therefore
    // reduces to "lowest (cost, index)".
    GridConfig config_at(std::size_t flat) const
    {
        GridConfig c;
        c.threshold_fraction =
            threshold_fraction[flat % threshold_fraction.size()];
        flat /= threshold_fraction.size();
        c.dispatch_capacity =
            dispatch_capacity[flat % dispatch_capacity.size()];
        flat /= dispatch_capacity.size();
        c.storage_energy = storage_energy[flat % storage_energy.size()];
        flat /= storage_energy.size();
        c.wind_fraction = wind_fraction[flat % wind_fraction.size()];
        flat /= wind_fraction.size();
        c.overbuild = overbuild[flat];
        return c;
    }
};

struct PointMetrics {
    double annual_cost = 0.0;
    double reliability = 0.0;
    double gas_share = 0.0;
    bool evaluated = false;

    bool feasible(const ScanSpec& spec) const
    {
        return reliability >= spec.min_reliability &&
               gas_share <= spec.max_gas_share;
    }
};

struct OutageSummary {
    std::map<std::int64_t, std::int64_t> duration_histogram; // hours -> count
    std::vector<double> min_fraction_met; // one entry per outage
};

inline OutageSummary summarize_outages(const SimulationResult& result)
{
    OutageSummary s;
    for (const auto& outage : result.outages) {
        s.duration_histogram[outage.duration] += 1;
        s.min_fraction_met.push_back(outage.min_fraction_met);
    }
    return s;
}

struct OptimumReport {
    std::optional<GridConfig> chosen; // empty when no point is feasible
    double annual_cost = 0.0;
    CostBreakdown breakdown;
    double reliability = 0.0;
    double gas_share = 0.0;
    OutageSummary outages;
    std::size_t feasible_count = 0;
    std::size_t evaluated_count = 0;
};

struct ScanOptions {
    int workers = 1;
    // When set, completed points stream to this file and a later run with
    // resume=true skips them. The file is keyed to the (spec, dataset)
    // content hash, so a stale checkpoint cannot be replayed silently.
    std::optional<std::filesystem::path> checkpoint_path;
    std::size_t checkpoint_chunk = 1024;
    bool resume = false;
    std::function<bool()> should_stop; // polled between chunks
};

struct ScanOutcome {
    OptimumReport report;
    std::vector<PointMetrics> table; // flat-indexed, one row per grid point
    bool complete = true;            // false when stopped early
};

namespace detail {

inline void fnv1a(std::uint64_t& h, const void* data, std::size_t bytes)
{
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < bytes; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
}

inline void hash_doubles(std::uint64_t& h, const std::vector<double>& v)
{
    const std::uint64_t n = v.size();
    fnv1a(h, &n, sizeof n);
    if (!v.empty()) {
        fnv1a(h, v.data(), v.size() * sizeof(double));
    }
}

} // namespace detail

// Content hash binding a checkpoint to the exact scan it belongs to.
inline std::uint64_t scan_content_hash(const ScanSpec& spec,
                                       const Dataset& data)
{
    std::uint64_t h = 1469598103934665603ULL;
    detail::hash_doubles(h, spec.overbuild);
    detail::hash_doubles(h, spec.wind_fraction);
    detail::hash_doubles(h, spec.storage_energy);
    detail::hash_doubles(h, spec.dispatch_capacity);
    detail::hash_doubles(h, spec.threshold_fraction);
    const double scalars[] = {spec.min_reliability,
                              spec.max_gas_share,
                              spec.costs.solar.overnight,
                              spec.costs.solar.fixed_om,
                              spec.costs.solar.lifetime,
                              spec.costs.wind.overnight,
                              spec.costs.wind.fixed_om,
                              spec.costs.wind.lifetime,
                              spec.costs.storage.overnight,
                              spec.costs.storage.fixed_om,
                              spec.costs.storage.lifetime,
                              spec.costs.dispatchable.overnight,
                              spec.costs.dispatchable.fixed_om,
                              spec.costs.dispatchable.lifetime,
                              spec.financial.build_time,
                              spec.financial.inflation,
                              spec.financial.nominal_rate};
    detail::fnv1a(h, scalars, sizeof scalars);
    detail::fnv1a(h, &data.epoch, sizeof data.epoch);
    detail::hash_doubles(h, data.solar_cf);
    detail::hash_doubles(h, data.wind_cf);
    detail::hash_doubles(h, data.demand_gw);
    return h;
}

namespace detail {

inline void load_checkpoint(const std::filesystem::path& path,
                            std::uint64_t expected_hash,
                            std::vector<PointMetrics>& table)
{
    CsvReader reader(path);
    const auto hash_col = reader.column("scan_hash");
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(expected_hash));
    bool checked = false;
    const auto idx_col = reader.column("index");
    const auto cost_col = reader.column("annual_cost_usd");
    const auto rel_col = reader.column("reliability");
    const auto gas_col = reader.column("gas_share");
    while (reader.next()) {
        if (!checked) {
            if (reader.cell(hash_col) != buf) {
                reader.fail("checkpoint belongs to a different scan "
                            "(content hash mismatch)");
            }
            checked = true;
        }
        const auto idx = std::size_t(reader.number(idx_col));
        if (idx >= table.size()) {
            reader.fail("checkpoint index out of range");
        }
        table[idx].annual_cost = reader.number(cost_col);
        table[idx].reliability = reader.number(rel_col);
        table[idx].gas_share = reader.number(gas_col);
        table[idx].evaluated = true;
    }
}

} // namespace detail

// Evaluates every grid point exactly once (simulation + annual cost) and
// selects the cheapest point meeting both constraints. Points are
// independent work items; the reduction happens after the parallel phase on
// the flat-indexed table, so the optimum is identical for any worker count.
inline ScanOutcome scan(const ScanSpec& spec, const Dataset& data,
                        const ScanOptions& options = {})
{
    spec.validate();
    if (data.hours() == 0) {
        fail_input("cannot scan an empty dataset");
    }

    const std::size_t total = spec.point_count();
    ScanOutcome out;
    out.table.assign(total, PointMetrics{});

    const std::uint64_t content_hash = scan_content_hash(spec, data);
    std::unique_ptr<CsvWriter> checkpoint;
    char hash_text[24];
    std::snprintf(hash_text, sizeof(hash_text), "%016llx",
                  static_cast<unsigned long long>(content_hash));
    if (options.checkpoint_path) {
        const bool have_old =
            std::filesystem::exists(*options.checkpoint_path);
        if (options.resume && have_old) {
            detail::load_checkpoint(*options.checkpoint_path, content_hash,
                                    out.table);
        }
        // Rewrite the checkpoint from scratch, carrying over resumed rows.
        checkpoint =
            std::make_unique<CsvWriter>(*options.checkpoint_path);
        checkpoint->row("scan_hash", "index", "annual_cost_usd", "reliability",
                        "gas_share");
        for (std::size_t i = 0; i < total; ++i) {
            if (out.table[i].evaluated) {
                checkpoint->row(hash_text, i, out.table[i].annual_cost,
                                out.table[i].reliability,
                                out.table[i].gas_share);
            }
        }
    }

    const auto evaluate = [&](std::size_t i) {
        const GridConfig config = spec.config_at(i);
        const SimulationResult sim = simulate(config, data);
        PointMetrics m;
        m.annual_cost =
            annual_system_cost(config, data.peak_demand_gw, spec.costs,
                               spec.financial)
                .total;
        m.reliability = sim.reliability;
        m.gas_share = sim.gas_share;
        m.evaluated = true;
        out.table[i] = m;
    };

    const std::size_t chunk =
        std::max<std::size_t>(1, options.checkpoint_chunk);
    std::atomic<std::size_t> next_chunk{0};
    std::atomic<bool> stopped{false};
    std::mutex checkpoint_mutex;

    const auto worker = [&] {
        while (!stopped.load(std::memory_order_relaxed)) {
            const std::size_t begin =
                next_chunk.fetch_add(1) * chunk;
            if (begin >= total) {
                return;
            }
            const std::size_t end = std::min(begin + chunk, total);
            for (std::size_t i = begin; i < end; ++i) {
                if (!out.table[i].evaluated) {
                    evaluate(i);
                }
            }
            if (checkpoint) {
                std::lock_guard<std::mutex> lock(checkpoint_mutex);
                for (std::size_t i = begin; i < end; ++i) {
                    checkpoint->row(hash_text, i, out.table[i].annual_cost,
                                    out.table[i].reliability,
                                    out.table[i].gas_share);
                }
            }
            if (options.should_stop && options.should_stop()) {
                stopped.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };

    const int workers = std::max(1, options.workers);
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(std::size_t(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back(worker);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    if (checkpoint) {
        checkpoint->close();
    }

    // Deterministic reduction: smallest (cost, flat index) over feasible
    // evaluated points.
    OptimumReport& report = out.report;
    std::size_t best = total;
    for (std::size_t i = 0; i < total; ++i) {
        const PointMetrics& m = out.table[i];
        if (!m.evaluated) {
            out.complete = false;
            continue;
        }
        ++report.evaluated_count;
        if (!m.feasible(spec)) {
            continue;
        }
        ++report.feasible_count;
        if (best == total || m.annual_cost < out.table[best].annual_cost) {
            best = i;
        }
    }
    if (best != total) {
        const GridConfig config = spec.config_at(best);
        report.chosen = config;
        report.annual_cost = out.table[best].annual_cost;
        report.reliability = out.table[best].reliability;
        report.gas_share = out.table[best].gas_share;
        report.breakdown = annual_system_cost(config, data.peak_demand_gw,
                                              spec.costs, spec.financial);
        report.outages = summarize_outages(simulate(config, data));
    }
    return out;
}

// Smallest overbuild on a 0.01-resolution grid whose reliability meets the
// target, found by bisection over the bracket (reliability is monotone
// non-decreasing in overbuild). Returns nothing when even the bracket
// maximum falls short.
inline std::optional<double>
required_overbuild(double reliability_target, double storage_energy_gwh,
                   double wind_fraction, const Dataset& data,
                   double bracket_lo = 0.0, double bracket_hi = 20.0,
                   double resolution = 0.01)
{
    if (!(reliability_target >= 0.0 && reliability_target <= 1.0)) {
        fail_input("reliability target must be in [0,1], got ",
                   reliability_target);
    }
    if (!(bracket_hi > bracket_lo) || !(resolution > 0.0)) {
        fail_input("bad overbuild bracket [", bracket_lo, ", ", bracket_hi,
                   "] at resolution ", resolution);
    }
    const auto reliability_at = [&](double overbuild) {
        GridConfig c;
        c.overbuild = overbuild;
        c.wind_fraction = wind_fraction;
        c.storage_energy = storage_energy_gwh;
        c.dispatch_capacity = 0.0;
        c.threshold_fraction = 0.0;
        return simulate(c, data).reliability;
    };

    if (reliability_at(bracket_lo) >= reliability_target) {
        return bracket_lo;
    }
    const auto steps =
        std::size_t(std::ceil((bracket_hi - bracket_lo) / resolution));
    const auto overbuild_at = [&](std::size_t k) {
        return k == steps ? bracket_hi : bracket_lo + double(k) * resolution;
    };
    if (reliability_at(bracket_hi) < reliability_target) {
        return std::nullopt;
    }
    std::size_t lo = 0;    // known short of target
    std::size_t hi = steps; // known to meet target
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (reliability_at(overbuild_at(mid)) >= reliability_target) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return overbuild_at(hi);
}

struct ReliabilityCurve {
    std::vector<double> overbuild;
    std::vector<double> wind_fraction;
    // values[i][j] = reliability at overbuild[i], wind_fraction[j]
    std::vector<std::vector<double>> values;
};

// Reliability of the bare renewable fleet (no storage, no dispatchable)
// across an overbuild x mix grid.
inline ReliabilityCurve
reliability_curve(const std::vector<double>& overbuild_grid,
                  const std::vector<double>& wind_fraction_grid,
                  const Dataset& data)
{
    if (overbuild_grid.empty() || wind_fraction_grid.empty()) {
        fail_input("reliability curve grids must be non-empty");
    }
    ReliabilityCurve curve;
    curve.overbuild = overbuild_grid;
    curve.wind_fraction = wind_fraction_grid;
    curve.values.resize(overbuild_grid.size());
    for (std::size_t i = 0; i < overbuild_grid.size(); ++i) {
        curve.values[i].resize(wind_fraction_grid.size());
        for (std::size_t j = 0; j < wind_fraction_grid.size(); ++j) {
            GridConfig c;
            c.overbuild = overbuild_grid[i];
            c.wind_fraction = wind_fraction_grid[j];
            curve.values[i][j] = simulate(c, data).reliability;
        }
    }
    return curve;
}

} // namespace gridmix
