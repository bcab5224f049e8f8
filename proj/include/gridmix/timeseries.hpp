#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gridmix/calendar.hpp"
#include "gridmix/errors.hpp"

namespace gridmix {

enum class Tech { solar, wind };

inline std::string_view tech_name(Tech t)
{
    return t == Tech::solar ? "solar" : "wind";
}

// Continent-level per-unit generation series for one technology.
struct GenerationProfile {
    Tech tech = Tech::solar;
    std::vector<double> values; // capacity factors, [0,1]
    HourRange epoch;
};

// Hourly demand in GW, gap-free, strictly positive.
struct DemandSeries {
    std::vector<double> values;
    double peak = 0.0;
    double mean = 0.0;
    HourRange epoch;

    static DemandSeries from_values(std::vector<double> values,
                                    HourRange epoch)
    {
        if (values.size() != epoch.size() || values.empty()) {
            fail_input("demand series length ", values.size(),
                       " does not match epoch of ", epoch.size(), " hours");
        }
        DemandSeries d;
        d.values = std::move(values);
        d.epoch = epoch;
        d.peak = *std::max_element(d.values.begin(), d.values.end());
        d.mean = std::accumulate(d.values.begin(), d.values.end(), 0.0) /
                 double(d.values.size());
        if (!(*std::min_element(d.values.begin(), d.values.end()) > 0.0)) {
            fail_input("demand series contains non-positive values");
        }
        return d;
    }
};

// Streaming mean across cells: cells are added one at a time so a full
// continental run never needs all per-cell series in memory at once.
class ProfileAccumulator {
public:
    explicit ProfileAccumulator(Tech tech) : tech_(tech) {}

    void add(std::span<const double> values, HourRange epoch)
    {
        if (count_ == 0) {
            epoch_ = epoch;
            sum_.assign(values.size(), 0.0);
        } else if (epoch != epoch_) {
            fail_input("cell profile epoch mismatch while aggregating ",
                       tech_name(tech_), ": [",
                       format_timestamp(epoch.begin), ", ",
                       format_timestamp(epoch.end), ") vs [",
                       format_timestamp(epoch_.begin), ", ",
                       format_timestamp(epoch_.end), ")");
        }
        if (values.size() != epoch.size()) {
            fail_input("cell profile length does not match its epoch");
        }
        for (std::size_t h = 0; h < values.size(); ++h) {
            sum_[h] += values[h];
        }
        ++count_;
    }

    std::size_t cell_count() const { return count_; }

    GenerationProfile finish() const
    {
        if (count_ == 0) {
            fail_input("no cell profiles to aggregate");
        }
        GenerationProfile p;
        p.tech = tech_;
        p.epoch = epoch_;
        p.values.resize(sum_.size());
        for (std::size_t h = 0; h < sum_.size(); ++h) {
            p.values[h] = sum_[h] / double(count_);
        }
        return p;
    }

private:
    Tech tech_;
    HourRange epoch_;
    std::vector<double> sum_;
    std::size_t count_ = 0;
};

// Unweighted mean over cells, hour by hour.
inline GenerationProfile
aggregate_area_average(std::span<const GenerationProfile> cells)
{
    if (cells.empty()) {
        fail_input("no cell profiles to aggregate");
    }
    ProfileAccumulator acc(cells.front().tech);
    for (const auto& cell : cells) {
        acc.add(cell.values, cell.epoch);
    }
    return acc.finish();
}

// Convex combination of national profiles weighted by installed capacity.
inline GenerationProfile
aggregate_capacity_weighted(std::span<const GenerationProfile> national,
                            std::span<const double> weights_gw)
{
    if (national.empty() || national.size() != weights_gw.size()) {
        fail_input("weighted aggregation needs one weight per profile (",
                   national.size(), " profiles, ", weights_gw.size(),
                   " weights)");
    }
    double total = 0.0;
    for (const double w : weights_gw) {
        if (w < 0.0) {
            fail_input("installed-capacity weights must be non-negative");
        }
        total += w;
    }
    if (!(total > 0.0)) {
        fail_input("installed-capacity weights are all zero");
    }
    GenerationProfile out;
    out.tech = national.front().tech;
    out.epoch = national.front().epoch;
    out.values.assign(out.epoch.size(), 0.0);
    for (std::size_t i = 0; i < national.size(); ++i) {
        if (national[i].epoch != out.epoch) {
            fail_input("national profile epoch mismatch in weighted "
                       "aggregation");
        }
        const double w = weights_gw[i] / total;
        for (std::size_t h = 0; h < out.values.size(); ++h) {
            out.values[h] += w * national[i].values[h];
        }
    }
    return out;
}

// Missing hours tolerated per series before it is rejected, matching the
// inclusion rule of at least 8700 reported hours out of 8760.
constexpr std::size_t kMaxMissingHours = 8760 - 8700;

inline bool is_missing(double v) { return std::isnan(v); }

// Fills gaps (NaN) in an hourly series: interior gaps by linear
// interpolation between the bracketing values, edge gaps by the nearest
// reported value. Series missing more hours than the inclusion rule allows
// are rejected, naming the offending series.
inline DemandSeries repair_demand(std::span<const double> raw, HourRange epoch,
                                  std::string_view label,
                                  std::size_t max_missing = kMaxMissingHours)
{
    if (raw.size() != epoch.size() || raw.empty()) {
        fail_input("demand series '", std::string(label), "' length ",
                   raw.size(), " does not match epoch of ", epoch.size(),
                   " hours");
    }
    const std::size_t missing =
        std::size_t(std::count_if(raw.begin(), raw.end(), is_missing));
    if (missing > max_missing) {
        fail_input("demand series '", std::string(label), "' is missing ",
                   missing, " hours; at most ", max_missing, " are allowed");
    }
    if (missing == raw.size()) {
        fail_input("demand series '", std::string(label), "' has no data");
    }

    std::vector<double> filled(raw.begin(), raw.end());
    const std::size_t n = filled.size();
    std::size_t i = 0;
    while (i < n) {
        if (!is_missing(filled[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < n && is_missing(filled[j])) {
            ++j;
        }
        // Gap is [i, j). i == 0 means a leading edge gap; j == n a trailing
        // one.
        if (i == 0) {
            std::fill(filled.begin(), filled.begin() + j, filled[j]);
        } else if (j == n) {
            std::fill(filled.begin() + i, filled.end(), filled[i - 1]);
        } else {
            const double lo = filled[i - 1];
            const double hi = filled[j];
            const double span = double(j - i + 1);
            for (std::size_t k = i; k < j; ++k) {
                const double frac = double(k - i + 1) / span;
                filled[k] = lo + (hi - lo) * frac;
            }
        }
        i = j;
    }
    return DemandSeries::from_values(std::move(filled), epoch);
}

// Hour index into a one-year source series for an arbitrary simulated hour.
// Feb 29 of simulated leap years maps to the source's Feb 28 when the source
// year has no leap day.
inline std::size_t source_year_hour(const CivilHour& c, int source_year)
{
    CivilHour mapped{source_year, c.month, c.day, c.hour};
    if (c.month == 2 && c.day == 29 && !is_leap_year(source_year)) {
        mapped.day = 28;
    }
    return std::size_t(hour_of(mapped) - year_range(source_year).begin);
}

// Tiles a single-year demand pattern across an arbitrary epoch, calendar
// aligned (Jan 1 maps to Jan 1).
inline DemandSeries replicate_demand_year(const DemandSeries& one_year,
                                          HourRange epoch)
{
    const int source_year = civil_of(one_year.epoch.begin).year;
    if (one_year.epoch != year_range(source_year)) {
        fail_input("demand replication requires a source covering exactly one "
                   "calendar year; got [",
                   format_timestamp(one_year.epoch.begin), ", ",
                   format_timestamp(one_year.epoch.end), ")");
    }
    if (epoch == one_year.epoch) {
        return one_year;
    }
    std::vector<double> values;
    values.reserve(epoch.size());
    for (HourStamp h = epoch.begin; h < epoch.end; ++h) {
        values.push_back(
            one_year.values[source_year_hour(civil_of(h), source_year)]);
    }
    return DemandSeries::from_values(std::move(values), epoch);
}

// Nameplate scaling: capacity factor series to GW series.
inline std::vector<double> scale_to_capacity(const GenerationProfile& profile,
                                             double nameplate_gw)
{
    if (nameplate_gw < 0.0) {
        fail_input("nameplate capacity must be non-negative, got ",
                   nameplate_gw);
    }
    std::vector<double> out(profile.values.size());
    for (std::size_t h = 0; h < out.size(); ++h) {
        out[h] = nameplate_gw * profile.values[h];
    }
    return out;
}

// The simulator's canonical input: aligned hourly capacity factors and
// demand over one epoch. Immutable once built; shared by all simulation
// workers.
struct Dataset {
    HourRange epoch;
    std::vector<double> solar_cf;
    std::vector<double> wind_cf;
    std::vector<double> demand_gw;
    double peak_demand_gw = 0.0;
    double mean_demand_gw = 0.0;

    static Dataset assemble(HourRange epoch, std::vector<double> solar_cf,
                            std::vector<double> wind_cf,
                            std::vector<double> demand_gw)
    {
        const std::size_t n = epoch.size();
        if (n == 0) {
            fail_input("dataset epoch is empty");
        }
        if (solar_cf.size() != n || wind_cf.size() != n ||
            demand_gw.size() != n) {
            fail_input("dataset column lengths disagree with epoch: ",
                       solar_cf.size(), "/", wind_cf.size(), "/",
                       demand_gw.size(), " vs ", n, " hours");
        }
        for (std::size_t h = 0; h < n; ++h) {
            if (!(solar_cf[h] >= 0.0 && solar_cf[h] <= 1.0) ||
                !(wind_cf[h] >= 0.0 && wind_cf[h] <= 1.0)) {
                fail_input("capacity factor out of [0,1] at ",
                           format_timestamp(epoch.begin + HourStamp(h)));
            }
            if (!(demand_gw[h] > 0.0)) {
                fail_input("demand must be positive at ",
                           format_timestamp(epoch.begin + HourStamp(h)));
            }
        }
        Dataset d;
        d.epoch = epoch;
        d.solar_cf = std::move(solar_cf);
        d.wind_cf = std::move(wind_cf);
        d.demand_gw = std::move(demand_gw);
        d.peak_demand_gw =
            *std::max_element(d.demand_gw.begin(), d.demand_gw.end());
        d.mean_demand_gw = std::accumulate(d.demand_gw.begin(),
                                           d.demand_gw.end(), 0.0) /
                           double(n);
        return d;
    }

    std::size_t hours() const { return epoch.size(); }

    // Leading sub-range of the dataset; used by the myopia check. The
    // recorded peak carries over: truncating the series must not rescale
    // the installed capacity it anchors.
    Dataset prefix(std::size_t hours_count) const
    {
        require(hours_count > 0 && hours_count <= hours(),
                "dataset prefix length out of range");
        Dataset p = assemble(
            HourRange{epoch.begin, epoch.begin + HourStamp(hours_count)},
            {solar_cf.begin(), solar_cf.begin() + hours_count},
            {wind_cf.begin(), wind_cf.begin() + hours_count},
            {demand_gw.begin(), demand_gw.begin() + hours_count});
        p.peak_demand_gw = peak_demand_gw;
        return p;
    }
};

} // namespace gridmix
