#pragma once

#include <cctype>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

#include "gridmix/errors.hpp"

namespace gridmix {

// All series in this library are hourly and in UTC. An HourStamp counts whole
// hours since 1970-01-01T00:00Z; it is the only time representation used
// internally.
using HourStamp = std::int64_t;

struct CivilHour {
    int year = 1970;
    int month = 1; // 1..12
    int day = 1;   // 1..31
    int hour = 0;  // 0..23
};

inline bool is_leap_year(int year)
{
    return std::chrono::year{year}.is_leap();
}

inline bool valid_civil(const CivilHour& c)
{
    using namespace std::chrono;
    if (c.hour < 0 || c.hour > 23) {
        return false;
    }
    return year_month_day{year{c.year}, month{unsigned(c.month)},
                          day{unsigned(c.day)}}
        .ok();
}

inline HourStamp hour_of(const CivilHour& c)
{
    using namespace std::chrono;
    const year_month_day ymd{year{c.year}, month{unsigned(c.month)},
                             day{unsigned(c.day)}};
    const auto days = sys_days{ymd}.time_since_epoch().count();
    return HourStamp{days} * 24 + c.hour;
}

inline CivilHour civil_of(HourStamp h)
{
    using namespace std::chrono;
    auto days = h / 24;
    auto hour = h % 24;
    if (hour < 0) {
        days -= 1;
        hour += 24;
    }
    const year_month_day ymd{sys_days{std::chrono::days{days}}};
    return CivilHour{int(ymd.year()), int(unsigned(ymd.month())),
                     int(unsigned(ymd.day())), int(hour)};
}

// Half-open range [begin, end) of hourly timestamps.
struct HourRange {
    HourStamp begin = 0;
    HourStamp end = 0;

    std::size_t size() const
    {
        return end > begin ? std::size_t(end - begin) : 0;
    }
    bool contains(HourStamp h) const { return h >= begin && h < end; }
    bool operator==(const HourRange&) const = default;
};

// The full calendar year [Jan 1 00:00, Jan 1 00:00 of the next year).
inline HourRange year_range(int year)
{
    return HourRange{hour_of({year, 1, 1, 0}), hour_of({year + 1, 1, 1, 0})};
}

inline HourRange years_range(int first_year, int last_year)
{
    return HourRange{hour_of({first_year, 1, 1, 0}),
                     hour_of({last_year + 1, 1, 1, 0})};
}

// Accepts "YYYY-MM-DDTHH:MM", with optional ":SS", optional trailing "Z",
// and a space in place of the "T". Minutes and seconds must be zero: the
// library deals in whole hours only.
inline HourStamp parse_timestamp(std::string_view text)
{
    CivilHour c;
    int minute = 0;
    int second = 0;
    char sep = 0;
    char buf[40];
    if (text.size() >= sizeof(buf)) {
        fail_input("bad timestamp '", std::string(text), "'");
    }
    std::snprintf(buf, sizeof(buf), "%.*s", int(text.size()), text.data());
    const int n = std::sscanf(buf, "%d-%d-%d%c%d:%d:%d", &c.year, &c.month,
                              &c.day, &sep, &c.hour, &minute, &second);
    const bool sep_ok = (sep == 'T' || sep == ' ');
    if (n < 6 || !sep_ok || !valid_civil(c)) {
        fail_input("bad timestamp '", std::string(text),
                   "' (expected YYYY-MM-DDTHH:MM, UTC)");
    }
    if (minute != 0 || second != 0) {
        fail_input("timestamp '", std::string(text),
                   "' is not on an hour boundary");
    }
    // Allow ":SS" and a trailing Z; reject other trailing junk.
    int consumed = 0;
    std::sscanf(buf, "%d-%d-%d%c%d:%d%n", &c.year, &c.month, &c.day, &sep,
                &c.hour, &minute, &consumed);
    const char* rest = buf + consumed;
    if (rest[0] == ':') {
        const bool two_digits = std::isdigit(unsigned(rest[1])) &&
                                std::isdigit(unsigned(rest[2]));
        if (!two_digits) {
            fail_input("bad timestamp '", std::string(text), "'");
        }
        rest += 3;
    }
    if (*rest == 'Z') {
        ++rest;
    }
    if (*rest != '\0') {
        fail_input("bad timestamp '", std::string(text), "'");
    }
    return hour_of(c);
}

inline std::string format_timestamp(HourStamp h)
{
    const CivilHour c = civil_of(h);
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:00Z", c.year, c.month,
                  c.day, c.hour);
    return buf;
}

} // namespace gridmix
