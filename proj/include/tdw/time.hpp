#pragma once

#include <cstdint>
#include <cstdio>
#include <string>

namespace tdw {

/// A closed interval of UTC time, integer seconds since the Unix epoch.
struct TimeInterval {
    std::int64_t t_begin = 0;
    std::int64_t t_end = 0;

    friend bool operator==(const TimeInterval&, const TimeInterval&) = default;
};

inline bool valid(const TimeInterval& iv) { return iv.t_begin <= iv.t_end; }

/// Life-cycle length of an interval: t_end - t_begin, seconds.
inline std::int64_t duration(const TimeInterval& iv) { return iv.t_end - iv.t_begin; }

/// Closed intervals intersect (touching endpoints count).
inline bool overlaps(const TimeInterval& a, const TimeInterval& b) {
    return a.t_begin <= b.t_end && b.t_begin <= a.t_end;
}

struct CivilDateTime {
    int year = 1970;
    int month = 1;  // 1..12
    int day = 1;    // 1..31
    int hour = 0;
    int minute = 0;
    int second = 0;
};

/// Days since 1970-01-01 for a proleptic Gregorian civil date
/// (Howard Hinnant's algorithm).
inline std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

inline void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yy + (m <= 2));
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

inline std::int64_t positive_mod(std::int64_t a, std::int64_t b) {
    std::int64_t r = a % b;
    if (r < 0) r += b;
    return r;
}

inline CivilDateTime civil_from_utc(std::int64_t t) {
    const std::int64_t days = floor_div(t, 86400);
    const std::int64_t sod = positive_mod(t, 86400);
    CivilDateTime c;
    civil_from_days(days, c.year, c.month, c.day);
    c.hour = static_cast<int>(sod / 3600);
    c.minute = static_cast<int>((sod % 3600) / 60);
    c.second = static_cast<int>(sod % 60);
    return c;
}

inline std::int64_t utc_from_civil(const CivilDateTime& c) {
    return days_from_civil(c.year, c.month, c.day) * 86400 +
           static_cast<std::int64_t>(c.hour) * 3600 + static_cast<std::int64_t>(c.minute) * 60 +
           c.second;
}

/// Calendar quarter of a month: 1..4.
inline int quarter_of_month(int month) { return (month + 2) / 3; }

/// Day-of-week index for a UTC timestamp: 0 = Monday .. 6 = Sunday.
inline int day_of_week(std::int64_t t) {
    const std::int64_t days = floor_div(t, 86400);
    // 1970-01-01 was a Thursday (index 3).
    return static_cast<int>(positive_mod(days + 3, 7));
}

inline const char* day_of_week_name(int index) {
    static const char* names[7] = {"Monday", "Tuesday",  "Wednesday", "Thursday",
                                   "Friday", "Saturday", "Sunday"};
    return names[index % 7];
}

/// "2009-07-15T10:00:00Z" rendering of a UTC timestamp.
inline std::string iso8601_utc(std::int64_t t) {
    const CivilDateTime c = civil_from_utc(t);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", c.year, c.month, c.day,
                  c.hour, c.minute, c.second);
    return std::string(buf);
}

}  // namespace tdw
