#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace lppl {

/// Calendar date, resolution one day.
using Date = std::chrono::sys_days;

/// Builds a date from components; throws ParseError if the triple is not a
/// valid calendar date (e.g. Feb 30).
Date make_date(int year, unsigned month, unsigned day);

/// Parses "YYYY-MM-DD". Returns nullopt on any deviation from that form.
std::optional<Date> try_parse_date(std::string_view text);

/// Parses "YYYY-MM-DD"; throws ParseError on failure.
Date parse_date(std::string_view text);

/// Formats as "YYYY-MM-DD".
std::string to_iso(Date d);

/// Signed day count from a to b.
inline long days_between(Date a, Date b) {
    return static_cast<long>((b - a).count());
}

/// Maps calendar dates to a continuous time coordinate: decimal years since
/// a fixed epoch, with a 365.25-day year. The mapping is strictly monotone
/// and from_time(to_time(d)) == d for any date (whole days round-trip).
class TimeAxis {
public:
    explicit TimeAxis(Date epoch) : epoch_(epoch) {}

    Date epoch() const { return epoch_; }

    double to_time(Date d) const {
        return static_cast<double>(days_between(epoch_, d)) / days_per_year;
    }

    /// Inverse of to_time, rounded to the nearest whole day. Throws
    /// DomainError if t lands outside the representable calendar range.
    Date from_time(double t) const;

    static constexpr double days_per_year = 365.25;

private:
    Date epoch_;
};

}  // namespace lppl
