#include "lppl/dates.hpp"

#include <charconv>
#include <cmath>

#include "lppl/errors.hpp"

namespace lppl {

namespace {

bool parse_int(std::string_view s, int& out) {
    if (s.empty()) return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

}  // namespace

Date make_date(int year, unsigned month, unsigned day) {
    const std::chrono::year_month_day ymd{std::chrono::year{year},
                                          std::chrono::month{month},
                                          std::chrono::day{day}};
    if (!ymd.ok()) {
        throw ParseError("invalid calendar date " + std::to_string(year) + "-" +
                         std::to_string(month) + "-" + std::to_string(day));
    }
    return Date{ymd};
}

std::optional<Date> try_parse_date(std::string_view text) {
    // Strict YYYY-MM-DD: four digits, dash, two digits, dash, two digits.
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    int y = 0, m = 0, d = 0;
    if (!parse_int(text.substr(0, 4), y) || !parse_int(text.substr(5, 2), m) ||
        !parse_int(text.substr(8, 2), d)) {
        return std::nullopt;
    }
    const std::chrono::year_month_day ymd{std::chrono::year{y},
                                          std::chrono::month{static_cast<unsigned>(m)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;
    return Date{ymd};
}

Date parse_date(std::string_view text) {
    if (auto d = try_parse_date(text)) return *d;
    throw ParseError("expected ISO-8601 date (YYYY-MM-DD), got \"" + std::string(text) + "\"");
}

std::string to_iso(Date d) {
    const std::chrono::year_month_day ymd{d};
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

Date TimeAxis::from_time(double t) const {
    const double day_count = t * days_per_year;
    // std::chrono::year covers roughly +/-32k years; stay well inside.
    constexpr double max_days = 11.0e6;
    if (!(std::abs(day_count) < max_days)) {
        throw DomainError("time " + std::to_string(t) +
                          " years maps outside the representable calendar range");
    }
    return epoch_ + std::chrono::days{std::lround(day_count)};
}

}  // namespace lppl
