#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "lppl/dates.hpp"

namespace lppl {

struct Observation {
    Date date;
    double price;  // index points, currency-agnostic
};

/// Ordered daily price observations. Invariants, enforced at construction:
/// dates strictly increasing, every price > 0, at least two observations.
/// Immutable after construction; safe to share across threads.
class PriceSeries {
public:
    /// Validates and adopts the observations (must already be sorted).
    static PriceSeries from_observations(std::vector<Observation> obs);

    const std::vector<Observation>& observations() const { return obs_; }
    std::size_t size() const { return obs_.size(); }
    const Observation& operator[](std::size_t i) const { return obs_[i]; }
    Date first_date() const { return obs_.front().date; }
    Date last_date() const { return obs_.back().date; }

private:
    explicit PriceSeries(std::vector<Observation> obs) : obs_(std::move(obs)) {}
    std::vector<Observation> obs_;
};

struct CsvOptions {
    std::string date_column = "date";
    std::string price_column = "close";
};

/// Parses CSV text with a required header row. Rows may arrive in any order;
/// the result is sorted by date. Throws ParseError on malformed records
/// (reporting the line number), non-positive prices, duplicate dates, or
/// fewer than two valid rows.
PriceSeries parse_csv(std::istream& in, const CsvOptions& opts = {});
PriceSeries parse_csv(const std::string& text, const CsvOptions& opts = {});
PriceSeries parse_csv_file(const std::string& path, const CsvOptions& opts = {});

/// Returns the observations with start <= date <= end, order preserved.
/// Throws DomainError if start >= end or if fewer than min_count
/// observations survive (default matches the fitter's minimum).
PriceSeries slice(const PriceSeries& series, Date start, Date end,
                  std::size_t min_count = 30);

/// Serializes in the same CSV format parse_csv reads.
std::string to_csv(const PriceSeries& series, const CsvOptions& opts = {});

}  // namespace lppl
