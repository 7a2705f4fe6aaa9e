#include "lppl/series.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>

#include "lppl/errors.hpp"

namespace lppl {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return fields;
}

bool parse_price(std::string_view s, double& out) {
    if (s.empty()) return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

struct Row {
    Date date;
    double price;
    std::size_t line_no;
};

}  // namespace

PriceSeries PriceSeries::from_observations(std::vector<Observation> obs) {
    if (obs.size() < 2) {
        throw DomainError("price series needs at least 2 observations, got " +
                          std::to_string(obs.size()));
    }
    for (std::size_t i = 0; i < obs.size(); ++i) {
        if (!(obs[i].price > 0.0)) {
            throw DomainError("non-positive price " + std::to_string(obs[i].price) + " on " +
                              to_iso(obs[i].date));
        }
        if (i > 0 && !(obs[i - 1].date < obs[i].date)) {
            throw DomainError("dates not strictly increasing at " + to_iso(obs[i].date));
        }
    }
    return PriceSeries(std::move(obs));
}

PriceSeries parse_csv(std::istream& in, const CsvOptions& opts) {
    std::string line;
    std::size_t line_no = 0;

    // Header row is required; it names the columns.
    std::size_t date_col = 0, price_col = 0;
    bool header_seen = false;
    std::vector<Row> rows;

    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (line_no == 1 && view.size() >= 3 && view.substr(0, 3) == "\xEF\xBB\xBF") {
            view.remove_prefix(3);  // UTF-8 BOM
        }
        if (trim(view).empty()) continue;
        const auto fields = split_fields(view);

        if (!header_seen) {
            bool date_found = false, price_found = false;
            for (std::size_t i = 0; i < fields.size(); ++i) {
                if (fields[i] == opts.date_column) {
                    date_col = i;
                    date_found = true;
                }
                if (fields[i] == opts.price_column) {
                    price_col = i;
                    price_found = true;
                }
            }
            if (!date_found || !price_found) {
                throw ParseError("header row must contain columns \"" + opts.date_column +
                                 "\" and \"" + opts.price_column + "\", got \"" +
                                 std::string(trim(view)) + "\"");
            }
            header_seen = true;
            continue;
        }

        const std::size_t needed = std::max(date_col, price_col) + 1;
        if (fields.size() < needed) {
            throw ParseError("line " + std::to_string(line_no) + ": expected at least " +
                             std::to_string(needed) + " fields, got " +
                             std::to_string(fields.size()));
        }
        const auto date = try_parse_date(fields[date_col]);
        if (!date) {
            throw ParseError("line " + std::to_string(line_no) + ": bad date \"" +
                             std::string(fields[date_col]) + "\"");
        }
        double price = 0.0;
        if (!parse_price(fields[price_col], price)) {
            throw ParseError("line " + std::to_string(line_no) + ": bad price \"" +
                             std::string(fields[price_col]) + "\"");
        }
        if (!(price > 0.0)) {
            throw ParseError("line " + std::to_string(line_no) + ": non-positive price " +
                             std::string(fields[price_col]));
        }
        rows.push_back(Row{*date, price, line_no});
    }

    if (!header_seen) throw ParseError("empty input: missing header row");
    if (rows.size() < 2) {
        throw ParseError("need at least 2 valid data rows, got " + std::to_string(rows.size()));
    }

    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].date == rows[i - 1].date) {
            throw ParseError("duplicate date " + to_iso(rows[i].date) + " (lines " +
                             std::to_string(rows[i - 1].line_no) + " and " +
                             std::to_string(rows[i].line_no) + ")");
        }
    }

    std::vector<Observation> obs;
    obs.reserve(rows.size());
    for (const auto& r : rows) obs.push_back(Observation{r.date, r.price});
    return PriceSeries::from_observations(std::move(obs));
}

PriceSeries parse_csv(const std::string& text, const CsvOptions& opts) {
    std::istringstream in(text);
    return parse_csv(in, opts);
}

PriceSeries parse_csv_file(const std::string& path, const CsvOptions& opts) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    return parse_csv(in, opts);
}

PriceSeries slice(const PriceSeries& series, Date start, Date end, std::size_t min_count) {
    if (!(start < end)) {
        throw DomainError("slice start " + to_iso(start) + " must precede end " + to_iso(end));
    }
    std::vector<Observation> out;
    for (const auto& o : series.observations()) {
        if (start <= o.date && o.date <= end) out.push_back(o);
    }
    if (out.size() < min_count) {
        throw DomainError("window " + to_iso(start) + ".." + to_iso(end) + " has " +
                          std::to_string(out.size()) + " observations, need at least " +
                          std::to_string(min_count));
    }
    return PriceSeries::from_observations(std::move(out));
}

std::string to_csv(const PriceSeries& series, const CsvOptions& opts) {
    std::ostringstream out;
    out << opts.date_column << ',' << opts.price_column << '\n';
    char buf[40];
    for (const auto& o : series.observations()) {
        std::snprintf(buf, sizeof(buf), "%.17g", o.price);
        out << to_iso(o.date) << ',' << buf << '\n';
    }
    return out.str();
}

}  // namespace lppl
