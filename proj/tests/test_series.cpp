#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "lppl/errors.hpp"
#include "lppl/series.hpp"

using namespace lppl;

namespace {

std::string daily_csv(Date first, int n_days, double base = 100.0) {
    std::string text = "date,close\n";
    for (int i = 0; i < n_days; ++i) {
        text += to_iso(first + std::chrono::days{i}) + "," +
                std::to_string(base + static_cast<double>(i)) + "\n";
    }
    return text;
}

}  // namespace

TEST_CASE("parse_csv: minimal well-formed input") {
    const auto s = parse_csv(std::string("date,close\n2008-10-15,1994.67\n2008-10-16,1909.94\n"));
    REQUIRE(s.size() == 2);
    CHECK(s[0].date == make_date(2008, 10, 15));
    CHECK(s[0].price == doctest::Approx(1994.67));
    CHECK(s[1].date == make_date(2008, 10, 16));
}

TEST_CASE("parse_csv: reversed rows produce the identical series") {
    const auto a = parse_csv(std::string("date,close\n2008-10-15,1994.67\n2008-10-16,1909.94\n"));
    const auto b = parse_csv(std::string("date,close\n2008-10-16,1909.94\n2008-10-15,1994.67\n"));
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].date == b[i].date);
        CHECK(a[i].price == b[i].price);
    }
}

TEST_CASE("parse_csv: permutation invariance on well-formed rows") {
    std::vector<std::string> rows;
    for (int i = 0; i < 40; ++i) {
        rows.push_back(to_iso(make_date(2009, 1, 1) + std::chrono::days{i}) + "," +
                       std::to_string(50.0 + i));
    }
    std::mt19937 rng(7);
    const auto reference = [&] {
        std::string t = "date,close\n";
        for (const auto& r : rows) t += r + "\n";
        return parse_csv(t);
    }();
    for (int trial = 0; trial < 5; ++trial) {
        std::shuffle(rows.begin(), rows.end(), rng);
        std::string t = "date,close\n";
        for (const auto& r : rows) t += r + "\n";
        const auto s = parse_csv(t);
        REQUIRE(s.size() == reference.size());
        for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i].date == reference[i].date);
    }
}

TEST_CASE("parse_csv: non-positive price names the offending line") {
    std::string text = "date,close\n";
    for (int i = 0; i < 30; ++i) {
        const Date d = make_date(2009, 1, 1) + std::chrono::days{i};
        text += to_iso(d) + ",";
        text += (d == make_date(2009, 1, 5)) ? "-3.0" : "100.0";
        text += "\n";
    }
    CHECK_THROWS_WITH_AS(parse_csv(text), doctest::Contains("line 6"), ParseError);
}

TEST_CASE("parse_csv: error catalogue") {
    CHECK_THROWS_AS(parse_csv(std::string("")), ParseError);  // no header
    CHECK_THROWS_AS(parse_csv(std::string("time,value\n2009-01-01,1\n")), ParseError);
    CHECK_THROWS_AS(parse_csv(std::string("date,close\n2009-01-01,1.0\n")), ParseError);
    CHECK_THROWS_AS(  // duplicate date
        parse_csv(std::string("date,close\n2009-01-01,1.0\n2009-01-01,2.0\n")), ParseError);
    CHECK_THROWS_AS(  // malformed date
        parse_csv(std::string("date,close\n2009-13-40,1.0\n2009-01-02,2.0\n")), ParseError);
    CHECK_THROWS_AS(  // malformed price
        parse_csv(std::string("date,close\n2009-01-01,abc\n2009-01-02,2.0\n")), ParseError);
    CHECK_THROWS_AS(  // missing field
        parse_csv(std::string("date,close\n2009-01-01\n2009-01-02,2.0\n")), ParseError);
}

TEST_CASE("parse_csv: custom column names, extra columns, CRLF") {
    const std::string text =
        "Day,Open,Last\r\n2009-01-02,9.0,10.5\r\n2009-01-05,9.1,10.6\r\n";
    const auto s = parse_csv(text, CsvOptions{"Day", "Last"});
    REQUIRE(s.size() == 2);
    CHECK(s[1].price == doctest::Approx(10.6));
}

TEST_CASE("slice: identity on the full span") {
    const auto s = parse_csv(daily_csv(make_date(2009, 1, 1), 60));
    const auto w = slice(s, s.first_date(), s.last_date());
    REQUIRE(w.size() == s.size());
    CHECK(w.first_date() == s.first_date());
    CHECK(w.last_date() == s.last_date());
}

TEST_CASE("slice: drops exactly the observations before the start date") {
    const auto s = parse_csv(daily_csv(make_date(2008, 10, 15), 268));  // through 2009-07-09
    CHECK(s.last_date() == make_date(2009, 7, 9));
    const Date cut = make_date(2008, 10, 30);
    const auto w = slice(s, cut, s.last_date());

    // Brute-force date filter as the oracle.
    std::size_t expected = 0;
    for (const auto& o : s.observations()) {
        if (o.date >= cut && o.date <= s.last_date()) ++expected;
    }
    CHECK(w.size() == expected);
    CHECK(w.size() == s.size() - 15);
    CHECK(w.first_date() == cut);
}

TEST_CASE("slice: start past the data raises the minimum-count error") {
    const auto s = parse_csv(daily_csv(make_date(2009, 1, 1), 40));
    CHECK_THROWS_AS(slice(s, make_date(2010, 1, 1), make_date(2010, 6, 1)), DomainError);
    CHECK_THROWS_AS(slice(s, make_date(2009, 2, 1), make_date(2009, 1, 1)), DomainError);
    // 10 observations < default minimum of 30
    CHECK_THROWS_AS(slice(s, make_date(2009, 1, 1), make_date(2009, 1, 10)), DomainError);
    CHECK_NOTHROW(slice(s, make_date(2009, 1, 1), make_date(2009, 1, 10), 5));
}

TEST_CASE("slice: idempotence") {
    const auto s = parse_csv(daily_csv(make_date(2009, 1, 1), 90));
    const Date a = make_date(2009, 1, 10), b = make_date(2009, 3, 1);
    const auto once = slice(s, a, b);
    const auto twice = slice(once, a, b);
    REQUIRE(once.size() == twice.size());
    for (std::size_t i = 0; i < once.size(); ++i) {
        CHECK(once[i].date == twice[i].date);
        CHECK(once[i].price == twice[i].price);
    }
}

TEST_CASE("time axis: definition cases") {
    const TimeAxis axis(make_date(2009, 1, 1));
    CHECK(axis.to_time(make_date(2009, 1, 1)) == 0.0);
    // 365 days is within one day-unit of a full 365.25-day year
    CHECK(std::abs(axis.to_time(make_date(2010, 1, 1)) - 1.0) <= 1.0 / 365.25);
    // 100 days, fixed-year convention
    CHECK(axis.to_time(make_date(2009, 4, 11)) ==
          doctest::Approx(0.27378507871321013).epsilon(1e-15));
    CHECK(axis.from_time(0.0) == make_date(2009, 1, 1));
    // 0.5 years = 182.625 days, rounded to 183
    CHECK(axis.from_time(0.5) == make_date(2009, 7, 3));
    CHECK(axis.from_time(0.5) == make_date(2009, 1, 1) + std::chrono::days{183});
}

TEST_CASE("time axis: negative times are allowed") {
    const TimeAxis axis(make_date(2009, 1, 1));
    CHECK(axis.to_time(make_date(2008, 12, 31)) < 0.0);
    CHECK(axis.from_time(axis.to_time(make_date(2008, 1, 1))) == make_date(2008, 1, 1));
}

TEST_CASE("time axis: round trip over 1990..2100") {
    const TimeAxis axis(make_date(2008, 10, 15));
    const Date first = make_date(1990, 1, 1);
    const Date last = make_date(2100, 12, 31);
    for (Date d = first; d <= last; d += std::chrono::days{1}) {
        if (axis.from_time(axis.to_time(d)) != d) {
            FAIL("round trip failed at " << to_iso(d));
        }
    }
}

TEST_CASE("time axis: out-of-range time is rejected") {
    const TimeAxis axis(make_date(2009, 1, 1));
    CHECK_THROWS_AS(axis.from_time(1e9), DomainError);
    CHECK_THROWS_AS(axis.from_time(-1e9), DomainError);
}

TEST_CASE("to_csv round-trips through parse_csv") {
    const auto s = parse_csv(daily_csv(make_date(2009, 1, 1), 10), {});
    const auto again = parse_csv(to_csv(s));
    REQUIRE(again.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(again[i].date == s[i].date);
        CHECK(again[i].price == s[i].price);  // %.17g is bit-faithful
    }
}
