#pragma once

#include <string>

#include <json.hpp>

#include "lppl/scan.hpp"
#include "lppl/series.hpp"

namespace lppl {

struct InputDigest {
    std::string file;
    std::size_t rows = 0;
    Date first_date{};
    Date last_date{};
};

/// Assembles the structured run report: input digest, resolved config,
/// per-window fit records, aggregates, and the observed-price peak over the
/// analysis span. Deterministic: identical inputs give identical JSON.
nlohmann::json build_report(const InputDigest& input, const ScanConfig& cfg,
                            const ScanResult& scan, const PriceSeries& series);

struct Aggregates {
    CrashWindow quantile_window;
    CrashWindow full_range;
    int n_bubble_like = 0;
};

/// Recomputes the aggregates from a report's per-window records (unrounded
/// critical times), independent of the emitted aggregates section. The
/// report round-trip contract: this must reproduce them exactly.
Aggregates recompute_aggregates(const nlohmann::json& report);

/// Writes text to path via a temp file + rename.
void write_text_atomic(const std::string& path, const std::string& text);

/// Writes observed.csv, fit_<k>.csv and extrap_<k>.csv per successful
/// window, and annotations.json into dir (created if missing). Emitted
/// values are prices, not log-prices, so a log-scaled plot of the bundle
/// reproduces the analysis geometry directly.
void emit_plot_bundle(const ScanResult& scan, const PriceSeries& series, const ScanConfig& cfg,
                      const std::string& dir);

}  // namespace lppl
