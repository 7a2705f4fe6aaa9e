#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lppl/fitter.hpp"
#include "lppl/model.hpp"
#include "lppl/series.hpp"

namespace lppl {

/// Start-date scan: a family of windows whose start advances in fixed steps
/// while the end stays put, each fitted independently; the fitted critical
/// times are aggregated into quantile and full-range crash windows.
struct ScanConfig {
    int step_days = 15;
    int n_windows = 10;
    Date first_start_date{};
    Date end_date{};
    double quantile_lo = 0.20;
    double quantile_hi = 0.80;
    int extrapolation_days = 100;
    int samples_per_day = 1;
    FitConfig fit;

    void validate() const;  // throws DomainError on inconsistent settings
};

/// Calendar interval bracketing predicted critical times. `quantiles` holds
/// the probability pair for quantile windows and is empty for the full range.
struct CrashWindow {
    Date lo{};
    Date hi{};
    std::optional<std::pair<double, double>> quantiles;
};

struct WindowFailure {
    int window_index = 0;
    std::string message;
};

struct ScanResult {
    std::vector<FitResult> fits;  // successful fits, ordered by start date
    std::vector<int> fit_window_indices;
    std::vector<Date> tc_dates;
    CrashWindow quantile_window;
    CrashWindow full_range;
    int n_bubble_like = 0;
    std::vector<WindowFailure> failures;
};

/// Window k spans [first_start_date + k*step_days, end_date], k = 0..n-1.
/// All windows share the series' time axis (epoch = first observation of
/// the full series) so fitted critical times are directly comparable.
/// Throws DomainError naming the window index if any window underruns the
/// fitter's minimum observation count.
std::vector<FitWindow> make_windows(const PriceSeries& series, const ScanConfig& cfg);

/// Fits every window, collects critical times, and derives the crash
/// windows. Failed window fits are recorded, not fatal; throws NumericError
/// if fewer than 2 windows fit successfully. Quantiles are computed on the
/// unrounded decimal-year critical times; only the endpoints are rounded
/// to calendar days.
ScanResult run_scan(const PriceSeries& series, const ScanConfig& cfg);

/// Linear-interpolation quantiles at positions p*(n-1) over the sorted
/// values (zero-based order statistics).
double interpolated_quantile(std::vector<double> values, double p);

/// Quantile crash window from a list of predicted dates: dates are mapped
/// to decimal years, the lo/hi quantiles interpolated, and the endpoints
/// mapped back to the nearest whole day.
CrashWindow quantile_dates(const std::vector<Date>& tc_dates, double lo, double hi);

/// (min, max) of the predicted dates.
CrashWindow full_range(const std::vector<Date>& tc_dates);

struct ExtrapolationPoint {
    double t = 0.0;  // decimal years on the window's axis
    Date date{};
    double log_price = 0.0;
};

/// Samples the fitted model from the window end forward, stopping one
/// sample step short of tc if the singularity arrives inside the horizon.
std::vector<ExtrapolationPoint> extrapolate(const FitResult& fit, const TimeAxis& axis,
                                            int horizon_days, int samples_per_day = 1);

}  // namespace lppl
