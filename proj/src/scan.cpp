#include "lppl/scan.hpp"

#include <algorithm>
#include <cmath>

#include "lppl/errors.hpp"

namespace lppl {

void ScanConfig::validate() const {
    if (step_days < 1) throw DomainError("step_days must be >= 1");
    if (n_windows < 1) throw DomainError("n_windows must be >= 1");
    if (!(first_start_date < end_date)) {
        throw DomainError("first start date " + to_iso(first_start_date) +
                          " must precede end date " + to_iso(end_date));
    }
    const Date last_start = first_start_date + std::chrono::days{(n_windows - 1) * step_days};
    if (!(last_start < end_date)) {
        throw DomainError("last window start " + to_iso(last_start) + " reaches past end date " +
                          to_iso(end_date));
    }
    if (!(quantile_lo > 0.0 && quantile_lo < quantile_hi && quantile_hi < 1.0)) {
        throw DomainError("quantiles must satisfy 0 < lo < hi < 1");
    }
    if (extrapolation_days < 0) throw DomainError("extrapolation_days must be >= 0");
    if (samples_per_day < 1) throw DomainError("samples_per_day must be >= 1");
    fit.validate();
}

std::vector<FitWindow> make_windows(const PriceSeries& series, const ScanConfig& cfg) {
    cfg.validate();
    const TimeAxis axis(series.first_date());
    std::vector<FitWindow> windows;
    windows.reserve(cfg.n_windows);
    for (int k = 0; k < cfg.n_windows; ++k) {
        const Date start = cfg.first_start_date + std::chrono::days{k * cfg.step_days};
        try {
            const PriceSeries piece = slice(series, start, cfg.end_date, cfg.fit.min_observations);
            windows.push_back(FitWindow::from_series(piece, axis));
        } catch (const DomainError& e) {
            throw DomainError("window " + std::to_string(k) + ": " + e.what());
        }
    }
    return windows;
}

ScanResult run_scan(const PriceSeries& series, const ScanConfig& cfg) {
    const auto windows = make_windows(series, cfg);
    const TimeAxis axis(series.first_date());

    ScanResult result;
    std::vector<double> tc_times;
    for (int k = 0; k < static_cast<int>(windows.size()); ++k) {
        try {
            FitResult fr = fit(windows[k], cfg.fit);
            tc_times.push_back(fr.params.tc);
            result.tc_dates.push_back(fr.tc_date);
            if (fr.diagnostic.overall) ++result.n_bubble_like;
            result.fits.push_back(std::move(fr));
            result.fit_window_indices.push_back(k);
        } catch (const Error& e) {
            result.failures.push_back(WindowFailure{k, e.what()});
        }
    }
    // A one-window scan degenerates to a single fit; real scans need two
    // successes for the crash windows to mean anything.
    const std::size_t required = std::min<std::size_t>(2, windows.size());
    if (result.fits.size() < required) {
        throw NumericError("fewer than " + std::to_string(required) +
                           " successful window fits (" + std::to_string(result.fits.size()) +
                           " of " + std::to_string(windows.size()) +
                           "); crash windows undefined");
    }

    // Quantiles on the unrounded critical times; endpoints rounded last.
    const double q_lo = interpolated_quantile(tc_times, cfg.quantile_lo);
    const double q_hi = interpolated_quantile(tc_times, cfg.quantile_hi);
    result.quantile_window =
        CrashWindow{axis.from_time(q_lo), axis.from_time(q_hi),
                    std::make_pair(cfg.quantile_lo, cfg.quantile_hi)};
    const auto [mn, mx] = std::minmax_element(tc_times.begin(), tc_times.end());
    result.full_range = CrashWindow{axis.from_time(*mn), axis.from_time(*mx), std::nullopt};
    return result;
}

double interpolated_quantile(std::vector<double> values, double p) {
    if (values.empty()) throw DomainError("quantile of an empty list");
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quantile probability must lie in [0, 1]");
    std::sort(values.begin(), values.end());
    const double pos = p * static_cast<double>(values.size() - 1);
    const auto k = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(k);
    if (k + 1 >= values.size()) return values.back();
    return values[k] + frac * (values[k + 1] - values[k]);
}

CrashWindow quantile_dates(const std::vector<Date>& tc_dates, double lo, double hi) {
    if (tc_dates.empty()) throw DomainError("quantile_dates: empty date list");
    if (!(lo > 0.0 && lo < hi && hi < 1.0)) {
        throw DomainError("quantiles must satisfy 0 < lo < hi < 1");
    }
    const Date epoch = *std::min_element(tc_dates.begin(), tc_dates.end());
    const TimeAxis axis(epoch);
    std::vector<double> times;
    times.reserve(tc_dates.size());
    for (Date d : tc_dates) times.push_back(axis.to_time(d));
    const double q_lo = interpolated_quantile(times, lo);
    const double q_hi = interpolated_quantile(times, hi);
    return CrashWindow{axis.from_time(q_lo), axis.from_time(q_hi), std::make_pair(lo, hi)};
}

CrashWindow full_range(const std::vector<Date>& tc_dates) {
    if (tc_dates.empty()) throw DomainError("full_range: empty date list");
    const auto [mn, mx] = std::minmax_element(tc_dates.begin(), tc_dates.end());
    return CrashWindow{*mn, *mx, std::nullopt};
}

std::vector<ExtrapolationPoint> extrapolate(const FitResult& fit, const TimeAxis& axis,
                                            int horizon_days, int samples_per_day) {
    if (horizon_days < 0) throw DomainError("extrapolation horizon must be >= 0");
    if (samples_per_day < 1) throw DomainError("samples_per_day must be >= 1");

    const double t0 = axis.to_time(fit.window_end);
    const double step = 1.0 / (TimeAxis::days_per_year * samples_per_day);
    const long n_samples = static_cast<long>(horizon_days) * samples_per_day;

    std::vector<ExtrapolationPoint> points;
    for (long j = 0; j <= n_samples; ++j) {
        const double t = t0 + static_cast<double>(j) * step;
        if (!(t <= fit.params.tc - step)) break;  // stop one sample short of the singularity
        points.push_back(ExtrapolationPoint{t, axis.from_time(t), lppl_value(fit.params, t)});
    }
    return points;
}

}  // namespace lppl
