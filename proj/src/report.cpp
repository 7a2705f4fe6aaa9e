#include "lppl/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "lppl/errors.hpp"

namespace lppl {

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

json crash_window_json(const CrashWindow& w) {
    json j{{"lo", to_iso(w.lo)}, {"hi", to_iso(w.hi)}};
    if (w.quantiles) {
        j["q_lo"] = w.quantiles->first;
        j["q_hi"] = w.quantiles->second;
    }
    return j;
}

json fit_config_json(const FitConfig& f) {
    return json{
        {"tc_grid_lo_days", f.tc_offset_days.lo},
        {"tc_grid_hi_days", f.tc_offset_days.hi},
        {"tc_grid_step_days", f.tc_offset_days.step},
        {"m_grid_lo", f.m_grid.lo},
        {"m_grid_hi", f.m_grid.hi},
        {"m_grid_step", f.m_grid.step},
        {"omega_grid_lo", f.omega_grid.lo},
        {"omega_grid_hi", f.omega_grid.hi},
        {"omega_grid_step", f.omega_grid.step},
        {"refine_top_k", f.refine_top_k},
        {"min_observations", f.min_observations},
        {"simplex_max_iterations", f.simplex.max_iterations},
        {"simplex_x_tolerance", f.simplex.x_tolerance},
        {"simplex_f_tolerance", f.simplex.f_tolerance},
        {"bound_tc_lo_days", f.bounds.tc_lo_days},
        {"bound_tc_hi_days", f.bounds.tc_hi_days},
        {"bound_m_lo", f.bounds.m_lo},
        {"bound_m_hi", f.bounds.m_hi},
        {"bound_omega_lo", f.bounds.omega_lo},
        {"bound_omega_hi", f.bounds.omega_hi},
    };
}

json window_json(const FitResult& fr, int window_index) {
    return json{
        {"index", window_index},
        {"start_date", to_iso(fr.window_start)},
        {"end_date", to_iso(fr.window_end)},
        {"n_observations", fr.n_observations},
        {"params",
         {{"tc", fr.params.tc},
          {"m", fr.params.m},
          {"omega", fr.params.omega},
          {"phi", fr.params.phi},
          {"a", fr.params.a},
          {"b", fr.params.b},
          {"c", fr.params.c}}},
        {"tc_date", to_iso(fr.tc_date)},
        {"sse", fr.sse},
        {"rmse", fr.rmse},
        {"converged", fr.converged},
        {"iterations", fr.iterations},
        {"bubble",
         {{"b_negative", fr.diagnostic.b_negative},
          {"m_in_range", fr.diagnostic.m_in_range},
          {"tc_after_window", fr.diagnostic.tc_after_window},
          {"overall", fr.diagnostic.overall},
          {"reason", fr.diagnostic.reason()}}},
    };
}

std::string format_price(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

nlohmann::json build_report(const InputDigest& input, const ScanConfig& cfg,
                            const ScanResult& scan, const PriceSeries& series) {
    json windows = json::array();
    for (std::size_t i = 0; i < scan.fits.size(); ++i) {
        windows.push_back(window_json(scan.fits[i], scan.fit_window_indices[i]));
    }
    json failures = json::array();
    for (const auto& f : scan.failures) {
        failures.push_back(json{{"window_index", f.window_index}, {"message", f.message}});
    }

    // Highest observed price over the analysis span.
    const Observation* peak = nullptr;
    for (const auto& o : series.observations()) {
        if (o.date < cfg.first_start_date || o.date > cfg.end_date) continue;
        if (peak == nullptr || o.price > peak->price) peak = &o;
    }
    if (peak == nullptr) throw DomainError("no observations inside the analysis span");

    return json{
        {"schema_version", kSchemaVersion},
        {"input",
         {{"file", input.file},
          {"rows", input.rows},
          {"first_date", to_iso(input.first_date)},
          {"last_date", to_iso(input.last_date)}}},
        {"config",
         {{"scan",
           {{"step_days", cfg.step_days},
            {"n_windows", cfg.n_windows},
            {"first_start_date", to_iso(cfg.first_start_date)},
            {"end_date", to_iso(cfg.end_date)},
            {"quantile_lo", cfg.quantile_lo},
            {"quantile_hi", cfg.quantile_hi},
            {"extrapolation_days", cfg.extrapolation_days},
            {"samples_per_day", cfg.samples_per_day}}},
          {"fit", fit_config_json(cfg.fit)}}},
        {"windows", windows},
        {"failures", failures},
        {"aggregates",
         {{"quantile_window", crash_window_json(scan.quantile_window)},
          {"full_range", crash_window_json(scan.full_range)},
          {"n_bubble_like", scan.n_bubble_like},
          {"n_fits", scan.fits.size()}}},
        {"peak", {{"date", to_iso(peak->date)}, {"price", peak->price}}},
    };
}

Aggregates recompute_aggregates(const nlohmann::json& report) {
    const TimeAxis axis(parse_date(report.at("input").at("first_date").get<std::string>()));
    const double q_lo = report.at("config").at("scan").at("quantile_lo").get<double>();
    const double q_hi = report.at("config").at("scan").at("quantile_hi").get<double>();

    std::vector<double> tc_times;
    int n_bubble = 0;
    for (const auto& w : report.at("windows")) {
        tc_times.push_back(w.at("params").at("tc").get<double>());
        if (w.at("bubble").at("overall").get<bool>()) ++n_bubble;
    }
    if (tc_times.empty()) throw DomainError("report has no window records");

    Aggregates agg;
    agg.quantile_window = CrashWindow{axis.from_time(interpolated_quantile(tc_times, q_lo)),
                                      axis.from_time(interpolated_quantile(tc_times, q_hi)),
                                      std::make_pair(q_lo, q_hi)};
    const auto [mn, mx] = std::minmax_element(tc_times.begin(), tc_times.end());
    agg.full_range = CrashWindow{axis.from_time(*mn), axis.from_time(*mx), std::nullopt};
    agg.n_bubble_like = n_bubble;
    return agg;
}

void write_text_atomic(const std::string& path, const std::string& text) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write to " + tmp.string());
        out << text;
        if (!out.flush()) throw Error("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw Error("cannot move " + tmp.string() + " to " + path + ": " + ec.message());
}

void emit_plot_bundle(const ScanResult& scan, const PriceSeries& series, const ScanConfig& cfg,
                      const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error("cannot create plot directory " + dir + ": " + ec.message());

    const TimeAxis axis(series.first_date());

    std::string observed = "date,price\n";
    for (const auto& o : series.observations()) {
        if (o.date < cfg.first_start_date || o.date > cfg.end_date) continue;
        observed += to_iso(o.date) + "," + format_price(o.price) + "\n";
    }
    write_text_atomic((fs::path(dir) / "observed.csv").string(), observed);

    const auto windows = make_windows(series, cfg);
    for (std::size_t i = 0; i < scan.fits.size(); ++i) {
        const FitResult& fr = scan.fits[i];
        const int k = scan.fit_window_indices[i];
        const FitWindow& w = windows[static_cast<std::size_t>(k)];

        std::string fitted = "date,model_price\n";
        for (std::size_t j = 0; j < w.size(); ++j) {
            const double model = std::exp(lppl_value(fr.params, w.times[j]));
            fitted += to_iso(axis.from_time(w.times[j])) + "," + format_price(model) + "\n";
        }
        write_text_atomic((fs::path(dir) / ("fit_" + std::to_string(k) + ".csv")).string(),
                          fitted);

        std::string extrap = "date,model_price\n";
        for (const auto& pt :
             extrapolate(fr, axis, cfg.extrapolation_days, cfg.samples_per_day)) {
            extrap += to_iso(pt.date) + "," + format_price(std::exp(pt.log_price)) + "\n";
        }
        write_text_atomic((fs::path(dir) / ("extrap_" + std::to_string(k) + ".csv")).string(),
                          extrap);
    }

    json annotations{
        {"schema_version", kSchemaVersion},
        {"quantile_window", crash_window_json(scan.quantile_window)},
        {"full_range", crash_window_json(scan.full_range)},
        {"n_bubble_like", scan.n_bubble_like},
    };
    const Observation* peak = nullptr;
    for (const auto& o : series.observations()) {
        if (o.date < cfg.first_start_date || o.date > cfg.end_date) continue;
        if (peak == nullptr || o.price > peak->price) peak = &o;
    }
    if (peak != nullptr) {
        annotations["peak"] = json{{"date", to_iso(peak->date)}, {"price", peak->price}};
    }
    json tc_dates = json::array();
    for (Date d : scan.tc_dates) tc_dates.push_back(to_iso(d));
    annotations["tc_dates"] = tc_dates;
    write_text_atomic((fs::path(dir) / "annotations.json").string(), annotations.dump(2) + "\n");
}

}  // namespace lppl
