// Command-line front end: `fit` for a single window, `scan` for the
// start-date scan with crash-window aggregation, `synth` for generating
// synthetic series with known ground truth.
//
// Exit codes: 0 success, 2 usage error, 3 input/data error, 4 numerical
// failure.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lppl/config.hpp"
#include "lppl/errors.hpp"
#include "lppl/report.hpp"
#include "lppl/scan.hpp"
#include "lppl/series.hpp"
#include "lppl/synth.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

struct SharedArgs {
    std::string input;
    std::string date_col = "date";
    std::string price_col = "close";
    std::string out;
    std::string config;
    std::string start;
    std::string end;
};

void add_shared(CLI::App* cmd, SharedArgs& args, bool input_required) {
    auto* in = cmd->add_option("--input", args.input, "Input CSV path");
    if (input_required) in->required();
    cmd->add_option("--date-col", args.date_col, "CSV date column name");
    cmd->add_option("--price-col", args.price_col, "CSV price column name");
    cmd->add_option("--out", args.out, "Write output here instead of stdout");
    cmd->add_option("--config", args.config, "Fitter config file (flat key=value)");
    cmd->add_option("--start", args.start, "Analysis start date (YYYY-MM-DD)");
    cmd->add_option("--end", args.end, "Analysis end date (YYYY-MM-DD)");
}

lppl::FitConfig resolve_fit_config(const SharedArgs& args) {
    lppl::FitConfig cfg;
    if (!args.config.empty()) {
        lppl::apply_fit_config(cfg, lppl::parse_key_value_file(args.config));
    }
    return cfg;
}

void emit(const SharedArgs& args, const std::string& text) {
    if (args.out.empty()) {
        std::cout << text;
    } else {
        lppl::write_text_atomic(args.out, text);
    }
}

// Start/end flags fall back to the series' own span.
std::pair<lppl::Date, lppl::Date> resolve_span(const SharedArgs& args,
                                               const lppl::PriceSeries& series) {
    const lppl::Date start =
        args.start.empty() ? series.first_date() : lppl::parse_date(args.start);
    const lppl::Date end = args.end.empty() ? series.last_date() : lppl::parse_date(args.end);
    if (!(start < end)) {
        throw CLI::ValidationError("--start must precede --end");
    }
    return {start, end};
}

int run_fit(const SharedArgs& args) {
    const lppl::PriceSeries series =
        lppl::parse_csv_file(args.input, {args.date_col, args.price_col});
    const auto [start, end] = resolve_span(args, series);
    const lppl::FitConfig fit_cfg = resolve_fit_config(args);

    lppl::ScanConfig cfg;
    cfg.n_windows = 1;
    cfg.first_start_date = start;
    cfg.end_date = end;
    cfg.fit = fit_cfg;

    const lppl::ScanResult scan = lppl::run_scan(series, cfg);
    const lppl::InputDigest digest{args.input, series.size(), series.first_date(),
                                   series.last_date()};
    emit(args, lppl::build_report(digest, cfg, scan, series).dump(2) + "\n");
    return kExitOk;
}

int run_scan_cmd(const SharedArgs& args, const lppl::ScanConfig& flags,
                 const std::string& plot_dir) {
    const lppl::PriceSeries series =
        lppl::parse_csv_file(args.input, {args.date_col, args.price_col});
    const auto [start, end] = resolve_span(args, series);

    lppl::ScanConfig cfg = flags;
    cfg.first_start_date = start;
    cfg.end_date = end;
    cfg.fit = resolve_fit_config(args);

    const lppl::ScanResult scan = lppl::run_scan(series, cfg);
    const lppl::InputDigest digest{args.input, series.size(), series.first_date(),
                                   series.last_date()};
    emit(args, lppl::build_report(digest, cfg, scan, series).dump(2) + "\n");
    if (!plot_dir.empty()) lppl::emit_plot_bundle(scan, series, cfg, plot_dir);
    return kExitOk;
}

struct SynthArgs {
    int tc_days_after_end = 30;
    double m = 0.5;
    double omega = 9.0;
    double phi = 1.0;
    double a = 8.0;
    double b = -1.0;
    double c = 0.002;
    double sigma = 0.0;
    std::uint64_t seed = 42;
    std::string start = "2008-10-15";
    std::string end = "2009-07-09";
    bool weekdays_only = false;
};

int run_synth(const SharedArgs& shared, const SynthArgs& args) {
    lppl::SynthSpec spec;
    spec.start_date = lppl::parse_date(args.start);
    spec.end_date = lppl::parse_date(args.end);
    if (!(spec.start_date < spec.end_date)) {
        throw CLI::ValidationError("--start must precede --end");
    }
    spec.weekdays_only = args.weekdays_only;
    spec.noise_sigma = args.sigma;
    spec.seed = args.seed;

    const lppl::TimeAxis axis(spec.start_date);
    spec.truth.tc = axis.to_time(spec.end_date + std::chrono::days{args.tc_days_after_end});
    spec.truth.m = args.m;
    spec.truth.omega = args.omega;
    spec.truth.phi = args.phi;
    spec.truth.a = args.a;
    spec.truth.b = args.b;
    spec.truth.c = args.c;

    const lppl::SynthResult result = lppl::generate(spec);
    emit(shared, lppl::to_csv(result.series, {shared.date_col, shared.price_col}));

    std::fprintf(stderr,
                 "synth truth: tc=%.17g (%s) m=%.17g omega=%.17g phi=%.17g a=%.17g b=%.17g "
                 "c=%.17g sigma=%.17g seed=%llu\n",
                 result.truth.tc, lppl::to_iso(axis.from_time(result.truth.tc)).c_str(),
                 result.truth.m, result.truth.omega, result.truth.phi, result.truth.a,
                 result.truth.b, result.truth.c, spec.noise_sigma,
                 static_cast<unsigned long long>(spec.seed));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Log-periodic power law bubble detector"};
    app.require_subcommand(1);

    SharedArgs fit_args, scan_args, synth_shared;
    lppl::ScanConfig scan_flags;
    std::string plot_dir;
    SynthArgs synth_args;

    auto* fit_cmd = app.add_subcommand("fit", "Fit one window and report the result");
    add_shared(fit_cmd, fit_args, /*input_required=*/true);

    auto* scan_cmd =
        app.add_subcommand("scan", "Start-date scan with crash-window aggregation");
    add_shared(scan_cmd, scan_args, /*input_required=*/true);
    scan_cmd->add_option("--step-days", scan_flags.step_days, "Start-date step (days)");
    scan_cmd->add_option("--windows", scan_flags.n_windows, "Number of windows");
    scan_cmd->add_option("--q-lo", scan_flags.quantile_lo, "Lower crash-window quantile");
    scan_cmd->add_option("--q-hi", scan_flags.quantile_hi, "Upper crash-window quantile");
    scan_cmd->add_option("--extrapolate-days", scan_flags.extrapolation_days,
                         "Extrapolation horizon (days)");
    scan_cmd->add_option("--plot-data", plot_dir, "Directory for plot CSV/JSON files");

    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic series (CSV)");
    add_shared(synth_cmd, synth_shared, /*input_required=*/false);
    synth_cmd->add_option("--tc-days-after-end", synth_args.tc_days_after_end,
                          "Critical time, days past the last sample");
    synth_cmd->add_option("--m", synth_args.m, "Power exponent");
    synth_cmd->add_option("--omega", synth_args.omega, "Log-frequency");
    synth_cmd->add_option("--phi", synth_args.phi, "Phase");
    synth_cmd->add_option("--a", synth_args.a, "Log-price offset");
    synth_cmd->add_option("--b", synth_args.b, "Power-law amplitude");
    synth_cmd->add_option("--c", synth_args.c, "Oscillation amplitude");
    synth_cmd->add_option("--sigma", synth_args.sigma, "Log-price noise std. dev.");
    synth_cmd->add_option("--seed", synth_args.seed, "RNG seed");
    synth_cmd->add_flag("--weekdays-only", synth_args.weekdays_only,
                        "Sample weekdays instead of every calendar day");
    // synth reuses --start/--end from the shared set for the sample span.

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (fit_cmd->parsed()) return run_fit(fit_args);
        if (scan_cmd->parsed()) return run_scan_cmd(scan_args, scan_flags, plot_dir);
        if (synth_cmd->parsed()) return run_synth(synth_shared, synth_args);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const lppl::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const lppl::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const lppl::NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitUsage;
}
