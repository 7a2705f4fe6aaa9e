#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lppl/dates.hpp"
#include "lppl/series.hpp"

namespace lppl {

/// Log-periodic power law parameters. The model log-price at time t < tc is
///
///     ln p(t) = A + B*tau^m + C*tau^m*cos(omega*ln(tau) - phi),  tau = tc - t
///
/// tc is the critical time (decimal years on the window's TimeAxis), m the
/// power exponent, omega the angular log-frequency, phi the phase in
/// [0, 2*pi). A bubble signature has B < 0 and 0 < m < 1: log-price then
/// accelerates upward toward a finite-time singularity at tc.
struct LpplParams {
    double tc = 0.0;
    double m = 0.5;
    double omega = 9.0;
    double phi = 0.0;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

/// Same model with the oscillation split into quadrature components:
/// c1 = C*cos(phi), c2 = C*sin(phi). Linear in (a, b, c1, c2) for fixed
/// (tc, m, omega), which is what makes the least-squares slaving possible.
struct LinearizedParams {
    double tc = 0.0;
    double m = 0.5;
    double omega = 9.0;
    double a = 0.0;
    double b = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;

    /// Equivalent amplitude/phase form; phi normalized to [0, 2*pi).
    LpplParams to_params() const;
};

/// One analysis window: observation times (decimal years), natural-log
/// prices, and the calendar span. Times are strictly increasing and there
/// are at least 4 observations (the linear subproblem has 4 unknowns).
struct FitWindow {
    std::vector<double> times;
    std::vector<double> logp;
    Date start_date{};
    Date end_date{};
    TimeAxis axis{Date{}};

    static FitWindow from_series(const PriceSeries& series, const TimeAxis& axis);

    std::size_t size() const { return times.size(); }
    double end_time() const { return times.back(); }
};

/// Model log-price at time t. Throws DomainError if t >= p.tc.
double lppl_value(const LpplParams& p, double t);
double lppl_value(const LinearizedParams& p, double t);

/// Elementwise observed-minus-model log-price residuals.
std::vector<double> residuals(const LpplParams& p, const FitWindow& w);

/// Sum of squared residuals.
double sse(const LpplParams& p, const FitWindow& w);

struct Subordination {
    LinearizedParams params;
    double sse = 0.0;
    bool used_qr_fallback = false;
};

/// For fixed (tc, m, omega), returns the (a, b, c1, c2) minimizing the sum
/// of squared log-price residuals, via the 4-unknown linear least-squares
/// system over the basis {1, tau^m, tau^m*cos(omega*ln tau),
/// tau^m*sin(omega*ln tau)}. Solved by normal equations with a symmetric
/// positive-definite factorization; falls back to column-pivoted QR on the
/// design matrix when the condition estimate exceeds 1e12. Throws
/// NumericError when the basis is numerically rank-deficient and
/// DomainError when preconditions fail (tc <= last time, m or omega out of
/// range, window shorter than 4).
Subordination subordinate(double tc, double m, double omega, const FitWindow& w);

struct BubbleDiagnostic {
    bool b_negative = false;      // B < 0: upward acceleration toward tc
    bool m_in_range = false;      // 0 < m < 1: finite-time singularity regime
    bool tc_after_window = false; // critical time beyond the observed span
    bool overall = false;         // all three

    /// Human-readable failure summary, "ok" when positive.
    std::string reason() const;
};

/// Faster-than-exponential growth check on a fitted parameter set.
BubbleDiagnostic is_bubble_like(const LpplParams& p, const FitWindow& w);

}  // namespace lppl
