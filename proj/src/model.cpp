#include "lppl/model.hpp"

#include <cmath>
#include <numbers>

#include "lppl/errors.hpp"
#include "lppl/linalg.hpp"

namespace lppl {

namespace {

double tau_or_throw(double tc, double t) {
    const double tau = tc - t;
    if (!(tau > 0.0)) {
        throw DomainError("model evaluated at t = " + std::to_string(t) +
                          " >= critical time tc = " + std::to_string(tc));
    }
    return tau;
}

}  // namespace

LpplParams LinearizedParams::to_params() const {
    LpplParams p;
    p.tc = tc;
    p.m = m;
    p.omega = omega;
    p.a = a;
    p.b = b;
    p.c = std::hypot(c1, c2);
    p.phi = std::atan2(c2, c1);
    if (p.phi < 0.0) p.phi += 2.0 * std::numbers::pi;
    return p;
}

FitWindow FitWindow::from_series(const PriceSeries& series, const TimeAxis& axis) {
    if (series.size() < 4) {
        throw DomainError("fit window needs at least 4 observations, got " +
                          std::to_string(series.size()));
    }
    FitWindow w;
    w.axis = axis;
    w.times.reserve(series.size());
    w.logp.reserve(series.size());
    for (const auto& o : series.observations()) {
        w.times.push_back(axis.to_time(o.date));
        w.logp.push_back(std::log(o.price));
    }
    w.start_date = series.first_date();
    w.end_date = series.last_date();
    return w;
}

double lppl_value(const LpplParams& p, double t) {
    const double tau = tau_or_throw(p.tc, t);
    const double powm = std::pow(tau, p.m);
    return p.a + p.b * powm + p.c * powm * std::cos(p.omega * std::log(tau) - p.phi);
}

double lppl_value(const LinearizedParams& p, double t) {
    const double tau = tau_or_throw(p.tc, t);
    const double powm = std::pow(tau, p.m);
    const double ang = p.omega * std::log(tau);
    return p.a + powm * (p.b + p.c1 * std::cos(ang) + p.c2 * std::sin(ang));
}

std::vector<double> residuals(const LpplParams& p, const FitWindow& w) {
    std::vector<double> r(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) r[i] = w.logp[i] - lppl_value(p, w.times[i]);
    return r;
}

double sse(const LpplParams& p, const FitWindow& w) {
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double r = w.logp[i] - lppl_value(p, w.times[i]);
        s += r * r;
    }
    return s;
}

Subordination subordinate(double tc, double m, double omega, const FitWindow& w) {
    const std::size_t n = w.size();
    if (n < 4) throw DomainError("subordination needs at least 4 observations");
    if (!(tc > w.end_time())) {
        throw DomainError("tc = " + std::to_string(tc) + " must exceed the last window time " +
                          std::to_string(w.end_time()));
    }
    if (!(m > 0.0 && m < 1.0)) throw DomainError("exponent m must lie in (0, 1)");
    if (!(omega > 0.0)) throw DomainError("omega must be positive");

    std::vector<double> basis(3 * n);
    double* f_pow = basis.data();
    double* f_cos = basis.data() + n;
    double* f_sin = basis.data() + 2 * n;
    std::vector<double> ones(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double tau = tc - w.times[i];
        const double lntau = std::log(tau);
        const double powm = std::exp(m * lntau);
        const double ang = omega * lntau;
        f_pow[i] = powm;
        f_cos[i] = powm * std::cos(ang);
        f_sin[i] = powm * std::sin(ang);
    }

    const std::array<const double*, 4> cols{ones.data(), f_pow, f_cos, f_sin};
    const auto solved = detail::least_squares_4(cols, w.logp.data(), n);

    Subordination result;
    result.params.tc = tc;
    result.params.m = m;
    result.params.omega = omega;
    result.params.a = solved.coef[0];
    result.params.b = solved.coef[1];
    result.params.c1 = solved.coef[2];
    result.params.c2 = solved.coef[3];
    result.used_qr_fallback = solved.used_qr;

    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double fit = solved.coef[0] + solved.coef[1] * f_pow[i] +
                           solved.coef[2] * f_cos[i] + solved.coef[3] * f_sin[i];
        const double r = w.logp[i] - fit;
        s += r * r;
    }
    result.sse = s;
    return result;
}

std::string BubbleDiagnostic::reason() const {
    if (overall) return "ok";
    std::string why;
    auto add = [&why](const char* part) {
        if (!why.empty()) why += "; ";
        why += part;
    };
    if (!b_negative) add("B sign");
    if (!m_in_range) add("exponent out of (0,1)");
    if (!tc_after_window) add("tc not after window end");
    return why;
}

BubbleDiagnostic is_bubble_like(const LpplParams& p, const FitWindow& w) {
    BubbleDiagnostic d;
    d.b_negative = p.b < 0.0;
    d.m_in_range = p.m > 0.0 && p.m < 1.0;
    d.tc_after_window = p.tc > w.end_time();
    d.overall = d.b_negative && d.m_in_range && d.tc_after_window;
    return d;
}

}  // namespace lppl
