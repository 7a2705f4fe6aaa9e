#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "lppl/errors.hpp"
#include "lppl/model.hpp"
#include "lppl/synth.hpp"

using namespace lppl;

namespace {

// Uniform daily window over [0, span_years] with the given log-prices
// generator; keeps tests independent of the CSV/series machinery.
FitWindow make_window(std::size_t n, double span_years, const auto& logp_at) {
    FitWindow w;
    w.axis = TimeAxis(make_date(2009, 1, 1));
    for (std::size_t i = 0; i < n; ++i) {
        const double t = span_years * static_cast<double>(i) / static_cast<double>(n - 1);
        w.times.push_back(t);
        w.logp.push_back(logp_at(t));
    }
    w.start_date = w.axis.from_time(w.times.front());
    w.end_date = w.axis.from_time(w.times.back());
    return w;
}

LpplParams typical_params() {
    LpplParams p;
    p.tc = 0.80;
    p.m = 0.5;
    p.omega = 9.0;
    p.phi = 1.0;
    p.a = 7.6;
    p.b = -1.2;
    p.c = 0.08;
    return p;
}

}  // namespace

TEST_CASE("lppl_value: constant and pure power-law cases") {
    LpplParams p = typical_params();
    p.b = 0.0;
    p.c = 0.0;
    CHECK(lppl_value(p, 0.3) == 7.6);

    LpplParams q;
    q.tc = 4.5;
    q.m = 0.5;
    q.omega = 9.0;
    q.phi = 0.0;
    q.a = 0.0;
    q.b = 1.0;
    q.c = 0.0;
    CHECK(lppl_value(q, 0.5) == doctest::Approx(2.0).epsilon(1e-15));  // sqrt(4)
}

TEST_CASE("lppl_value: frozen high-precision reference") {
    // Independent 50-digit evaluation of the model at tau = 0.25 with
    // A=7.6, B=-1.2, C=0.08, m=0.5, omega=9, phi=1.
    const LpplParams p = typical_params();
    const double t = p.tc - 0.25;
    const double expected = 7.02454102966895506557085;
    CHECK(std::abs(lppl_value(p, t) - expected) <= 1e-12 * std::abs(expected));
}

TEST_CASE("lppl_value: domain violation at and past tc") {
    const LpplParams p = typical_params();
    CHECK_THROWS_AS(lppl_value(p, p.tc), DomainError);
    CHECK_THROWS_AS(lppl_value(p, p.tc + 0.1), DomainError);
    CHECK_NOTHROW(lppl_value(p, p.tc - 1e-9));
}

TEST_CASE("reparameterization equivalence across the window") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        LinearizedParams lp;
        lp.tc = 0.6 + 0.5 * unif(rng);
        lp.m = 0.1 + 0.8 * unif(rng);
        lp.omega = 4.0 + 16.0 * unif(rng);
        lp.a = 10.0 * (unif(rng) - 0.5);
        lp.b = 4.0 * (unif(rng) - 0.5);
        lp.c1 = 2.0 * (unif(rng) - 0.5);
        lp.c2 = 2.0 * (unif(rng) - 0.5);
        const LpplParams p = lp.to_params();
        CHECK(p.phi >= 0.0);
        CHECK(p.phi < 2.0 * std::numbers::pi);
        for (int i = 0; i < 20; ++i) {
            const double t = 0.55 * static_cast<double>(i) / 19.0;
            const double va = lppl_value(lp, t);
            const double vb = lppl_value(p, t);
            CHECK(std::abs(va - vb) <= 1e-12 * std::max(1.0, std::abs(va)));
        }
    }
}

TEST_CASE("residuals: self-consistency, affine shift, brute force") {
    const LpplParams p = typical_params();
    FitWindow w = make_window(50, 0.6, [&](double t) { return lppl_value(p, t); });

    auto r = residuals(p, w);
    for (double ri : r) CHECK(std::abs(ri) <= 1e-12);

    FitWindow shifted = w;
    for (double& y : shifted.logp) y += 0.1;
    const auto rs = residuals(p, shifted);
    for (std::size_t i = 0; i < rs.size(); ++i) {
        CHECK(rs[i] - r[i] == doctest::Approx(0.1).epsilon(1e-12));
    }

    // 5-point hand-built window, elementwise oracle
    FitWindow tiny = make_window(5, 0.4, [](double t) { return 1.0 + t; });
    const auto rt = residuals(p, tiny);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(rt[i] == tiny.logp[i] - lppl_value(p, tiny.times[i]));
    }
}

TEST_CASE("sse: trivial values and brute-force agreement") {
    const LpplParams p = typical_params();
    FitWindow w = make_window(20, 0.5, [&](double t) { return lppl_value(p, t); });
    CHECK(sse(p, w) <= 1e-24);

    // residuals (0.1, -0.1) -> 0.02
    FitWindow two = w;
    two.times = {0.1, 0.2};
    two.logp = {lppl_value(p, 0.1) + 0.1, lppl_value(p, 0.2) - 0.1};
    CHECK(sse(p, two) == doctest::Approx(0.02).epsilon(1e-12));

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(-0.5, 0.5);
    FitWindow noisy = make_window(20, 0.5, [&](double) { return 5.0 + unif(rng); });
    double expect = 0.0;
    for (std::size_t i = 0; i < noisy.size(); ++i) {
        const double r = noisy.logp[i] - lppl_value(p, noisy.times[i]);
        expect += r * r;
    }
    CHECK(sse(p, noisy) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("subordinate: exact recovery in the noiseless regime") {
    LinearizedParams truth;
    truth.tc = 0.9;
    truth.m = 0.45;
    truth.omega = 8.0;
    truth.a = 7.9;
    truth.b = -1.1;
    truth.c1 = 0.05;
    truth.c2 = -0.03;
    FitWindow w = make_window(120, 0.75, [&](double t) { return lppl_value(truth, t); });

    const auto sub = subordinate(truth.tc, truth.m, truth.omega, w);
    CHECK(sub.params.a == doctest::Approx(truth.a).epsilon(1e-8));
    CHECK(sub.params.b == doctest::Approx(truth.b).epsilon(1e-8));
    CHECK(sub.params.c1 == doctest::Approx(truth.c1).epsilon(1e-8));
    CHECK(sub.params.c2 == doctest::Approx(truth.c2).epsilon(1e-8));
    CHECK(sub.sse <= 1e-16);
}

TEST_CASE("subordinate: constant window collapses to the offset") {
    FitWindow w = make_window(60, 0.5, [](double) { return 3.25; });
    const auto sub = subordinate(0.7, 0.5, 9.0, w);
    CHECK(sub.params.a == doctest::Approx(3.25).epsilon(1e-10));
    CHECK(std::abs(sub.params.b) <= 1e-9);
    CHECK(std::abs(sub.params.c1) <= 1e-9);
    CHECK(std::abs(sub.params.c2) <= 1e-9);
}

TEST_CASE("subordinate: local optimality probe") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    FitWindow w = make_window(80, 0.6, [&](double t) { return 6.0 + 0.5 * t + 0.02 * unif(rng); });
    const auto sub = subordinate(0.75, 0.4, 7.0, w);

    const auto sse_of = [&](double a, double b, double c1, double c2) {
        LinearizedParams q = sub.params;
        q.a = a;
        q.b = b;
        q.c1 = c1;
        q.c2 = c2;
        double s = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            const double r = w.logp[i] - lppl_value(q, w.times[i]);
            s += r * r;
        }
        return s;
    };

    const auto& p = sub.params;
    for (const double d : {-1e-3, 1e-3}) {
        CHECK(sse_of(p.a + d, p.b, p.c1, p.c2) >= sub.sse);
        CHECK(sse_of(p.a, p.b + d, p.c1, p.c2) >= sub.sse);
        CHECK(sse_of(p.a, p.b, p.c1 + d, p.c2) >= sub.sse);
        CHECK(sse_of(p.a, p.b, p.c1, p.c2 + d) >= sub.sse);
    }
}

TEST_CASE("subordinate: optimality against random quadruples") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int instance = 0; instance < 100; ++instance) {
        const double tc = 0.65 + 0.4 * unif(rng);
        const double m = 0.15 + 0.7 * unif(rng);
        const double omega = 4.5 + 14.0 * unif(rng);
        FitWindow w = make_window(40 + instance % 30, 0.6, [&](double t) {
            return 7.0 + 0.8 * t + 0.05 * (unif(rng) - 0.5);
        });
        const auto sub = subordinate(tc, m, omega, w);

        for (int k = 0; k < 1000; ++k) {
            LinearizedParams q = sub.params;
            const double scale = std::pow(10.0, -4.0 + 3.0 * unif(rng));
            q.a += scale * (unif(rng) - 0.5);
            q.b += scale * (unif(rng) - 0.5);
            q.c1 += scale * (unif(rng) - 0.5);
            q.c2 += scale * (unif(rng) - 0.5);
            double s = 0.0;
            for (std::size_t i = 0; i < w.size(); ++i) {
                const double r = w.logp[i] - lppl_value(q, w.times[i]);
                s += r * r;
            }
            if (s < sub.sse) {
                FAIL("random quadruple beat the subordinated optimum: " << s << " < "
                                                                        << sub.sse);
            }
        }
    }
}

TEST_CASE("subordinate: matches a dense least-squares oracle") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int instance = 0; instance < 50; ++instance) {
        const double tc = 0.7 + 0.35 * unif(rng);
        const double m = 0.2 + 0.6 * unif(rng);
        const double omega = 5.0 + 12.0 * unif(rng);
        FitWindow w = make_window(60, 0.62, [&](double t) {
            return 8.0 - 0.9 * std::pow(0.8 - t, 0.5) + 0.02 * (unif(rng) - 0.5);
        });

        const auto sub = subordinate(tc, m, omega, w);

        const auto n = static_cast<Eigen::Index>(w.size());
        Eigen::MatrixXd design(n, 4);
        Eigen::VectorXd y(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double tau = tc - w.times[static_cast<std::size_t>(i)];
            const double powm = std::pow(tau, m);
            design(i, 0) = 1.0;
            design(i, 1) = powm;
            design(i, 2) = powm * std::cos(omega * std::log(tau));
            design(i, 3) = powm * std::sin(omega * std::log(tau));
            y(i) = w.logp[static_cast<std::size_t>(i)];
        }
        const Eigen::Vector4d oracle = design.colPivHouseholderQr().solve(y);

        const double got[4] = {sub.params.a, sub.params.b, sub.params.c1, sub.params.c2};
        for (int j = 0; j < 4; ++j) {
            const double tol = 1e-8 * std::max(1.0, std::abs(oracle(j)));
            CHECK(std::abs(got[j] - oracle(j)) <= tol);
        }
    }
}

TEST_CASE("subordinate: preconditions and degeneracy") {
    FitWindow w = make_window(50, 0.5, [](double t) { return 1.0 + t; });
    CHECK_THROWS_AS(subordinate(0.4, 0.5, 9.0, w), DomainError);   // tc inside window
    CHECK_THROWS_AS(subordinate(0.7, 1.5, 9.0, w), DomainError);   // m out of range
    CHECK_THROWS_AS(subordinate(0.7, 0.5, -1.0, w), DomainError);  // omega negative

    FitWindow three = w;
    three.times.resize(3);
    three.logp.resize(3);
    CHECK_THROWS_AS(subordinate(0.7, 0.5, 9.0, three), DomainError);

    // Two distinct sample times only: the 4-column basis has rank 2 and the
    // rank-revealing path must reject it.
    FitWindow degenerate;
    degenerate.axis = w.axis;
    degenerate.times = {0.1, 0.1, 0.2, 0.2};
    degenerate.logp = {1.0, 1.0, 2.0, 2.0};
    degenerate.start_date = make_date(2009, 1, 1);
    degenerate.end_date = make_date(2009, 3, 1);
    CHECK_THROWS_AS(subordinate(0.7, 0.5, 9.0, degenerate), NumericError);
}

TEST_CASE("model curvature: convex increasing log-price for B<0, C=0") {
    LpplParams p;
    p.tc = 1.0;
    p.m = 0.5;
    p.omega = 9.0;
    p.phi = 0.0;
    p.a = 8.0;
    p.b = -1.0;
    p.c = 0.0;
    const double h = 1e-3;
    double prev = lppl_value(p, 0.0);
    for (double t = h; t < 0.98; t += h) {
        const double left = lppl_value(p, t - h);
        const double mid = lppl_value(p, t);
        const double right = lppl_value(p, t + h);
        CHECK(right - 2.0 * mid + left > 0.0);  // convex
        CHECK(mid > prev);                      // increasing
        prev = mid;
    }
}

TEST_CASE("model slope diverges approaching tc") {
    LpplParams p;
    p.tc = 1.0;
    p.m = 0.5;
    p.omega = 9.0;
    p.phi = 0.0;
    p.a = 8.0;
    p.b = -1.0;
    p.c = 0.0;
    // First differences over a geometric grid of tau must keep growing.
    double last_slope = 0.0;
    for (double tau = 0.5; tau > 1e-7; tau *= 0.5) {
        const double h = tau * 1e-3;
        const double slope = (lppl_value(p, p.tc - tau + h) - lppl_value(p, p.tc - tau)) / h;
        CHECK(slope > last_slope);
        last_slope = slope;
    }
}

TEST_CASE("is_bubble_like: flag combinations") {
    FitWindow w = make_window(30, 0.5, [](double t) { return 1.0 + t; });

    LpplParams good;
    good.tc = 0.6;  // past the window end
    good.m = 0.5;
    good.omega = 9.0;
    good.b = -1.2;
    CHECK(is_bubble_like(good, w).overall);
    CHECK(is_bubble_like(good, w).reason() == "ok");

    LpplParams pos_b = good;
    pos_b.b = 0.5;
    const auto d1 = is_bubble_like(pos_b, w);
    CHECK_FALSE(d1.overall);
    CHECK(d1.reason() == "B sign");

    LpplParams bad_m = good;
    bad_m.m = 1.2;
    const auto d2 = is_bubble_like(bad_m, w);
    CHECK_FALSE(d2.overall);
    CHECK(d2.reason() == "exponent out of (0,1)");

    LpplParams early_tc = good;
    early_tc.tc = 0.4;
    const auto d3 = is_bubble_like(early_tc, w);
    CHECK_FALSE(d3.overall);
    CHECK(d3.reason() == "tc not after window end");
}

TEST_CASE("FitWindow::from_series maps dates and log-prices") {
    std::vector<Observation> obs;
    for (int i = 0; i < 10; ++i) {
        obs.push_back({make_date(2009, 1, 1) + std::chrono::days{i}, 100.0 + i});
    }
    const auto series = PriceSeries::from_observations(obs);
    const TimeAxis axis(make_date(2008, 12, 1));
    const auto w = FitWindow::from_series(series, axis);
    REQUIRE(w.size() == 10);
    CHECK(w.times.front() == doctest::Approx(31.0 / 365.25).epsilon(1e-15));
    CHECK(w.logp[3] == doctest::Approx(std::log(103.0)).epsilon(1e-15));
    CHECK(w.start_date == make_date(2009, 1, 1));
    CHECK(w.end_date == make_date(2009, 1, 10));
}
