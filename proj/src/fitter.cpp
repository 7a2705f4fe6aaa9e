#include "lppl/fitter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lppl/errors.hpp"

namespace lppl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool node_less(const GridNode& a, const GridNode& b) {
    if (a.sse != b.sse) return a.sse < b.sse;
    if (a.tc != b.tc) return a.tc < b.tc;
    if (a.m != b.m) return a.m < b.m;
    return a.omega < b.omega;
}

struct NodeEval {
    GridNode node;
    bool ok = false;
};

NodeEval eval_node(double tc, double m, double omega, const FitWindow& w) {
    NodeEval e;
    e.node.tc = tc;
    e.node.m = m;
    e.node.omega = omega;
    try {
        const Subordination s = subordinate(tc, m, omega, w);
        e.node.params = s.params;
        e.node.sse = s.sse;
        e.ok = std::isfinite(s.sse);
    } catch (const NumericError&) {
        e.ok = false;  // degenerate basis at this node; skip it
    }
    return e;
}

std::vector<GridNode> run_grid(const FitWindow& w, const FitConfig& cfg, bool parallel) {
    cfg.validate();
    if (w.size() < cfg.min_observations) {
        throw DomainError("window has " + std::to_string(w.size()) +
                          " observations, fitter needs at least " +
                          std::to_string(cfg.min_observations));
    }

    const double end_t = w.end_time();
    const FitBounds& bounds = cfg.bounds;

    std::vector<double> tcs;
    for (double off : cfg.tc_offset_days.values()) {
        if (off >= bounds.tc_lo_days && off <= bounds.tc_hi_days) {
            tcs.push_back(end_t + off / TimeAxis::days_per_year);
        }
    }
    std::vector<double> ms;
    for (double m : cfg.m_grid.values()) {
        if (m >= bounds.m_lo && m <= bounds.m_hi) ms.push_back(m);
    }
    std::vector<double> omegas;
    for (double om : cfg.omega_grid.values()) {
        if (om >= bounds.omega_lo && om <= bounds.omega_hi) omegas.push_back(om);
    }
    if (tcs.empty() || ms.empty() || omegas.empty()) {
        throw DomainError("grid is empty after applying bounds");
    }

    const std::size_t n_nodes = tcs.size() * ms.size() * omegas.size();
    std::vector<NodeEval> evals(n_nodes);

    // Node evaluations are independent; results land at fixed indices, so
    // the parallel driver is bit-identical to the serial reference.
    const auto body = [&](std::size_t idx) {
        const std::size_t i_tc = idx / (ms.size() * omegas.size());
        const std::size_t rem = idx % (ms.size() * omegas.size());
        const std::size_t i_m = rem / omegas.size();
        const std::size_t i_om = rem % omegas.size();
        evals[idx] = eval_node(tcs[i_tc], ms[i_m], omegas[i_om], w);
    };

    if (parallel) {
#pragma omp parallel for schedule(static)
        for (long idx = 0; idx < static_cast<long>(n_nodes); ++idx) {
            body(static_cast<std::size_t>(idx));
        }
    } else {
        for (std::size_t idx = 0; idx < n_nodes; ++idx) body(idx);
    }

    std::vector<GridNode> nodes;
    nodes.reserve(n_nodes);
    for (const auto& e : evals) {
        if (e.ok) nodes.push_back(e.node);
    }
    if (nodes.empty()) throw NumericError("all grid nodes degenerate");
    std::sort(nodes.begin(), nodes.end(), node_less);
    return nodes;
}

// Box-normalized coordinates for the simplex: u in [0,1]^3 maps onto
// (tc, m, omega) within the configured bounds.
struct Box {
    double lo[3];
    double hi[3];

    Box(const FitBounds& b, double end_t) {
        lo[0] = end_t + b.tc_lo_days / TimeAxis::days_per_year;
        hi[0] = end_t + b.tc_hi_days / TimeAxis::days_per_year;
        lo[1] = b.m_lo;
        hi[1] = b.m_hi;
        lo[2] = b.omega_lo;
        hi[2] = b.omega_hi;
    }

    std::array<double, 3> denorm(const std::array<double, 3>& u) const {
        std::array<double, 3> v;
        for (int i = 0; i < 3; ++i) {
            const double ui = std::clamp(u[i], 0.0, 1.0);
            v[i] = lo[i] + ui * (hi[i] - lo[i]);
        }
        return v;
    }

    std::array<double, 3> norm(double tc, double m, double omega) const {
        std::array<double, 3> raw{tc, m, omega};
        std::array<double, 3> u;
        for (int i = 0; i < 3; ++i) u[i] = std::clamp((raw[i] - lo[i]) / (hi[i] - lo[i]), 0.0, 1.0);
        return u;
    }
};

struct Best {
    double tc = 0.0, m = 0.0, omega = 0.0;
    double sse = kInf;
};

}  // namespace

std::vector<double> GridSpec::values() const {
    std::vector<double> v;
    if (!(step > 0.0) || hi < lo) return v;
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    v.reserve(count);
    for (std::size_t i = 0; i < count; ++i) v.push_back(lo + static_cast<double>(i) * step);
    return v;
}

void FitConfig::validate() const {
    auto check_grid = [](const GridSpec& g, const char* name) {
        if (!(g.step > 0.0) || g.hi < g.lo || g.values().empty()) {
            throw DomainError(std::string("invalid grid for ") + name);
        }
    };
    check_grid(tc_offset_days, "tc offset");
    check_grid(m_grid, "m");
    check_grid(omega_grid, "omega");
    if (refine_top_k < 1) throw DomainError("refine_top_k must be >= 1");
    if (min_observations < 4) throw DomainError("min_observations must be >= 4");
    if (simplex.max_iterations < 1 || !(simplex.x_tolerance > 0.0) ||
        !(simplex.f_tolerance > 0.0)) {
        throw DomainError("invalid simplex configuration");
    }
    if (!(bounds.tc_lo_days > 0.0) || !(bounds.tc_hi_days > bounds.tc_lo_days)) {
        throw DomainError("invalid tc bounds");
    }
    if (!(bounds.m_lo > 0.0 && bounds.m_hi < 1.0 && bounds.m_lo < bounds.m_hi)) {
        throw DomainError("m bounds must satisfy 0 < lo < hi < 1");
    }
    if (!(bounds.omega_lo > 0.0 && bounds.omega_lo < bounds.omega_hi)) {
        throw DomainError("invalid omega bounds");
    }
}

std::vector<GridNode> grid_search(const FitWindow& w, const FitConfig& cfg) {
    return run_grid(w, cfg, /*parallel=*/true);
}

std::vector<GridNode> grid_search_serial(const FitWindow& w, const FitConfig& cfg) {
    return run_grid(w, cfg, /*parallel=*/false);
}

FitResult refine(const GridNode& seed, const FitWindow& w, const FitConfig& cfg) {
    cfg.validate();
    const Box box(cfg.bounds, w.end_time());

    Best best{seed.tc, seed.m, seed.omega, seed.sse};

    const auto objective = [&](const std::array<double, 3>& u) -> double {
        const auto v = box.denorm(u);
        double f = kInf;
        try {
            f = subordinate(v[0], v[1], v[2], w).sse;
        } catch (const NumericError&) {
            return kInf;
        }
        if (f < best.sse) best = Best{v[0], v[1], v[2], f};
        return f;
    };

    // Nelder-Mead with reflection 1, expansion 2, contraction 0.5,
    // shrink 0.5; trial points are clamped to the box.
    constexpr int kDim = 3;
    std::array<std::array<double, 3>, kDim + 1> x;
    std::array<double, kDim + 1> f;

    x[0] = box.norm(seed.tc, seed.m, seed.omega);
    constexpr double kInitStep = 0.05;
    for (int i = 1; i <= kDim; ++i) {
        x[i] = x[0];
        x[i][i - 1] += (x[0][i - 1] + kInitStep <= 1.0) ? kInitStep : -kInitStep;
    }
    for (int i = 0; i <= kDim; ++i) f[i] = objective(x[i]);

    const auto order = [&] {
        std::array<int, kDim + 1> idx{0, 1, 2, 3};
        std::sort(idx.begin(), idx.end(),
                  [&](int a, int b) { return f[a] != f[b] ? f[a] < f[b] : a < b; });
        std::array<std::array<double, 3>, kDim + 1> xs;
        std::array<double, kDim + 1> fs;
        for (int i = 0; i <= kDim; ++i) {
            xs[i] = x[idx[i]];
            fs[i] = f[idx[i]];
        }
        x = xs;
        f = fs;
    };

    bool converged = false;
    int iterations = 0;
    for (; iterations < cfg.simplex.max_iterations; ++iterations) {
        order();

        double spread_x = 0.0;
        for (int i = 1; i <= kDim; ++i) {
            for (int d = 0; d < kDim; ++d) {
                spread_x = std::max(spread_x, std::abs(x[i][d] - x[0][d]));
            }
        }
        const double spread_f = f[kDim] - f[0];
        if (spread_x <= cfg.simplex.x_tolerance && spread_f <= cfg.simplex.f_tolerance) {
            converged = true;
            break;
        }

        std::array<double, 3> centroid{};
        for (int i = 0; i < kDim; ++i) {
            for (int d = 0; d < kDim; ++d) centroid[d] += x[i][d] / kDim;
        }

        const auto point_at = [&](double coeff) {
            std::array<double, 3> p;
            for (int d = 0; d < kDim; ++d) {
                p[d] = std::clamp(centroid[d] + coeff * (centroid[d] - x[kDim][d]), 0.0, 1.0);
            }
            return p;
        };

        const auto xr = point_at(1.0);
        const double fr = objective(xr);
        if (fr < f[0]) {
            const auto xe = point_at(2.0);
            const double fe = objective(xe);
            if (fe < fr) {
                x[kDim] = xe;
                f[kDim] = fe;
            } else {
                x[kDim] = xr;
                f[kDim] = fr;
            }
        } else if (fr < f[kDim - 1]) {
            x[kDim] = xr;
            f[kDim] = fr;
        } else {
            const bool outside = fr < f[kDim];
            const auto xc = point_at(outside ? 0.5 : -0.5);
            const double fc = objective(xc);
            if (fc < (outside ? fr : f[kDim])) {
                x[kDim] = xc;
                f[kDim] = fc;
            } else {
                for (int i = 1; i <= kDim; ++i) {  // shrink toward the best vertex
                    for (int d = 0; d < kDim; ++d) x[i][d] = x[0][d] + 0.5 * (x[i][d] - x[0][d]);
                    f[i] = objective(x[i]);
                }
            }
        }
    }

    // Assemble from the best point seen anywhere in the search (never worse
    // than the seed itself).
    const Subordination sub = subordinate(best.tc, best.m, best.omega, w);
    FitResult result;
    result.params = sub.params.to_params();
    result.sse = sub.sse;
    result.rmse = std::sqrt(sub.sse / static_cast<double>(w.size()));
    result.window_start = w.start_date;
    result.window_end = w.end_date;
    result.n_observations = w.size();
    result.converged = converged;
    result.iterations = iterations;
    result.diagnostic = is_bubble_like(result.params, w);
    result.tc_date = w.axis.from_time(result.params.tc);
    return result;
}

FitResult fit(const FitWindow& w, const FitConfig& cfg) {
    const auto nodes = grid_search(w, cfg);
    const std::size_t k = std::min<std::size_t>(nodes.size(),
                                                static_cast<std::size_t>(cfg.refine_top_k));

    std::vector<FitResult> refined(k);
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < static_cast<long>(k); ++i) {
        refined[i] = refine(nodes[i], w, cfg);
    }

    std::size_t winner = 0;
    for (std::size_t i = 1; i < k; ++i) {
        if (refined[i].sse < refined[winner].sse) winner = i;  // ties keep the better seed
    }
    return refined[winner];
}

}  // namespace lppl
