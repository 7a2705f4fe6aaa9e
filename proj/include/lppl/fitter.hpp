#pragma once

#include <cstddef>
#include <vector>

#include "lppl/model.hpp"

namespace lppl {

/// Inclusive arithmetic grid lo, lo+step, ... while <= hi (+ rounding slack).
struct GridSpec {
    double lo = 0.0;
    double hi = 0.0;
    double step = 1.0;

    std::vector<double> values() const;
};

struct SimplexConfig {
    int max_iterations = 2000;
    double x_tolerance = 1e-8;  // on box-normalized coordinates
    double f_tolerance = 1e-12; // absolute objective spread
};

/// Box constraints for the nonlinear refinement; tc expressed as days past
/// the window's last observation.
struct FitBounds {
    double tc_lo_days = 1.0;
    double tc_hi_days = 180.0;
    double m_lo = 0.1;
    double m_hi = 0.9;
    double omega_lo = 4.0;
    double omega_hi = 25.0;
};

struct FitConfig {
    GridSpec tc_offset_days{5.0, 180.0, 5.0};
    GridSpec m_grid{0.1, 0.9, 0.1};
    GridSpec omega_grid{4.0, 25.0, 2.0};
    int refine_top_k = 5;
    SimplexConfig simplex;
    std::size_t min_observations = 30;
    FitBounds bounds;

    void validate() const;  // throws DomainError on inconsistent settings
};

/// One evaluated grid node with its slaved linear parameters.
struct GridNode {
    double tc = 0.0;
    double m = 0.0;
    double omega = 0.0;
    LinearizedParams params;
    double sse = 0.0;
};

/// Evaluates the slaved least-squares objective at every (tc, m, omega)
/// grid node inside the bounds and returns the non-degenerate nodes sorted
/// by ascending sse (ties broken by smaller tc, then m, then omega).
/// The default driver parallelizes node evaluation with OpenMP; the serial
/// variant is the reference implementation and produces identical output.
std::vector<GridNode> grid_search(const FitWindow& w, const FitConfig& cfg);
std::vector<GridNode> grid_search_serial(const FitWindow& w, const FitConfig& cfg);

struct FitResult {
    LpplParams params;
    double sse = 0.0;
    double rmse = 0.0;
    Date window_start{};
    Date window_end{};
    std::size_t n_observations = 0;
    bool converged = false;
    int iterations = 0;
    BubbleDiagnostic diagnostic;
    Date tc_date{};
};

/// Bounded derivative-free simplex descent on (tc, m, omega) starting from
/// a grid node, with linear parameters slaved at every trial point. Trial
/// points are clamped to cfg.bounds. Never returns a worse sse than the
/// seed. Non-convergence is reported via FitResult::converged, not thrown.
FitResult refine(const GridNode& seed, const FitWindow& w, const FitConfig& cfg);

/// Global fit of one window: coarse grid search, then refinement of the
/// top cfg.refine_top_k nodes; returns the refined result with minimal sse.
/// Deterministic for fixed inputs and config.
FitResult fit(const FitWindow& w, const FitConfig& cfg);

}  // namespace lppl
