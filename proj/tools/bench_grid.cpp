// Benchmark: OpenMP grid-search kernel vs. the serial reference, plus the
// end-to-end fit. Verifies that both drivers produce identical results
// before timing them.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <omp.h>

#include "lppl/fitter.hpp"
#include "lppl/synth.hpp"

using namespace lppl;

namespace {

FitWindow bench_window() {
    SynthSpec spec;
    spec.start_date = make_date(2008, 1, 1);
    spec.end_date = make_date(2009, 7, 9);
    const TimeAxis axis(spec.start_date);
    spec.truth = LpplParams{axis.to_time(spec.end_date) + 35.0 / TimeAxis::days_per_year,
                            0.45, 8.2, 1.3, 8.0, -0.9, 0.04};
    spec.noise_sigma = 0.01;
    spec.seed = 20090709;
    const SynthResult synth = generate(spec);
    return FitWindow::from_series(synth.series, synth.axis);
}

bool same_nodes(const std::vector<GridNode>& a, const std::vector<GridNode>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::memcmp(&a[i].sse, &b[i].sse, sizeof(double)) != 0 || a[i].tc != b[i].tc ||
            a[i].m != b[i].m || a[i].omega != b[i].omega) {
            return false;
        }
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    int repeats = 3;
    bool dense = true;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--quick") == 0) {
            dense = false;
            repeats = 1;
        }
    }

    const FitWindow w = bench_window();

    FitConfig cfg;
    if (dense) {
        cfg.tc_offset_days = GridSpec{2.0, 180.0, 2.0};
        cfg.m_grid = GridSpec{0.10, 0.90, 0.02};
        cfg.omega_grid = GridSpec{4.0, 25.0, 0.5};
    }
    const std::size_t n_nodes = cfg.tc_offset_days.values().size() * cfg.m_grid.values().size() *
                                cfg.omega_grid.values().size();
    std::printf("window: %zu observations, grid: %zu nodes, threads: %d\n", w.size(), n_nodes,
                omp_get_max_threads());

    const auto nodes_serial = grid_search_serial(w, cfg);
    const auto nodes_parallel = grid_search(w, cfg);
    if (!same_nodes(nodes_serial, nodes_parallel)) {
        std::printf("FAIL: serial and parallel grid searches disagree\n");
        return 1;
    }
    std::printf("serial and parallel grid results identical (%zu nodes kept)\n",
                nodes_serial.size());

    double t_serial = 1e300, t_parallel = 1e300, t_fit = 1e300;
    for (int r = 0; r < repeats; ++r) {
        double t0 = omp_get_wtime();
        volatile double sink = grid_search_serial(w, cfg).front().sse;
        t_serial = std::min(t_serial, omp_get_wtime() - t0);

        t0 = omp_get_wtime();
        sink = grid_search(w, cfg).front().sse;
        t_parallel = std::min(t_parallel, omp_get_wtime() - t0);

        t0 = omp_get_wtime();
        sink = fit(w, cfg).sse;
        t_fit = std::min(t_fit, omp_get_wtime() - t0);
        (void)sink;
    }

    std::printf("grid_search serial:   %8.1f ms  (%.2f us/node)\n", 1e3 * t_serial,
                1e6 * t_serial / static_cast<double>(n_nodes));
    std::printf("grid_search parallel: %8.1f ms  (speedup %.2fx)\n", 1e3 * t_parallel,
                t_serial / t_parallel);
    std::printf("full fit:             %8.1f ms\n", 1e3 * t_fit);
    return 0;
}
