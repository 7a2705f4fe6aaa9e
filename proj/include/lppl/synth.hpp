#pragma once

#include <cstdint>
#include <random>

#include "lppl/model.hpp"
#include "lppl/series.hpp"

namespace lppl {

/// Deterministic standard-normal stream, fixed for reproducible golden
/// files: mt19937_64 (exact sequence pinned by the C++ standard) mapped to
/// uniforms in (0, 1] via ((x >> 11) + 1) * 2^-53, combined pairwise with
/// the Box-Muller transform. Both transform outputs are consumed before
/// drawing new uniforms.
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}

    double next();

private:
    double next_uniform();  // in (0, 1]

    std::mt19937_64 rng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Recipe for a synthetic price series with known ground truth: model
/// log-price plus i.i.d. Gaussian noise, exponentiated. truth.tc lives on
/// the axis whose epoch is start_date.
struct SynthSpec {
    LpplParams truth;
    Date start_date{};
    Date end_date{};
    bool weekdays_only = false;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
};

struct SynthResult {
    PriceSeries series;
    LpplParams truth;
    TimeAxis axis;
};

/// Generates price = exp(model log-price + noise) at each sample date.
/// Identical specs produce identical series. Throws DomainError if tc does
/// not lie strictly beyond end_date or noise_sigma is negative.
SynthResult generate(const SynthSpec& spec);

}  // namespace lppl
