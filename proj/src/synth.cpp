#include "lppl/synth.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "lppl/errors.hpp"

namespace lppl {

double GaussianSampler::next_uniform() {
    // 53-bit mantissa, shifted into (0, 1] so log() below is always defined.
    const std::uint64_t bits = rng_() >> 11;
    return static_cast<double>(bits + 1) * 0x1.0p-53;
}

double GaussianSampler::next() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
}

namespace {

bool is_weekday(Date d) {
    const std::chrono::weekday wd{d};
    return wd != std::chrono::Saturday && wd != std::chrono::Sunday;
}

}  // namespace

SynthResult generate(const SynthSpec& spec) {
    if (!(spec.start_date < spec.end_date)) {
        throw DomainError("synthetic span must have start < end");
    }
    if (spec.noise_sigma < 0.0) throw DomainError("noise_sigma must be >= 0");

    const TimeAxis axis(spec.start_date);
    if (!(axis.to_time(spec.end_date) < spec.truth.tc)) {
        throw DomainError("critical time tc (" + to_iso(axis.from_time(spec.truth.tc)) +
                          ") must lie strictly after the sample end date " +
                          to_iso(spec.end_date));
    }

    GaussianSampler noise(spec.seed);
    std::vector<Observation> obs;
    for (Date d = spec.start_date; d <= spec.end_date; d += std::chrono::days{1}) {
        if (spec.weekdays_only && !is_weekday(d)) continue;
        const double log_price = lppl_value(spec.truth, axis.to_time(d)) +
                                 spec.noise_sigma * noise.next();
        obs.push_back(Observation{d, std::exp(log_price)});
    }
    return SynthResult{PriceSeries::from_observations(std::move(obs)), spec.truth, axis};
}

}  // namespace lppl
