#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "pipeadc/error.hpp"
#include "pipeadc/harness/run.hpp"

namespace pipeadc {

struct CalibrationTargets {
    double snr_db = 67.1;        // at f_in_hz
    double sfdr_db = 69.4;       // at f_in_hz
    double sndr_db = 64.2;       // at f_in_hz
    double snr_high_db = 66.1;   // at f_in_high_hz
    double f_in_hz = 10e6;
    double f_in_high_hz = 100e6;
    double f_cr = 110e6;
    double amplitude = kBackoffAmplitude;
    std::size_t record_length = 8192;
    std::uint64_t seed = 1;
    double tolerance_db = 0.005;
    int max_iterations = 40;
    int passes = 2;

    double thermal_hi = 2e-3;
    double cubic_hi = 4.0;
    double even_hi = 4.0;  // magnitude; the even coefficient is driven negative
    double jitter_hi = 5e-12;
};

struct CalibrationStep {
    std::string knob;
    std::string metric;
    double target_db = 0.0;
    double value = 0.0;
    double achieved_db = 0.0;
    int evaluations = 0;
};

struct CalibrationResult {
    AdcConfig config;
    std::vector<CalibrationStep> steps;
};

namespace detail {

struct Knob {
    const char* name;
    const char* metric;
    double sign;
    double hi;
    double target;
    bool high_frequency;
    double FrontEndConfig::*field;
    double SpectralMetrics::*measure;
};

}  // namespace detail

// The metric falls as the knob magnitude grows. A knob already on target is
// kept, a target the knob-free converter already misses leaves the knob at
// zero, and an interval whose far end still beats the target is an error.
inline CalibrationStep bisect_knob(AdcConfig& cfg, const detail::Knob& k, const CalibrationTargets& t) {
    RunSpec spec;
    spec.f_cr = t.f_cr;
    spec.record_length = t.record_length;
    spec.stimulus.amplitude = t.amplitude;
    spec.stimulus.frequency_hz = k.high_frequency ? t.f_in_high_hz : t.f_in_hz;
    apply_seed(spec, t.seed);

    CalibrationStep step{k.name, k.metric, k.target, 0.0, 0.0, 0};
    auto metric_at = [&](double magnitude) {
        spec.adc = cfg;
        spec.adc.frontend.*k.field = magnitude == 0.0 ? 0.0 : k.sign * magnitude;
        ++step.evaluations;
        return run_single(spec).spectral.*k.measure;
    };
    auto finish = [&](double magnitude, double m) {
        step.value = magnitude == 0.0 ? 0.0 : k.sign * magnitude;
        cfg.frontend.*k.field = step.value;
        step.achieved_db = m;
        return step;
    };

    const double current = std::abs(cfg.frontend.*k.field);
    if (current > 0.0) {
        const double m = metric_at(current);
        if (std::abs(m - k.target) <= t.tolerance_db) return finish(current, m);
    }
    const double m_lo = metric_at(0.0);
    if (m_lo <= k.target + t.tolerance_db) return finish(0.0, m_lo);
    const double m_hi = metric_at(k.hi);
    if (m_hi > k.target + t.tolerance_db) {
        char buf[256];
        std::snprintf(buf, sizeof buf,
                      "%s interval does not bracket %s target %.3f dB: %.4f dB at 0, %.4f dB at %g",
                      k.name, k.metric, k.target, m_lo, m_hi, k.sign * k.hi);
        throw Error("harness", buf);
    }

    double lo = 0.0, hi = k.hi;
    double best = k.hi, best_m = m_hi;
    for (int it = 0; it < t.max_iterations; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double m = metric_at(mid);
        if (std::abs(m - k.target) < std::abs(best_m - k.target)) {
            best = mid;
            best_m = m;
        }
        if (std::abs(m - k.target) <= t.tolerance_db) break;
        (m > k.target ? lo : hi) = mid;
    }
    return finish(best, best_m);
}

// Four one-dimensional searches, repeated for t.passes sweeps so the later
// knobs' small effect on the earlier metrics is absorbed.
inline CalibrationResult calibrate_with_log(const AdcConfig& start, const CalibrationTargets& t = {}) {
    const detail::Knob knobs[] = {
        {"frontend.thermal_sigma", "snr", 1.0, t.thermal_hi, t.snr_db, false,
         &FrontEndConfig::thermal_sigma, &SpectralMetrics::snr_db},
        {"frontend.r_on_cubic_coeff", "sfdr", 1.0, t.cubic_hi, t.sfdr_db, false,
         &FrontEndConfig::r_on_cubic_coeff, &SpectralMetrics::sfdr_db},
        {"frontend.r_on_even_coeff", "sndr", -1.0, t.even_hi, t.sndr_db, false,
         &FrontEndConfig::r_on_even_coeff, &SpectralMetrics::sndr_db},
        {"frontend.aperture_jitter_sigma", "snr", 1.0, t.jitter_hi, t.snr_high_db, true,
         &FrontEndConfig::aperture_jitter_sigma, &SpectralMetrics::snr_db},
    };
    CalibrationResult res{start, {}};
    validate(res.config);
    for (int pass = 0; pass < t.passes; ++pass)
        for (const auto& k : knobs) res.steps.push_back(bisect_knob(res.config, k, t));
    return res;
}

inline AdcConfig calibrate(const AdcConfig& start, const CalibrationTargets& t = {}) {
    return calibrate_with_log(start, t).config;
}

}  // namespace pipeadc
