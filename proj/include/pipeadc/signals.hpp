#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "pipeadc/error.hpp"

namespace pipeadc {

enum class StimulusKind { sine, ramp };

struct StimulusSpec {
    StimulusKind kind = StimulusKind::sine;
    double amplitude = 1.0;     // volts, differential half-swing
    double frequency_hz = 0.0;
    double phase_rad = 0.0;
    double dc_offset = 0.0;
    std::size_t n_samples = 8192;
    double jitter_sigma = 0.0;  // seconds RMS
    std::uint64_t rng_seed = 1;
};

// samples[k] is the differential input in volts. slew[k] is its analytic time
// derivative at the sampling instant (V/s), empty when the stimulus is static.
struct SampleStream {
    std::vector<double> samples;
    std::vector<double> slew;
    double sample_rate_hz = 0.0;
};

struct CoherentTone {
    double actual_freq_hz = 0.0;
    std::size_t bin_index = 0;
};

// Nearest odd bin to target in [1, N/2). Odd bins are exactly the ones
// coprime with a power-of-two record.
inline CoherentTone coherent_bin(double sample_rate_hz, double target_freq_hz,
                                 std::size_t n_samples) {
    if (!detail::is_pow2(n_samples) || n_samples < 4)
        throw Error("signals", "record length must be a power of two >= 4");
    if (!(sample_rate_hz > 0.0))
        throw Error("signals", "sample rate must be positive");
    if (!(target_freq_hz > 0.0) || !(target_freq_hz < sample_rate_hz / 2.0))
        throw Error("signals", "no coherent bin");

    const double t = target_freq_hz / sample_rate_hz * static_cast<double>(n_samples);
    const std::size_t half = n_samples / 2;
    auto fl = static_cast<std::size_t>(std::floor(t));
    std::size_t below = (fl % 2 == 1) ? fl : (fl == 0 ? 0 : fl - 1);
    std::size_t above = (fl % 2 == 1) ? fl + 2 : fl + 1;

    std::size_t best = 0;
    double best_dist = 0.0;
    for (std::size_t cand : {above, below}) {  // upper first: ties resolve upward
        if (cand < 1 || cand >= half) continue;
        double d = std::abs(static_cast<double>(cand) - t);
        if (best == 0 || d < best_dist) {
            best = cand;
            best_dist = d;
        }
    }
    if (best == 0) throw Error("signals", "no coherent bin");
    return {static_cast<double>(best) * sample_rate_hz / static_cast<double>(n_samples), best};
}

// Coherent tone for an input that may sit above Nyquist. The bin is chosen on
// the folded frequency and the returned actual frequency is the undersampled
// tone in the same Nyquist zone as the target.
inline CoherentTone coherent_bin_folded(double sample_rate_hz, double target_freq_hz,
                                        std::size_t n_samples) {
    if (!(target_freq_hz > 0.0)) throw Error("signals", "no coherent bin");
    if (target_freq_hz < sample_rate_hz / 2.0)
        return coherent_bin(sample_rate_hz, target_freq_hz, n_samples);
    if (!detail::is_pow2(n_samples) || n_samples < 4)
        throw Error("signals", "record length must be a power of two >= 4");

    const double fs = sample_rate_hz;
    const double n = static_cast<double>(n_samples);
    const double zone = std::floor(target_freq_hz / fs);
    const double r = target_freq_hz - zone * fs;
    const bool lower_half = r <= fs / 2.0;
    const double folded = lower_half ? r : fs - r;

    std::size_t m;
    if (folded <= fs / n)
        m = 1;
    else if (folded >= fs / 2.0 - fs / n)
        m = n_samples / 2 - 1;
    else
        m = coherent_bin(fs, folded, n_samples).bin_index;

    const double base = static_cast<double>(m) * fs / n;
    const double actual = lower_half ? zone * fs + base : (zone + 1.0) * fs - base;
    return {actual, m};
}

inline void check_spec(const StimulusSpec& spec) {
    if (!(spec.amplitude >= 0.0)) throw Error("signals", "amplitude must be >= 0");
    if (!(spec.jitter_sigma >= 0.0)) throw Error("signals", "jitter_sigma must be >= 0");
    if (spec.n_samples < 16) throw Error("signals", "n_samples must be >= 16");
}

inline SampleStream gen_sine(const StimulusSpec& spec, double sample_rate_hz) {
    if (spec.kind != StimulusKind::sine) throw Error("signals", "gen_sine needs a sine spec");
    check_spec(spec);
    if (!(sample_rate_hz > 0.0)) throw Error("signals", "sample rate must be positive");

    std::mt19937_64 rng(spec.rng_seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    SampleStream out;
    out.sample_rate_hz = sample_rate_hz;
    out.samples.resize(spec.n_samples);
    out.slew.resize(spec.n_samples);

    constexpr long double two_pi = 6.283185307179586476925286766559L;
    const long double cycles_per_sample =
        static_cast<long double>(spec.frequency_hz) / static_cast<long double>(sample_rate_hz);
    const double omega = 2.0 * M_PI * spec.frequency_hz;

    for (std::size_t k = 0; k < spec.n_samples; ++k) {
        // Reduce to one cycle before multiplying by 2*pi so coherent records
        // stay exactly periodic.
        long double cyc = std::fmod(static_cast<long double>(k) * cycles_per_sample, 1.0L);
        double delta = normal(rng) * spec.jitter_sigma;
        double ph = static_cast<double>(two_pi * cyc) + omega * delta + spec.phase_rad;
        out.samples[k] = spec.dc_offset + spec.amplitude * std::sin(ph);
        out.slew[k] = spec.amplitude * omega * std::cos(ph);
    }
    return out;
}

inline SampleStream gen_ramp(std::size_t n_samples, double lo_volts, double hi_volts) {
    if (!(lo_volts < hi_volts)) throw Error("signals", "ramp needs lo < hi");
    if (n_samples < 2) throw Error("signals", "ramp needs at least two points");
    SampleStream out;
    out.samples.resize(n_samples);
    const double span = hi_volts - lo_volts;
    const double last = static_cast<double>(n_samples - 1);
    for (std::size_t k = 0; k < n_samples; ++k)
        out.samples[k] = lo_volts + span * (static_cast<double>(k) / last);
    out.samples.back() = hi_volts;
    return out;
}

// Dispatch on spec.kind. A ramp spans dc_offset +/- amplitude and is static.
inline SampleStream generate(const StimulusSpec& spec, double sample_rate_hz) {
    if (spec.kind == StimulusKind::sine) return gen_sine(spec, sample_rate_hz);
    check_spec(spec);
    SampleStream s = gen_ramp(spec.n_samples, spec.dc_offset - spec.amplitude,
                              spec.dc_offset + spec.amplitude);
    s.sample_rate_hz = sample_rate_hz;
    return s;
}

}  // namespace pipeadc
