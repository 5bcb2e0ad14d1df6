#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "pipeadc/bias.hpp"
#include "pipeadc/error.hpp"
#include "pipeadc/signals.hpp"

namespace pipeadc {

struct StageConfig {
    double cap_scale = 1.0;
    double bias_scale = 1.0;
    std::array<double, 2> comparator_offsets{0.0, 0.0};  // {lower, upper} threshold shifts
    double gain_error = 0.0;
    double settle_epsilon = 0.0;  // static part, combined with the bias-derived part
    double ktc_sigma = 0.0;       // volts RMS added to the residue
};

// Input sampling switch. The on-resistance is R(u) = r_on_nominal *
// (1 + r_on_even_coeff*u + r_on_cubic_coeff*u^2) with u = v/vref; the
// parasitic coupling of the same device adds a static charge-sharing bow
// scaled by cp_*_ratio.
struct FrontEndConfig {
    double r_on_nominal = 0.0;  // ohm
    double c_sample = 0.5e-12;  // F
    double r_on_cubic_coeff = 0.0;
    double r_on_even_coeff = 0.0;
    double track_time_constant_scale = 1.0;
    double cp_odd_ratio = 0.0;
    double cp_even_ratio = 0.0;
    double thermal_sigma = 0.0;          // V RMS
    double aperture_jitter_sigma = 0.0;  // s RMS, converter clock
};

struct AdcConfig {
    double vref = 1.0;
    std::array<StageConfig, kStages> stages{};
    std::array<double, 3> flash_offsets{0.0, 0.0, 0.0};
    FrontEndConfig frontend{};
    BiasConfig bias{};
    std::uint64_t rng_seed = 1;
};

struct RawCodeFrame {
    std::array<std::uint8_t, kStages> stage_codes{};
    std::uint8_t flash_code = 0;
    bool operator==(const RawCodeFrame&) const = default;
};

// Ten stages that do nothing but quantize, with the default cap/bias scaling
// and an ideal gm model.
inline AdcConfig ideal_config() {
    AdcConfig cfg;
    const auto s = stage_scales();
    for (std::size_t i = 0; i < kStages; ++i) {
        cfg.stages[i].cap_scale = s[i];
        cfg.stages[i].bias_scale = s[i];
    }
    cfg.bias.gm_model = GmModel::ideal;
    return cfg;
}

inline void validate(const AdcConfig& cfg) {
    if (!(cfg.vref > 0.0)) throw Error("pipeline", "vref must be positive");
    for (const auto& st : cfg.stages) {
        if (!(st.cap_scale > 0.0) || !(st.bias_scale > 0.0))
            throw Error("pipeline", "cap_scale and bias_scale must be positive");
        if (!(st.settle_epsilon >= 0.0 && st.settle_epsilon < 1.0))
            throw Error("pipeline", "settle_epsilon must lie in [0, 1)");
        if (!(st.ktc_sigma >= 0.0)) throw Error("pipeline", "ktc_sigma must be >= 0");
    }
    if (!(cfg.frontend.r_on_nominal >= 0.0)) throw Error("pipeline", "r_on_nominal must be >= 0");
    if (!(cfg.frontend.thermal_sigma >= 0.0)) throw Error("pipeline", "thermal_sigma must be >= 0");
    if (!(cfg.frontend.aperture_jitter_sigma >= 0.0))
        throw Error("pipeline", "aperture_jitter_sigma must be >= 0");
}

inline int adsc_decide(double v, double vref, const std::array<double, 2>& offsets) {
    if (v > vref / 4.0 + offsets[1]) return 2;
    if (v < -vref / 4.0 + offsets[0]) return 0;
    return 1;
}

inline double mdac_residue(double v, int code, const StageConfig& stage, double vref,
                           double noise_draw) {
    double r = (2.0 * v - static_cast<double>(code - 1) * vref) * (1.0 - stage.settle_epsilon) *
                   (1.0 + stage.gain_error) +
               noise_draw;
    return std::clamp(r, -vref, vref);
}

// Thresholds at -vref/2, 0, +vref/2. A tie counts as above the threshold so
// that an exact zero residue lands on code 2.
inline int flash_decide(double v, double vref, const std::array<double, 3>& offsets) {
    int code = 0;
    if (v >= -vref / 2.0 + offsets[0]) ++code;
    if (v >= 0.0 + offsets[1]) ++code;
    if (v >= vref / 2.0 + offsets[2]) ++code;
    return code;
}

// Track phase of the input switch. slew is dv/dt at the sampling instant; the
// RC lag behind a moving input is tau*slew. The remaining term is the
// incomplete tracking from the previously held value over half a period.
inline double frontend_sample(double v_now, double v_prev, double slew, const FrontEndConfig& fe,
                              double vref, double f_cr, double noise_draw) {
    if (fe.r_on_nominal == 0.0) return v_now + noise_draw;
    if (!(f_cr > 0.0)) throw Error("pipeline", "f_cr must be positive");
    const double u = v_now / vref;
    const double r_factor = std::max(0.0, 1.0 + fe.r_on_even_coeff * u + fe.r_on_cubic_coeff * u * u);
    const double tau = fe.r_on_nominal * r_factor * fe.c_sample * fe.track_time_constant_scale;
    double y = v_now - tau * slew;
    if (tau > 0.0) y += (v_prev - y) * std::exp(-1.0 / (2.0 * f_cr * tau));
    y *= 1.0 + fe.cp_even_ratio * fe.r_on_even_coeff * u + fe.cp_odd_ratio * fe.r_on_cubic_coeff * u * u;
    return y + noise_draw;
}

// Per-stream mutable state: the single noise generator and the value held by
// the front end on the previous conversion.
struct ConversionState {
    explicit ConversionState(std::uint64_t seed, double f_cr_hz)
        : rng(seed), f_cr(f_cr_hz) {}
    std::mt19937_64 rng;
    std::normal_distribution<double> normal{0.0, 1.0};
    double f_cr;
    double held = 0.0;

    double draw(double sigma) { return normal(rng) * sigma; }
};

// Optional per-sample view of the internal signals.
struct ConversionTrace {
    double sampled = 0.0;
    std::array<double, kStages> residues{};
};

// Stage epsilons folded with the bias-law settling error at the given rate.
inline AdcConfig resolve_for_rate(const AdcConfig& cfg, double f_cr) {
    AdcConfig out = cfg;
    for (auto& st : out.stages) {
        const double e = settle_epsilon(st.cap_scale, st.bias_scale, f_cr, cfg.bias);
        st.settle_epsilon = 1.0 - (1.0 - st.settle_epsilon) * (1.0 - e);
    }
    return out;
}

// Uses cfg.stages[i].settle_epsilon as stored; see resolve_for_rate. Draw
// order is fixed: front end, then stages 1..10, one Gaussian each, always.
inline RawCodeFrame convert_sample(double v, const AdcConfig& cfg, ConversionState& state,
                                   double slew = 0.0, ConversionTrace* trace = nullptr) {
    RawCodeFrame frame;
    const double fe_noise = state.draw(cfg.frontend.thermal_sigma);
    double r = frontend_sample(v, state.held, slew, cfg.frontend, cfg.vref, state.f_cr, fe_noise);
    state.held = r;
    if (trace) trace->sampled = r;
    for (std::size_t i = 0; i < kStages; ++i) {
        const auto& st = cfg.stages[i];
        const int code = adsc_decide(r, cfg.vref, st.comparator_offsets);
        frame.stage_codes[i] = static_cast<std::uint8_t>(code);
        r = mdac_residue(r, code, st, cfg.vref, state.draw(st.ktc_sigma));
        if (trace) trace->residues[i] = r;
    }
    frame.flash_code = static_cast<std::uint8_t>(flash_decide(r, cfg.vref, cfg.flash_offsets));
    return frame;
}

// The stream's sample rate is the conversion rate; a stream without one
// (a static ramp) converts at the nominal rate.
inline std::vector<RawCodeFrame> convert_stream(const SampleStream& stream, const AdcConfig& cfg) {
    validate(cfg);
    const double f_cr = stream.sample_rate_hz > 0.0 ? stream.sample_rate_hz : cfg.bias.nominal_f_cr;
    const AdcConfig resolved = resolve_for_rate(cfg, f_cr);
    ConversionState state(cfg.rng_seed, f_cr);
    const bool has_slew = stream.slew.size() == stream.samples.size();
    std::vector<RawCodeFrame> frames;
    frames.reserve(stream.samples.size());
    for (std::size_t k = 0; k < stream.samples.size(); ++k)
        frames.push_back(convert_sample(stream.samples[k], resolved, state,
                                        has_slew ? stream.slew[k] : 0.0));
    return frames;
}

}  // namespace pipeadc
