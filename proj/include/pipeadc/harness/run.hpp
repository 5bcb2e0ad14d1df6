#pragma once

#include <algorithm>
#include <cmath>
#include <future>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "pipeadc/bias.hpp"
#include "pipeadc/correction.hpp"
#include "pipeadc/error.hpp"
#include "pipeadc/metrics.hpp"
#include "pipeadc/pipeline.hpp"
#include "pipeadc/signals.hpp"

namespace pipeadc {

enum class Mode { single, sweep_rate, sweep_fin, calibrate, linearity };

inline const double kBackoffAmplitude = std::pow(10.0, -0.1 / 20.0);   // -0.1 dBFS
inline const double kOverdriveAmplitude = std::pow(10.0, 0.1 / 20.0);  // +0.1 dBFS

struct RunOutputs {
    std::string csv;
    std::string json;
};

struct RunSpec {
    AdcConfig adc{};
    StimulusSpec stimulus{StimulusKind::sine, kBackoffAmplitude, 10e6, 0.0, 0.0, 8192, 0.0, 1};
    double f_cr = 110e6;
    std::size_t record_length = 8192;
    double area_mm2 = 0.86;
    RunOutputs outputs{};
    Mode mode = Mode::single;
};

struct MetricsReport {
    SpectralMetrics spectral{};
    double f_cr_hz = 0.0;
    double fin_target_hz = 0.0;
    double fin_actual_hz = 0.0;
    double amplitude = 0.0;
    std::size_t record_length = 0;
    double power_mw = 0.0;
    double fom = 0.0;
    std::optional<LinearityReport> linearity;
};

struct SweepRow {
    double independent_var = 0.0;  // MS/s for rate sweeps, MHz for input sweeps
    double snr_db = 0.0;
    double sndr_db = 0.0;
    double sfdr_db = 0.0;
    double enob = 0.0;
    double power_mw = 0.0;
    double fom = 0.0;
};

struct SweepTable {
    std::string independent_name;
    std::vector<SweepRow> rows;
};

// One --seed value drives both generators; the converter stream is offset
// so the two never share a sequence.
inline void apply_seed(RunSpec& spec, std::uint64_t seed) {
    spec.stimulus.rng_seed = seed;
    spec.adc.rng_seed = seed + 0x9E3779B97F4A7C15ULL;
}

inline void validate(const RunSpec& spec) {
    validate(spec.adc);
    if (!(spec.f_cr > 0.0)) throw Error("harness", "f_cr must be positive");
    if (!(spec.area_mm2 > 0.0)) throw Error("harness", "area must be positive");
    const bool spectral = spec.mode != Mode::linearity || spec.stimulus.kind == StimulusKind::sine;
    if (spectral && !detail::is_pow2(spec.record_length))
        throw Error("harness", "record_length must be a power of two");
}

struct CodeCapture {
    std::vector<OutputCode> codes;
    CoherentTone tone;
};

// Stimulus -> pipeline -> correction. Sine stimuli are placed on a coherent
// bin of the (possibly folded) target; converter clock jitter is combined in
// quadrature with the source's.
inline CodeCapture capture_codes(const RunSpec& spec) {
    validate(spec);
    StimulusSpec st = spec.stimulus;
    st.n_samples = spec.record_length;
    CodeCapture cap;
    if (st.kind == StimulusKind::sine) {
        cap.tone = coherent_bin_folded(spec.f_cr, st.frequency_hz, st.n_samples);
        st.frequency_hz = cap.tone.actual_freq_hz;
        st.jitter_sigma = std::hypot(st.jitter_sigma, spec.adc.frontend.aperture_jitter_sigma);
    }
    const SampleStream stream = generate(st, spec.f_cr);
    cap.codes = correct_stream(convert_stream(stream, spec.adc));
    return cap;
}

inline void fill_operating_point(MetricsReport& rep, const RunSpec& spec) {
    rep.f_cr_hz = spec.f_cr;
    rep.fin_target_hz = spec.stimulus.frequency_hz;
    rep.amplitude = spec.stimulus.amplitude;
    rep.record_length = spec.record_length;
    rep.power_mw = power_mw(spec.f_cr, spec.adc.bias);
}

inline MetricsReport run_single(const RunSpec& spec) {
    const CodeCapture cap = capture_codes(spec);
    MetricsReport rep;
    fill_operating_point(rep, spec);
    rep.fin_actual_hz = cap.tone.actual_freq_hz;
    rep.spectral = dynamic_metrics(cap.codes, cap.tone.bin_index);
    if (rep.spectral.enob_bits > 0.0)
        rep.fom = figure_of_merit({spec.f_cr / 1e6, rep.spectral.enob_bits, spec.area_mm2, rep.power_mw});
    return rep;
}

// Histogram run: spectral metrics of the same record are reported alongside.
inline MetricsReport run_linearity(const RunSpec& spec) {
    const CodeCapture cap = capture_codes(spec);
    MetricsReport rep;
    fill_operating_point(rep, spec);
    rep.fin_actual_hz = cap.tone.actual_freq_hz;
    rep.linearity = histogram_linearity(cap.codes);
    if (spec.stimulus.kind == StimulusKind::sine) {
        rep.spectral = dynamic_metrics(cap.codes, cap.tone.bin_index);
        if (rep.spectral.enob_bits > 0.0)
            rep.fom = figure_of_merit({spec.f_cr / 1e6, rep.spectral.enob_bits, spec.area_mm2, rep.power_mw});
    }
    return rep;
}

inline SweepRow to_row(double x, const MetricsReport& r) {
    return {x, r.spectral.snr_db, r.spectral.sndr_db, r.spectral.sfdr_db,
            r.spectral.enob_bits, r.power_mw, r.fom};
}

namespace detail {

inline void check_increasing(const std::vector<double>& xs, double min_value, const char* what) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] >= min_value)) throw Error("harness", std::string(what) + " below minimum");
        if (i > 0 && !(xs[i] > xs[i - 1]))
            throw Error("harness", std::string(what) + " must be strictly increasing");
    }
}

// Points run concurrently in batches of the hardware width; rows keep the
// order of the input list.
template <class F>
std::vector<SweepRow> run_points(const std::vector<double>& xs, F point) {
    std::vector<SweepRow> rows(xs.size());
    const std::size_t width = std::max(1u, std::thread::hardware_concurrency());
    for (std::size_t start = 0; start < xs.size(); start += width) {
        const std::size_t stop = std::min(xs.size(), start + width);
        std::vector<std::future<SweepRow>> futs;
        for (std::size_t i = start; i < stop; ++i)
            futs.push_back(std::async(width > 1 ? std::launch::async : std::launch::deferred,
                                      point, xs[i]));
        for (std::size_t i = start; i < stop; ++i) rows[i] = futs[i - start].get();
    }
    return rows;
}

}  // namespace detail

// Conversion-rate sweep at the spec's input frequency. Rates in Hz, rows in MS/s.
inline SweepTable sweep_rate(const RunSpec& spec, const std::vector<double>& rates_hz) {
    detail::check_increasing(rates_hz, 1e6, "conversion rates");
    SweepTable t{"f_cr_msps", {}};
    t.rows = detail::run_points(rates_hz, [&spec](double f) {
        RunSpec s = spec;
        s.f_cr = f;
        return to_row(f / 1e6, run_single(s));
    });
    return t;
}

// Input-frequency sweep at the spec's conversion rate. Inputs above Nyquist
// are undersampled. Frequencies in Hz, rows in MHz.
inline SweepTable sweep_fin(const RunSpec& spec, const std::vector<double>& fins_hz) {
    detail::check_increasing(fins_hz, 1.0, "input frequencies");
    SweepTable t{"f_in_mhz", {}};
    t.rows = detail::run_points(fins_hz, [&spec](double f) {
        RunSpec s = spec;
        s.stimulus.frequency_hz = f;
        return to_row(f / 1e6, run_single(s));
    });
    return t;
}

}  // namespace pipeadc
