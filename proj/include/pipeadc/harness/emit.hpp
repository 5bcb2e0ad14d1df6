#pragma once

#include <nlohmann/json.hpp>

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include "pipeadc/error.hpp"
#include "pipeadc/harness/calibrate.hpp"
#include "pipeadc/harness/config_io.hpp"
#include "pipeadc/harness/run.hpp"

namespace pipeadc {

NLOHMANN_JSON_SERIALIZE_ENUM(GmModel, {{GmModel::ideal, "ideal"},
                                       {GmModel::linear, "linear"},
                                       {GmModel::sqrt, "sqrt"}})
NLOHMANN_JSON_SERIALIZE_ENUM(StimulusKind, {{StimulusKind::sine, "sine"}, {StimulusKind::ramp, "ramp"}})
NLOHMANN_JSON_SERIALIZE_ENUM(Mode, {{Mode::single, "single"},
                                    {Mode::sweep_rate, "sweep-rate"},
                                    {Mode::sweep_fin, "sweep-fin"},
                                    {Mode::calibrate, "calibrate"},
                                    {Mode::linearity, "linearity"}})

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(StageConfig, cap_scale, bias_scale, comparator_offsets, gain_error,
                                   settle_epsilon, ktc_sigma)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(FrontEndConfig, r_on_nominal, c_sample, r_on_cubic_coeff,
                                   r_on_even_coeff, track_time_constant_scale, cp_odd_ratio,
                                   cp_even_ratio, thermal_sigma, aperture_jitter_sigma)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(BiasConfig, c_b, v_bias, gm_model, gbw_calibration, nominal_f_cr,
                                   power_slope, power_intercept)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(AdcConfig, vref, stages, flash_offsets, frontend, bias, rng_seed)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(StimulusSpec, kind, amplitude, frequency_hz, phase_rad, dc_offset,
                                   n_samples, jitter_sigma, rng_seed)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(RunOutputs, csv, json)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(RunSpec, adc, stimulus, f_cr, record_length, area_mm2, outputs, mode)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SpectralMetrics, snr_db, sndr_db, sfdr_db, thd_db, enob_bits,
                                   signal_bin, signal_power_dbfs)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SweepRow, independent_var, snr_db, sndr_db, sfdr_db, enob,
                                   power_mw, fom)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(CalibrationStep, knob, metric, target_db, value, achieved_db,
                                   evaluations)

inline void to_json(nlohmann::json& j, const LinearityReport& r) {
    auto minmax = [](const std::vector<double>& v) {
        auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        return nlohmann::json{{"min", *lo}, {"max", *hi}};
    };
    j = {{"first_code", LinearityReport::first_code},
         {"dnl_range", minmax(r.dnl_lsb)},
         {"inl_range", minmax(r.inl_lsb)},
         {"missing_codes", r.missing_codes},
         {"short_record", r.short_record},
         {"no_overdrive", r.no_overdrive},
         {"dnl_lsb", r.dnl_lsb},
         {"inl_lsb", r.inl_lsb}};
}

inline void to_json(nlohmann::json& j, const MetricsReport& r) {
    j = {{"spectral", r.spectral},
         {"f_cr_hz", r.f_cr_hz},
         {"fin_target_hz", r.fin_target_hz},
         {"fin_actual_hz", r.fin_actual_hz},
         {"amplitude", r.amplitude},
         {"record_length", r.record_length},
         {"power_mw", r.power_mw},
         {"fom", r.fom}};
    if (r.linearity) j["linearity"] = *r.linearity;
}

inline void to_json(nlohmann::json& j, const SweepTable& t) {
    j = {{"independent", t.independent_name}, {"rows", t.rows}};
}

// Reproducibility record: the result next to the complete run description.
// Feeding the "run" member back through run_from_json reruns bit-identically.
template <class Result>
nlohmann::json structured_record(const Result& result, const RunSpec& spec) {
    return {{"run", spec}, {"result", result}};
}

inline RunSpec run_from_json(const nlohmann::json& j) {
    return j.contains("run") ? j.at("run").get<RunSpec>() : j.get<RunSpec>();
}

inline RunSpec load_run_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("harness", "cannot open " + path + ": " + std::strerror(errno));
    try {
        return run_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
        throw Error("harness", path + ": " + e.what());
    }
}

inline constexpr const char* kCsvHeader = "independent_var,snr_db,sndr_db,sfdr_db,enob,power_mw,fom";

inline void write_csv(std::ostream& out, const SweepTable& t) {
    out << kCsvHeader << "\n";
    char buf[256];
    for (const auto& r : t.rows) {
        std::snprintf(buf, sizeof buf, "%.4f,%.4f,%.4f,%.4f,%.4f,%.4f,%.4f\n", r.independent_var,
                      r.snr_db, r.sndr_db, r.sfdr_db, r.enob, r.power_mw, r.fom);
        out << buf;
    }
}

inline std::string format_csv(const SweepTable& t) {
    std::ostringstream o;
    write_csv(o, t);
    return o.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("harness", "cannot open " + path + ": " + std::strerror(errno));
    out << text;
    out.flush();
    if (!out) throw Error("harness", "write failed for " + path + ": " + std::strerror(errno));
}

}  // namespace pipeadc
