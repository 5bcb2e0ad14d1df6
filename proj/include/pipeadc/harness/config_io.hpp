#pragma once

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <system_error>

#include "pipeadc/error.hpp"
#include "pipeadc/harness/profiles.hpp"
#include "pipeadc/harness/run.hpp"

namespace pipeadc {

inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s, const std::string& key) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    while (first < last && (*first == ' ' || *first == '\t')) ++first;
    while (last > first && (last[-1] == ' ' || last[-1] == '\t')) --last;
    if (first < last && *first == '+') ++first;
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last)
        throw Error("harness", "bad number for " + key + ": '" + s + "'");
    return v;
}

inline std::uint64_t parse_u64(const std::string& s, const std::string& key) {
    std::uint64_t v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw Error("harness", "bad integer for " + key + ": '" + s + "'");
    return v;
}

inline const char* to_string(GmModel m) {
    switch (m) {
        case GmModel::ideal: return "ideal";
        case GmModel::linear: return "linear";
        case GmModel::sqrt: return "sqrt";
    }
    return "sqrt";
}

inline GmModel parse_gm_model(const std::string& s) {
    if (s == "ideal") return GmModel::ideal;
    if (s == "linear") return GmModel::linear;
    if (s == "sqrt") return GmModel::sqrt;
    throw Error("harness", "unknown gm_model '" + s + "'");
}

inline const char* to_string(StimulusKind k) { return k == StimulusKind::sine ? "sine" : "ramp"; }

inline StimulusKind parse_kind(const std::string& s) {
    if (s == "sine") return StimulusKind::sine;
    if (s == "ramp") return StimulusKind::ramp;
    throw Error("harness", "unknown stimulus kind '" + s + "'");
}

inline const char* to_string(Mode m) {
    switch (m) {
        case Mode::single: return "single";
        case Mode::sweep_rate: return "sweep-rate";
        case Mode::sweep_fin: return "sweep-fin";
        case Mode::calibrate: return "calibrate";
        case Mode::linearity: return "linearity";
    }
    return "single";
}

namespace detail {

// Every scalar field of a run, addressed as "section.key". Stage fields are
// expanded per stage.
inline std::map<std::string, double*> double_fields(RunSpec& s) {
    std::map<std::string, double*> f;
    auto& a = s.adc;
    f["adc.vref"] = &a.vref;
    for (std::size_t i = 0; i < 3; ++i) f["adc.flash_offset" + std::to_string(i + 1)] = &a.flash_offsets[i];
    for (std::size_t i = 0; i < kStages; ++i) {
        auto& st = a.stages[i];
        const std::string p = "stage" + std::to_string(i + 1) + ".";
        f[p + "cap_scale"] = &st.cap_scale;
        f[p + "bias_scale"] = &st.bias_scale;
        f[p + "offset_lower"] = &st.comparator_offsets[0];
        f[p + "offset_upper"] = &st.comparator_offsets[1];
        f[p + "gain_error"] = &st.gain_error;
        f[p + "settle_epsilon"] = &st.settle_epsilon;
        f[p + "ktc_sigma"] = &st.ktc_sigma;
    }
    auto& fe = a.frontend;
    f["frontend.r_on_nominal"] = &fe.r_on_nominal;
    f["frontend.c_sample"] = &fe.c_sample;
    f["frontend.r_on_cubic_coeff"] = &fe.r_on_cubic_coeff;
    f["frontend.r_on_even_coeff"] = &fe.r_on_even_coeff;
    f["frontend.track_time_constant_scale"] = &fe.track_time_constant_scale;
    f["frontend.cp_odd_ratio"] = &fe.cp_odd_ratio;
    f["frontend.cp_even_ratio"] = &fe.cp_even_ratio;
    f["frontend.thermal_sigma"] = &fe.thermal_sigma;
    f["frontend.aperture_jitter_sigma"] = &fe.aperture_jitter_sigma;
    auto& b = a.bias;
    f["bias.c_b"] = &b.c_b;
    f["bias.v_bias"] = &b.v_bias;
    f["bias.gbw_calibration"] = &b.gbw_calibration;
    f["bias.nominal_f_cr"] = &b.nominal_f_cr;
    f["bias.power_slope"] = &b.power_slope;
    f["bias.power_intercept"] = &b.power_intercept;
    auto& st = s.stimulus;
    f["stimulus.amplitude"] = &st.amplitude;
    f["stimulus.frequency_hz"] = &st.frequency_hz;
    f["stimulus.phase_rad"] = &st.phase_rad;
    f["stimulus.dc_offset"] = &st.dc_offset;
    f["stimulus.jitter_sigma"] = &st.jitter_sigma;
    f["run.f_cr"] = &s.f_cr;
    f["run.area_mm2"] = &s.area_mm2;
    return f;
}

}  // namespace detail

inline RunSpec base_run(const std::string& base) {
    RunSpec s;
    if (base == "silicon")
        s.adc = silicon_profile();
    else if (base == "silicon-uncalibrated")
        s.adc = silicon_base();
    else if (base == "ideal")
        s.adc = ideal_config();
    else
        throw Error("harness", "unknown base profile '" + base + "'");
    return s;
}

// Keys absent from the file keep the value of the base profile named by
// adc.base (default silicon). Unknown keys are rejected.
inline RunSpec parse_config_ini(std::istream& in, const std::string& origin = "<config>") {
    boost::property_tree::ptree pt;
    try {
        boost::property_tree::ini_parser::read_ini(in, pt);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw Error("harness", origin + ": " + e.message() + " at line " + std::to_string(e.line()));
    }
    RunSpec s = base_run(pt.get<std::string>("adc.base", "silicon"));
    auto fields = detail::double_fields(s);
    for (const auto& [section, body] : pt) {
        for (const auto& [key, node] : body) {
            const std::string full = section + "." + key;
            const std::string val = node.get_value<std::string>();
            if (auto it = fields.find(full); it != fields.end())
                *it->second = parse_double(val, full);
            else if (full == "adc.base") {
            } else if (full == "adc.rng_seed")
                s.adc.rng_seed = parse_u64(val, full);
            else if (full == "bias.gm_model")
                s.adc.bias.gm_model = parse_gm_model(val);
            else if (full == "stimulus.kind")
                s.stimulus.kind = parse_kind(val);
            else if (full == "stimulus.rng_seed")
                s.stimulus.rng_seed = parse_u64(val, full);
            else if (full == "run.record_length")
                s.record_length = static_cast<std::size_t>(parse_u64(val, full));
            else
                throw Error("harness", origin + ": unknown key " + full);
        }
    }
    s.stimulus.n_samples = s.record_length;
    validate(s.adc);
    return s;
}

inline RunSpec load_config_ini(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("harness", "cannot open " + path + ": " + std::strerror(errno));
    return parse_config_ini(in, path);
}

// Full dump, every field explicit, numbers in shortest round-trip form.
inline std::string format_config_ini(const RunSpec& spec) {
    RunSpec s = spec;
    auto fields = detail::double_fields(s);
    std::ostringstream o;
    auto put = [&](const std::string& key) {
        const auto dot = key.find('.');
        o << key.substr(dot + 1) << " = " << format_double(*fields.at(key)) << "\n";
    };
    o << "[adc]\n"
      << "; values not listed fall back to this profile: ideal | silicon | silicon-uncalibrated\n"
      << "base = silicon\n"
      << "; differential reference, full scale is 2*vref peak to peak\n";
    put("adc.vref");
    o << "rng_seed = " << s.adc.rng_seed << "\n"
      << "; 2-bit flash threshold shifts (V) at -vref/2, 0, +vref/2\n";
    for (int i = 1; i <= 3; ++i) put("adc.flash_offset" + std::to_string(i));
    for (std::size_t i = 1; i <= kStages; ++i) {
        const std::string p = "stage" + std::to_string(i);
        o << "\n[" << p << "]\n";
        if (i == 1)
            o << "; cap_scale and bias_scale are relative to stage 1 (1, 2/3, then 1/3)\n"
              << "; offsets shift the -vref/4 and +vref/4 sub-converter thresholds (V)\n"
              << "; ktc_sigma is the RMS sampling noise added to the residue (V)\n";
        for (const char* k : {"cap_scale", "bias_scale", "offset_lower", "offset_upper",
                              "gain_error", "settle_epsilon", "ktc_sigma"})
            put(p + "." + k);
    }
    o << "\n[frontend]\n"
      << "; input switch: tau = r_on_nominal*(1 + even*u + cubic*u^2)*c_sample*scale, u = v/vref\n";
    for (const char* k : {"r_on_nominal", "c_sample", "r_on_cubic_coeff", "r_on_even_coeff",
                          "track_time_constant_scale", "cp_odd_ratio", "cp_even_ratio"})
        put(std::string("frontend.") + k);
    o << "; input-referred thermal noise (V RMS) and sampling clock jitter (s RMS)\n";
    put("frontend.thermal_sigma");
    put("frontend.aperture_jitter_sigma");
    o << "\n[bias]\n"
      << "; I = c_b * f_cr * v_bias; gm_model ideal | linear | sqrt\n";
    put("bias.c_b");
    put("bias.v_bias");
    o << "gm_model = " << to_string(s.adc.bias.gm_model) << "\n"
      << "; settling time constants of stage 1 at nominal_f_cr\n";
    put("bias.gbw_calibration");
    put("bias.nominal_f_cr");
    o << "; supply power = power_intercept + power_slope * (f_cr in MS/s), mW\n";
    put("bias.power_slope");
    put("bias.power_intercept");
    o << "\n[stimulus]\n"
      << "kind = " << to_string(s.stimulus.kind) << "\n"
      << "; half-swing in volts; 1.0 is a 2 Vpp full-scale sine\n";
    for (const char* k : {"amplitude", "frequency_hz", "phase_rad", "dc_offset", "jitter_sigma"})
        put(std::string("stimulus.") + k);
    o << "rng_seed = " << s.stimulus.rng_seed << "\n"
      << "\n[run]\n";
    put("run.f_cr");
    o << "record_length = " << s.record_length << "\n"
      << "; silicon area used by the figure of merit (mm^2)\n";
    put("run.area_mm2");
    return o.str();
}

}  // namespace pipeadc
