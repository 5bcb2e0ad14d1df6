// Command-line front end: single operating points, rate and input-frequency
// sweeps, histogram linearity and calibration.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "pipeadc/pipeadc.hpp"

using namespace pipeadc;
using nlohmann::json;

namespace {

struct Common {
    std::string config;
    std::string profile = "silicon";
    std::optional<double> fs, fin, amp;
    std::optional<std::size_t> n;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string format = "text";
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config, "INI config, or a JSON record written by --format json");
    sub->add_option("--profile", c.profile, "base profile when no config is given")
        ->check(CLI::IsMember({"ideal", "silicon", "silicon-uncalibrated"}));
    sub->add_option("--fs", c.fs, "conversion rate, Hz");
    sub->add_option("--fin", c.fin, "input frequency target, Hz");
    sub->add_option("--amp", c.amp, "input half-swing, V (1.0 = 2 Vpp)");
    sub->add_option("--n", c.n, "record length (power of two)");
    sub->add_option("--seed", c.seed, "seed for stimulus and converter noise");
    sub->add_option("--out", c.out, "output path prefix; writes <out>.csv and/or <out>.json");
    sub->add_option("--format", c.format, "text | csv | json | both")
        ->check(CLI::IsMember({"text", "csv", "json", "both"}));
}

bool ends_with(const std::string& s, const std::string& suf) {
    return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

RunSpec resolve(const Common& c, Mode mode) {
    RunSpec spec;
    if (c.config.empty())
        spec = base_run(c.profile);
    else if (ends_with(c.config, ".json"))
        spec = load_run_json(c.config);
    else
        spec = load_config_ini(c.config);
    spec.mode = mode;
    if (mode == Mode::linearity && c.config.empty()) {
        spec.record_length = std::size_t{1} << 20;
        spec.stimulus.amplitude = kOverdriveAmplitude;
    }
    if (c.fs) spec.f_cr = *c.fs;
    if (c.fin) spec.stimulus.frequency_hz = *c.fin;
    if (c.amp) spec.stimulus.amplitude = *c.amp;
    if (c.n) spec.record_length = *c.n;
    if (c.seed) apply_seed(spec, *c.seed);
    spec.stimulus.n_samples = spec.record_length;
    if (!c.out.empty()) {
        spec.outputs.csv = c.out + ".csv";
        spec.outputs.json = c.out + ".json";
    }
    return spec;
}

bool wants_csv(const Common& c) { return c.format == "csv" || c.format == "both"; }
bool wants_json(const Common& c) { return c.format == "json" || c.format == "both"; }

// Files when --out is given, otherwise stdout.
void deliver(const Common& c, const std::string& csv, const json& record, const std::string& text) {
    if (c.out.empty()) {
        if (c.format == "text") std::cout << text;
        if (wants_csv(c)) std::cout << csv;
        if (wants_json(c)) std::cout << record.dump(2) << "\n";
        return;
    }
    if (wants_csv(c)) write_text_file(c.out + ".csv", csv);
    if (wants_json(c) || c.format == "text") write_text_file(c.out + ".json", record.dump(2) + "\n");
    std::cout << text;
}

std::string describe(const MetricsReport& r) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "f_cr %.3f MS/s  f_in %.6f MHz (bin %zu)\n"
                  "SNR %.2f dB  SNDR %.2f dB  SFDR %.2f dB  THD %.2f dB  ENOB %.3f\n"
                  "power %.2f mW  FoM %.1f\n",
                  r.f_cr_hz / 1e6, r.fin_actual_hz / 1e6, r.spectral.signal_bin, r.spectral.snr_db,
                  r.spectral.sndr_db, r.spectral.sfdr_db, r.spectral.thd_db, r.spectral.enob_bits,
                  r.power_mw, r.fom);
    return buf;
}

std::string describe(const SweepTable& t) {
    std::string s = t.independent_name + "  snr  sndr  sfdr  enob  power  fom\n";
    char buf[256];
    for (const auto& r : t.rows) {
        std::snprintf(buf, sizeof buf, "%10.4f %7.2f %7.2f %7.2f %6.3f %7.2f %8.1f\n",
                      r.independent_var, r.snr_db, r.sndr_db, r.sfdr_db, r.enob, r.power_mw, r.fom);
        s += buf;
    }
    return s;
}

std::vector<double> default_rates() {
    std::vector<double> v{5e6, 10e6};
    for (double f = 20e6; f <= 140e6 + 1; f += 10e6) v.push_back(f);
    return v;
}

std::vector<double> default_fins() {
    return {1e6, 5e6, 10e6, 20e6, 30e6, 40e6, 50e6, 60e6, 80e6, 100e6,
            150e6, 200e6, 250e6, 300e6, 350e6, 400e6};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Behavioral 12-bit pipeline ADC simulator"};
    app.require_subcommand(1);

    Common single_c, rate_c, fin_c, lin_c, cal_c, cfg_c;
    std::vector<double> rates = default_rates();
    std::vector<double> fins = default_fins();

    auto* single = app.add_subcommand("single", "one operating point");
    add_common(single, single_c);
    auto* sweep_r = app.add_subcommand("sweep-rate", "metrics and power versus conversion rate");
    add_common(sweep_r, rate_c);
    sweep_r->add_option("--rates", rates, "conversion rates, Hz")->delimiter(',');
    auto* sweep_f = app.add_subcommand("sweep-fin", "metrics versus input frequency");
    add_common(sweep_f, fin_c);
    sweep_f->add_option("--fins", fins, "input frequencies, Hz")->delimiter(',');
    auto* lin = app.add_subcommand("linearity", "sine-histogram DNL/INL");
    add_common(lin, lin_c);
    auto* cal = app.add_subcommand("calibrate", "fit the noise, distortion and jitter knobs");
    add_common(cal, cal_c);
    std::string cal_ini;
    cal->add_option("--write-config", cal_ini, "write the calibrated INI here");
    auto* show = app.add_subcommand("config", "print the resolved configuration as INI");
    add_common(show, cfg_c);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*single) {
            const RunSpec spec = resolve(single_c, Mode::single);
            const MetricsReport r = run_single(spec);
            SweepTable t{"f_in_mhz", {to_row(r.fin_actual_hz / 1e6, r)}};
            deliver(single_c, format_csv(t), structured_record(r, spec), describe(r));
        } else if (*sweep_r) {
            const RunSpec spec = resolve(rate_c, Mode::sweep_rate);
            const SweepTable t = sweep_rate(spec, rates);
            deliver(rate_c, format_csv(t), structured_record(t, spec), describe(t));
        } else if (*sweep_f) {
            const RunSpec spec = resolve(fin_c, Mode::sweep_fin);
            const SweepTable t = sweep_fin(spec, fins);
            deliver(fin_c, format_csv(t), structured_record(t, spec), describe(t));
        } else if (*lin) {
            const RunSpec spec = resolve(lin_c, Mode::linearity);
            const MetricsReport r = run_linearity(spec);
            const auto& L = *r.linearity;
            auto [dlo, dhi] = std::minmax_element(L.dnl_lsb.begin(), L.dnl_lsb.end());
            auto [ilo, ihi] = std::minmax_element(L.inl_lsb.begin(), L.inl_lsb.end());
            char buf[256];
            std::snprintf(buf, sizeof buf, "DNL %+.3f/%+.3f LSB  INL %+.3f/%+.3f LSB  missing %zu%s%s\n",
                          *dlo, *dhi, *ilo, *ihi, L.missing_codes.size(),
                          L.short_record ? "  [short record]" : "",
                          L.no_overdrive ? "  [no overdrive]" : "");
            SweepTable t{"f_in_mhz", {to_row(r.fin_actual_hz / 1e6, r)}};
            deliver(lin_c, format_csv(t), structured_record(r, spec), buf);
        } else if (*cal) {
            RunSpec spec = resolve(cal_c, Mode::calibrate);
            CalibrationTargets targets;
            targets.f_cr = spec.f_cr;
            targets.record_length = spec.record_length;
            targets.amplitude = spec.stimulus.amplitude;
            if (cal_c.seed) targets.seed = *cal_c.seed;
            const CalibrationResult res = calibrate_with_log(spec.adc, targets);
            spec.adc = res.config;
            std::string text;
            char buf[256];
            for (const auto& s : res.steps) {
                std::snprintf(buf, sizeof buf, "%-32s %-5s target %.3f achieved %.4f value %.6g (%d runs)\n",
                              s.knob.c_str(), s.metric.c_str(), s.target_db, s.achieved_db, s.value,
                              s.evaluations);
                text += buf;
            }
            if (!cal_ini.empty()) write_text_file(cal_ini, format_config_ini(spec));
            deliver(cal_c, "", structured_record(json{{"steps", res.steps}}, spec), text);
        } else if (*show) {
            std::cout << format_config_ini(resolve(cfg_c, Mode::single));
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
