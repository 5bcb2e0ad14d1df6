// Acceptance suite: one PASS/FAIL line per criterion. Tolerances are fixed
// here and never adapted to the model.
//
//   acceptance               run every criterion
//   acceptance --criterion N run one (exit status reflects it)

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"

using namespace pipeadc;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void check(bool ok, const char* fmt, ...) __attribute__((format(printf, 3, 4)));
};

void Outcome::check(bool ok, const char* fmt, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    if (!detail.empty()) detail += "; ";
    detail += buf;
    if (!ok) {
        detail += " [X]";
        pass = false;
    }
}

struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
};

std::vector<unsigned> ramp_codes(const AdcConfig& cfg, std::size_t n) {
    std::vector<unsigned> v;
    for (auto c : correct_stream(convert_stream(gen_ramp(n, -1, 1), cfg))) v.push_back(c.value());
    return v;
}

Outcome ideal_equivalence() {
    Outcome o;
    const std::size_t n = 1 << 14;
    const auto x = gen_ramp(n, -1, 1).samples;
    const auto codes = ramp_codes(ideal_config(), n);
    double lo = -1e9, hi = 1e9;
    std::size_t used = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (codes[i] == 4095 && x[i] >= 1.0 - 1.0 / 4096) continue;  // top code holds the rail
        const double e = codes[i] - (x[i] + 1) / 2 * 4096;
        lo = std::max(lo, e - 0.5);
        hi = std::min(hi, e + 0.5);
        ++used;
    }
    int worst_vs_round = 0;
    for (std::size_t i = 0; i < n; ++i)
        worst_vs_round = std::max(worst_vs_round,
                                  std::abs(static_cast<int>(codes[i]) - static_cast<int>(oracle::round_quantizer(x[i]))));
    o.check(lo <= hi, "common offset interval [%.4f, %.4f] over %zu points", lo, hi, used);
    o.check(worst_vs_round <= 1, "max |code - round quantizer| = %d (convention offset <= 1)", worst_vs_round);
    return o;
}

Outcome ideal_dynamic_floor() {
    Outcome o;
    RunSpec s;
    s.adc = ideal_config();
    s.stimulus.amplitude = 1.0;
    const auto r = run_single(s).spectral;
    const double oracle = 6.02 * 12 + 1.76;
    o.check(std::abs(r.sndr_db - oracle) <= 0.3, "SNDR %.3f dB (%.2f +/- 0.3)", r.sndr_db, oracle);
    o.check(std::abs(r.enob_bits - 12.0) <= 0.05, "ENOB %.4f (12.00 +/- 0.05)", r.enob_bits);
    return o;
}

Outcome table_reproduction() {
    Outcome o;
    const AdcConfig cfg = calibrate(silicon_base());
    double snr = 0, sndr = 0, sfdr = 0, enob = 0;
    const int seeds = 4;
    for (int k = 0; k < seeds; ++k) {
        RunSpec s;
        s.adc = cfg;
        apply_seed(s, 100 + k);
        const auto r = run_single(s).spectral;
        snr += r.snr_db / seeds;
        sndr += r.sndr_db / seeds;
        sfdr += r.sfdr_db / seeds;
        enob += r.enob_bits / seeds;
    }
    o.check(std::abs(snr - 67.1) <= 0.3, "SNR %.3f (67.1 +/- 0.3)", snr);
    o.check(std::abs(sndr - 64.2) <= 0.5, "SNDR %.3f (64.2 +/- 0.5)", sndr);
    o.check(std::abs(sfdr - 69.4) <= 1.0, "SFDR %.3f (69.4 +/- 1.0)", sfdr);
    o.check(std::abs(enob - 10.4) <= 0.1, "ENOB %.3f (10.4 +/- 0.1)", enob);
    return o;
}

Outcome power_model() {
    Outcome o;
    o.check(power_mw(110e6) == 97.0, "P(110) = %.15g mW (exactly 97)", power_mw(110e6));
    o.check(power_mw(130e6) == 110.0, "P(130) = %.15g mW (exactly 110)", power_mw(130e6));
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 500e6);
    double worst = 0;
    for (int i = 0; i < 10000; ++i) {
        const double a = u(rng), b = u(rng);
        worst = std::max(worst, std::abs(power_mw(a) + power_mw(b) - power_mw(a + b) - 25.5));
    }
    o.check(worst <= 1e-9, "max linearity residual %.3g mW over 10000 pairs", worst);
    return o;
}

Outcome fom() {
    Outcome o;
    const double fm = figure_of_merit({110, 10.4, 0.86, 97});
    o.check(std::abs(fm - 1782) <= 1, "FM %.3f (1782 +/- 1)", fm);
    return o;
}

Outcome rate_sweep() {
    Outcome o;
    RunSpec s;
    s.adc = silicon_profile();
    std::vector<double> rates{5e6, 10e6};
    for (int r = 20; r <= 140; r += 10) rates.push_back(r * 1e6);
    const auto t = sweep_rate(s, rates);
    double min_sndr_band = 1e9, sndr_140 = 0, min_sfdr = 1e9;
    for (const auto& row : t.rows) {
        if (row.independent_var >= 20 && row.independent_var <= 120)
            min_sndr_band = std::min(min_sndr_band, row.sndr_db);
        if (row.independent_var == 140) sndr_140 = row.sndr_db;
        min_sfdr = std::min(min_sfdr, row.sfdr_db);
    }
    o.check(min_sndr_band >= 64.0, "min SNDR 20-120 MS/s %.3f (>= 64)", min_sndr_band);
    o.check(sndr_140 >= 62.0, "SNDR @140 MS/s %.3f (>= 62)", sndr_140);
    o.check(min_sfdr >= 69.0, "min SFDR 5-140 MS/s %.3f (>= 69)", min_sfdr);
    return o;
}

Outcome input_sweep() {
    Outcome o;
    RunSpec s;
    s.adc = silicon_profile();
    const std::vector<double> fins{10e6, 20e6, 30e6, 40e6, 60e6, 80e6, 100e6,
                                   150e6, 200e6, 250e6, 300e6, 350e6, 400e6};
    const auto t = sweep_fin(s, fins);
    double min_snr = 1e9, min_sndr = 1e9;
    std::vector<double> lx, ly;
    for (const auto& row : t.rows) {
        if (row.independent_var <= 100) min_snr = std::min(min_snr, row.snr_db);
        if (row.independent_var <= 40) min_sndr = std::min(min_sndr, row.sndr_db);
        if (row.independent_var >= 150 && row.independent_var <= 400) {
            lx.push_back(std::log10(row.independent_var));
            ly.push_back(row.snr_db);
        }
    }
    // Least-squares slope of SNR against log10(f).
    const double n = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    o.check(min_snr >= 66.0, "min SNR up to 100 MHz %.3f (>= 66)", min_snr);
    o.check(min_sndr >= 60.0, "min SNDR up to 40 MHz %.3f (>= 60)", min_sndr);
    o.check(std::abs(slope + 20.0) <= 2.0, "SNR slope 150-400 MHz %.2f dB/dec (-20 +/- 2)", slope);
    return o;
}

Outcome redundancy() {
    Outcome o;
    const std::size_t n = 1 << 14;
    const auto ref = ramp_codes(ideal_config(), n);
    const double mag = 0.25 - std::ldexp(1.0, -10);
    int worst = 0;
    for (std::size_t st = 0; st < kStages; ++st)
        for (int which = 0; which < 2; ++which)
            for (double sign : {-1.0, 1.0}) {
                AdcConfig cfg = ideal_config();
                cfg.stages[st].comparator_offsets[which] = sign * mag;
                const auto got = ramp_codes(cfg, n);
                for (std::size_t i = 0; i < n; ++i)
                    worst = std::max(worst, std::abs(static_cast<int>(got[i]) - static_cast<int>(ref[i])));
            }
    o.check(worst <= 1, "max code change with |offset| = vref/4 - 2^-10: %d LSB (<= 1)", worst);

    // Outside the redundancy range: half-scale offset on the first stage.
    AdcConfig broken = ideal_config();
    broken.stages[0].comparator_offsets[1] = 0.5;
    const std::size_t m = 1 << 18;
    std::vector<double> hist(4096, 0.0);
    for (auto c : ramp_codes(broken, m)) hist[c] += 1;
    const double mean = static_cast<double>(m) / 4096;
    double worst_dnl = 0;
    for (unsigned k = 1; k < 4095; ++k) worst_dnl = std::max(worst_dnl, std::abs(hist[k] / mean - 1));
    o.check(worst_dnl > 1.0, "offset vref/2 gives max |DNL| %.1f LSB (> 1)", worst_dnl);
    return o;
}

Outcome linearity_envelopes() {
    Outcome o;
    RunSpec s;
    s.adc = silicon_profile();
    s.record_length = 1 << 20;
    s.stimulus.amplitude = kOverdriveAmplitude;
    const auto rep = *run_linearity(s).linearity;
    auto [dlo, dhi] = std::minmax_element(rep.dnl_lsb.begin(), rep.dnl_lsb.end());
    auto [ilo, ihi] = std::minmax_element(rep.inl_lsb.begin(), rep.inl_lsb.end());
    o.check(*dlo >= -1.2 && *dhi <= 1.2, "DNL %.3f/%.3f (within +/-1.2)", *dlo, *dhi);
    o.check(*ilo >= -1.5 && *ihi <= 1.0, "INL %.3f/%.3f (within -1.5/+1.0)", *ilo, *ihi);

    // Noiseless static configurations: histogram against the ramp oracle.
    std::vector<std::pair<const char*, AdcConfig>> cases;
    AdcConfig gain = ideal_config();
    gain.stages[0].gain_error = -1e-3;
    cases.emplace_back("stage-1 gain -0.1%", gain);
    AdcConfig quiet = silicon_profile();
    quiet.frontend = FrontEndConfig{};
    for (auto& st : quiet.stages) st.ktc_sigma = 0;
    quiet.stages[1].gain_error = 5e-4;
    cases.emplace_back("silicon offsets+settling, noise off", quiet);
    for (const auto& [label, cfg] : cases) {
        RunSpec h;
        h.adc = cfg;
        h.record_length = 1 << 20;
        h.stimulus.amplitude = kOverdriveAmplitude;
        const auto hist = *run_linearity(h).linearity;
        const auto ramp = oracle::ramp_linearity(cfg);
        double worst = 0;
        for (std::size_t i = 0; i < hist.inl_lsb.size(); ++i)
            worst = std::max(worst, std::abs(hist.inl_lsb[i] - ramp.inl[i]));
        o.check(worst <= 0.1, "%s: histogram vs ramp INL %.4f LSB (<= 0.1)", label, worst);
    }
    return o;
}

Outcome determinism() {
    Outcome o;
    RunSpec s;
    s.adc = silicon_profile();
    apply_seed(s, 424242);
    const auto a = capture_codes(s).codes;
    const auto b = capture_codes(s).codes;
    o.check(a == b, "code streams %s", a == b ? "identical" : "differ");
    const std::string ra = structured_record(run_single(s), s).dump();
    const std::string rb = structured_record(run_single(s), s).dump();
    o.check(ra == rb, "reports %s", ra == rb ? "identical" : "differ");
    const RunSpec back = run_from_json(nlohmann::json::parse(ra));
    const std::string rc = structured_record(run_single(back), back).dump();
    o.check(rc == ra, "rerun from emitted record %s", rc == ra ? "identical" : "differs");
    return o;
}

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all{
        {1, "ideal-quantizer equivalence", 5, ideal_equivalence},
        {2, "ideal dynamic floor", 5, ideal_dynamic_floor},
        {3, "table reproduction after calibration", 60, table_reproduction},
        {4, "power model", 1e9, power_model},
        {5, "figure of merit", 1e9, fom},
        {6, "rate-sweep envelopes", 300, rate_sweep},
        {7, "input-frequency sweep", 300, input_sweep},
        {8, "redundancy", 30, redundancy},
        {9, "linearity envelopes", 180, linearity_envelopes},
        {10, "determinism", 1e9, determinism},
    };
    return all;
}

bool run_one(const Criterion& c) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = c.run();
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s < 1e9) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "runtime %.2f s (< %.0f s)", secs, c.budget_s);
        o.check(secs < c.budget_s, "%s", buf);
    } else {
        char buf[64];
        std::snprintf(buf, sizeof buf, "runtime %.2f s", secs);
        o.detail += std::string("; ") + buf;
    }
    std::printf("%s C%d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
    return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc)
            only = std::atoi(argv[++i]);
        else {
            std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
            return 2;
        }
    }
    bool all_pass = true;
    bool found = false;
    for (const auto& c : criteria()) {
        if (only && c.id != only) continue;
        found = true;
        all_pass = run_one(c) && all_pass;
    }
    if (!found) {
        std::fprintf(stderr, "no criterion %d\n", only);
        return 2;
    }
    return all_pass ? 0 : 1;
}
