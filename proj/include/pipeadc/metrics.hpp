#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "pipeadc/correction.hpp"
#include "pipeadc/error.hpp"
#include "pipeadc/fft.hpp"

namespace pipeadc {

struct SpectralMetrics {
    double snr_db = 0.0;
    double sndr_db = 0.0;
    double sfdr_db = 0.0;
    double thd_db = 0.0;
    double enob_bits = 0.0;
    std::size_t signal_bin = 0;
    double signal_power_dbfs = 0.0;
};

struct LinearityReport {
    std::vector<double> dnl_lsb;  // codes 1..4094
    std::vector<double> inl_lsb;
    std::vector<unsigned> missing_codes;
    bool short_record = false;  // fewer than 2^18 samples
    bool no_overdrive = false;  // an end code never occurred

    static constexpr unsigned first_code = 1;
};

struct FomInputs {
    double f_cr_msps = 0.0;
    double enob = 0.0;
    double area_mm2 = 0.0;
    double power_mw = 0.0;
};

inline constexpr std::size_t kHarmonics = 10;

inline double db10(double ratio) { return 10.0 * std::log10(std::max(ratio, 1e-300)); }

inline double enob_from_sndr(double sndr_db) { return (sndr_db - 1.76) / 6.02; }

inline std::vector<double> centered(const std::vector<OutputCode>& codes) {
    std::vector<double> x(codes.size());
    for (std::size_t i = 0; i < codes.size(); ++i)
        x[i] = (static_cast<double>(codes[i].value()) - kMidscale) / kMidscale;
    return x;
}

// One-sided power spectrum of a full-scale-normalized record, bins 0..N/2.
// The bins sum to the record's mean square.
inline std::vector<double> power_spectrum(const std::vector<double>& x) {
    const std::size_t n = x.size();
    if (!detail::is_pow2(n) || n < 2) throw Error("metrics", "record length must be a power of two");
    const auto spec = rfft(x);
    const double nn = static_cast<double>(n) * static_cast<double>(n);
    std::vector<double> p(n / 2 + 1);
    for (std::size_t k = 0; k <= n / 2; ++k) {
        const double m = std::norm(spec[k]) / nn;
        p[k] = (k == 0 || k == n / 2) ? m : 2.0 * m;
    }
    return p;
}

inline std::vector<double> spectrum(const std::vector<OutputCode>& codes) {
    return power_spectrum(centered(codes));
}

// Bins of harmonics 2..H of signal_bin folded into [0, N/2], excluding DC
// and the signal bin itself.
inline std::set<std::size_t> harmonic_bins(std::size_t signal_bin, std::size_t n) {
    std::set<std::size_t> bins;
    for (std::size_t h = 2; h <= kHarmonics; ++h) {
        std::size_t k = (h * signal_bin) % n;
        if (k > n / 2) k = n - k;
        if (k != 0 && k != signal_bin) bins.insert(k);
    }
    return bins;
}

inline SpectralMetrics metrics_from_spectrum(const std::vector<double>& p, std::size_t signal_bin) {
    const std::size_t half = p.size() - 1;
    const std::size_t n = 2 * half;
    if (signal_bin == 0 || signal_bin > half) throw Error("metrics", "no signal");

    const double sig = p[signal_bin];
    const auto harm = harmonic_bins(signal_bin, n);
    double harm_power = 0.0;
    for (auto k : harm) harm_power += p[k];
    double rest = 0.0;
    double spur = 0.0;
    for (std::size_t k = 1; k <= half; ++k) {
        if (k == signal_bin) continue;
        rest += p[k];
        spur = std::max(spur, p[k]);
    }
    // A tone has to stand clearly above the average bin, otherwise the record
    // carries no signal worth measuring.
    const double mean_bin = rest / static_cast<double>(half - 1);
    if (!(sig > 1e-20) || sig < 100.0 * mean_bin) throw Error("metrics", "no signal");

    const double noise = std::max(rest - harm_power, 0.0);
    SpectralMetrics m;
    m.signal_bin = signal_bin;
    m.snr_db = db10(sig / noise);
    m.sndr_db = db10(sig / rest);
    m.sfdr_db = db10(sig / spur);
    m.thd_db = db10(harm_power / sig);
    m.enob_bits = enob_from_sndr(m.sndr_db);
    m.signal_power_dbfs = db10(sig / 0.5);
    return m;
}

inline SpectralMetrics dynamic_metrics(const std::vector<OutputCode>& codes, std::size_t signal_bin) {
    if (signal_bin == 0) throw Error("metrics", "no signal");
    return metrics_from_spectrum(spectrum(codes), signal_bin);
}

// Sine-histogram DNL/INL. The cumulative count below code k maps to its
// lower transition through the arcsine distribution, T_k = -cos(pi*C_k/N),
// so amplitude and offset of the stimulus drop out after normalization.
inline LinearityReport histogram_linearity(const std::vector<OutputCode>& codes) {
    const std::size_t n = codes.size();
    if (n == 0) throw Error("metrics", "empty record");
    std::vector<std::size_t> hist(kCodeMax + 1, 0);
    for (auto c : codes) ++hist[c.value()];

    LinearityReport rep;
    rep.short_record = n < (std::size_t{1} << 18);
    rep.no_overdrive = hist.front() == 0 || hist.back() == 0;

    // t[k] for k = 1..4095
    std::vector<double> t(kCodeMax + 1, 0.0);
    std::size_t below = 0;
    for (unsigned k = 1; k <= kCodeMax; ++k) {
        below += hist[k - 1];
        t[k] = -std::cos(M_PI * static_cast<double>(below) / static_cast<double>(n));
    }
    std::vector<double> width(kCodeMax - 1);
    for (unsigned k = 1; k < kCodeMax; ++k) width[k - 1] = t[k + 1] - t[k];
    double mean = 0.0;
    for (double w : width) mean += w;
    mean /= static_cast<double>(width.size());
    if (!(mean > 0.0)) throw Error("metrics", "record does not span the code range");

    rep.dnl_lsb.resize(width.size());
    rep.inl_lsb.resize(width.size());
    double acc = 0.0;
    for (std::size_t j = 0; j < width.size(); ++j) {
        const unsigned code = static_cast<unsigned>(j) + LinearityReport::first_code;
        rep.dnl_lsb[j] = hist[code] == 0 ? -1.0 : width[j] / mean - 1.0;
        if (hist[code] == 0) rep.missing_codes.push_back(code);
        acc += rep.dnl_lsb[j];
        rep.inl_lsb[j] = acc;
    }
    return rep;
}

inline double figure_of_merit(const FomInputs& in) {
    if (!(in.f_cr_msps > 0.0) || !(in.enob > 0.0) || !(in.area_mm2 > 0.0) || !(in.power_mw > 0.0))
        throw Error("metrics", "figure of merit inputs must be positive");
    return in.f_cr_msps * std::exp2(in.enob) / (in.area_mm2 * in.power_mw);
}

}  // namespace pipeadc
