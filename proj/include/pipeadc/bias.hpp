#pragma once

#include <array>
#include <cmath>

#include "pipeadc/error.hpp"

namespace pipeadc {

inline constexpr std::size_t kStages = 10;

// How opamp transconductance follows the SC-generated bias current.
// ideal disables settling error altogether.
enum class GmModel { ideal, linear, sqrt };

struct BiasConfig {
    double c_b = 1e-12;          // F
    double v_bias = 0.9;         // V
    GmModel gm_model = GmModel::sqrt;
    double gbw_calibration = 12; // t_s/tau of stage 1 at nominal_f_cr
    double nominal_f_cr = 110e6; // Hz
    double power_slope = 0.65;   // mW per MS/s
    double power_intercept = 25.5;  // mW
};

inline double bias_current(double c_b, double f_cr, double v_bias) {
    if (!(c_b > 0.0) || !(f_cr > 0.0) || !(v_bias > 0.0))
        throw Error("bias", "bias_current needs positive C_B, f_CR and V_BIAS");
    return c_b * f_cr * v_bias;
}

inline constexpr std::array<double, kStages> stage_scales() {
    return {1.0, 2.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0,
            1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
}

// Number of settling time constants in the half-period window.
// tau_i ~ C_H,i / gm_i. With gm_i ~ bias_scale_i * I (linear) or
// bias_scale_i * sqrt(I) (square-law devices whose width scales with the
// stage), I from the SC bias law and hence proportional to f_cr.
inline double settle_time_constants(double cap_scale, double bias_scale, double f_cr,
                                    const BiasConfig& cfg) {
    if (!(f_cr > 0.0)) throw Error("bias", "f_cr must be positive");
    if (!(cap_scale > 0.0) || !(bias_scale > 0.0))
        throw Error("bias", "stage scales must be positive");
    const double stage_ratio = bias_scale / cap_scale;
    switch (cfg.gm_model) {
        case GmModel::ideal: return INFINITY;
        case GmModel::linear: return cfg.gbw_calibration * stage_ratio;
        case GmModel::sqrt:
            return cfg.gbw_calibration * stage_ratio * std::sqrt(cfg.nominal_f_cr / f_cr);
    }
    return INFINITY;
}

inline double settle_epsilon(double cap_scale, double bias_scale, double f_cr,
                             const BiasConfig& cfg) {
    const double n = settle_time_constants(cap_scale, bias_scale, f_cr, cfg);
    return std::isinf(n) ? 0.0 : std::exp(-n);
}

// stage_index is 1-based, using the default cap/bias scaling.
inline double settle_epsilon(std::size_t stage_index, double f_cr, const BiasConfig& cfg) {
    if (stage_index < 1 || stage_index > kStages) throw Error("bias", "stage index out of range");
    const double s = stage_scales()[stage_index - 1];
    return settle_epsilon(s, s, f_cr, cfg);
}

// f_cr in Hz. Linear macro-model fitted to the measured power points.
inline double power_mw(double f_cr, const BiasConfig& cfg = {}) {
    if (!(f_cr >= 0.0)) throw Error("bias", "f_cr must be >= 0");
    return cfg.power_intercept + cfg.power_slope * (f_cr / 1e6);
}

}  // namespace pipeadc
