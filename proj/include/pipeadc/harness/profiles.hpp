#pragma once

#include <cmath>

#include "pipeadc/pipeline.hpp"

namespace pipeadc {

// Silicon-like converter before calibration: fixed comparator offsets well
// inside the redundancy range, kT/C noise following the capacitor scaling, a
// 10 ps input switch and square-law bias devices. The four calibration knobs
// are left at zero.
inline AdcConfig silicon_base() {
    AdcConfig cfg;
    const auto s = stage_scales();
    constexpr double lower[kStages] = {0.018, -0.012, 0.009, -0.021, 0.014,
                                       -0.007, 0.011, -0.016, 0.006, -0.010};
    constexpr double upper[kStages] = {-0.015, 0.020, -0.008, 0.013, -0.019,
                                       0.010, -0.005, 0.017, -0.012, 0.008};
    for (std::size_t i = 0; i < kStages; ++i) {
        auto& st = cfg.stages[i];
        st.cap_scale = s[i];
        st.bias_scale = s[i];
        st.comparator_offsets = {lower[i], upper[i]};
        st.ktc_sigma = 150e-6 / std::sqrt(s[i]);
    }
    cfg.flash_offsets = {0.012, -0.008, 0.010};

    cfg.frontend.r_on_nominal = 20.0;
    cfg.frontend.c_sample = 0.5e-12;
    cfg.frontend.track_time_constant_scale = 1.0;
    cfg.frontend.cp_odd_ratio = 2.5e-3;
    cfg.frontend.cp_even_ratio = 2e-4;

    cfg.bias.gm_model = GmModel::sqrt;
    cfg.bias.gbw_calibration = 12.0;
    return cfg;
}

// Knob values produced by calibrate() on silicon_base() with the default
// targets.
inline AdcConfig silicon_profile() {
    AdcConfig cfg = silicon_base();
    cfg.frontend.thermal_sigma = 0.00025469970703125;
    cfg.frontend.r_on_cubic_coeff = 0.548828125;
    cfg.frontend.r_on_even_coeff = -0.80859375;
    cfg.frontend.aperture_jitter_sigma = 3.5278320312499997e-13;
    return cfg;
}

}  // namespace pipeadc
