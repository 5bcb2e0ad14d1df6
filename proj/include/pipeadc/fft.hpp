#pragma once

#include <fftw3.h>

#include <complex>
#include <cstring>
#include <memory>
#include <mutex>
#include <vector>

#include "pipeadc/error.hpp"

namespace pipeadc {

namespace detail {

// The FFTW planner is not reentrant; execution of distinct plans is.
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace detail

// Bins 0..N/2 of the forward DFT of a real record (unnormalized).
inline std::vector<std::complex<double>> rfft(const std::vector<double>& x) {
    const std::size_t n = x.size();
    if (!detail::is_pow2(n)) throw Error("metrics", "FFT length must be a power of two");

    auto free_fn = [](void* p) { fftw_free(p); };
    std::unique_ptr<double, decltype(free_fn)> in(fftw_alloc_real(n), free_fn);
    std::unique_ptr<fftw_complex, decltype(free_fn)> out(fftw_alloc_complex(n / 2 + 1), free_fn);
    if (!in || !out) throw Error("metrics", "FFT allocation failed");

    fftw_plan plan;
    {
        std::lock_guard lock(detail::fftw_planner_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE);
    }
    if (!plan) throw Error("metrics", "FFT planning failed");
    std::memcpy(in.get(), x.data(), n * sizeof(double));
    fftw_execute(plan);
    {
        std::lock_guard lock(detail::fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }

    std::vector<std::complex<double>> res(n / 2 + 1);
    for (std::size_t k = 0; k <= n / 2; ++k) res[k] = {out.get()[k][0], out.get()[k][1]};
    return res;
}

}  // namespace pipeadc
