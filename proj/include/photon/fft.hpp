#pragma once

// Thin RAII layer over FFTW for the unnormalized complex DFT.

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "photon/numeric.hpp"

namespace photon::detail {

// FFTW's planner is not reentrant; execution on fresh buffers is.
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(fftw_complex* p) const { fftw_free(p); }
};

/// out[m] = sum_j in[j] * exp(sign * 2 pi i j m / N), sign = +1 or -1.
/// Buffers come from fftw_alloc so SIMD alignment, and with it the rounding
/// pattern, is the same on every call.
inline std::vector<cplx> dft(std::span<const cplx> in, int sign) {
    const std::size_t n = in.size();
    if (n == 0) return {};
    std::unique_ptr<fftw_complex, FftwFree> buf(fftw_alloc_complex(n));
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(n), buf.get(), buf.get(),
                                sign > 0 ? FFTW_BACKWARD : FFTW_FORWARD, FFTW_ESTIMATE);
    }
    std::copy(in.begin(), in.end(), reinterpret_cast<cplx*>(buf.get()));
    fftw_execute(plan);
    std::vector<cplx> out(reinterpret_cast<cplx*>(buf.get()), reinterpret_cast<cplx*>(buf.get()) + n);
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

}  // namespace photon::detail
