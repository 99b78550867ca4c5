#ifndef SRW_FFT_HPP
#define SRW_FFT_HPP

#include <complex>
#include <mutex>
#include <vector>

#include <fftw3.h>

namespace srw {

// fftw plan creation is not thread safe; execution on distinct buffers is.
inline std::mutex& fftw_plan_mutex() {
    static std::mutex m;
    return m;
}

/// In-place complex-to-complex FFT on a rank-d cube of side n per axis.
/// sign = FFTW_FORWARD (-1) applies sum_x e^{-i p.x}, FFTW_BACKWARD (+1)
/// applies sum_p e^{+i p.x}; no normalization on either side.
inline void fft_cube_inplace(std::vector<std::complex<double>>& data, int rank, int n, int sign) {
    std::vector<int> dims(rank, n);
    fftw_complex* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        plan = fftw_plan_dft(rank, dims.data(), buf, buf, sign, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        fftw_destroy_plan(plan);
    }
}

} // namespace srw

#endif
