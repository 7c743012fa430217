#include "fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace vsel {

namespace {
// FFTW's planner is not thread-safe even for ESTIMATE plans.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

Fft::Fft(int n) : n_(n) {
    if (n < 2) throw std::invalid_argument("fft size must be at least 2");
    buf_ = reinterpret_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * n));
    if (!buf_) throw std::bad_alloc();
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan_fwd_ = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(buf_),
                                 reinterpret_cast<fftw_complex*>(buf_), FFTW_FORWARD,
                                 FFTW_ESTIMATE);
    plan_bwd_ = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(buf_),
                                 reinterpret_cast<fftw_complex*>(buf_), FFTW_BACKWARD,
                                 FFTW_ESTIMATE);
    if (!plan_fwd_ || !plan_bwd_) throw std::runtime_error("fftw plan creation failed");
}

Fft::~Fft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
    fftw_free(buf_);
}

void Fft::forward() {
    fftw_execute(static_cast<fftw_plan>(plan_fwd_));
}

void Fft::inverse() {
    fftw_execute(static_cast<fftw_plan>(plan_bwd_));
    const double s = 1.0 / n_;
    for (int i = 0; i < n_; ++i) buf_[i] *= s;
}

} // namespace vsel
