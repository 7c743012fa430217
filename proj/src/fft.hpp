#ifndef VSEL_FFT_HPP
#define VSEL_FFT_HPP

#include <complex>

namespace vsel {

// In-place 1D complex transform on an owned, aligned buffer.  Plans use
// FFTW_ESTIMATE: the planner then picks its algorithm from the problem size
// alone, never from timing, so identical runs stay bit-identical.  Transforms
// are unnormalized; inverse() folds in the 1/n.
class Fft {
  public:
    explicit Fft(int n);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    int size() const { return n_; }
    std::complex<double>* data() { return buf_; }
    const std::complex<double>* data() const { return buf_; }

    void forward();
    void inverse();

  private:
    int n_;
    std::complex<double>* buf_;
    void* plan_fwd_;
    void* plan_bwd_;
};

} // namespace vsel

#endif
