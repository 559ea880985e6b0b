#include "mfp/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace mfp {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

Fft::Fft(std::size_t n) : n_(n) {
    if (n == 0) throw std::invalid_argument("Fft: size must be > 0");
    std::vector<std::complex<double>> scratch(n);
    std::lock_guard<std::mutex> lock(planner_mutex());
    // FFTW_UNALIGNED lets the plan run on any caller buffer via the
    // new-array execute interface.
    plan_ = fftw_plan_dft_1d(static_cast<int>(n),
                             reinterpret_cast<fftw_complex*>(scratch.data()),
                             reinterpret_cast<fftw_complex*>(scratch.data()),
                             FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan_ == nullptr) throw std::runtime_error("Fft: planning failed");
}

Fft::~Fft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
}

void Fft::forward(std::vector<std::complex<double>>& inout) const {
    if (inout.size() != n_) throw std::invalid_argument("Fft: buffer size mismatch");
    fftw_execute_dft(static_cast<fftw_plan>(plan_),
                     reinterpret_cast<fftw_complex*>(inout.data()),
                     reinterpret_cast<fftw_complex*>(inout.data()));
}

}  // namespace mfp
