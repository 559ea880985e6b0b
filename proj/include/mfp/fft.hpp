#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace mfp {

// Unnormalized forward DFT, backed by FFTW. Plan creation is serialized
// internally; execution on distinct buffers is safe from multiple threads.
class Fft {
public:
    explicit Fft(std::size_t n);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    std::size_t size() const { return n_; }
    void forward(std::vector<std::complex<double>>& inout) const;

private:
    std::size_t n_;
    void* plan_;
};

}  // namespace mfp
