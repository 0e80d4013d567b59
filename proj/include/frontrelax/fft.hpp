#pragma once

#include <complex>
#include <span>
#include <vector>

namespace frontrelax {

using cplx = std::complex<double>;

/// Batched real <-> half-complex transforms of rank 1 or 2 (FFTW backend).
///
/// `howmany` transforms of shape `shape` are stored back to back. backward() is
/// normalized so that backward(forward(x)) == x. Plans are built with FFTW_ESTIMATE
/// so results are reproducible run to run. An instance owns scratch buffers and must
/// not be shared between threads.
class RealFFT {
public:
    explicit RealFFT(std::vector<int> shape, int howmany = 1);
    ~RealFFT();
    RealFFT(const RealFFT&) = delete;
    RealFFT& operator=(const RealFFT&) = delete;
    RealFFT(RealFFT&& other) noexcept;
    RealFFT& operator=(RealFFT&& other) noexcept;

    int real_size() const noexcept { return real_size_; }
    int complex_size() const noexcept { return complex_size_; }
    int howmany() const noexcept { return howmany_; }
    const std::vector<int>& shape() const noexcept { return shape_; }

    void forward(std::span<const double> in, std::span<cplx> out) const;
    void backward(std::span<const cplx> in, std::span<double> out) const;

private:
    void release() noexcept;

    std::vector<int> shape_;
    int howmany_ = 1;
    int real_size_ = 0;
    int complex_size_ = 0;
    void* plan_fwd_ = nullptr;
    void* plan_bwd_ = nullptr;
    mutable std::vector<double> rbuf_;
    mutable std::vector<cplx> cbuf_;
};

}  // namespace frontrelax
