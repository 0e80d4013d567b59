#include "frontrelax/fft.hpp"

#include "frontrelax/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

namespace frontrelax {

namespace {
// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

RealFFT::RealFFT(std::vector<int> shape, int howmany) : shape_(std::move(shape)), howmany_(howmany) {
    if (shape_.empty() || shape_.size() > 2) throw InputError("RealFFT: rank must be 1 or 2");
    if (howmany_ < 1) throw InputError("RealFFT: howmany must be positive");
    for (int s : shape_) {
        if (s < 1) throw InputError("RealFFT: non-positive extent");
    }
    real_size_ = 1;
    for (int s : shape_) real_size_ *= s;
    complex_size_ = real_size_ / shape_.back() * (shape_.back() / 2 + 1);

    rbuf_.assign(static_cast<std::size_t>(real_size_) * howmany_, 0.0);
    cbuf_.assign(static_cast<std::size_t>(complex_size_) * howmany_, cplx{});

    std::lock_guard lock(planner_mutex());
    const int rank = static_cast<int>(shape_.size());
    auto* r = rbuf_.data();
    auto* c = reinterpret_cast<fftw_complex*>(cbuf_.data());
    plan_fwd_ = fftw_plan_many_dft_r2c(rank, shape_.data(), howmany_, r, nullptr, 1, real_size_, c,
                                       nullptr, 1, complex_size_, FFTW_ESTIMATE);
    plan_bwd_ = fftw_plan_many_dft_c2r(rank, shape_.data(), howmany_, c, nullptr, 1, complex_size_,
                                       r, nullptr, 1, real_size_, FFTW_ESTIMATE);
    if (!plan_fwd_ || !plan_bwd_) {
        release();
        throw InputError("RealFFT: FFTW could not build a plan");
    }
}

RealFFT::~RealFFT() { release(); }

RealFFT::RealFFT(RealFFT&& other) noexcept
    : shape_(std::move(other.shape_)),
      howmany_(other.howmany_),
      real_size_(other.real_size_),
      complex_size_(other.complex_size_),
      plan_fwd_(std::exchange(other.plan_fwd_, nullptr)),
      plan_bwd_(std::exchange(other.plan_bwd_, nullptr)),
      rbuf_(std::move(other.rbuf_)),
      cbuf_(std::move(other.cbuf_)) {}

RealFFT& RealFFT::operator=(RealFFT&& other) noexcept {
    if (this != &other) {
        release();
        shape_ = std::move(other.shape_);
        howmany_ = other.howmany_;
        real_size_ = other.real_size_;
        complex_size_ = other.complex_size_;
        plan_fwd_ = std::exchange(other.plan_fwd_, nullptr);
        plan_bwd_ = std::exchange(other.plan_bwd_, nullptr);
        rbuf_ = std::move(other.rbuf_);
        cbuf_ = std::move(other.cbuf_);
    }
    return *this;
}

void RealFFT::release() noexcept {
    std::lock_guard lock(planner_mutex());
    if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
    plan_fwd_ = plan_bwd_ = nullptr;
}

void RealFFT::forward(std::span<const double> in, std::span<cplx> out) const {
    if (in.size() != rbuf_.size() || out.size() != cbuf_.size()) {
        throw InputError("RealFFT::forward: buffer size mismatch");
    }
    std::copy(in.begin(), in.end(), rbuf_.begin());
    fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_fwd_), rbuf_.data(),
                         reinterpret_cast<fftw_complex*>(cbuf_.data()));
    std::copy(cbuf_.begin(), cbuf_.end(), out.begin());
}

void RealFFT::backward(std::span<const cplx> in, std::span<double> out) const {
    if (in.size() != cbuf_.size() || out.size() != rbuf_.size()) {
        throw InputError("RealFFT::backward: buffer size mismatch");
    }
    // c2r overwrites its input, so always go through the scratch buffer.
    std::copy(in.begin(), in.end(), cbuf_.begin());
    fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_bwd_),
                         reinterpret_cast<fftw_complex*>(cbuf_.data()), rbuf_.data());
    const double scale = 1.0 / real_size_;
    std::transform(rbuf_.begin(), rbuf_.end(), out.begin(), [scale](double x) { return x * scale; });
}

}  // namespace frontrelax
