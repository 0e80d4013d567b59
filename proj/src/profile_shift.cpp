#include "frontrelax/profile_shift.hpp"

#include "frontrelax/errors.hpp"

#include <cmath>
#include <numbers>

namespace frontrelax {

namespace {
double sech(double x) {
    const double e = std::exp(-std::abs(x));
    return 2.0 * e / (1.0 + e * e);
}
}  // namespace

ProfileShifter::ProfileShifter(const WaveProfile& profile) : ProfileShifter(profile, Eigen::MatrixXd()) {}

ProfileShifter::ProfileShifter(const WaveProfile& profile, const Eigen::MatrixXd& generator)
    : m_(profile.components()),
      n_(profile.size()),
      padded_(2 * profile.size()),
      h_(profile.grid.spacing()),
      z0_(profile.grid.node(0)),
      width_(std::min(1.0, 1.0 / profile.tail_rate)),
      phi_(profile.phi),
      fft_({2 * profile.size()}, profile.components()) {
    if (!(profile.tail_rate > 0.0)) throw InputError("ProfileShifter: profile tail rate must be positive");
    const bool from_generator = generator.size() > 0;
    if (from_generator && (generator.rows() != m_ || generator.cols() != n_)) {
        throw InputError("ProfileShifter: generator shape mismatch");
    }
    jump_ = 0.5 * (profile.phi.col(0) - profile.phi.col(n_ - 1));
    mid_ = 0.5 * (profile.phi.col(0) + profile.phi.col(n_ - 1));

    // Remainder (or its derivative) on the grid, continued by exponential tails to the padded period.
    const double rate = profile.tail_rate;
    auto pad = [&](const Eigen::MatrixXd& src, std::vector<double>& out) {
        out.assign(static_cast<std::size_t>(padded_) * m_, 0.0);
        for (int k = 0; k < m_; ++k) {
            double* gk = out.data() + static_cast<std::size_t>(k) * padded_;
            for (int i = 0; i < n_; ++i) gk[i] = src(k, i);
            const double right = gk[n_ - 1];
            const double left = gk[0];
            for (int j = n_; j < padded_; ++j) {
                const double sr = (j - n_ + 1) * h_;
                const double sl = (padded_ - j) * h_;
                gk[j] = right * std::exp(-rate * sr) + left * std::exp(-rate * sl);
            }
        }
    };
    const int nh = padded_ / 2 + 1;
    const double period = padded_ * h_;
    wavenumbers_.resize(nh);
    for (int q = 0; q < nh; ++q) wavenumbers_[q] = 2.0 * std::numbers::pi * q / period;
    ghat_.resize(static_cast<std::size_t>(nh) * m_);

    std::vector<double> g;
    if (!from_generator) {
        pad(phi_ - step_part(0.0, 0), g);
        fft_.forward(g, ghat_);
    } else {
        // Scale the generator per component so the derivative remainder has zero mean, then integrate
        // in Fourier space. The lost constant is irrelevant: only differences and derivatives are used.
        std::vector<double> a, b;
        pad(generator, a);
        pad(step_part(0.0, 1), b);
        for (int k = 0; k < m_; ++k) {
            const std::size_t off = static_cast<std::size_t>(k) * padded_;
            double sa = 0.0, sb = 0.0;
            for (int j = 0; j < padded_; ++j) {
                sa += a[off + j];
                sb += b[off + j];
            }
            const double scale = sa != 0.0 ? sb / sa : 1.0;
            for (int j = 0; j < padded_; ++j) a[off + j] = scale * a[off + j] - b[off + j];
        }
        fft_.forward(a, ghat_);
        for (int k = 0; k < m_; ++k) {
            for (int q = 0; q < nh; ++q) {
                cplx& c = ghat_[static_cast<std::size_t>(k) * nh + q];
                c = (q == 0 || q == nh - 1) ? cplx(0.0) : c / cplx(0.0, wavenumbers_[q]);
            }
        }
    }
    work_hat_.resize(ghat_.size());
    work_real_.resize(static_cast<std::size_t>(padded_) * m_);
}

Eigen::MatrixXd ProfileShifter::step_part(double sigma, int order) const {
    // S(z) = mid - jump * tanh(z / width), evaluated at z - sigma.
    Eigen::MatrixXd out(m_, n_);
    const double inv = 1.0 / width_;
    for (int i = 0; i < n_; ++i) {
        const double z = z0_ + i * h_;
        const double t = std::tanh((z - sigma) * inv);
        double val = 0.0;
        if (order == 0) {
            for (int k = 0; k < m_; ++k) out(k, i) = mid_[k] - jump_[k] * t;
            continue;
        }
        const double sech2 = 1.0 - t * t;
        val = order == 1 ? -sech2 * inv : 2.0 * t * sech2 * inv * inv;
        for (int k = 0; k < m_; ++k) out(k, i) = jump_[k] * val;
    }
    return out;
}

Eigen::MatrixXd ProfileShifter::remainder_part(double sigma, int order, bool difference) const {
    const int nh = padded_ / 2 + 1;
    for (int k = 0; k < m_; ++k) {
        for (int q = 0; q < nh; ++q) {
            const double kq = wavenumbers_[q];
            const double arg = kq * sigma;
            cplx mult;
            if (difference) {
                // e^{-i k sigma} - 1 without cancellation
                const double s = std::sin(0.5 * arg);
                mult = cplx(-2.0 * s * s, -std::sin(arg));
            } else {
                mult = std::polar(1.0, -arg);
            }
            if (order == 1) mult *= cplx(0.0, kq);
            if (order == 2) mult *= -kq * kq;
            if (q == nh - 1) mult = order == 1 ? cplx(0.0) : cplx(mult.real(), 0.0);  // Nyquist bin
            const std::size_t idx = static_cast<std::size_t>(k) * nh + q;
            work_hat_[idx] = ghat_[idx] * mult;
        }
    }
    fft_.backward(work_hat_, work_real_);
    Eigen::MatrixXd out(m_, n_);
    for (int k = 0; k < m_; ++k) {
        for (int i = 0; i < n_; ++i) out(k, i) = work_real_[static_cast<std::size_t>(k) * padded_ + i];
    }
    return out;
}

Eigen::MatrixXd ProfileShifter::shift_difference(double sigma) const {
    if (sigma == 0.0) return Eigen::MatrixXd::Zero(m_, n_);
    // tanh(a) - tanh(b) = sinh(a - b) / (cosh a cosh b)
    Eigen::MatrixXd step(m_, n_);
    const double inv = 1.0 / width_;
    const double sh = std::sinh(sigma * inv);
    for (int i = 0; i < n_; ++i) {
        const double z = z0_ + i * h_;
        const double d = sh * sech(z * inv) * sech((z - sigma) * inv);
        for (int k = 0; k < m_; ++k) step(k, i) = jump_[k] * d;
    }
    return step + remainder_part(sigma, 0, true);
}

Eigen::MatrixXd ProfileShifter::shifted(double sigma, int order) const {
    if (order < 0 || order > 2) throw InputError("ProfileShifter::shifted: order must be 0, 1 or 2");
    if (order == 0) return phi_ + shift_difference(sigma);
    return step_part(sigma, order) + remainder_part(sigma, order, false);
}

}  // namespace frontrelax
