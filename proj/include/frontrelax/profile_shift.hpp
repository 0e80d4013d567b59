#pragma once

#include "frontrelax/fft.hpp"
#include "frontrelax/wave_profile.hpp"

#include <Eigen/Dense>

#include <vector>

namespace frontrelax {

/// Evaluates translates phi(z - sigma) of a discrete profile on its own grid nodes.
///
/// phi is split into a smooth tanh step S joining phi_- to phi_+ (translated in
/// closed form) plus a remainder g = phi - S that decays at both ends. g is padded
/// to twice the grid length with an exponential tail at the profile's tail rate and
/// translated by a Fourier phase factor. Differences phi(z - sigma) - phi(z) are
/// formed without subtracting nearly equal arrays, so they stay accurate for tiny sigma.
///
/// Holds FFT scratch: not safe to share between threads.
class ProfileShifter {
public:
    explicit ProfileShifter(const WaveProfile& profile);
    /// Translates along a supplied generator instead of the spectral derivative of phi: the family
    /// is phi + (Phi(. - sigma) - Phi) where Phi' is `generator` (m x N_z) rescaled so Phi joins
    /// phi_- to phi_+. Passing the null vector of the discrete L1 makes small translates consistent
    /// with the discrete dynamics.
    ProfileShifter(const WaveProfile& profile, const Eigen::MatrixXd& generator);

    /// phi(z - sigma) - phi(z) at the grid nodes, m x N_z.
    Eigen::MatrixXd shift_difference(double sigma) const;
    /// d^order/dz^order phi evaluated at z - sigma, order in {0, 1, 2}.
    Eigen::MatrixXd shifted(double sigma, int order) const;

    int components() const noexcept { return m_; }
    int size() const noexcept { return n_; }

private:
    Eigen::MatrixXd step_part(double sigma, int order) const;
    Eigen::MatrixXd remainder_part(double sigma, int order, bool difference) const;

    int m_;
    int n_;
    int padded_;
    double h_;
    double z0_;
    double width_;
    Eigen::VectorXd jump_;  // (phi_- - phi_+) / 2
    Eigen::VectorXd mid_;   // (phi_- + phi_+) / 2
    Eigen::MatrixXd phi_;
    RealFFT fft_;
    std::vector<cplx> ghat_;    // m blocks of padded_/2 + 1
    std::vector<double> wavenumbers_;
    mutable std::vector<cplx> work_hat_;
    mutable std::vector<double> work_real_;
};

}  // namespace frontrelax
