#pragma once

#include "frontrelax/field.hpp"
#include "frontrelax/profile_shift.hpp"
#include "frontrelax/reaction_model.hpp"
#include "frontrelax/spectral_1d.hpp"

namespace frontrelax {

/// Terms of the modulation system for u = phi_sigma + v, phi_sigma(z) = phi(z - sigma(y)):
///   v_t     = L1 v + Delta_y v + H + N1
///   sigma_t = Delta_y sigma + N2
/// with
///   H  = f(phi_sigma + v) - f(phi_sigma) - Df(phi_sigma) v
///   N2 = K1 |grad sigma|^2 - K2 <psi, H + (Df(phi_sigma) - Df(phi)) v>
///   N1 = N2 phi'_sigma + (Df(phi_sigma) - Df(phi)) v + |grad sigma|^2 phi''_sigma
///   K1 = -<psi, phi''_sigma> / <psi, phi'_sigma>,  K2 = 1 / <psi, phi'_sigma>.
/// The minus sign on the K2 term is what the psi-projection of the equation gives; with it
/// <psi, H + N1> = 0 identically, so v stays in the range of Q0.
struct Nonlinearities {
    Field H;
    Field N1;
    TransverseField N2;
    TransverseField K1;
    TransverseField K2;
};

Nonlinearities eval_nonlinearities(const WaveProfile& profile, const SpectralData1D& spec, const ReactionModel& model,
                                   const ProfileShifter& shifter, const TransverseField& sigma, const Field& v,
                                   double min_denominator = 0.5);

}  // namespace frontrelax
