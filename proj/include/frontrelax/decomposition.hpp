#pragma once

#include "frontrelax/field.hpp"
#include "frontrelax/profile_shift.hpp"
#include "frontrelax/spectral_1d.hpp"
#include "frontrelax/wave_profile.hpp"

#include <vector>

namespace frontrelax {

struct DecompositionOptions {
    double tol = 1e-12;
    int max_iter = 25;
    /// Newton steps taken after |g| <= tol, each kept only if it lowers |g|. Pushes the
    /// orthogonality residual to round-off so tiny radiation is not swamped by the tolerance.
    int polish_steps = 2;
    /// Inputs with ||w||_{L^inf_y H^1_z} at or above this are rejected.
    double admissibility = 0.1;
    /// Smallest accepted <psi, phi'_sigma>.
    double min_denominator = 0.5;
};

struct DecompositionResult {
    TransverseField sigma;
    Field v;
    std::vector<int> newton_iters;
    double max_residual = 0.0;  ///< max_y |<psi, v(., y)>|
    double input_norm = 0.0;    ///< ||w||_{L^inf_y H^1_z}
};

/// phi(z) + w(z, y) = phi(z - sigma(y)) + v(z, y) with <psi, v(., y)> = 0, column by column.
/// Newton on g(s) = <psi, w - (phi(. - s) - phi)> with g'(s) = <psi, phi'(. - s)>, started at 0,
/// with step halving whenever |g| grows.
DecompositionResult decompose(const WaveProfile& profile, const SpectralData1D& spec, const ProfileShifter& shifter,
                              const Field& w, const DecompositionOptions& opts = {});

/// phi(z - sigma(y)) + v(z, y) - phi(z).
Field recompose(const ProfileShifter& shifter, const TransverseField& sigma, const Field& v);

}  // namespace frontrelax
