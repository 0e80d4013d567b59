#pragma once

#include "frontrelax/field.hpp"
#include "frontrelax/scaling_ops.hpp"
#include "frontrelax/spectral_1d.hpp"

#include <string>
#include <vector>

namespace frontrelax {

/// Matrix M with (M f)_i = trigonometric interpolant of the y-grid samples f evaluated at points[i].
/// One transverse axis only.
Eigen::MatrixXd trig_interpolation_matrix(const TransverseGrid& grid, const std::vector<double>& points);

struct ScalingState {
    double tau = 0.0;
    TransverseField Gamma;  ///< on the eta grid
    Field V;                ///< (z, eta)
};

/// tau = ln(1+t), Gamma(eta) = sqrt(1+t) sigma(eta sqrt(1+t)), V(z, eta) = (1+t) v(z, eta sqrt(1+t)),
/// resampled by band-limited interpolation from the y-grid onto the eta-grid.
/// Throws ValidityError if sqrt(1+t) > L_y / 6 or the dilated eta-grid leaves the y-torus.
ScalingState to_scaling_variables(double t, const TransverseField& sigma, const Field& v,
                                  const TransverseGrid& etagrid);

/// Inverse assignment onto the y-grid. Nodes with |y| beyond the dilated eta window are set to zero.
void from_scaling_variables(const ScalingState& s, const TransverseGrid& ygrid, TransverseField& sigma, Field& v);

/// Every component of the X-norm, stored without its exponential weight.
struct XNorms {
    double alpha_h1 = 0.0;             ///< ||alpha||_{H^1_z}
    double gamma_abs = 0.0;            ///< |gamma|
    double vtilde_weighted_h1 = 0.0;   ///< ||V~||_{L^2(m) H^1_z}
    double vtilde_sup_h1 = 0.0;        ///< ||V~||_{L^inf_eta H^1_z}
    double gammatilde_h1m = 0.0;       ///< ||Gamma~||_{H^1(m)}
    double gammatilde_sup = 0.0;       ///< ||Gamma~||_inf
    double grad_gammatilde_sup = 0.0;  ///< ||grad Gamma~||_inf
};

struct ScalingDecomposition {
    double tau = 0.0;
    double gamma = 0.0;
    Eigen::MatrixXd alpha;  ///< m x N_z
    TransverseField Gamma_tilde;
    Field V_tilde;
    double alpha_psi = 0.0;  ///< <psi, alpha>, zero when alpha is in the Q0 range
    XNorms norms;
};

/// gamma = <Gamma, 1>, Gamma~ = Gamma - gamma G, alpha = <V, 1>_eta, V~ = V - alpha G.
/// `spec` may be null, in which case alpha_psi is left at zero.
ScalingDecomposition scaling_decompose(const ScalingState& s, const SpectralData1D* spec,
                                       const WeightedNormSpec& weight = {});

/// The weighted X-norm entries e^{(n-1/2)tau}||alpha||, e^{(n-2)tau/2}|gamma|, e^{(n-1/2)tau}||V~|| (two norms)
/// and e^{(n-1)tau/2}||Gamma~|| (three norms), with their names.
std::vector<std::pair<std::string, double>> weighted_x_entries(const ScalingDecomposition& d, int n);
std::vector<std::pair<std::string, double>> weighted_x_entries(double tau, const XNorms& x, int n);

struct RateFit {
    double exponent = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
    double t_min = 0.0;
    double t_max = 0.0;
    int samples = 0;
};

/// Least squares of log(value) against log(1+t) over the samples with t in [t_min, t_max].
/// Needs at least 6 samples; non-positive values in the window are an InputError.
RateFit fit_decay_rate(const std::vector<double>& times, const std::vector<double>& values, double t_min,
                       double t_max);

/// ||sigma(t) - I (1+t)^{-(n-1)/2} G(./sqrt(1+t))||_inf with n = d + 1.
double sigma_profile_error(const TransverseGrid& ygrid, const TransverseField& sigma, double t, double integral);
/// max over axes of ||d_j sigma(t) - I (1+t)^{-n/2} (d_j G)(./sqrt(1+t))||_inf.
double grad_sigma_profile_error(const TransverseGrid& ygrid, const TransverseField& sigma, double t,
                                double integral);

/// ||v(t) + c0 e^{-|y|^2 / (2(t+1))} (t+1)^{-(n+1/2)} h||_inf with c0 = I^2 / (4 pi)^{n-1}
/// and h = L1^{-1} Q0[phi''] (m x N_z).
double v_profile_error(const Field& v, double t, double integral, const Eigen::MatrixXd& h);

/// ||v(t) + |grad sigma(t)|^2 h||_inf: the quasi-static balance L1 v = -Q0[|grad sigma|^2 phi''] evaluated
/// with the measured phase. Diagnostic companion of v_profile_error.
double v_quasistatic_error(const Field& v, const TransverseField& sigma, const Eigen::MatrixXd& h);

}  // namespace frontrelax
