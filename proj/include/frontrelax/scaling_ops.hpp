#pragma once

#include "frontrelax/grid.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace frontrelax {

/// a(tau) = 1 - e^{-tau}, computed without cancellation.
double a_of_tau(double tau);

/// G(eta) = (4 pi)^{-d/2} e^{-|eta|^2 / 4} with d the transverse dimension.
TransverseField gaussian_G(const TransverseGrid& grid);

enum class LetaMethod { fourier, convolution };

/// e^{tau L_eta} f for L_eta = Delta + eta.grad / 2 + 1/2 on R^d, n = d + 1.
///
/// fourier:     g^(xi) = e^{-(n-2) tau/2} e^{-a |xi|^2} f^(e^{-tau/2} xi); the dilated transform is
///              an exact non-uniform DFT (separable in 2D) and the result is synthesized with an FFT.
/// convolution: g(eta) = e^{tau/2} a^{-d/2} int G((eta - eta') / sqrt a) f(e^{tau/2} eta') d eta',
///              evaluated after eta' -> e^{-tau/2} zeta so only grid values of f are needed.
/// Warnings (spectral content at the band edge) are appended to `warnings` when given.
TransverseField apply_semigroup_Leta(const TransverseGrid& grid, double tau, const TransverseField& f,
                                     LetaMethod method, std::vector<std::string>* warnings = nullptr);

/// Applies the semigroup to every row of a (rows x grid.size()) array, e.g. a field V(z, eta).
Eigen::MatrixXd apply_semigroup_Leta_rows(const TransverseGrid& grid, double tau, const Eigen::MatrixXd& rows,
                                          LetaMethod method = LetaMethod::convolution);

TransverseField project_P0_eta(const TransverseGrid& grid, const TransverseField& f);
TransverseField project_Q0_eta(const TransverseGrid& grid, const TransverseField& f);

struct WeightedNormSpec {
    double m = 3.0;
};

/// d/d eta_axis by FFT.
TransverseField spectral_derivative(const TransverseGrid& grid, const TransverseField& f, int axis);

/// (sum over |alpha| <= order of sum (1 + |eta|^2)^m |d^alpha f|^2 dV)^{1/2}.
double weighted_norm(const TransverseGrid& grid, const TransverseField& f, const WeightedNormSpec& spec,
                     int derivative_order = 0);

/// Bound tables: one row per tau.
struct BoundRow {
    double tau = 0.0;
    double measured = 0.0;
    double reference = 0.0;
    double ratio = 0.0;
};

struct BoundReport {
    std::string name;
    std::vector<BoundRow> rows;
    double sup_ratio = 0.0;
    /// Least-squares slope of log(ratio) against tau over the trailing half of the tau grid.
    double trend_slope = 0.0;
};

/// Slope used by every bound report. Ratios are floored at 1e-300 before the log.
double trailing_trend_slope(const std::vector<BoundRow>& rows);
void finalize_report(BoundReport& report);

enum class BoundKind {
    weighted_l2_projected,  ///< ||d^alpha e^{tau L} Q0 f||_{L2(m)} vs e^{-(n-1)tau/2} a^{-|alpha|/2} ||f||_{L2(m)}
    sup_general,            ///< ||d^alpha e^{tau L} f||_inf vs e^{-(n-2)tau/2} a^{-|alpha|/2} (||f||_inf + ||f||_{L2(m)})
    sup_projected,          ///< same with Q0 f and e^{-(n-1)tau/2}
};

/// Max ratio over the test fields at each tau. derivative_axis = -1 means alpha = 0.
BoundReport verify_semigroup_bound(const TransverseGrid& grid, const WeightedNormSpec& spec, BoundKind kind,
                                   int derivative_axis, const std::vector<double>& tau_grid,
                                   const std::vector<TransverseField>& test_fields,
                                   LetaMethod method = LetaMethod::fourier);

/// Largest violation of ||e^{tau L} f(z, .)||_{L^p_z} <= e^{tau L} ||f(z, .)||_{L^p_z} pointwise in eta,
/// relative to the max of the right side. p is 2 or infinity (pass p <= 0 for infinity).
/// `f` has one row per z node; z_spacing is used for the L^2_z trapezoid rule.
double pointwise_inequality_violation(const TransverseGrid& grid, double tau, const Eigen::MatrixXd& f,
                                      double z_spacing, double p);

/// Integral I(tau) = int_0^tau e^{b(tau-s)} e^{-delta(e^tau - e^s)} e^{-c s} ds by adaptive quadrature
/// after x = e^tau - e^s.
double integral_double_exponential(double b, double delta, double c, double tau);
/// J(tau) = int_0^tau e^{-d(tau-s)} ((tau-s)^{-1/2} + 1) e^{-c s} ds, singularity removed by u = r^2.
double integral_heat_kernel(double c, double d, double tau);

/// Ratios I e^{(c+1) tau} and J e^{min(c,d) tau} over the tau grid. c == d is rejected.
BoundReport check_double_exponential_bound(double b, double delta, double c, const std::vector<double>& tau_grid);
BoundReport check_heat_kernel_bound(double c, double d, const std::vector<double>& tau_grid);

}  // namespace frontrelax
