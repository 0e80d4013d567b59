#pragma once

#include "frontrelax/grid.hpp"
#include "frontrelax/reaction_model.hpp"

#include <Eigen/Dense>

#include <iosfwd>

namespace frontrelax {

/// Discrete traveling front on a truncated z-grid. Arrays are m x N_z, column i at z_i.
/// The end columns are clamped to phi_- (left) and phi_+ (right).
struct WaveProfile {
    Grid1D grid{30.0, 1024};
    Eigen::MatrixXd phi;
    Eigen::MatrixXd phi_prime;
    Eigen::MatrixXd phi_double_prime;
    double speed = 0.0;
    double tail_rate = 0.0;
    double residual = 0.0;
    int newton_iterations = 0;

    int components() const noexcept { return static_cast<int>(phi.rows()); }
    int size() const noexcept { return static_cast<int>(phi.cols()); }
};

struct ProfileGuess {
    Eigen::MatrixXd phi;  ///< m x N_z
    double speed = 0.0;
};

struct ProfileSolverOptions {
    double tol = 1e-10;
    int max_iter = 50;
    /// Extra Newton steps after the tolerance is met, to push the residual to round-off.
    int polish_steps = 2;
};

/// Newton solve of phi'' + c phi' + f(phi) = 0 with c as an unknown and the gauge
/// phi_1(0) = (phi_-,1 + phi_+,1) / 2 (cubic interpolation when 0 is not a node).
WaveProfile solve_profile(const ReactionModel& model, const Grid1D& grid, const ProfileGuess& guess,
                          const ProfileSolverOptions& opts = {});

/// Max-norm of the centered-difference residual over interior nodes.
double profile_residual(const WaveProfile& profile, const ReactionModel& model);

/// Closed-form bistable front phi(z) = 1/(1 + e^{z/sqrt 2}), c = sqrt 2 (1/2 - a).
WaveProfile exact_bistable_profile(double a, const Grid1D& grid);

/// Smooth monotone connection phi_+ + (phi_- - phi_+) / (1 + e^{z/width}).
ProfileGuess logistic_guess(const ReactionModel& model, const Grid1D& grid, double width = 1.4142135623730951,
                            double speed = 0.0);

/// Smallest spatial decay rate of the linearization at phi_- (z -> -inf) and phi_+ (z -> +inf).
double tail_rate(const ReactionModel& model, double speed);

/// Second-order finite-difference phi' and phi'' (one-sided at the ends).
void finite_difference_derivatives(WaveProfile& profile);

/// Richardson-extrapolated speed from solves on N and 2N-1 nodes (same half-length).
double extrapolated_speed(const ReactionModel& model, const Grid1D& grid, const ProfileGuess& guess,
                          const ProfileSolverOptions& opts = {});

/// CSV block with columns z, phi_k, phi_prime_k, phi_double_prime_k.
void write_profile_csv(std::ostream& os, const WaveProfile& profile);

}  // namespace frontrelax
