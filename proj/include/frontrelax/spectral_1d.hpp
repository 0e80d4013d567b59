#pragma once

#include "frontrelax/reaction_model.hpp"
#include "frontrelax/wave_profile.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <string>
#include <vector>

namespace frontrelax {

/// z-slices are m x N_z matrices over the full grid (boundary columns included).

/// L1 = d_zz + c d_z + Df(phi) with homogeneous Dirichlet conditions at z = +-L_z.
///
/// The sparse matrix acts on interior unknowns only, ordered i*m + k for interior
/// node i+1 and component k. With boundary values fixed at zero the trapezoid
/// inner product is h times the Euclidean one, so adjoints are plain transposes.
class DiscreteOperator1D {
public:
    DiscreteOperator1D(const WaveProfile& profile, const ReactionModel& model);

    const Grid1D& grid() const noexcept { return grid_; }
    int components() const noexcept { return m_; }
    int interior_size() const noexcept { return (grid_.size() - 2) * m_; }
    double speed() const noexcept { return c_; }
    const Eigen::SparseMatrix<double>& matrix() const noexcept { return a_; }
    Eigen::MatrixXd dense() const { return Eigen::MatrixXd(a_); }
    /// Right edge of the essential spectrum, max_pm max Re spec Df(phi_pm).
    double essential_edge() const noexcept { return essential_edge_; }

    /// Stencil applied to a full slice (boundary values of g are used); boundary rows return 0.
    Eigen::MatrixXd apply(const Eigen::MatrixXd& g) const;

    Eigen::VectorXd to_interior(const Eigen::MatrixXd& slice) const;
    Eigen::MatrixXd from_interior(const Eigen::VectorXd& x) const;

private:
    Grid1D grid_;
    int m_;
    double c_;
    std::vector<Eigen::MatrixXd> potential_;  // Df(phi(z_i)) for every node
    Eigen::SparseMatrix<double> a_;
    double essential_edge_ = 0.0;
};

struct SpectralOptions {
    double zero_tol = 1e-6;
    /// Dense eigenvalue computation; skip for large grids when only psi is needed.
    bool compute_spectrum = true;
};

struct SpectralData1D {
    Eigen::MatrixXd psi;        ///< adjoint zero mode, m x N_z, zero at the ends
    /// Translation mode used by P0: the null vector of the assembled L1 with <psi, phi_prime> = 1.
    /// Agrees with the finite-difference profile derivative to O(h^2).
    Eigen::MatrixXd phi_prime;
    double gap = 0.0;           ///< delta
    double essential_edge = 0.0;
    std::complex<double> zero_eigenvalue{0.0, 0.0};
    std::vector<std::complex<double>> eigenvalues;       ///< full discrete spectrum if computed
    std::vector<std::complex<double>> near_zero;         ///< eigenvalues with |lambda| <= zero_tol
    double normalization = 0.0;                          ///< <psi, phi'>
    double adjoint_residual = 0.0;                       ///< ||L1^T psi||_inf / ||psi||_inf
    double kernel_residual = 0.0;                        ///< ||L1 phi_prime||_inf / ||phi_prime||_inf
    double rightmost_nonzero = 0.0;                      ///< max Re over |lambda| > zero_tol
};

/// Trapezoid inner product of two slices summed over components.
double slice_inner(const Grid1D& grid, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);
/// Discrete H^1 norm: (||g||^2 + ||D_+ g||^2)^{1/2} with forward differences.
double slice_h1_norm(const Grid1D& grid, const Eigen::MatrixXd& g);

/// psi from the bordered system [L1^T, phi'; h phi'^T, 0], then the discrete translation mode
/// normalized so that <psi, phi_prime> = 1 exactly.
/// Spectral gap delta = -max(essential edge, Re of nonzero eigenvalues to its right).
SpectralData1D compute_adjoint_zero_mode(const DiscreteOperator1D& op, const WaveProfile& profile,
                                         const SpectralOptions& opts = {});

/// g - <psi, g> phi'.
Eigen::MatrixXd project_Q0(const SpectralData1D& spec, const Eigen::MatrixXd& g, const Grid1D& grid);
Eigen::MatrixXd project_P0(const SpectralData1D& spec, const Eigen::MatrixXd& g, const Grid1D& grid);

struct SemigroupOptions {
    double dt_max = 0.01;
};

/// e^{s L1} g by backward Euler with one Richardson extrapolation level (second order).
/// Boundary values of g are ignored (Dirichlet).
Eigen::MatrixXd apply_semigroup_L1(const DiscreteOperator1D& op, double s, const Eigen::MatrixXd& g,
                                   const SemigroupOptions& opts = {});

/// Unique h with L1 h = Q0 g and <psi, h> = 0.
Eigen::MatrixXd solve_L1_inverse_Q0(const DiscreteOperator1D& op, const SpectralData1D& spec,
                                    const Eigen::MatrixXd& g);

struct ResolventSweep {
    std::vector<double> mu;
    std::vector<double> norm;
    std::vector<double> rcond;
    double sup = 0.0;
    std::vector<std::string> warnings;
};

/// H^1 -> H^1 norm of (L1 + delta1 + i mu)^{-1} on each mu, as the top singular value of
/// W R W^{-1} with W = (1 - D2)^{1/2} from the discrete sine basis. Dense: keep N_z modest.
ResolventSweep resolvent_norm_sup(const DiscreteOperator1D& op, double delta1,
                                  const std::vector<double>& mu_grid, double rcond_warn = 1e-12);

}  // namespace frontrelax
