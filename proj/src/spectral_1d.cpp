#include "frontrelax/spectral_1d.hpp"

#include "frontrelax/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace frontrelax {

namespace {

using SparseMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

void check_slice(const Eigen::MatrixXd& g, int m, int n, const char* what) {
    if (g.rows() != m || g.cols() != n) {
        std::ostringstream os;
        os << what << ": slice must be " << m << " x " << n << ", got " << g.rows() << " x " << g.cols();
        throw InputError(os.str());
    }
}

}  // namespace

DiscreteOperator1D::DiscreteOperator1D(const WaveProfile& profile, const ReactionModel& model)
    : grid_(profile.grid), m_(model.components()), c_(profile.speed) {
    if (profile.components() != m_ || profile.size() != grid_.size()) {
        throw InputError("assemble_L1: profile does not match model");
    }
    const int n = grid_.size();
    const double h = grid_.spacing();
    potential_.reserve(n);
    for (int i = 0; i < n; ++i) potential_.push_back(model.jacobian(profile.phi.col(i)));

    const int ni = interior_size();
    const double ih2 = 1.0 / (h * h);
    const double i2h = 0.5 / h;
    std::vector<Triplet> trip;
    trip.reserve(static_cast<std::size_t>(ni) * (m_ + 2));
    for (int i = 1; i < n - 1; ++i) {
        const int row0 = (i - 1) * m_;
        for (int k = 0; k < m_; ++k) {
            const int row = row0 + k;
            for (int l = 0; l < m_; ++l) {
                const double v = potential_[i](k, l) + (k == l ? -2.0 * ih2 : 0.0);
                if (v != 0.0 || k == l) trip.emplace_back(row, row0 + l, v);
            }
            if (i > 1) trip.emplace_back(row, row - m_, ih2 - c_ * i2h);
            if (i < n - 2) trip.emplace_back(row, row + m_, ih2 + c_ * i2h);
        }
    }
    a_.resize(ni, ni);
    a_.setFromTriplets(trip.begin(), trip.end());
    a_.makeCompressed();

    // Fredholm border: Re(-k^2 + i c k + mu) is maximal at k = 0 for identity diffusion.
    auto edge = [](const Eigen::MatrixXd& J) {
        return Eigen::EigenSolver<Eigen::MatrixXd>(J, false).eigenvalues().real().maxCoeff();
    };
    essential_edge_ = std::max(edge(model.jacobian(model.phi_minus())), edge(model.jacobian(model.phi_plus())));
}

Eigen::MatrixXd DiscreteOperator1D::apply(const Eigen::MatrixXd& g) const {
    const int n = grid_.size();
    check_slice(g, m_, n, "DiscreteOperator1D::apply");
    const double h = grid_.spacing();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m_, n);
    for (int i = 1; i < n - 1; ++i) {
        out.col(i) = (g.col(i + 1) - 2.0 * g.col(i) + g.col(i - 1)) / (h * h) +
                     c_ * (g.col(i + 1) - g.col(i - 1)) / (2.0 * h) + potential_[i] * g.col(i);
    }
    return out;
}

Eigen::VectorXd DiscreteOperator1D::to_interior(const Eigen::MatrixXd& slice) const {
    const int n = grid_.size();
    check_slice(slice, m_, n, "to_interior");
    Eigen::VectorXd x(interior_size());
    for (int i = 1; i < n - 1; ++i) x.segment((i - 1) * m_, m_) = slice.col(i);
    return x;
}

Eigen::MatrixXd DiscreteOperator1D::from_interior(const Eigen::VectorXd& x) const {
    const int n = grid_.size();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m_, n);
    for (int i = 1; i < n - 1; ++i) out.col(i) = x.segment((i - 1) * m_, m_);
    return out;
}

double slice_inner(const Grid1D& grid, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.rows() != b.rows() || a.cols() != grid.size() || b.cols() != grid.size()) {
        throw InputError("slice_inner: shape mismatch");
    }
    const int n = grid.size();
    double s = 0.5 * (a.col(0).dot(b.col(0)) + a.col(n - 1).dot(b.col(n - 1)));
    for (int i = 1; i < n - 1; ++i) s += a.col(i).dot(b.col(i));
    return s * grid.spacing();
}

double slice_h1_norm(const Grid1D& grid, const Eigen::MatrixXd& g) {
    const double h = grid.spacing();
    double s = slice_inner(grid, g, g);
    double d = 0.0;
    for (int i = 0; i + 1 < g.cols(); ++i) d += (g.col(i + 1) - g.col(i)).squaredNorm();
    return std::sqrt(s + d / h);
}

SpectralData1D compute_adjoint_zero_mode(const DiscreteOperator1D& op, const WaveProfile& profile,
                                         const SpectralOptions& opts) {
    const int m = op.components();
    const int n = op.grid().size();
    const int ni = op.interior_size();
    const double h = op.grid().spacing();
    check_slice(profile.phi_prime, m, n, "compute_adjoint_zero_mode");

    SpectralData1D out;
    out.phi_prime = profile.phi_prime;
    out.essential_edge = op.essential_edge();
    const Eigen::VectorXd dphi = op.to_interior(profile.phi_prime);

    if (opts.compute_spectrum) {
        const Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(op.dense(), false).eigenvalues();
        out.eigenvalues.assign(ev.data(), ev.data() + ev.size());
        std::sort(out.eigenvalues.begin(), out.eigenvalues.end(),
                  [](auto x, auto y) { return x.real() > y.real() || (x.real() == y.real() && x.imag() > y.imag()); });
        double rightmost = -std::numeric_limits<double>::infinity();
        for (const auto& lam : out.eigenvalues) {
            if (std::abs(lam) <= opts.zero_tol) {
                out.near_zero.push_back(lam);
            } else {
                rightmost = std::max(rightmost, lam.real());
            }
        }
        out.rightmost_nonzero = rightmost;
        if (out.near_zero.size() != 1) {
            std::ostringstream os;
            os << "zero eigenvalue of L1 has multiplicity " << out.near_zero.size() << " (tolerance "
               << opts.zero_tol << ")";
            throw AssumptionViolation(os.str());
        }
        out.zero_eigenvalue = out.near_zero.front();
        out.gap = -std::max(out.essential_edge, rightmost);
        if (!(out.gap > 0.0)) throw AssumptionViolation("L1 has spectrum in the closed right half-plane");
    } else {
        out.gap = -out.essential_edge;
    }

    // Bordered adjoint system.
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(op.matrix().nonZeros() + 2 * ni);
    const Eigen::SparseMatrix<double> at = op.matrix().transpose();
    for (int k = 0; k < at.outerSize(); ++k) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(at, k); it; ++it) {
            trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
        }
    }
    for (int i = 0; i < ni; ++i) {
        trip.emplace_back(i, ni, dphi[i]);
        trip.emplace_back(ni, i, h * dphi[i]);
    }
    Eigen::SparseMatrix<double> B(ni + 1, ni + 1);
    B.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(B);
    if (lu.info() != Eigen::Success) throw AssumptionViolation("adjoint bordered system is singular");
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ni + 1);
    rhs[ni] = 1.0;
    Eigen::VectorXd sol = lu.solve(rhs);
    // One refinement step against round-off in the factorization.
    sol += lu.solve(rhs - B * sol);
    const Eigen::VectorXd psi = sol.head(ni);
    out.psi = op.from_interior(psi);

    // Translation mode of the assembled matrix: [A, dphi; h psi^T, 0] (x, mu) = (0, 1).
    // It differs from the finite-difference phi' at O(h^2); using it keeps P0 and L1 commuting exactly.
    trip.clear();
    const Eigen::SparseMatrix<double>& a = op.matrix();
    for (int k = 0; k < a.outerSize(); ++k) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(a, k); it; ++it) {
            trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
        }
    }
    for (int i = 0; i < ni; ++i) {
        trip.emplace_back(i, ni, dphi[i]);
        trip.emplace_back(ni, i, h * psi[i]);
    }
    B.setFromTriplets(trip.begin(), trip.end());
    lu.compute(B);
    if (lu.info() != Eigen::Success) throw AssumptionViolation("kernel bordered system is singular");
    sol = lu.solve(rhs);
    sol += lu.solve(rhs - B * sol);
    out.phi_prime = op.from_interior(sol.head(ni));
    out.kernel_residual = (a * sol.head(ni)).cwiseAbs().maxCoeff() / sol.head(ni).cwiseAbs().maxCoeff();
    out.normalization = slice_inner(op.grid(), out.psi, out.phi_prime);
    const Eigen::VectorXd res = at * psi;
    out.adjoint_residual = res.cwiseAbs().maxCoeff() / psi.cwiseAbs().maxCoeff();
    return out;
}

Eigen::MatrixXd project_P0(const SpectralData1D& spec, const Eigen::MatrixXd& g, const Grid1D& grid) {
    check_slice(g, static_cast<int>(spec.psi.rows()), grid.size(), "project_P0");
    return slice_inner(grid, spec.psi, g) * spec.phi_prime;
}

Eigen::MatrixXd project_Q0(const SpectralData1D& spec, const Eigen::MatrixXd& g, const Grid1D& grid) {
    return g - project_P0(spec, g, grid);
}

Eigen::MatrixXd apply_semigroup_L1(const DiscreteOperator1D& op, double s, const Eigen::MatrixXd& g,
                                   const SemigroupOptions& opts) {
    if (s < 0.0) throw InputError("apply_semigroup_L1: s must be non-negative");
    Eigen::VectorXd x0 = op.to_interior(g);
    if (s == 0.0) return op.from_interior(x0);

    const int steps = std::max(1, static_cast<int>(std::ceil(s / opts.dt_max)));
    auto march = [&](int count) {
        const double dt = s / count;
        SparseMat I(op.interior_size(), op.interior_size());
        I.setIdentity();
        const SparseMat M = I - dt * op.matrix();
        Eigen::SparseLU<SparseMat> lu(M);
        if (lu.info() != Eigen::Success) throw SingularityError("apply_semigroup_L1: factorization failed");
        Eigen::VectorXd x = x0;
        for (int k = 0; k < count; ++k) x = lu.solve(x);
        return x;
    };
    const Eigen::VectorXd coarse = march(steps);
    const Eigen::VectorXd fine = march(2 * steps);
    return op.from_interior(2.0 * fine - coarse);
}

Eigen::MatrixXd solve_L1_inverse_Q0(const DiscreteOperator1D& op, const SpectralData1D& spec,
                                    const Eigen::MatrixXd& g) {
    const Grid1D& grid = op.grid();
    const int ni = op.interior_size();
    const double h = grid.spacing();
    const Eigen::VectorXd q = op.to_interior(project_Q0(spec, g, grid));
    const Eigen::VectorXd dphi = op.to_interior(spec.phi_prime);
    const Eigen::VectorXd psi = op.to_interior(spec.psi);

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(op.matrix().nonZeros() + 2 * ni);
    const SparseMat& A = op.matrix();
    for (int k = 0; k < A.outerSize(); ++k) {
        for (SparseMat::InnerIterator it(A, k); it; ++it) {
            trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
        }
    }
    for (int i = 0; i < ni; ++i) {
        trip.emplace_back(i, ni, dphi[i]);
        trip.emplace_back(ni, i, h * psi[i]);
    }
    SparseMat B(ni + 1, ni + 1);
    B.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<SparseMat> lu(B);
    if (lu.info() != Eigen::Success) throw SingularityError("solve_L1_inverse_Q0: bordered system is singular");
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ni + 1);
    rhs.head(ni) = q;
    Eigen::VectorXd sol = lu.solve(rhs);
    sol += lu.solve(rhs - B * sol);
    if (!sol.allFinite()) throw SingularityError("solve_L1_inverse_Q0: non-finite solution");
    return op.from_interior(sol.head(ni));
}

ResolventSweep resolvent_norm_sup(const DiscreteOperator1D& op, double delta1,
                                  const std::vector<double>& mu_grid, double rcond_warn) {
    const int m = op.components();
    const int nz = op.grid().size() - 2;
    const int ni = op.interior_size();
    const double h = op.grid().spacing();

    // Orthonormal sine basis diagonalizes the Dirichlet second difference.
    Eigen::MatrixXd S(nz, nz);
    Eigen::VectorXd lam(nz);
    const double norm = std::sqrt(2.0 / (nz + 1));
    for (int j = 0; j < nz; ++j) {
        lam[j] = 1.0 + (2.0 - 2.0 * std::cos(std::numbers::pi * (j + 1) / (nz + 1))) / (h * h);
        for (int i = 0; i < nz; ++i) S(i, j) = norm * std::sin(std::numbers::pi * (i + 1) * (j + 1) / (nz + 1));
    }
    const Eigen::MatrixXd Wz = S * lam.cwiseSqrt().asDiagonal() * S.transpose();
    const Eigen::MatrixXd Wzi = S * lam.cwiseSqrt().cwiseInverse().asDiagonal() * S.transpose();
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(ni, ni);
    Eigen::MatrixXd Wi = Eigen::MatrixXd::Zero(ni, ni);
    for (int a = 0; a < nz; ++a) {
        for (int b = 0; b < nz; ++b) {
            for (int k = 0; k < m; ++k) {
                W(a * m + k, b * m + k) = Wz(a, b);
                Wi(a * m + k, b * m + k) = Wzi(a, b);
            }
        }
    }
    const Eigen::MatrixXcd A = op.dense().cast<std::complex<double>>();
    const Eigen::MatrixXcd Wc = W.cast<std::complex<double>>();
    const Eigen::MatrixXcd Wic = Wi.cast<std::complex<double>>();

    ResolventSweep out;
    for (double mu : mu_grid) {
        // A is real, so R(-mu) = conj R(mu) and both have the same singular values.
        const double mu_abs = std::abs(mu);
        Eigen::MatrixXcd shifted = A;
        shifted.diagonal().array() += std::complex<double>(delta1, mu_abs);
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(shifted);
        const double rc = lu.rcond();
        if (!(rc > rcond_warn)) {
            std::ostringstream os;
            os << "near-singular resolvent at mu = " << mu << " (rcond " << rc << ")";
            out.warnings.push_back(os.str());
        }
        const Eigen::MatrixXcd M = Wc * lu.solve(Wic);
        const double s = Eigen::BDCSVD<Eigen::MatrixXcd>(M).singularValues()[0];
        out.mu.push_back(mu);
        out.norm.push_back(s);
        out.rcond.push_back(rc);
        out.sup = std::max(out.sup, s);
    }
    return out;
}

}  // namespace frontrelax
