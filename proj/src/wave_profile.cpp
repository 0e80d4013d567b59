#include "frontrelax/wave_profile.hpp"

#include "frontrelax/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace frontrelax {

namespace {

struct PhaseStencil {
    int first = 0;           // leftmost node used
    double weights[4] = {};  // Lagrange weights at first..first+3
};

// Cubic Lagrange interpolation to z = 0.
PhaseStencil phase_stencil(const Grid1D& grid) {
    const int n = grid.size();
    const double h = grid.spacing();
    int j = static_cast<int>(std::floor(grid.half_length() / h));  // z_j <= 0 < z_{j+1}
    j = std::clamp(j, 1, n - 3);
    PhaseStencil s;
    s.first = j - 1;
    for (int a = 0; a < 4; ++a) {
        double w = 1.0;
        const double za = grid.node(s.first + a);
        for (int b = 0; b < 4; ++b) {
            if (b == a) continue;
            const double zb = grid.node(s.first + b);
            w *= (0.0 - zb) / (za - zb);
        }
        s.weights[a] = w;
    }
    return s;
}

// Residual of the discrete profile equation at interior nodes, stacked i*m + k.
Eigen::VectorXd interior_residual(const ReactionModel& model, const Eigen::MatrixXd& phi, double c,
                                  double h) {
    const int m = static_cast<int>(phi.rows());
    const int n = static_cast<int>(phi.cols());
    Eigen::VectorXd r((n - 2) * m);
    const double ih2 = 1.0 / (h * h);
    const double i2h = 0.5 / h;
    for (int i = 1; i < n - 1; ++i) {
        const State fi = model.eval(phi.col(i));
        for (int k = 0; k < m; ++k) {
            r[(i - 1) * m + k] = (phi(k, i + 1) - 2.0 * phi(k, i) + phi(k, i - 1)) * ih2 +
                                 c * (phi(k, i + 1) - phi(k, i - 1)) * i2h + fi[k];
        }
    }
    return r;
}

void check_guess(const ReactionModel& model, const ProfileGuess& guess, const Grid1D& grid) {
    const int m = model.components();
    if (guess.phi.rows() != m || guess.phi.cols() != grid.size()) {
        throw InputError("solve_profile: guess must be m x N_z");
    }
    const State diff = model.phi_minus() - model.phi_plus();
    const double scale = std::max(diff.cwiseAbs().maxCoeff(), 1e-300);
    const double end_tol = 0.05 * scale;
    if ((guess.phi.col(0) - model.phi_minus()).cwiseAbs().maxCoeff() > end_tol ||
        (guess.phi.col(grid.size() - 1) - model.phi_plus()).cwiseAbs().maxCoeff() > end_tol) {
        throw InputError("solve_profile: initial guess does not connect phi_- to phi_+");
    }
    for (int k = 0; k < m; ++k) {
        if (std::abs(diff[k]) < 1e-12 * scale) continue;
        const double sgn = diff[k] > 0 ? -1.0 : 1.0;  // direction of travel from phi_- to phi_+
        bool monotone = true;
        for (int i = 1; i < grid.size() && monotone; ++i) {
            monotone = sgn * (guess.phi(k, i) - guess.phi(k, i - 1)) >= -1e-12 * scale;
        }
        if (monotone) return;
    }
    throw InputError("solve_profile: initial guess is not monotone in any component");
}

}  // namespace

double tail_rate(const ReactionModel& model, double speed) {
    const int m = model.components();
    auto rates = [&](const State& u, bool left) {
        // (phi, phi')' = [[0, I], [-Df, -c I]] (phi, phi')
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * m, 2 * m);
        A.topRightCorner(m, m).setIdentity();
        A.bottomLeftCorner(m, m) = -model.jacobian(u);
        A.bottomRightCorner(m, m) = -speed * Eigen::MatrixXd::Identity(m, m);
        const Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(A, false).eigenvalues();
        double best = std::numeric_limits<double>::infinity();
        for (const auto& mu : ev) {
            // Decay toward -inf needs Re mu > 0, toward +inf needs Re mu < 0.
            const double r = left ? mu.real() : -mu.real();
            if (r > 1e-12) best = std::min(best, r);
        }
        return best;
    };
    const double v = std::min(rates(model.phi_minus(), true), rates(model.phi_plus(), false));
    if (!std::isfinite(v)) throw AssumptionViolation("tail_rate: equilibria are not hyperbolic");
    return v;
}

void finite_difference_derivatives(WaveProfile& p) {
    const int m = p.components();
    const int n = p.size();
    const double h = p.grid.spacing();
    p.phi_prime.resize(m, n);
    p.phi_double_prime.resize(m, n);
    for (int k = 0; k < m; ++k) {
        const auto u = p.phi.row(k);
        for (int i = 1; i < n - 1; ++i) {
            p.phi_prime(k, i) = (u[i + 1] - u[i - 1]) / (2.0 * h);
            p.phi_double_prime(k, i) = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h);
        }
        p.phi_prime(k, 0) = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
        p.phi_prime(k, n - 1) = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * h);
        p.phi_double_prime(k, 0) = (2.0 * u[0] - 5.0 * u[1] + 4.0 * u[2] - u[3]) / (h * h);
        p.phi_double_prime(k, n - 1) =
            (2.0 * u[n - 1] - 5.0 * u[n - 2] + 4.0 * u[n - 3] - u[n - 4]) / (h * h);
    }
}

WaveProfile solve_profile(const ReactionModel& model, const Grid1D& grid, const ProfileGuess& guess,
                          const ProfileSolverOptions& opts) {
    check_guess(model, guess, grid);
    const int m = model.components();
    const int n = grid.size();
    const double h = grid.spacing();
    const int ni = (n - 2) * m;
    const PhaseStencil ps = phase_stencil(grid);
    const double phase_target = 0.5 * (model.phi_minus()[0] + model.phi_plus()[0]);

    Eigen::MatrixXd phi = guess.phi;
    phi.col(0) = model.phi_minus();
    phi.col(n - 1) = model.phi_plus();
    double c = guess.speed;

    auto full_residual = [&](const Eigen::MatrixXd& u, double speed) {
        Eigen::VectorXd r(ni + 1);
        r.head(ni) = interior_residual(model, u, speed, h);
        double v = -phase_target;
        for (int a = 0; a < 4; ++a) v += ps.weights[a] * u(0, ps.first + a);
        r[ni] = v;
        return r;
    };

    const double ih2 = 1.0 / (h * h);
    const double i2h = 0.5 / h;
    Eigen::VectorXd r = full_residual(phi, c);
    double rnorm = r.cwiseAbs().maxCoeff();
    int iter = 0;
    int polish = 0;
    while (true) {
        if (rnorm <= opts.tol) {
            if (polish >= opts.polish_steps) break;
            ++polish;
        } else if (iter >= opts.max_iter) {
            throw NoConvergenceError("solve_profile: Newton did not converge", rnorm);
        }
        ++iter;

        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(static_cast<std::size_t>(ni) * (m + 3) + 8);
        for (int i = 1; i < n - 1; ++i) {
            const Eigen::MatrixXd J = model.jacobian(phi.col(i));
            const int row0 = (i - 1) * m;
            for (int k = 0; k < m; ++k) {
                const int row = row0 + k;
                for (int l = 0; l < m; ++l) trip.emplace_back(row, row0 + l, J(k, l));
                trip.emplace_back(row, row, -2.0 * ih2);
                if (i > 1) trip.emplace_back(row, row - m, ih2 - c * i2h);
                if (i < n - 2) trip.emplace_back(row, row + m, ih2 + c * i2h);
                trip.emplace_back(row, ni, (phi(k, i + 1) - phi(k, i - 1)) * i2h);
            }
        }
        for (int a = 0; a < 4; ++a) {
            const int node = ps.first + a;
            if (node >= 1 && node <= n - 2) trip.emplace_back(ni, (node - 1) * m, ps.weights[a]);
        }
        Eigen::SparseMatrix<double> A(ni + 1, ni + 1);
        A.setFromTriplets(trip.begin(), trip.end());
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(A);
        if (lu.info() != Eigen::Success) {
            throw NoConvergenceError("solve_profile: singular Newton Jacobian", rnorm);
        }
        const Eigen::VectorXd dx = lu.solve(-r);

        // Backtracking keeps the first iterations from overshooting on rough guesses.
        double lambda = 1.0;
        Eigen::MatrixXd trial = phi;
        double trial_c = c;
        Eigen::VectorXd trial_r;
        double trial_norm = 0.0;
        for (int halvings = 0; halvings < 12; ++halvings) {
            trial = phi;
            for (int i = 1; i < n - 1; ++i) {
                for (int k = 0; k < m; ++k) trial(k, i) += lambda * dx[(i - 1) * m + k];
            }
            trial_c = c + lambda * dx[ni];
            trial_r = full_residual(trial, trial_c);
            trial_norm = trial_r.cwiseAbs().maxCoeff();
            if (trial_norm < rnorm || rnorm <= opts.tol || trial_norm < 1e-14) break;
            lambda *= 0.5;
        }
        if (rnorm <= opts.tol && trial_norm >= rnorm) break;  // polishing stalled at round-off
        phi = std::move(trial);
        c = trial_c;
        r = std::move(trial_r);
        rnorm = trial_norm;
    }

    WaveProfile p{grid, phi, {}, {}, c, 0.0, rnorm, iter};
    finite_difference_derivatives(p);
    p.tail_rate = tail_rate(model, c);
    p.residual = profile_residual(p, model);
    return p;
}

double profile_residual(const WaveProfile& profile, const ReactionModel& model) {
    if (profile.components() != model.components() || profile.size() != profile.grid.size()) {
        throw InputError("profile_residual: profile dimensions do not match model/grid");
    }
    return interior_residual(model, profile.phi, profile.speed, profile.grid.spacing())
        .cwiseAbs()
        .maxCoeff();
}

WaveProfile exact_bistable_profile(double a, const Grid1D& grid) {
    if (!(a > 0.0 && a < 0.5)) throw InputError("exact_bistable_profile: a must lie in (0, 1/2)");
    const BistableFront front{a};
    const int n = grid.size();
    WaveProfile p{grid, Eigen::MatrixXd(1, n), Eigen::MatrixXd(1, n), Eigen::MatrixXd(1, n),
                  front.speed(), 0.0, 0.0, 0};
    for (int i = 0; i < n; ++i) {
        const double z = grid.node(i);
        p.phi(0, i) = front.phi(z);
        p.phi_prime(0, i) = front.phi_prime(z);
        p.phi_double_prime(0, i) = front.phi_double_prime(z);
    }
    const ReactionModel model = ReactionModel::bistable(a);
    p.tail_rate = tail_rate(model, p.speed);
    p.residual = profile_residual(p, model);
    return p;
}

ProfileGuess logistic_guess(const ReactionModel& model, const Grid1D& grid, double width,
                            double speed) {
    if (!(width > 0.0)) throw InputError("logistic_guess: width must be positive");
    ProfileGuess g{Eigen::MatrixXd(model.components(), grid.size()), speed};
    for (int i = 0; i < grid.size(); ++i) {
        const double x = grid.node(i) / width;
        const double s = x > 0 ? std::exp(-x) / (1.0 + std::exp(-x)) : 1.0 / (1.0 + std::exp(x));
        g.phi.col(i) = model.phi_plus() + s * (model.phi_minus() - model.phi_plus());
    }
    g.phi.col(0) = model.phi_minus();
    g.phi.col(grid.size() - 1) = model.phi_plus();
    return g;
}

double extrapolated_speed(const ReactionModel& model, const Grid1D& grid, const ProfileGuess& guess,
                          const ProfileSolverOptions& opts) {
    const WaveProfile coarse = solve_profile(model, grid, guess, opts);
    const Grid1D fine_grid(grid.half_length(), 2 * grid.size() - 1);
    ProfileGuess fine{Eigen::MatrixXd(model.components(), fine_grid.size()), coarse.speed};
    for (int i = 0; i < grid.size(); ++i) {
        fine.phi.col(2 * i) = coarse.phi.col(i);
        if (i + 1 < grid.size()) fine.phi.col(2 * i + 1) = 0.5 * (coarse.phi.col(i) + coarse.phi.col(i + 1));
    }
    const WaveProfile refined = solve_profile(model, fine_grid, fine, opts);
    return (4.0 * refined.speed - coarse.speed) / 3.0;
}

void write_profile_csv(std::ostream& os, const WaveProfile& p) {
    const int m = p.components();
    os << "z";
    for (int k = 0; k < m; ++k) os << ",phi_" << k;
    for (int k = 0; k < m; ++k) os << ",phi_prime_" << k;
    for (int k = 0; k < m; ++k) os << ",phi_double_prime_" << k;
    os << '\n' << std::setprecision(17);
    for (int i = 0; i < p.size(); ++i) {
        os << p.grid.node(i);
        for (int k = 0; k < m; ++k) os << ',' << p.phi(k, i);
        for (int k = 0; k < m; ++k) os << ',' << p.phi_prime(k, i);
        for (int k = 0; k < m; ++k) os << ',' << p.phi_double_prime(k, i);
        os << '\n';
    }
}

}  // namespace frontrelax
