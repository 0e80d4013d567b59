#include "frontrelax/spectral_1d.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace frontrelax;

namespace {

struct Setup {
    ReactionModel model = ReactionModel::bistable(0.25);
    Grid1D grid{20.0, 201};
    WaveProfile profile = solve_profile(model, grid, logistic_guess(model, grid));
    DiscreteOperator1D op{profile, model};
    SpectralData1D spec = compute_adjoint_zero_mode(op, profile);
};

const Setup& setup() {
    static const Setup s;
    return s;
}

Eigen::MatrixXd bump(const Grid1D& g, double center, double k) {
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(1, g.size());
    for (int i = 1; i < g.size() - 1; ++i) {
        const double z = g.node(i) - center;
        f(0, i) = std::exp(-z * z / 4.0) * std::cos(k * z);
    }
    return f;
}

}  // namespace

TEST_CASE("simple zero eigenvalue and spectral gap") {
    const auto& s = setup();
    CHECK(s.spec.near_zero.size() == 1);
    CHECK(s.spec.essential_edge == doctest::Approx(-0.25).epsilon(1e-12));
    CHECK(s.spec.gap > 0.0);
    CHECK(s.spec.gap <= 0.25);
    CHECK(s.spec.rightmost_nonzero <= -s.spec.gap + 1e-12);
    CHECK(std::abs(s.spec.normalization - 1.0) <= 1e-10);
    CHECK(s.spec.adjoint_residual <= 1e-8);
    CHECK(s.spec.kernel_residual <= 1e-8);
}

TEST_CASE("adjoint zero mode is e^{cz} phi' for the scalar front") {
    // L1^* = d_zz - c d_z + f'(phi) annihilates e^{cz} phi'.
    const auto& s = setup();
    const double c = s.profile.speed;
    Eigen::MatrixXd oracle(1, s.grid.size());
    for (int i = 0; i < s.grid.size(); ++i) oracle(0, i) = std::exp(c * s.grid.node(i)) * s.profile.phi_prime(0, i);
    oracle(0, 0) = oracle(0, s.grid.size() - 1) = 0.0;
    const double scale = s.spec.psi.cwiseAbs().maxCoeff() / oracle.cwiseAbs().maxCoeff();
    const double rel = (s.spec.psi - scale * oracle).cwiseAbs().maxCoeff() / s.spec.psi.cwiseAbs().maxCoeff();
    CHECK(rel < 5e-3);
}

TEST_CASE("translation mode is close to the profile derivative") {
    const auto& s = setup();
    const double diff = (s.spec.phi_prime - s.profile.phi_prime).cwiseAbs().maxCoeff();
    CHECK(diff < 0.05 * s.grid.spacing() * s.grid.spacing() + 1e-3);
}

TEST_CASE("property: projections") {
    const auto& s = setup();
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    for (int t = 0; t < 20; ++t) {
        const Eigen::MatrixXd g = bump(s.grid, U(rng), U(rng));
        const Eigen::MatrixXd q = project_Q0(s.spec, g, s.grid);
        const Eigen::MatrixXd p = project_P0(s.spec, g, s.grid);
        CHECK(std::abs(slice_inner(s.grid, s.spec.psi, q)) < 1e-13);
        CHECK((p + q - g).cwiseAbs().maxCoeff() < 1e-14);
        CHECK((project_Q0(s.spec, q, s.grid) - q).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("semigroup fixes the translation mode and decays on the Q0 range") {
    const auto& s = setup();
    const Eigen::MatrixXd k = apply_semigroup_L1(s.op, 3.0, s.spec.phi_prime);
    CHECK((k - s.spec.phi_prime).cwiseAbs().maxCoeff() < 1e-8);
    const Eigen::MatrixXd g = project_Q0(s.spec, bump(s.grid, 0.5, 1.0), s.grid);
    const double n0 = slice_h1_norm(s.grid, g);
    const double n1 = slice_h1_norm(s.grid, apply_semigroup_L1(s.op, 10.0, g));
    CHECK(n1 / n0 < std::exp(-0.5 * s.spec.gap * 10.0));
}

TEST_CASE("semigroup property e^{(s+r)L} = e^{sL} e^{rL}") {
    const auto& s = setup();
    const Eigen::MatrixXd g = bump(s.grid, -1.0, 0.7);
    const Eigen::MatrixXd a = apply_semigroup_L1(s.op, 1.0, g);
    const Eigen::MatrixXd b = apply_semigroup_L1(s.op, 0.4, apply_semigroup_L1(s.op, 0.6, g));
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-5 * g.cwiseAbs().maxCoeff());
}

TEST_CASE("inverse of L1 on the Q0 range") {
    const auto& s = setup();
    const Eigen::MatrixXd g = bump(s.grid, 1.0, 0.3);
    const Eigen::MatrixXd h = solve_L1_inverse_Q0(s.op, s.spec, g);
    CHECK(std::abs(slice_inner(s.grid, s.spec.psi, h)) < 1e-12);
    Eigen::MatrixXd lh = s.op.apply(h);
    Eigen::MatrixXd qg = project_Q0(s.spec, g, s.grid);
    lh(0, 0) = lh(0, s.grid.size() - 1) = qg(0, 0) = qg(0, s.grid.size() - 1) = 0.0;
    CHECK((lh - qg).cwiseAbs().maxCoeff() < 1e-8 * qg.cwiseAbs().maxCoeff());
}

TEST_CASE("resolvent norm decays like 1/|mu|") {
    const ReactionModel model = ReactionModel::bistable(0.25);
    const Grid1D grid(15.0, 121);
    const WaveProfile p = solve_profile(model, grid, logistic_guess(model, grid));
    const DiscreteOperator1D op(p, model);
    const ResolventSweep r = resolvent_norm_sup(op, 0.125, {-1000.0, -100.0, 0.0, 100.0, 1000.0});
    CHECK(std::isfinite(r.sup));
    CHECK(r.norm[4] * 1000.0 == doctest::Approx(r.norm[3] * 100.0).epsilon(0.15));
    CHECK(r.norm[0] == doctest::Approx(r.norm[4]).epsilon(0.05));
}
