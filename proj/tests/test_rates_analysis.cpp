#include "frontrelax/errors.hpp"
#include "frontrelax/rates_analysis.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace frontrelax;

namespace {

double G1(double eta) { return std::exp(-eta * eta / 4.0) / std::sqrt(4.0 * std::numbers::pi); }

}  // namespace

TEST_CASE("fit recovers an exact power law") {
    std::vector<double> t, v;
    for (double x = 10.0; x <= 2000.0; x *= 1.3) {
        t.push_back(x);
        v.push_back(3.0 * std::pow(1.0 + x, -0.7));
    }
    const RateFit f = fit_decay_rate(t, v, 50.0, 1000.0);
    CHECK(f.exponent == doctest::Approx(-0.7).epsilon(1e-12));
    CHECK(std::exp(f.intercept) == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(f.residual_rms < 1e-12);
    CHECK(f.samples >= 6);
    CHECK_THROWS_AS(fit_decay_rate(t, v, 50.0, 60.0), InputError);
    v[12] = 0.0;
    CHECK_THROWS_AS(fit_decay_rate(t, v, 10.0, 2000.0), InputError);
}

TEST_CASE("trigonometric interpolation is exact for band-limited data") {
    const TransverseGrid g(1, 5.0, 32);
    const double k = std::numbers::pi / 5.0;
    TransverseField f(g.size());
    for (int j = 0; j < g.size(); ++j) f[j] = 1.0 + std::cos(3 * k * g.node(j)) - 0.5 * std::sin(7 * k * g.node(j));
    const std::vector<double> pts{-4.9, -1.234, 0.0, 0.3, 2.71, 4.99};
    const Eigen::VectorXd out = trig_interpolation_matrix(g, pts) * f;
    for (std::size_t r = 0; r < pts.size(); ++r) {
        CHECK(out[r] == doctest::Approx(1.0 + std::cos(3 * k * pts[r]) - 0.5 * std::sin(7 * k * pts[r])).epsilon(1e-12));
    }
}

TEST_CASE("Gamma = 2G gives gamma = 2 and no remainder") {
    const Grid1D zg(5.0, 17);
    const TransverseGrid yg(1, 240.0, 1024);
    const TransverseGrid eg(1, 15.0, 128);
    const double t = 24.0, r = std::sqrt(1.0 + t);
    TransverseField sigma(yg.size());
    for (int j = 0; j < yg.size(); ++j) sigma[j] = 2.0 / r * G1(yg.node(j) / r);
    // v(z, y) = (1+t)^{-1} h(z) G(y / r): alpha = h, V~ = 0.
    Field v(1, zg, yg);
    for (int i = 1; i < zg.size() - 1; ++i) {
        for (int j = 0; j < yg.size(); ++j) v.at(0, i, j) = std::sin(zg.node(i)) * G1(yg.node(j) / r) / (1.0 + t);
    }
    const ScalingState s = to_scaling_variables(t, sigma, v, eg);
    CHECK(s.tau == doctest::Approx(std::log(25.0)));
    const ScalingDecomposition d = scaling_decompose(s, nullptr);
    CHECK(d.gamma == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(d.norms.gammatilde_sup < 1e-10);
    CHECK(d.norms.vtilde_sup_h1 < 1e-10);
    for (int i = 1; i < zg.size() - 1; ++i) CHECK(d.alpha(0, i) == doctest::Approx(std::sin(zg.node(i))).epsilon(1e-10));

    const auto e = weighted_x_entries(d, 2);
    REQUIRE(e.size() == 7);
    CHECK(e[1].first == "gamma");
    CHECK(e[1].second == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(e[0].second == doctest::Approx(std::pow(25.0, 1.5) * d.norms.alpha_h1));
}

TEST_CASE("property: scaling variables round trip inside the window") {
    const Grid1D zg(5.0, 17);
    const TransverseGrid yg(1, 120.0, 512);
    const TransverseGrid eg(1, 15.0, 128);
    for (double t : {0.0, 3.0, 15.0}) {
        TransverseField sigma(yg.size());
        Field v(1, zg, yg);
        for (int j = 0; j < yg.size(); ++j) {
            const double y = yg.node(j);
            sigma[j] = std::exp(-y * y / 30.0) * (1.0 + 0.2 * std::cos(0.3 * y));
            for (int i = 1; i < zg.size() - 1; ++i) v.at(0, i, j) = zg.node(i) * std::exp(-y * y / 40.0);
        }
        const ScalingState s = to_scaling_variables(t, sigma, v, eg);
        TransverseField sigma2;
        Field v2(1, zg, yg);
        from_scaling_variables(s, yg, sigma2, v2);
        const double window = eg.half_length() * std::sqrt(1.0 + t) * 0.8;
        for (int j = 0; j < yg.size(); ++j) {
            if (std::abs(yg.node(j)) > window) continue;
            CHECK(sigma2[j] == doctest::Approx(sigma[j]).scale(1.0).epsilon(1e-9));
            CHECK(v2.at(0, 5, j) == doctest::Approx(v.at(0, 5, j)).scale(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("scaling variables refuse times beyond the trusted window") {
    const Grid1D zg(5.0, 17);
    const TransverseGrid yg(1, 60.0, 256);
    const TransverseGrid eg(1, 15.0, 64);
    const TransverseField sigma = TransverseField::Zero(yg.size());
    const Field v(1, zg, yg);
    CHECK_THROWS_AS(to_scaling_variables(200.0, sigma, v, eg), ValidityError);
    CHECK_THROWS_AS(to_scaling_variables(20.0, sigma, v, eg), ValidityError);  // 15 * sqrt(21) > 60
    CHECK_NOTHROW(to_scaling_variables(10.0, sigma, v, eg));
}

TEST_CASE("profile errors vanish on the exact templates") {
    const TransverseGrid yg(1, 200.0, 1024);
    const double t = 30.0, I = 1.7, s = 1.0 + t;
    TransverseField sigma(yg.size());
    for (int j = 0; j < yg.size(); ++j) sigma[j] = I / std::sqrt(s) * G1(yg.node(j) / std::sqrt(s));
    CHECK(sigma_profile_error(yg, sigma, t, I) < 1e-15);
    CHECK(grad_sigma_profile_error(yg, sigma, t, I) < 1e-12);

    const Grid1D zg(3.0, 17);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(1, 17);
    for (int i = 1; i < 16; ++i) h(0, i) = std::sin(0.7 * i);
    Field v(1, zg, yg);
    const double c0 = I * I / (4.0 * std::numbers::pi);
    for (int i = 0; i < 17; ++i) {
        for (int j = 0; j < yg.size(); ++j) {
            v.at(0, i, j) = -c0 * std::exp(-yg.node(j) * yg.node(j) / (2.0 * s)) * std::pow(s, -2.5) * h(0, i);
        }
    }
    CHECK(v_profile_error(v, t, I, h) < 1e-18);
    // Quasi-static form: |sigma'|^2 = I^2 s^{-2} G'(eta)^2 = c0 s^{-2} (eta^2 / 4) e^{-eta^2/2} / (1 * ...).
    Field q(1, zg, yg);
    const TransverseField d = spectral_derivative(yg, sigma, 0);
    for (int i = 0; i < 17; ++i) {
        for (int j = 0; j < yg.size(); ++j) q.at(0, i, j) = -d[j] * d[j] * h(0, i);
    }
    CHECK(v_quasistatic_error(q, sigma, h) < 1e-18);
}
