#include "frontrelax/scaling_ops.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace frontrelax;

namespace {

TransverseField gaussian_width(const TransverseGrid& g, double b) {
    TransverseField f(g.size());
    for (int i = 0; i < g.size(); ++i) f[i] = std::exp(-g.radius_squared(i) / (4.0 * b));
    return f;
}

// Composite Simpson rule, used as an independent quadrature oracle.
template <class F>
double simpson(F&& f, double lo, double hi, int n) {
    const double h = (hi - lo) / n;
    double s = f(lo) + f(hi);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(lo + i * h);
    return s * h / 3.0;
}

}  // namespace

TEST_CASE("a(tau) without cancellation") {
    CHECK(a_of_tau(1e-12) == doctest::Approx(1e-12).epsilon(1e-10));
    CHECK(a_of_tau(1.0) == doctest::Approx(1.0 - std::exp(-1.0)));
    CHECK(a_of_tau(0.0) == 0.0);
}

TEST_CASE("G has unit mass and is the top eigenfunction") {
    for (int d : {1, 2}) {
        const TransverseGrid g(d, 15.0, 128);
        const TransverseField G = gaussian_G(g);
        CHECK(g.integral({G.data(), static_cast<std::size_t>(G.size())}) == doctest::Approx(1.0).epsilon(1e-12));
        const int n = d + 1;
        for (double tau : {0.1, 1.0, 5.0}) {
            for (LetaMethod m : {LetaMethod::fourier, LetaMethod::convolution}) {
                const TransverseField out = apply_semigroup_Leta(g, tau, G, m);
                const TransverseField expect = std::exp(-0.5 * (n - 2) * tau) * G;
                CHECK((out - expect).cwiseAbs().maxCoeff() < 1e-10 * G.maxCoeff());
            }
        }
    }
}

TEST_CASE("semigroup on a wider Gaussian matches the closed form") {
    // For f = e^{-eta^2/(4b)} in d = 1: e^{tau L} f = e^{tau/2} sqrt(beta/(a+beta)) e^{-eta^2/(4(a+beta))},
    // beta = b e^{-tau}.
    const TransverseGrid g(1, 20.0, 256);
    const double b = 2.0;
    const TransverseField f = gaussian_width(g, b);
    for (double tau : {0.3, 1.0, 3.0}) {
        const double a = a_of_tau(tau), beta = b * std::exp(-tau);
        TransverseField expect(g.size());
        for (int i = 0; i < g.size(); ++i) {
            expect[i] = std::exp(0.5 * tau) * std::sqrt(beta / (a + beta)) * std::exp(-g.radius_squared(i) / (4.0 * (a + beta)));
        }
        for (LetaMethod m : {LetaMethod::fourier, LetaMethod::convolution}) {
            CHECK((apply_semigroup_Leta(g, tau, f, m) - expect).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
}

TEST_CASE("property: Fourier and convolution forms agree on seeded fields") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> N;
    for (int d : {1, 2}) {
        const TransverseGrid g(d, 15.0, 128);
        for (int t = 0; t < 5; ++t) {
            const double c1 = N(rng), c2 = N(rng), k = 0.5 + std::abs(N(rng));
            TransverseField f(g.size());
            for (int i = 0; i < g.size(); ++i) {
                const double x = g.coordinate(i, 0);
                f[i] = std::exp(-g.radius_squared(i) / 8.0) * (c1 + c2 * std::sin(k * x));
            }
            for (double tau : {0.1, 1.0, 5.0}) {
                const TransverseField a = apply_semigroup_Leta(g, tau, f, LetaMethod::fourier);
                const TransverseField b = apply_semigroup_Leta(g, tau, f, LetaMethod::convolution);
                CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-8 * b.cwiseAbs().maxCoeff());
            }
        }
    }
}

TEST_CASE("P0 and Q0 in eta") {
    const TransverseGrid g(1, 15.0, 128);
    TransverseField f(g.size());
    for (int i = 0; i < g.size(); ++i) f[i] = std::exp(-std::pow(g.node(i) - 1.0, 2) / 3.0);
    const TransverseField q = project_Q0_eta(g, f);
    const TransverseField p = project_P0_eta(g, f);
    CHECK(std::abs(g.integral({q.data(), static_cast<std::size_t>(q.size())})) < 1e-13);
    CHECK((p + q - f).cwiseAbs().maxCoeff() < 1e-14);
    const double mass = std::sqrt(3.0 * std::numbers::pi);
    CHECK((p - mass * gaussian_G(g)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("weighted norm of G") {
    const TransverseGrid g(1, 15.0, 128);
    const TransverseField G = gaussian_G(g);
    // int G^2 = (4 pi)^{-1} sqrt(2 pi);  int (1 + eta^2) G^2 = that times 2.
    const double base = std::sqrt(2.0 * std::numbers::pi) / (4.0 * std::numbers::pi);
    CHECK(weighted_norm(g, G, {0.0}) == doctest::Approx(std::sqrt(base)).epsilon(1e-12));
    CHECK(weighted_norm(g, G, {1.0}) == doctest::Approx(std::sqrt(2.0 * base)).epsilon(1e-12));
    // |G'|^2 = eta^2 G^2 / 4, int = base / 4.
    CHECK(weighted_norm(g, G, {0.0}, 1) == doctest::Approx(std::sqrt(1.25 * base)).epsilon(1e-12));
}

TEST_CASE("spectral derivative is exact on trigonometric polynomials") {
    const TransverseGrid g(2, 3.0, 32);
    const double k = std::numbers::pi / 3.0;
    TransverseField f(g.size()), fx(g.size());
    for (int i = 0; i < g.size(); ++i) {
        const double x = g.coordinate(i, 0), y = g.coordinate(i, 1);
        f[i] = std::sin(2 * k * x) * std::cos(k * y);
        fx[i] = 2 * k * std::cos(2 * k * x) * std::cos(k * y);
    }
    CHECK((spectral_derivative(g, f, 0) - fx).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("bound harness: finite ratios without growth") {
    const TransverseGrid g(1, 15.0, 128);
    std::vector<TransverseField> fields;
    for (double shift : {0.0, 1.5}) {
        TransverseField f(g.size());
        for (int i = 0; i < g.size(); ++i) f[i] = std::exp(-std::pow(g.node(i) - shift, 2) / 8.0) * (1.0 + 0.3 * g.node(i));
        fields.push_back(f);
    }
    std::vector<double> taus;
    for (int i = 0; i < 40; ++i) taus.push_back(0.05 + i * 0.25);
    for (BoundKind k : {BoundKind::weighted_l2_projected, BoundKind::sup_general, BoundKind::sup_projected}) {
        for (int axis : {-1, 0}) {
            const BoundReport r = verify_semigroup_bound(g, {3.0}, k, axis, taus, fields);
            CHECK(r.rows.size() == taus.size());
            CHECK(std::isfinite(r.sup_ratio));
            CHECK(r.trend_slope <= 1e-2);
        }
    }
}

TEST_CASE("trend slope of an exponential table") {
    std::vector<BoundRow> rows;
    for (int i = 0; i < 20; ++i) rows.push_back({0.5 * i, 0.0, 0.0, std::exp(-0.3 * 0.5 * i)});
    CHECK(trailing_trend_slope(rows) == doctest::Approx(-0.3).epsilon(1e-12));
}

TEST_CASE("pointwise L^p_z inequality holds") {
    const TransverseGrid g(1, 15.0, 64);
    Eigen::MatrixXd f(8, g.size());
    for (int r = 0; r < 8; ++r) {
        for (int i = 0; i < g.size(); ++i) f(r, i) = std::exp(-std::pow(g.node(i) - 0.3 * r, 2) / 6.0) * std::cos(0.4 * r * g.node(i));
    }
    for (double tau : {0.1, 2.0}) {
        CHECK(pointwise_inequality_violation(g, tau, f, 0.5, 2.0) <= 1e-8);
        CHECK(pointwise_inequality_violation(g, tau, f, 0.5, -1.0) <= 1e-8);
    }
}

TEST_CASE("double-exponential integral against Simpson") {
    for (auto [b, delta, c, tau] : {std::array{0.5, 0.7, 1.0, 2.0}, std::array{-1.0, 0.3, 0.5, 5.0}}) {
        const double oracle = simpson(
            [&](double s) { return std::exp(b * (tau - s) - delta * (std::exp(tau) - std::exp(s)) - c * s); }, 0.0,
            tau, 20000);
        CHECK(integral_double_exponential(b, delta, c, tau) == doctest::Approx(oracle).epsilon(1e-9));
    }
}

TEST_CASE("heat-kernel integral against the erf closed form") {
    // J = e^{-c tau} [ sqrt(pi/k) erf(sqrt(k tau)) + (1 - e^{-k tau}) / k ], k = d - c > 0.
    for (auto [c, d, tau] : {std::array{0.5, 1.2, 3.0}, std::array{0.2, 2.0, 0.7}}) {
        const double k = d - c;
        const double oracle = std::exp(-c * tau) *
                              (std::sqrt(std::numbers::pi / k) * std::erf(std::sqrt(k * tau)) + (1.0 - std::exp(-k * tau)) / k);
        CHECK(integral_heat_kernel(c, d, tau) == doctest::Approx(oracle).epsilon(1e-9));
    }
}

TEST_CASE("integral bound reports are bounded") {
    std::vector<double> taus;
    for (int i = 0; i < 40; ++i) taus.push_back(0.5 + 7.5 * i / 39.0);
    const BoundReport r1 = check_double_exponential_bound(0.3, 0.5, 1.0, taus);
    const BoundReport r2 = check_heat_kernel_bound(0.6, 1.4, taus);
    CHECK(std::isfinite(r1.sup_ratio));
    CHECK(std::isfinite(r2.sup_ratio));
    // Long-time limits: I e^{(c+1) tau} -> 1/delta.
    CHECK(r1.rows.back().ratio == doctest::Approx(1.0 / 0.5).epsilon(0.01));
}
