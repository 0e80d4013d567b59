#include "frontrelax/errors.hpp"
#include "frontrelax/reaction_model.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace frontrelax;

namespace {

// f(u) = -u^3 + (1 + a) u^2 - a u, written out independently of the monomial machinery.
double cubic(double u, double a) { return u * (1.0 - u) * (u - a); }
double cubic_prime(double u, double a) { return -3.0 * u * u + 2.0 * (1.0 + a) * u - a; }

State s1(double x) { return State::Constant(1, x); }

}  // namespace

TEST_CASE("bistable model matches the closed-form cubic") {
    const double a = 0.25;
    const ReactionModel m = ReactionModel::bistable(a);
    CHECK(m.components() == 1);
    CHECK(m.degree() == 3);
    CHECK(m.phi_minus()[0] == 1.0);
    CHECK(m.phi_plus()[0] == 0.0);
    for (double u : {-0.5, 0.0, 0.3, 0.7, 1.2}) {
        CHECK(m.eval(s1(u))[0] == doctest::Approx(cubic(u, a)).epsilon(1e-14));
        CHECK(m.jacobian(s1(u))(0, 0) == doctest::Approx(cubic_prime(u, a)).epsilon(1e-14));
        // D^2 f(u)[v, v] = f''(u) v^2 with f'' = -6u + 2(1 + a).
        CHECK(m.hessian_form(s1(u), s1(0.5))[0] == doctest::Approx((-6.0 * u + 2.0 * (1.0 + a)) * 0.25));
    }
    CHECK(m.eval(s1(0.3))[0] == doctest::Approx(0.0105).epsilon(1e-14));
}

TEST_CASE("bistable parameter outside (0, 1) is rejected") {
    CHECK_THROWS_AS(ReactionModel::bistable(0.0), InputError);
    CHECK_THROWS_AS(ReactionModel::bistable(1.0), InputError);
}

TEST_CASE("exact front data") {
    const BistableFront front{0.25};
    CHECK(front.speed() == doctest::Approx(std::sqrt(2.0) / 4.0).epsilon(1e-15));
    CHECK(front.phi(0.0) == doctest::Approx(0.5));
    // phi'' + c phi' + f(phi) = 0 at a few points.
    for (double z : {-3.0, -0.5, 0.0, 1.7, 4.0}) {
        const double r = front.phi_double_prime(z) + front.speed() * front.phi_prime(z) + cubic(front.phi(z), 0.25);
        CHECK(std::abs(r) < 1e-14);
    }
}

TEST_CASE("taylor error of a cubic is exactly the cubic term") {
    const ReactionModel m = ReactionModel::bistable(0.3);
    for (double v : {1e-6, 0.1, -0.4}) {
        CHECK(m.taylor_error(s1(0.2), s1(v))[0] == doctest::Approx(-v * v * v).epsilon(1e-12));
    }
}

TEST_CASE("increment is cancellation free for tiny perturbations") {
    const ReactionModel m = ReactionModel::bistable(0.25);
    const double u = 0.6, v = 1e-13;
    const double inc = m.increment(s1(u), s1(v))[0];
    const double expect = cubic_prime(u, 0.25) * v + (-3.0 * u + 1.25) * v * v;
    CHECK(inc == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("property: directional coefficients reproduce f(u + s v) for random data") {
    const ReactionModel m = ReactionModel::bistable(0.2);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double u = U(rng), v = U(rng), s = U(rng);
        const Eigen::MatrixXd p = m.directional_coefficients(s1(u), s1(v));
        double sum = 0.0, pw = 1.0;
        for (int j = 0; j < p.cols(); ++j, pw *= s) sum += p(0, j) * pw;
        CHECK(sum == doctest::Approx(cubic(u + s * v, 0.2)).epsilon(1e-12).scale(1.0));
        CHECK(m.increment(s1(u), s1(v))[0] ==
              doctest::Approx(cubic(u + v, 0.2) - cubic(u, 0.2)).epsilon(1e-12).scale(1.0));
        const auto t = m.scalar_taylor(u);
        CHECK(t[0] == doctest::Approx(cubic(u, 0.2)).scale(1.0));
        CHECK(t[1] == doctest::Approx(cubic_prime(u, 0.2)).scale(1.0));
    }
}

TEST_CASE("two-component model from monomials") {
    // f1 = u1 - u1 u2, f2 = -u2 + 3 u1^2.
    const ReactionModel m("toy", {{{1.0, {1, 0}}, {-1.0, {1, 1}}}, {{-1.0, {0, 1}}, {3.0, {2, 0}}}},
                          State::Zero(2), State::Zero(2));
    State u(2), v(2);
    u << 0.4, -0.7;
    v << 0.1, 0.2;
    const State f = m.eval(u);
    CHECK(f[0] == doctest::Approx(0.4 + 0.28));
    CHECK(f[1] == doctest::Approx(0.7 + 0.48));
    const Eigen::MatrixXd J = m.jacobian(u);
    CHECK(J(0, 0) == doctest::Approx(1.0 + 0.7));
    CHECK(J(0, 1) == doctest::Approx(-0.4));
    CHECK(J(1, 0) == doctest::Approx(2.4));
    CHECK(J(1, 1) == doctest::Approx(-1.0));
    const State inc = m.increment(u, v);
    const State direct = m.eval(u + v) - f;
    CHECK(inc[0] == doctest::Approx(direct[0]).epsilon(1e-13));
    CHECK(inc[1] == doctest::Approx(direct[1]).epsilon(1e-13));
    CHECK_THROWS_AS(m.scalar_taylor(0.3), InputError);
    CHECK_THROWS_AS(m.eval(State::Zero(3)), InputError);
}
