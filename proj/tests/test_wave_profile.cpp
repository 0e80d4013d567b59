#include "frontrelax/profile_shift.hpp"
#include "frontrelax/wave_profile.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace frontrelax;

namespace {

// Closed-form bistable front phi(z) = 1 / (1 + e^{z / sqrt 2}) and its derivative.
double front(double z) { return 1.0 / (1.0 + std::exp(z / std::sqrt(2.0))); }
double front_prime(double z) {
    const double p = front(z);
    return -p * (1.0 - p) / std::sqrt(2.0);
}

}  // namespace

TEST_CASE("profile solver reproduces the exact bistable front") {
    const double a = 0.25;
    const ReactionModel model = ReactionModel::bistable(a);
    const Grid1D grid(30.0, 513);
    const WaveProfile p = solve_profile(model, grid, logistic_guess(model, grid));
    const double h = grid.spacing();
    CHECK(p.residual <= 1e-10);
    CHECK(profile_residual(p, model) <= 1e-10);
    // Second-order scheme: speed and profile errors scale like h^2.
    CHECK(std::abs(p.speed - std::sqrt(2.0) / 4.0) < 0.05 * h * h);
    double err = 0.0;
    for (int i = 0; i < grid.size(); ++i) err = std::max(err, std::abs(p.phi(0, i) - front(grid.node(i))));
    CHECK(err < 0.05 * h * h);
    CHECK(p.phi(0, 0) == 1.0);
    CHECK(p.phi(0, grid.size() - 1) == 0.0);
}

TEST_CASE("Richardson speed meets 1e-6 for several a") {
    for (double a : {0.2, 0.25, 0.3}) {
        const ReactionModel model = ReactionModel::bistable(a);
        const Grid1D grid(30.0, 1024);
        const double c = extrapolated_speed(model, grid, logistic_guess(model, grid));
        CHECK(std::abs(c - std::sqrt(2.0) * (0.5 - a)) <= 1e-6);
    }
}

TEST_CASE("second-order convergence of the speed") {
    const ReactionModel model = ReactionModel::bistable(0.3);
    const double exact = std::sqrt(2.0) * 0.2;
    double prev = 0.0;
    for (int n : {129, 257, 513}) {
        const Grid1D grid(20.0, n);
        const double e = std::abs(solve_profile(model, grid, logistic_guess(model, grid)).speed - exact);
        if (prev > 0.0) CHECK(prev / e == doctest::Approx(4.0).epsilon(0.1));
        prev = e;
    }
}

TEST_CASE("tail rate of the bistable linearization is 1/sqrt 2 for every a") {
    for (double a : {0.1, 0.25, 0.4}) {
        const ReactionModel model = ReactionModel::bistable(a);
        CHECK(tail_rate(model, std::sqrt(2.0) * (0.5 - a)) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    }
}

TEST_CASE("profile csv has one row per node") {
    const WaveProfile p = exact_bistable_profile(0.25, Grid1D(10.0, 21));
    std::ostringstream os;
    write_profile_csv(os, p);
    const std::string s = os.str();
    CHECK(std::count(s.begin(), s.end(), '\n') == 22);
    CHECK(s.rfind("z,", 0) == 0);
}

TEST_CASE("shifter translates the exact profile") {
    const Grid1D grid(30.0, 1024);
    const WaveProfile p = exact_bistable_profile(0.25, grid);
    const ProfileShifter sh(p);
    for (double s : {-0.7, 0.05, 0.3, 1.5}) {
        const Eigen::MatrixXd d = sh.shift_difference(s);
        const Eigen::MatrixXd d1 = sh.shifted(s, 1);
        double e0 = 0.0, e1 = 0.0;
        for (int i = 1; i < grid.size() - 1; ++i) {
            const double z = grid.node(i);
            e0 = std::max(e0, std::abs(d(0, i) - (front(z - s) - front(z))));
            e1 = std::max(e1, std::abs(d1(0, i) - front_prime(z - s)));
        }
        CHECK(e0 < 1e-8);
        CHECK(e1 < 1e-7);
    }
}

TEST_CASE("property: tiny shifts keep full relative accuracy") {
    const Grid1D grid(30.0, 512);
    const WaveProfile p = exact_bistable_profile(0.25, grid);
    const ProfileShifter sh(p);
    const Eigen::MatrixXd d0 = sh.shifted(0.0, 1);
    for (double s : {1e-12, 1e-9, 1e-6}) {
        const Eigen::MatrixXd d = sh.shift_difference(s);
        // phi(z - s) - phi(z) = -s phi'(z) + O(s^2).
        const double rel = (d / s + d0).cwiseAbs().maxCoeff() / d0.cwiseAbs().maxCoeff();
        CHECK(rel < 1e-5);
    }
    CHECK(sh.shift_difference(0.0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("shifter built from a generator has that generator as its derivative") {
    const ReactionModel model = ReactionModel::bistable(0.25);
    const Grid1D grid(30.0, 256);
    const WaveProfile p = solve_profile(model, grid, logistic_guess(model, grid));
    // Any smooth negative bump integrating to phi_+ - phi_- works as a generator.
    Eigen::MatrixXd gen(1, grid.size());
    for (int i = 0; i < grid.size(); ++i) gen(0, i) = front_prime(grid.node(i) * 1.01);
    const ProfileShifter sh(p, gen);
    const Eigen::MatrixXd d = sh.shift_difference(1e-7) / 1e-7;
    const Eigen::MatrixXd g0 = sh.shifted(0.0, 1);
    CHECK((d + g0).cwiseAbs().maxCoeff() < 1e-6);
    // The scaled generator and g0 are proportional.
    const double ratio = g0(0, grid.size() / 2) / gen(0, grid.size() / 2);
    CHECK((g0 - ratio * gen).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(sh.shifted(0.0, 0).isApprox(p.phi, 1e-14));
}
