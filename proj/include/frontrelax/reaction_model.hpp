#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace frontrelax {

using State = Eigen::VectorXd;

/// One monomial coef * prod_j u_j^{exponents[j]}.
struct Monomial {
    double coef = 0.0;
    std::vector<int> exponents;
};

/// Closed-form front of the scalar bistable model f(u) = u(1-u)(u-a):
/// phi(z) = 1 / (1 + exp(z / sqrt 2)), c = sqrt 2 (1/2 - a).
struct BistableFront {
    double a = 0.25;

    double speed() const;
    double phi(double z) const;
    double phi_prime(double z) const;
    double phi_double_prime(double z) const;
};

/// Polynomial reaction term f : R^m -> R^m with analytic derivatives.
///
/// Every derivative is obtained from the expansion
///   f(u + s v) = sum_j p_j s^j,   p_j = D^j f(u)[v,...,v] / j!,
/// computed monomial by monomial, so that increments f(u+v) - f(u) and Taylor
/// remainders are formed from the p_j directly and never by subtraction.
/// Immutable after construction.
class ReactionModel {
public:
    ReactionModel(std::string name, std::vector<std::vector<Monomial>> components,
                  State phi_minus, State phi_plus,
                  std::optional<BistableFront> exact_front = std::nullopt);

    /// f(u) = u (1 - u)(u - a), equilibria phi_- = 1, phi_+ = 0. Requires 0 < a < 1.
    static ReactionModel bistable(double a);

    const std::string& name() const noexcept { return name_; }
    int components() const noexcept { return static_cast<int>(terms_.size()); }
    const State& phi_minus() const noexcept { return phi_minus_; }
    const State& phi_plus() const noexcept { return phi_plus_; }
    const std::optional<BistableFront>& exact_front() const noexcept { return exact_front_; }
    const std::vector<std::vector<Monomial>>& terms() const noexcept { return terms_; }
    /// Highest total degree over all components.
    int degree() const noexcept { return degree_; }

    State eval(const State& u) const;
    Eigen::MatrixXd jacobian(const State& u) const;
    State hessian_form(const State& u, const State& v) const;
    State third_form(const State& u, const State& v) const;

    /// f(u + v) - f(u), cancellation free.
    State increment(const State& u, const State& v) const;

    /// E(v) = f(u+v) - f(u) - Df(u) v - 1/2 D^2 f(u)[v,v].
    State taylor_error(const State& base, const State& v) const;

    /// Coefficients p_0..p_degree of s -> f(u + s v), one column per power.
    Eigen::MatrixXd directional_coefficients(const State& u, const State& v) const;

    /// Scalar models only: f^{(j)}(u) / j! for j = 0..degree.
    std::vector<double> scalar_taylor(double u) const;

private:
    void check_dim(const State& u, const char* what) const;

    std::string name_;
    std::vector<std::vector<Monomial>> terms_;
    State phi_minus_;
    State phi_plus_;
    std::optional<BistableFront> exact_front_;
    int degree_ = 0;
};

}  // namespace frontrelax
