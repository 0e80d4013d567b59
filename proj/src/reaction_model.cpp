#include "frontrelax/reaction_model.hpp"

#include "frontrelax/errors.hpp"

#include <cmath>
#include <sstream>

namespace frontrelax {

namespace {

// Multiply polynomial `acc` (in s) by (u + s v)^e, keeping all powers.
void multiply_binomial_power(std::vector<double>& acc, double u, double v, int e) {
    for (int k = 0; k < e; ++k) {
        acc.push_back(0.0);
        for (std::size_t j = acc.size() - 1; j > 0; --j) {
            acc[j] = acc[j] * u + acc[j - 1] * v;
        }
        acc[0] *= u;
    }
}

}  // namespace

double BistableFront::speed() const { return std::sqrt(2.0) * (0.5 - a); }

double BistableFront::phi(double z) const {
    // 1 / (1 + e^x) written to avoid overflow for large |x|.
    const double x = z / std::sqrt(2.0);
    if (x > 0) {
        const double e = std::exp(-x);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(x));
}

double BistableFront::phi_prime(double z) const {
    const double p = phi(z);
    return -p * (1.0 - p) / std::sqrt(2.0);
}

double BistableFront::phi_double_prime(double z) const {
    const double p = phi(z);
    return p * (1.0 - p) * (1.0 - 2.0 * p) / 2.0;
}

ReactionModel::ReactionModel(std::string name, std::vector<std::vector<Monomial>> component_terms,
                             State phi_minus, State phi_plus,
                             std::optional<BistableFront> exact_front)
    : name_(std::move(name)),
      terms_(std::move(component_terms)),
      phi_minus_(std::move(phi_minus)),
      phi_plus_(std::move(phi_plus)),
      exact_front_(exact_front) {
    const int m = components();
    if (m < 1) throw InputError("reaction model needs at least one component");
    if (phi_minus_.size() != m || phi_plus_.size() != m) {
        throw InputError("equilibria must have " + std::to_string(m) + " components");
    }
    for (const auto& comp : terms_) {
        for (const auto& t : comp) {
            if (static_cast<int>(t.exponents.size()) != m) {
                throw InputError("monomial exponent list must have one entry per component");
            }
            int deg = 0;
            for (int e : t.exponents) {
                if (e < 0) throw InputError("negative exponent in polynomial reaction");
                deg += e;
            }
            degree_ = std::max(degree_, deg);
        }
    }
    degree_ = std::max(degree_, 1);
}

ReactionModel ReactionModel::bistable(double a) {
    if (!(a > 0.0 && a < 1.0)) throw InputError("bistable parameter a must lie in (0, 1)");
    // u(1-u)(u-a) = -u^3 + (1+a) u^2 - a u
    std::vector<Monomial> f{{-1.0, {3}}, {1.0 + a, {2}}, {-a, {1}}};
    std::ostringstream name;
    name << "bistable(a=" << a << ")";
    return ReactionModel(name.str(), {f}, State::Constant(1, 1.0), State::Constant(1, 0.0),
                         BistableFront{a});
}

void ReactionModel::check_dim(const State& u, const char* what) const {
    if (u.size() != components()) {
        std::ostringstream os;
        os << what << ": expected " << components() << " components, got " << u.size();
        throw InputError(os.str());
    }
}

Eigen::MatrixXd ReactionModel::directional_coefficients(const State& u, const State& v) const {
    check_dim(u, "directional_coefficients(u)");
    check_dim(v, "directional_coefficients(v)");
    const int m = components();
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(m, degree_ + 1);
    std::vector<double> acc;
    for (int i = 0; i < m; ++i) {
        for (const auto& t : terms_[i]) {
            acc.assign(1, t.coef);
            for (int j = 0; j < m; ++j) {
                if (t.exponents[j] > 0) multiply_binomial_power(acc, u[j], v[j], t.exponents[j]);
            }
            for (std::size_t k = 0; k < acc.size(); ++k) p(i, static_cast<Eigen::Index>(k)) += acc[k];
        }
    }
    return p;
}

State ReactionModel::eval(const State& u) const {
    check_dim(u, "eval_reaction");
    return directional_coefficients(u, State::Zero(components())).col(0);
}

Eigen::MatrixXd ReactionModel::jacobian(const State& u) const {
    check_dim(u, "jacobian");
    const int m = components();
    Eigen::MatrixXd J(m, m);
    for (int j = 0; j < m; ++j) {
        J.col(j) = directional_coefficients(u, State::Unit(m, j)).col(1);
    }
    return J;
}

State ReactionModel::hessian_form(const State& u, const State& v) const {
    const auto p = directional_coefficients(u, v);
    return p.cols() > 2 ? State(2.0 * p.col(2)) : State(State::Zero(components()));
}

State ReactionModel::third_form(const State& u, const State& v) const {
    const auto p = directional_coefficients(u, v);
    return p.cols() > 3 ? State(6.0 * p.col(3)) : State(State::Zero(components()));
}

State ReactionModel::increment(const State& u, const State& v) const {
    const auto p = directional_coefficients(u, v);
    return p.rightCols(p.cols() - 1).rowwise().sum();
}

State ReactionModel::taylor_error(const State& base, const State& v) const {
    check_dim(base, "eval_taylor_error(base)");
    check_dim(v, "eval_taylor_error(v)");
    const auto p = directional_coefficients(base, v);
    if (p.cols() <= 3) return State::Zero(components());
    return p.rightCols(p.cols() - 3).rowwise().sum();
}

std::vector<double> ReactionModel::scalar_taylor(double u) const {
    if (components() != 1) throw InputError("scalar_taylor requires a scalar model");
    const auto p = directional_coefficients(State::Constant(1, u), State::Constant(1, 1.0));
    return {p.data(), p.data() + p.size()};
}

}  // namespace frontrelax
