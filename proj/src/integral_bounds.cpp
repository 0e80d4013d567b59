#include "frontrelax/errors.hpp"
#include "frontrelax/scaling_ops.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace frontrelax {

namespace {

template <class F>
double adaptive(F f, double lo, double hi) {
    if (!(hi > lo)) return 0.0;
    using boost::math::quadrature::gauss_kronrod;
    return gauss_kronrod<double, 61>::integrate(f, lo, hi, 20, 1e-13);
}

}  // namespace

double integral_double_exponential(double b, double delta, double c, double tau) {
    if (!(delta > 0.0)) throw InputError("integral_double_exponential: delta must be positive");
    if (c < 0.0) throw InputError("integral_double_exponential: c must be non-negative");
    if (tau < 0.0) throw InputError("integral_double_exponential: tau must be non-negative");
    // x = e^tau - e^s turns the boundary layer at s = tau into an exponential e^{-delta x}.
    const double E = std::exp(tau);
    const double X = std::expm1(tau);  // e^tau - 1
    auto f = [&](double x) {
        const double logu = std::log(E - x);  // s
        return std::exp(b * (tau - logu) - delta * x - (c + 1.0) * logu);
    };
    // The integrand is negligible beyond x ~ 60 / delta unless it grows algebraically; split there.
    const double cut = std::min(X, 60.0 / delta);
    return adaptive(f, 0.0, cut) + adaptive(f, cut, X);
}

double integral_heat_kernel(double c, double d, double tau) {
    if (!(c > 0.0 && d > 0.0)) throw InputError("integral_heat_kernel: c and d must be positive");
    if (c == d) throw InputError("integral_heat_kernel: c and d must differ");
    if (tau < 0.0) throw InputError("integral_heat_kernel: tau must be non-negative");
    // u = tau - s, and u = r^2 for the (tau - s)^{-1/2} part.
    auto singular = [&](double r) { return 2.0 * std::exp(-c * (tau - r * r) - d * r * r); };
    auto regular = [&](double u) { return std::exp(-c * (tau - u) - d * u); };
    return adaptive(singular, 0.0, std::sqrt(tau)) + adaptive(regular, 0.0, tau);
}

BoundReport check_double_exponential_bound(double b, double delta, double c, const std::vector<double>& tau_grid) {
    BoundReport rep;
    std::ostringstream name;
    name << "double-exponential Duhamel integral (b=" << b << ", delta=" << delta << ", c=" << c << ")";
    rep.name = name.str();
    for (double tau : tau_grid) {
        const double I = integral_double_exponential(b, delta, c, tau);
        const double ref = std::exp(-(c + 1.0) * tau);
        rep.rows.push_back({tau, I, ref, I / ref});
    }
    finalize_report(rep);
    return rep;
}

BoundReport check_heat_kernel_bound(double c, double d, const std::vector<double>& tau_grid) {
    if (c == d) throw InputError("check_heat_kernel_bound: c and d must differ");
    BoundReport rep;
    std::ostringstream name;
    name << "heat-kernel Duhamel integral (c=" << c << ", d=" << d << ")";
    rep.name = name.str();
    for (double tau : tau_grid) {
        const double J = integral_heat_kernel(c, d, tau);
        const double ref = std::exp(-std::min(c, d) * tau);
        rep.rows.push_back({tau, J, ref, J / ref});
    }
    finalize_report(rep);
    return rep;
}

}  // namespace frontrelax
