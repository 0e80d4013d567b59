#include "frontrelax/scaling_ops.hpp"

#include "frontrelax/errors.hpp"
#include "frontrelax/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace frontrelax {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CRowMajor = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void check_field(const TransverseGrid& grid, const TransverseField& f, const char* what) {
    if (f.size() != grid.size()) {
        std::ostringstream os;
        os << what << ": field has " << f.size() << " values, grid has " << grid.size();
        throw InputError(os.str());
    }
}

std::vector<int> fft_shape(const TransverseGrid& grid) {
    const int n = grid.nodes_per_axis();
    return grid.dimension() == 1 ? std::vector<int>{n} : std::vector<int>{n, n};
}

// Rows: frequencies (count rows, wavenumber index q), columns: nodes. h e^{-i s xi_q eta_j}.
Eigen::MatrixXcd dilated_dft(const TransverseGrid& grid, double s, int rows) {
    const int n = grid.nodes_per_axis();
    const double h = grid.spacing();
    Eigen::MatrixXcd F(rows, n);
    for (int q = 0; q < rows; ++q) {
        const double xi = s * grid.wavenumber(q);
        for (int j = 0; j < n; ++j) F(q, j) = std::polar(h, -xi * grid.node(j));
    }
    return F;
}

// Gaussian kernel matrix for one axis of the convolution form.
Eigen::MatrixXd convolution_kernel(const TransverseGrid& grid, double tau) {
    const int n = grid.nodes_per_axis();
    const double a = a_of_tau(tau);
    const double s = std::exp(-0.5 * tau);
    const double pref = s * grid.spacing() / std::sqrt(4.0 * std::numbers::pi * a);
    Eigen::MatrixXd K(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double x = grid.node(i) - s * grid.node(j);
            K(i, j) = pref * std::exp(-x * x / (4.0 * a));
        }
    }
    return K;
}

TransverseField fourier_form(const TransverseGrid& grid, double tau, const TransverseField& f,
                             std::vector<std::string>* warnings) {
    const int d = grid.dimension();
    const int n = grid.nodes_per_axis();
    const int nh = n / 2 + 1;
    const double s = std::exp(-0.5 * tau);
    const double a = a_of_tau(tau);
    const double decay = std::exp(-0.5 * (d - 1) * tau);  // e^{-(n-2) tau / 2}

    CRowMajor spec;
    if (d == 1) {
        const Eigen::VectorXcd v = dilated_dft(grid, s, nh) * f.cast<cplx>();
        spec = v.transpose();
    } else {
        const Eigen::Map<const RowMajor> fm(f.data(), n, n);
        const Eigen::MatrixXcd Ffull = dilated_dft(grid, s, n);
        const Eigen::MatrixXcd Fhalf = Ffull.topRows(nh);
        spec = Ffull * fm.cast<cplx>() * Fhalf.transpose();
    }

    double peak = 0.0;
    double edge = 0.0;
    const int rows = static_cast<int>(spec.rows());
    for (int r = 0; r < rows; ++r) {
        const double xi0 = d == 1 ? 0.0 : grid.wavenumber(r);
        const int k0 = d == 1 ? 0 : (r <= n / 2 ? r : n - r);
        for (int q = 0; q < nh; ++q) {
            const double xi1 = grid.wavenumber(q);
            cplx v = spec(r, q) * (decay * std::exp(-a * (xi0 * xi0 + xi1 * xi1)));
            const int kmax = std::max(k0, q);
            peak = std::max(peak, std::abs(v));
            if (kmax >= (9 * n) / 20) edge = std::max(edge, std::abs(v));
            if (kmax == n / 2) v = 0.0;  // Nyquist bins dropped
            if ((r + q) % 2 == 1) v = -v;  // grid starts at -L: e^{-i xi L} = (-1)^k
            spec(r, q) = v;
        }
    }
    if (warnings && peak > 0.0 && edge > 1e-10 * peak) {
        std::ostringstream os;
        os << "aliasing: relative spectral content " << edge / peak << " near the band edge at tau = " << tau;
        warnings->push_back(os.str());
    }

    RealFFT fft(fft_shape(grid));
    TransverseField g(grid.size());
    fft.backward({spec.data(), static_cast<std::size_t>(spec.size())}, {g.data(), static_cast<std::size_t>(g.size())});
    return g / grid.cell_volume();
}

TransverseField convolution_form(const TransverseGrid& grid, double tau, const TransverseField& f) {
    const int n = grid.nodes_per_axis();
    const Eigen::MatrixXd K = convolution_kernel(grid, tau);
    const double lift = std::exp(0.5 * tau);
    if (grid.dimension() == 1) return lift * (K * f);
    const Eigen::Map<const RowMajor> fm(f.data(), n, n);
    RowMajor g = lift * (K * fm * K.transpose());
    return Eigen::Map<const TransverseField>(g.data(), grid.size());
}

}  // namespace

double a_of_tau(double tau) { return -std::expm1(-tau); }

TransverseField gaussian_G(const TransverseGrid& grid) {
    const double norm = std::pow(4.0 * std::numbers::pi, -0.5 * grid.dimension());
    TransverseField g(grid.size());
    for (int i = 0; i < grid.size(); ++i) g[i] = norm * std::exp(-0.25 * grid.radius_squared(i));
    return g;
}

TransverseField apply_semigroup_Leta(const TransverseGrid& grid, double tau, const TransverseField& f,
                                     LetaMethod method, std::vector<std::string>* warnings) {
    check_field(grid, f, "apply_semigroup_Leta");
    if (tau < 0.0) throw InputError("apply_semigroup_Leta: tau must be non-negative");
    if (tau == 0.0) return f;
    return method == LetaMethod::fourier ? fourier_form(grid, tau, f, warnings) : convolution_form(grid, tau, f);
}

Eigen::MatrixXd apply_semigroup_Leta_rows(const TransverseGrid& grid, double tau, const Eigen::MatrixXd& rows,
                                          LetaMethod method) {
    if (rows.cols() != grid.size()) throw InputError("apply_semigroup_Leta_rows: column count != grid size");
    if (tau < 0.0) throw InputError("apply_semigroup_Leta_rows: tau must be non-negative");
    if (tau == 0.0) return rows;
    if (method == LetaMethod::convolution && grid.dimension() == 1) {
        return std::exp(0.5 * tau) * (rows * convolution_kernel(grid, tau).transpose());
    }
    Eigen::MatrixXd out(rows.rows(), rows.cols());
    for (Eigen::Index r = 0; r < rows.rows(); ++r) {
        out.row(r) = apply_semigroup_Leta(grid, tau, rows.row(r).transpose(), method).transpose();
    }
    return out;
}

TransverseField project_P0_eta(const TransverseGrid& grid, const TransverseField& f) {
    check_field(grid, f, "project_P0_eta");
    return grid.integral({f.data(), static_cast<std::size_t>(f.size())}) * gaussian_G(grid);
}

TransverseField project_Q0_eta(const TransverseGrid& grid, const TransverseField& f) {
    return f - project_P0_eta(grid, f);
}

TransverseField spectral_derivative(const TransverseGrid& grid, const TransverseField& f, int axis) {
    check_field(grid, f, "spectral_derivative");
    if (axis < 0 || axis >= grid.dimension()) throw InputError("spectral_derivative: bad axis");
    const int n = grid.nodes_per_axis();
    const int nh = n / 2 + 1;
    RealFFT fft(fft_shape(grid));
    std::vector<cplx> spec(static_cast<std::size_t>(fft.complex_size()));
    fft.forward({f.data(), static_cast<std::size_t>(f.size())}, spec);
    const int rows = grid.dimension() == 1 ? 1 : n;
    for (int r = 0; r < rows; ++r) {
        for (int q = 0; q < nh; ++q) {
            const int k = (grid.dimension() == 1 || axis == 1) ? q : r;
            const double xi = (k == n / 2) ? 0.0 : grid.wavenumber(k);
            spec[static_cast<std::size_t>(r) * nh + q] *= cplx(0.0, xi);
        }
    }
    TransverseField g(grid.size());
    fft.backward(spec, {g.data(), static_cast<std::size_t>(g.size())});
    return g;
}

double weighted_norm(const TransverseGrid& grid, const TransverseField& f, const WeightedNormSpec& spec,
                     int derivative_order) {
    check_field(grid, f, "weighted_norm");
    if (derivative_order < 0 || derivative_order > 1) throw InputError("weighted_norm: order must be 0 or 1");
    Eigen::VectorXd w(grid.size());
    for (int i = 0; i < grid.size(); ++i) w[i] = std::pow(1.0 + grid.radius_squared(i), spec.m);
    double sum = (w.array() * f.array().square()).sum();
    if (derivative_order == 1) {
        for (int axis = 0; axis < grid.dimension(); ++axis) {
            const TransverseField df = spectral_derivative(grid, f, axis);
            sum += (w.array() * df.array().square()).sum();
        }
    }
    return std::sqrt(sum * grid.cell_volume());
}

double trailing_trend_slope(const std::vector<BoundRow>& rows) {
    const std::size_t start = rows.size() / 2;
    const std::size_t count = rows.size() - start;
    if (count < 2) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = start; i < rows.size(); ++i) {
        const double x = rows[i].tau;
        const double y = std::log(std::max(rows[i].ratio, 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double den = count * sxx - sx * sx;
    return den == 0.0 ? 0.0 : (count * sxy - sx * sy) / den;
}

void finalize_report(BoundReport& report) {
    report.sup_ratio = 0.0;
    for (const auto& r : report.rows) report.sup_ratio = std::max(report.sup_ratio, r.ratio);
    report.trend_slope = trailing_trend_slope(report.rows);
}

BoundReport verify_semigroup_bound(const TransverseGrid& grid, const WeightedNormSpec& spec, BoundKind kind,
                                   int derivative_axis, const std::vector<double>& tau_grid,
                                   const std::vector<TransverseField>& test_fields, LetaMethod method) {
    const int d = grid.dimension();
    const int n = d + 1;
    const bool projected = kind != BoundKind::sup_general;
    if (projected && !(spec.m > 0.5 * n + 1.0)) {
        throw InputError("verify_semigroup_bound: projected bounds need m > n/2 + 1");
    }
    if (derivative_axis >= d) throw InputError("verify_semigroup_bound: derivative axis out of range");
    if (test_fields.empty()) throw InputError("verify_semigroup_bound: no test fields");
    const int order = derivative_axis >= 0 ? 1 : 0;

    BoundReport rep;
    switch (kind) {
        case BoundKind::weighted_l2_projected: rep.name = "projected weighted L2 bound"; break;
        case BoundKind::sup_general: rep.name = "sup-norm bound"; break;
        case BoundKind::sup_projected: rep.name = "projected sup-norm bound"; break;
    }
    rep.name += order ? " (first derivative)" : " (no derivative)";

    for (double tau : tau_grid) {
        if (!(tau > 0.0)) throw InputError("verify_semigroup_bound: tau grid must be positive");
        const double a = a_of_tau(tau);
        const double rate = projected ? 0.5 * (n - 1) : 0.5 * (n - 2);
        const double envelope = std::exp(-rate * tau) / std::pow(a, 0.5 * order);
        BoundRow best{tau, 0.0, 0.0, -1.0};
        for (const auto& f0 : test_fields) {
            check_field(grid, f0, "verify_semigroup_bound");
            const TransverseField f = projected ? project_Q0_eta(grid, f0) : f0;
            TransverseField g = apply_semigroup_Leta(grid, tau, f, method);
            if (order) g = spectral_derivative(grid, g, derivative_axis);
            double measured = 0.0;
            double reference = 0.0;
            if (kind == BoundKind::weighted_l2_projected) {
                measured = weighted_norm(grid, g, spec, 0);
                reference = envelope * weighted_norm(grid, f0, spec, 0);
            } else {
                measured = g.cwiseAbs().maxCoeff();
                reference = envelope * (f0.cwiseAbs().maxCoeff() + weighted_norm(grid, f0, spec, 0));
            }
            const double ratio = measured / reference;
            if (ratio > best.ratio) best = {tau, measured, reference, ratio};
        }
        rep.rows.push_back(best);
    }
    finalize_report(rep);
    return rep;
}

double pointwise_inequality_violation(const TransverseGrid& grid, double tau, const Eigen::MatrixXd& f,
                                      double z_spacing, double p) {
    if (f.cols() != grid.size()) throw InputError("pointwise_inequality_violation: column count != grid size");
    const bool sup = p <= 0.0 || std::isinf(p);
    if (!sup && p != 2.0) throw InputError("pointwise_inequality_violation: p must be 2 or infinity");
    auto znorm = [&](const Eigen::MatrixXd& x) {
        TransverseField out(x.cols());
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            if (sup) {
                out[j] = x.col(j).cwiseAbs().maxCoeff();
            } else {
                const auto c = x.col(j);
                const double ends = 0.5 * (c[0] * c[0] + c[c.size() - 1] * c[c.size() - 1]);
                out[j] = std::sqrt(z_spacing * (c.squaredNorm() - ends));
            }
        }
        return out;
    };
    const TransverseField lhs = znorm(apply_semigroup_Leta_rows(grid, tau, f, LetaMethod::convolution));
    const TransverseField rhs = apply_semigroup_Leta(grid, tau, znorm(f), LetaMethod::convolution);
    const double scale = std::max(rhs.cwiseAbs().maxCoeff(), 1e-300);
    return (lhs - rhs).maxCoeff() / scale;
}

}  // namespace frontrelax
