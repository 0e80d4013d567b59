#include "frontrelax/rates_analysis.hpp"

#include "frontrelax/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace frontrelax {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<RowMajor> rows_of(Field& f) {
    return {f.data().data(), static_cast<Eigen::Index>(f.components()) * f.nz(), f.ny()};
}
Eigen::Map<const RowMajor> rows_of(const Field& f) {
    return {f.data().data(), static_cast<Eigen::Index>(f.components()) * f.nz(), f.ny()};
}

void require_1d(const TransverseGrid& g, const char* what) {
    if (g.dimension() != 1) throw InputError(std::string(what) + ": one transverse axis only");
}

}  // namespace

Eigen::MatrixXd trig_interpolation_matrix(const TransverseGrid& grid, const std::vector<double>& points) {
    require_1d(grid, "trig_interpolation_matrix");
    const int n = grid.size();
    const double L = grid.half_length();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(points.size()), n);
    for (std::size_t r = 0; r < points.size(); ++r) {
        for (int l = 0; l < n; ++l) {
            // Real trigonometric interpolant with the Nyquist mode split evenly: sin(N t/2) cot(t/2) / N.
            double th = std::remainder(std::numbers::pi * (points[r] - grid.node(l)) / L, 2.0 * std::numbers::pi);
            const double half = 0.5 * th;
            m(static_cast<Eigen::Index>(r), l) =
                std::abs(half) < 1e-14 ? 1.0 : std::sin(0.5 * n * th) / (n * std::tan(half));
        }
    }
    return m;
}

ScalingState to_scaling_variables(double t, const TransverseField& sigma, const Field& v,
                                  const TransverseGrid& etagrid) {
    if (!(t >= 0.0)) throw InputError("to_scaling_variables: t must be non-negative");
    const TransverseGrid& yg = v.ygrid();
    require_1d(yg, "to_scaling_variables");
    require_1d(etagrid, "to_scaling_variables");
    if (sigma.size() != yg.size()) throw InputError("to_scaling_variables: sigma does not match the y-grid");
    const double r = std::sqrt(1.0 + t);
    if (r > yg.half_length() / 6.0) {
        std::ostringstream os;
        os << "to_scaling_variables: sqrt(1+t) = " << r << " exceeds L_y/6";
        throw ValidityError(os.str());
    }
    if (etagrid.half_length() * r > yg.half_length() * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "to_scaling_variables: dilated eta window " << etagrid.half_length() * r << " leaves the y-torus";
        throw ValidityError(os.str());
    }
    std::vector<double> pts(etagrid.size());
    for (int j = 0; j < etagrid.size(); ++j) pts[j] = r * etagrid.node(j);
    const Eigen::MatrixXd M = trig_interpolation_matrix(yg, pts);

    ScalingState s{std::log1p(t), r * (M * sigma), Field(v.components(), v.zgrid(), etagrid)};
    rows_of(s.V).noalias() = (1.0 + t) * rows_of(v) * M.transpose();
    return s;
}

void from_scaling_variables(const ScalingState& s, const TransverseGrid& ygrid, TransverseField& sigma, Field& v) {
    const TransverseGrid& eg = s.V.ygrid();
    require_1d(eg, "from_scaling_variables");
    require_1d(ygrid, "from_scaling_variables");
    const double r = std::exp(0.5 * s.tau);
    std::vector<double> pts;
    std::vector<int> idx;
    for (int j = 0; j < ygrid.size(); ++j) {
        const double eta = ygrid.node(j) / r;
        if (eta >= -eg.half_length() && eta < eg.half_length()) {
            pts.push_back(eta);
            idx.push_back(j);
        }
    }
    const Eigen::MatrixXd M = trig_interpolation_matrix(eg, pts);
    const Eigen::VectorXd g = M * s.Gamma / r;
    const RowMajor vv = rows_of(s.V) * M.transpose() / (r * r);
    sigma = TransverseField::Zero(ygrid.size());
    v = Field(s.V.components(), s.V.zgrid(), ygrid);
    auto out = rows_of(v);
    for (std::size_t q = 0; q < idx.size(); ++q) {
        sigma[idx[q]] = g[static_cast<Eigen::Index>(q)];
        out.col(idx[q]) = vv.col(static_cast<Eigen::Index>(q));
    }
}

ScalingDecomposition scaling_decompose(const ScalingState& s, const SpectralData1D* spec,
                                       const WeightedNormSpec& weight) {
    const TransverseGrid& eg = s.V.ygrid();
    if (s.Gamma.size() != eg.size()) throw InputError("scaling_decompose: Gamma does not match the eta grid");
    const TransverseField G = gaussian_G(eg);
    const int m = s.V.components();
    const int nz = s.V.nz();

    ScalingDecomposition d{s.tau, 0.0, Eigen::MatrixXd(m, nz), TransverseField(), s.V, 0.0, {}};
    d.gamma = eg.integral({s.Gamma.data(), static_cast<std::size_t>(s.Gamma.size())});
    d.Gamma_tilde = s.Gamma - d.gamma * G;
    auto vt = rows_of(d.V_tilde);
    for (int k = 0; k < m; ++k) {
        for (int i = 0; i < nz; ++i) {
            const Eigen::Index r = static_cast<Eigen::Index>(k) * nz + i;
            d.alpha(k, i) = vt.row(r).sum() * eg.cell_volume();
            vt.row(r) -= d.alpha(k, i) * G.transpose();
        }
    }
    if (spec != nullptr) d.alpha_psi = slice_inner(s.V.zgrid(), spec->psi, d.alpha);

    XNorms& x = d.norms;
    x.alpha_h1 = slice_h1_norm(s.V.zgrid(), d.alpha);
    x.gamma_abs = std::abs(d.gamma);
    x.vtilde_weighted_h1 = norm_weighted_l2_y_h1_z(d.V_tilde, weight.m);
    x.vtilde_sup_h1 = norm_sup_y_h1_z(d.V_tilde);
    x.gammatilde_h1m = weighted_norm(eg, d.Gamma_tilde, weight, 1);
    x.gammatilde_sup = d.Gamma_tilde.cwiseAbs().maxCoeff();
    for (int axis = 0; axis < eg.dimension(); ++axis) {
        x.grad_gammatilde_sup =
            std::max(x.grad_gammatilde_sup, spectral_derivative(eg, d.Gamma_tilde, axis).cwiseAbs().maxCoeff());
    }
    return d;
}

std::vector<std::pair<std::string, double>> weighted_x_entries(const ScalingDecomposition& d, int n) {
    return weighted_x_entries(d.tau, d.norms, n);
}

std::vector<std::pair<std::string, double>> weighted_x_entries(double tau, const XNorms& x, int n) {
    const double wv = std::exp((n - 0.5) * tau);
    const double wg = std::exp(0.5 * (n - 2) * tau);
    const double wt = std::exp(0.5 * (n - 1) * tau);
    return {{"alpha_h1", wv * x.alpha_h1},
            {"gamma", wg * x.gamma_abs},
            {"vtilde_weighted_h1", wv * x.vtilde_weighted_h1},
            {"vtilde_sup_h1", wv * x.vtilde_sup_h1},
            {"gammatilde_h1m", wt * x.gammatilde_h1m},
            {"gammatilde_sup", wt * x.gammatilde_sup},
            {"grad_gammatilde_sup", wt * x.grad_gammatilde_sup}};
}

RateFit fit_decay_rate(const std::vector<double>& times, const std::vector<double>& values, double t_min,
                       double t_max) {
    if (times.size() != values.size()) throw InputError("fit_decay_rate: times and values differ in length");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < t_min || times[i] > t_max) continue;
        if (!(values[i] > 0.0)) {
            std::ostringstream os;
            os << "fit_decay_rate: non-positive value " << values[i] << " at t = " << times[i];
            throw InputError(os.str());
        }
        xs.push_back(std::log1p(times[i]));
        ys.push_back(std::log(values[i]));
    }
    const int n = static_cast<int>(xs.size());
    if (n < 6) throw InputError("fit_decay_rate: fewer than 6 samples in the window");
    double mx = 0, my = 0;
    for (int i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    RateFit fit;
    fit.exponent = sxy / sxx;
    fit.intercept = my - fit.exponent * mx;
    double ss = 0;
    for (int i = 0; i < n; ++i) {
        const double e = ys[i] - (fit.intercept + fit.exponent * xs[i]);
        ss += e * e;
    }
    fit.residual_rms = std::sqrt(ss / n);
    fit.t_min = t_min;
    fit.t_max = t_max;
    fit.samples = n;
    return fit;
}

double sigma_profile_error(const TransverseGrid& ygrid, const TransverseField& sigma, double t, double integral) {
    const int d = ygrid.dimension();
    const double s = 1.0 + t;
    const double amp = integral * std::pow(s, -0.5 * d) * std::pow(4.0 * std::numbers::pi, -0.5 * d);
    double err = 0.0;
    for (int j = 0; j < ygrid.size(); ++j) {
        err = std::max(err, std::abs(sigma[j] - amp * std::exp(-ygrid.radius_squared(j) / (4.0 * s))));
    }
    return err;
}

double grad_sigma_profile_error(const TransverseGrid& ygrid, const TransverseField& sigma, double t,
                                double integral) {
    const int d = ygrid.dimension();
    const double s = 1.0 + t;
    const double amp = integral * std::pow(s, -0.5 * (d + 1)) * std::pow(4.0 * std::numbers::pi, -0.5 * d);
    double err = 0.0;
    for (int axis = 0; axis < d; ++axis) {
        const TransverseField g = spectral_derivative(ygrid, sigma, axis);
        for (int j = 0; j < ygrid.size(); ++j) {
            const double eta = ygrid.coordinate(j, axis) / std::sqrt(s);
            const double tmpl = amp * (-0.5 * eta) * std::exp(-ygrid.radius_squared(j) / (4.0 * s));
            err = std::max(err, std::abs(g[j] - tmpl));
        }
    }
    return err;
}

double v_profile_error(const Field& v, double t, double integral, const Eigen::MatrixXd& h) {
    if (h.rows() != v.components() || h.cols() != v.nz()) throw InputError("v_profile_error: h shape mismatch");
    const TransverseGrid& g = v.ygrid();
    const int n = g.dimension() + 1;
    const double s = 1.0 + t;
    const double c0 = integral * integral / std::pow(4.0 * std::numbers::pi, n - 1);
    const double amp = c0 * std::pow(s, -(n + 0.5));
    Eigen::VectorXd env(g.size());
    for (int j = 0; j < g.size(); ++j) env[j] = amp * std::exp(-g.radius_squared(j) / (2.0 * s));
    double err = 0.0;
    for (int k = 0; k < v.components(); ++k) {
        for (int i = 0; i < v.nz(); ++i) {
            const double* row = v.row(k, i);
            for (int j = 0; j < g.size(); ++j) err = std::max(err, std::abs(row[j] + env[j] * h(k, i)));
        }
    }
    return err;
}

double v_quasistatic_error(const Field& v, const TransverseField& sigma, const Eigen::MatrixXd& h) {
    if (h.rows() != v.components() || h.cols() != v.nz()) throw InputError("v_quasistatic_error: h shape mismatch");
    const TransverseGrid& g = v.ygrid();
    Eigen::VectorXd grad2 = Eigen::VectorXd::Zero(g.size());
    for (int axis = 0; axis < g.dimension(); ++axis) {
        grad2 += spectral_derivative(g, sigma, axis).array().square().matrix();
    }
    double err = 0.0;
    for (int k = 0; k < v.components(); ++k) {
        for (int i = 0; i < v.nz(); ++i) {
            const double* row = v.row(k, i);
            for (int j = 0; j < g.size(); ++j) err = std::max(err, std::abs(row[j] + grad2[j] * h(k, i)));
        }
    }
    return err;
}

}  // namespace frontrelax
