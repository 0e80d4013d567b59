#include "frontrelax/evolution.hpp"

#include "frontrelax/errors.hpp"
#include "frontrelax/scaling_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

namespace frontrelax {

namespace {

std::vector<int> transverse_shape(const TransverseGrid& g) {
    return g.dimension() == 1 ? std::vector<int>{g.nodes_per_axis()}
                              : std::vector<int>{g.nodes_per_axis(), g.nodes_per_axis()};
}

std::string at_time(const std::string& what, double t) {
    std::ostringstream os;
    os << what << " (t = " << t << ")";
    return os.str();
}

// Unit integral when the integral is meaningful, unit sup-norm otherwise.
void normalize_phase(const TransverseGrid& g, TransverseField& s) {
    const double sup = s.cwiseAbs().maxCoeff();
    if (sup == 0.0) throw InputError("initial phase shape is identically zero");
    const double integral = g.integral({s.data(), static_cast<std::size_t>(s.size())});
    const double scale = g.cell_volume() * g.size() * sup;
    if (std::abs(integral) > 1e-8 * scale) {
        s /= integral;
    } else {
        s /= sup;
    }
}

TransverseField smoothed_noise(const TransverseGrid& g, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    TransverseField x(g.size());
    for (int i = 0; i < g.size(); ++i) x[i] = normal(rng);
    RealFFT fft(transverse_shape(g));
    std::vector<cplx> hat(static_cast<std::size_t>(fft.complex_size()));
    fft.forward({x.data(), static_cast<std::size_t>(x.size())}, hat);
    const int n = g.nodes_per_axis();
    const int nh = n / 2 + 1;
    const int rows = g.dimension() == 1 ? 1 : n;
    for (int r = 0; r < rows; ++r) {
        for (int q = 0; q < nh; ++q) {
            double k2 = g.wavenumber(q) * g.wavenumber(q);
            if (g.dimension() == 2) k2 += g.wavenumber(r) * g.wavenumber(r);
            hat[static_cast<std::size_t>(r) * nh + q] *= std::exp(-k2);
        }
    }
    fft.backward(hat, {x.data(), static_cast<std::size_t>(x.size())});
    return x;
}

double envelope(const TransverseGrid& g, int idx, double width) {
    return std::exp(-g.radius_squared(idx) / (4.0 * width * width));
}

}  // namespace

std::vector<double> snapshot_times(const EvolutionConfig& config, const TransverseGrid& ygrid) {
    if (!(config.ladder_start > 0.0) || !(config.ladder_ratio > 1.0) || !(config.final_time >= config.ladder_start)) {
        throw InputError("snapshot ladder needs 0 < ladder_start <= final_time and ratio > 1");
    }
    std::vector<double> times;
    for (double t = config.ladder_start; t < config.final_time * (1.0 - 1e-12); t *= config.ladder_ratio) {
        times.push_back(t);
    }
    times.push_back(config.final_time);
    const double limit = ygrid.half_length() / 6.0;
    for (double t : times) {
        if (std::sqrt(1.0 + t) > limit) {
            std::ostringstream os;
            os << "snapshot time " << t << " leaves the torus validity window sqrt(1+t) <= L_y/6 = " << limit;
            throw ValidityError(os.str());
        }
    }
    return times;
}

Evolver::Evolver(const WaveProfile& profile, const ReactionModel& model, const TransverseGrid& ygrid)
    : profile_(profile),
      model_(model),
      ygrid_(ygrid),
      m_(model.components()),
      nz_(profile.size()),
      ny_(ygrid.size()),
      fft_(transverse_shape(ygrid), model.components() * profile.size()) {
    if (profile.components() != m_) throw InputError("Evolver: profile and model disagree on components");
    blowup_ = 10.0 * std::max({model.phi_minus().cwiseAbs().maxCoeff(), model.phi_plus().cwiseAbs().maxCoeff(), 1.0});
    hat_.resize(static_cast<std::size_t>(fft_.complex_size()) * fft_.howmany());
    if (m_ == 1) {
        deg_ = model.degree();
        taylor_.resize(static_cast<std::size_t>(nz_) * deg_);
        for (int i = 0; i < nz_; ++i) {
            const auto p = model.scalar_taylor(profile.phi(0, i));
            for (int q = 1; q <= deg_; ++q) taylor_[static_cast<std::size_t>(i) * deg_ + q - 1] = p[q];
        }
    }
}

void Evolver::diffuse_y(Field& w, double dt) {
    auto& data = w.data();
    fft_.forward(data, hat_);
    const int n = ygrid_.nodes_per_axis();
    const int nh = n / 2 + 1;
    const int rows = ygrid_.dimension() == 1 ? 1 : n;
    std::vector<double> mult(static_cast<std::size_t>(rows) * nh);
    for (int r = 0; r < rows; ++r) {
        for (int q = 0; q < nh; ++q) {
            double k2 = ygrid_.wavenumber(q) * ygrid_.wavenumber(q);
            if (ygrid_.dimension() == 2) k2 += ygrid_.wavenumber(r) * ygrid_.wavenumber(r);
            mult[static_cast<std::size_t>(r) * nh + q] = std::exp(-k2 * dt);
        }
    }
    const std::size_t block = mult.size();
    for (std::size_t b = 0; b < static_cast<std::size_t>(fft_.howmany()); ++b) {
        cplx* h = hat_.data() + b * block;
        for (std::size_t q = 0; q < block; ++q) h[q] *= mult[q];
    }
    fft_.backward(hat_, data);
}

void Evolver::reaction_increment(const Field& w, Field& out) const {
    if (m_ == 1) {
        for (int i = 0; i < nz_; ++i) {
            const double* p = taylor_.data() + static_cast<std::size_t>(i) * deg_;
            const double* x = w.row(0, i);
            double* y = out.row(0, i);
            for (int j = 0; j < ny_; ++j) {
                double acc = p[deg_ - 1];
                for (int q = deg_ - 2; q >= 0; --q) acc = p[q] + x[j] * acc;
                y[j] = x[j] * acc;
            }
        }
        return;
    }
    State u(m_), v(m_);
    for (int i = 0; i < nz_; ++i) {
        u = profile_.phi.col(i);
        for (int j = 0; j < ny_; ++j) {
            for (int k = 0; k < m_; ++k) v[k] = w.at(k, i, j);
            const State d = model_.increment(u, v);
            for (int k = 0; k < m_; ++k) out.at(k, i, j) = d[k];
        }
    }
}

void Evolver::implicit_z(Field& w, double dt) {
    const double h = profile_.grid.spacing();
    const double c = profile_.speed;
    const double sub = -dt * (1.0 / (h * h) - c / (2.0 * h));
    const double diag = 1.0 + 2.0 * dt / (h * h);
    const double sup = -dt * (1.0 / (h * h) + c / (2.0 * h));
    if (dt != factor_dt_) {
        cprime_.assign(nz_, 0.0);
        denom_.assign(nz_, 1.0);
        double prev = 0.0;
        for (int i = 1; i < nz_ - 1; ++i) {
            denom_[i] = diag - sub * prev;
            cprime_[i] = sup / denom_[i];
            prev = cprime_[i];
        }
        factor_dt_ = dt;
        sub_ = sub;
    }
    for (int k = 0; k < m_; ++k) {
        std::fill(w.row(k, 0), w.row(k, 0) + ny_, 0.0);
        std::fill(w.row(k, nz_ - 1), w.row(k, nz_ - 1) + ny_, 0.0);
        for (int i = 1; i < nz_ - 1; ++i) {
            double* x = w.row(k, i);
            const double* xp = w.row(k, i - 1);
            const double inv = 1.0 / denom_[i];
            for (int j = 0; j < ny_; ++j) x[j] = (x[j] - sub_ * xp[j]) * inv;
        }
        for (int i = nz_ - 3; i >= 1; --i) {
            double* x = w.row(k, i);
            const double* xn = w.row(k, i + 1);
            const double cp = cprime_[i];
            for (int j = 0; j < ny_; ++j) x[j] -= cp * xn[j];
        }
    }
}

void Evolver::step(Field& w, double dt) {
    if (!(dt > 0.0)) throw InputError("Evolver::step: dt must be positive");
    if (w.components() != m_ || w.nz() != nz_ || w.ny() != ny_) throw InputError("Evolver::step: shape mismatch");
    diffuse_y(w, dt);
    Field incr(m_, w.zgrid(), w.ygrid());
    reaction_increment(w, incr);
    auto& x = w.data();
    const auto& r = incr.data();
    for (std::size_t q = 0; q < x.size(); ++q) x[q] += dt * r[q];
    implicit_z(w, dt);
    const double sup = w.max_abs();
    if (!(sup <= blowup_)) {
        std::ostringstream os;
        os << "evolution blew up: ||u - phi||_inf = " << sup;
        throw InstabilityError(os.str(), std::numeric_limits<double>::quiet_NaN());
    }
}

int Evolver::advance(Field& w, double t0, double t1, double dt) {
    if (!(dt > 0.0)) throw InputError("Evolver::advance: dt must be positive");
    int steps = 0;
    double t = t0;
    while (t1 - t > 1e-12 * std::max(1.0, t1)) {
        // Snap to the target when within a hundredth of a step, to avoid a sliver step.
        const double h = (t1 - t < 1.01 * dt) ? t1 - t : dt;
        try {
            step(w, h);
        } catch (const InstabilityError& e) {
            throw InstabilityError(at_time(e.what(), t + h), t + h);
        }
        ++steps;
        t = (h == dt) ? t + dt : t1;
    }
    return steps;
}

TransverseField make_sigma_shape(const TransverseGrid& ygrid, const SigmaShape& shape, std::mt19937_64& rng) {
    if (!(shape.width > 0.0)) throw InputError("sigma0.width must be positive");
    TransverseField s(ygrid.size());
    if (shape.kind == "gaussian") {
        for (int i = 0; i < ygrid.size(); ++i) s[i] = envelope(ygrid, i, shape.width);
    } else if (shape.kind == "gaussian_derivative") {
        for (int i = 0; i < ygrid.size(); ++i) {
            s[i] = -ygrid.coordinate(i, 0) / (2.0 * shape.width * shape.width) * envelope(ygrid, i, shape.width);
        }
    } else if (shape.kind == "random") {
        const TransverseField noise = smoothed_noise(ygrid, rng);
        for (int i = 0; i < ygrid.size(); ++i) s[i] = (1.0 + 0.5 * noise[i]) * envelope(ygrid, i, shape.width);
    } else {
        throw InputError("unknown sigma0 shape '" + shape.kind + "'");
    }
    normalize_phase(ygrid, s);
    return s;
}

Field make_v_shape(const Grid1D& zgrid, const TransverseGrid& ygrid, int components, const VShape& shape,
                   std::mt19937_64& rng) {
    Field v(components, zgrid, ygrid);
    if (shape.kind == "zero") return v;
    if (!(shape.width > 0.0)) throw InputError("v0.width must be positive");
    if (shape.kind == "localized") {
        for (int i = 1; i < zgrid.size() - 1; ++i) {
            const double z = zgrid.node(i);
            for (int j = 0; j < ygrid.size(); ++j) v.at(0, i, j) = std::exp(-z * z) * envelope(ygrid, j, shape.width);
        }
    } else if (shape.kind == "random") {
        std::normal_distribution<double> normal;
        for (int k = 0; k < components; ++k) {
            std::vector<double> zn(zgrid.size());
            for (double& x : zn) x = normal(rng);
            for (int i = 1; i < zgrid.size() - 1; ++i) {
                const double z = zgrid.node(i);
                const double a = (zn[i - 1] + 2.0 * zn[i] + zn[i + 1]) / 4.0 * std::exp(-z * z / 8.0);
                for (int j = 0; j < ygrid.size(); ++j) v.at(k, i, j) = a * envelope(ygrid, j, shape.width);
            }
        }
    } else {
        throw InputError("unknown v0 shape '" + shape.kind + "'");
    }
    const double sup = v.max_abs();
    if (sup > 0.0) v *= 1.0 / sup;
    return v;
}

Field make_initial_data(const WaveProfile& profile, const SpectralData1D& spec, const ProfileShifter& shifter,
                        const TransverseField& sigma0, const Field& v0, double epsilon, double admissibility) {
    if (!(epsilon >= 0.0) || !(epsilon < admissibility)) {
        std::ostringstream os;
        os << "make_initial_data: epsilon = " << epsilon << " outside [0, " << admissibility << ")";
        throw InputError(os.str());
    }
    if (sigma0.size() != v0.ny() || v0.nz() != profile.size() || v0.components() != profile.components()) {
        throw InputError("make_initial_data: shape mismatch");
    }
    Field w(v0.components(), v0.zgrid(), v0.ygrid());
    if (epsilon == 0.0) return w;
    for (int j = 0; j < w.ny(); ++j) {
        Eigen::MatrixXd col = epsilon * project_Q0(spec, v0.column(j), profile.grid);
        if (sigma0[j] != 0.0) col += shifter.shift_difference(epsilon * sigma0[j]);
        w.set_column(j, col);
    }
    return w;
}

NormLedger make_ledger(double t, const DecompositionResult& dec, const EvolutionConfig& config) {
    const TransverseGrid& g = dec.v.ygrid();
    NormLedger row;
    row.t = t;
    row.sigma_sup = dec.sigma.cwiseAbs().maxCoeff();
    double grad = 0.0;
    for (int axis = 0; axis < g.dimension(); ++axis) {
        grad = std::max(grad, spectral_derivative(g, dec.sigma, axis).cwiseAbs().maxCoeff());
    }
    row.grad_sigma_sup = grad;
    row.v_sup = dec.v.max_abs();
    row.v_sup_h1 = norm_sup_y_h1_z(dec.v);
    row.v_weighted_h1 = norm_weighted_l2_y_h1_z(dec.v, config.v_weight);
    for (double m : config.sigma_weights) row.sigma_weighted.push_back(weighted_norm(g, dec.sigma, {m}, 0));
    row.sigma_integral = g.integral({dec.sigma.data(), static_cast<std::size_t>(dec.sigma.size())});
    row.decomposition_residual = dec.max_residual;
    return row;
}

Trajectory evolve(const WaveProfile& profile, const ReactionModel& model, const SpectralData1D& spec,
                  const ProfileShifter& shifter, Field w0, const EvolutionConfig& config,
                  const SnapshotObserver& observer) {
    if (config.scheme != "lie_imex") throw InputError("unknown stepping scheme '" + config.scheme + "'");
    if (!(config.dt > 0.0)) throw InputError("dt must be positive");
    const std::vector<double> times = snapshot_times(config, w0.ygrid());
    Evolver ev(profile, model, w0.ygrid());
    Trajectory traj;
    traj.sigma_weights = config.sigma_weights;

    auto record = [&](double t) {
        DecompositionResult dec = [&] {
            try {
                return decompose(profile, spec, shifter, w0, config.decomposition);
            } catch (const NoConvergenceError& e) {
                throw NoConvergenceError(at_time(e.what(), t), e.last_residual(), e.index());
            } catch (const DegenerateDenominatorError& e) {
                throw DegenerateDenominatorError(at_time(e.what(), t), e.index());
            } catch (const InputError& e) {
                throw InputError(at_time(e.what(), t));
            }
        }();
        NormLedger row = make_ledger(t, dec, config);
        traj.ledger.push_back(row);
        traj.sigma.push_back(dec.sigma);
        if (observer) observer(Snapshot{t, &w0, &dec, &traj.ledger.back()});
    };

    record(0.0);
    double t = 0.0;
    for (double target : times) {
        traj.steps += ev.advance(w0, t, target, config.dt);
        t = target;
        record(t);
    }
    return traj;
}

void write_ledger_csv(std::ostream& os, const Trajectory& trajectory) {
    os << "t,sigma_sup,grad_sigma_sup,v_sup,v_sup_h1,v_weighted_h1";
    for (double m : trajectory.sigma_weights) os << ",sigma_weighted_" << m;
    os << ",sigma_integral,decomposition_residual\n";
    os.precision(17);
    for (const auto& r : trajectory.ledger) {
        os << r.t << ',' << r.sigma_sup << ',' << r.grad_sigma_sup << ',' << r.v_sup << ',' << r.v_sup_h1 << ','
           << r.v_weighted_h1;
        for (double x : r.sigma_weighted) os << ',' << x;
        os << ',' << r.sigma_integral << ',' << r.decomposition_residual << '\n';
    }
}

}  // namespace frontrelax
