#include "frontrelax/decomposition.hpp"

#include "frontrelax/errors.hpp"

#include <cmath>
#include <sstream>

namespace frontrelax {

DecompositionResult decompose(const WaveProfile& profile, const SpectralData1D& spec, const ProfileShifter& shifter,
                              const Field& w, const DecompositionOptions& opts) {
    const Grid1D& grid = profile.grid;
    if (w.components() != profile.components() || w.nz() != profile.size()) {
        throw InputError("decompose: field does not match profile grid");
    }
    DecompositionResult out{TransverseField::Zero(w.ny()), Field(w.components(), w.zgrid(), w.ygrid()),
                            std::vector<int>(w.ny(), 0), 0.0, norm_sup_y_h1_z(w)};
    if (!(out.input_norm < opts.admissibility)) {
        std::ostringstream os;
        os << "decompose: ||w||_{L^inf_y H^1_z} = " << out.input_norm << " is outside the admissible neighbourhood ("
           << opts.admissibility << ")";
        throw InputError(os.str());
    }

    for (int j = 0; j < w.ny(); ++j) {
        const Eigen::MatrixXd wj = w.column(j);
        const double gw = slice_inner(grid, spec.psi, wj);
        double s = 0.0;
        Eigen::MatrixXd diff = Eigen::MatrixXd::Zero(wj.rows(), wj.cols());
        double g = gw;
        int it = 0;
        auto derivative = [&](double at) {
            const double dg = slice_inner(grid, spec.psi, shifter.shifted(at, 1));
            if (!(std::abs(dg) >= opts.min_denominator)) {
                std::ostringstream os;
                os << "decompose: <psi, phi'_sigma> = " << dg << " in column " << j;
                throw DegenerateDenominatorError(os.str(), j);
            }
            return dg;
        };
        while (std::abs(g) > opts.tol) {
            if (it >= opts.max_iter) {
                std::ostringstream os;
                os << "decompose: Newton failed in column " << j;
                throw NoConvergenceError(os.str(), std::abs(g), j);
            }
            ++it;
            double step = g / derivative(s);
            for (int halving = 0; halving < 30; ++halving) {
                const double trial = s - step;
                Eigen::MatrixXd trial_diff = shifter.shift_difference(trial);
                const double trial_g = gw - slice_inner(grid, spec.psi, trial_diff);
                if (std::abs(trial_g) < std::abs(g) || halving == 29) {
                    s = trial;
                    diff = std::move(trial_diff);
                    g = trial_g;
                    break;
                }
                step *= 0.5;
            }
        }
        for (int p = 0; p < opts.polish_steps && g != 0.0; ++p) {
            const double trial = s - g / derivative(s);
            Eigen::MatrixXd trial_diff = shifter.shift_difference(trial);
            const double trial_g = gw - slice_inner(grid, spec.psi, trial_diff);
            if (!(std::abs(trial_g) < std::abs(g))) break;
            s = trial;
            diff = std::move(trial_diff);
            g = trial_g;
        }
        out.sigma[j] = s;
        out.newton_iters[j] = it;
        out.v.set_column(j, wj - diff);
        out.max_residual = std::max(out.max_residual, std::abs(slice_inner(grid, spec.psi, wj - diff)));
    }
    return out;
}

Field recompose(const ProfileShifter& shifter, const TransverseField& sigma, const Field& v) {
    if (sigma.size() != v.ny() || v.nz() != shifter.size() || v.components() != shifter.components()) {
        throw InputError("recompose: shape mismatch");
    }
    Field w = v;
    for (int j = 0; j < v.ny(); ++j) {
        if (sigma[j] != 0.0) w.set_column(j, v.column(j) + shifter.shift_difference(sigma[j]));
    }
    return w;
}

}  // namespace frontrelax
