#include "frontrelax/nonlinearities.hpp"

#include "frontrelax/errors.hpp"
#include "frontrelax/scaling_ops.hpp"

#include <sstream>

namespace frontrelax {

Nonlinearities eval_nonlinearities(const WaveProfile& profile, const SpectralData1D& spec, const ReactionModel& model,
                                   const ProfileShifter& shifter, const TransverseField& sigma, const Field& v,
                                   double min_denominator) {
    const Grid1D& zg = profile.grid;
    const TransverseGrid& yg = v.ygrid();
    const int m = model.components();
    const int nz = profile.size();
    if (v.components() != m || v.nz() != nz || sigma.size() != v.ny()) {
        throw InputError("eval_nonlinearities: shape mismatch");
    }

    TransverseField grad2 = TransverseField::Zero(yg.size());
    for (int axis = 0; axis < yg.dimension(); ++axis) {
        grad2 += spectral_derivative(yg, sigma, axis).array().square().matrix();
    }

    Nonlinearities out{Field(m, v.zgrid(), yg), Field(m, v.zgrid(), yg), TransverseField(yg.size()),
                       TransverseField(yg.size()), TransverseField(yg.size())};
    std::vector<Eigen::MatrixXd> base_jac(nz);
    for (int i = 0; i < nz; ++i) base_jac[i] = model.jacobian(profile.phi.col(i));

    for (int j = 0; j < yg.size(); ++j) {
        const double s = sigma[j];
        const Eigen::MatrixXd ps = shifter.shifted(s, 0);
        const Eigen::MatrixXd dps = shifter.shifted(s, 1);
        const Eigen::MatrixXd ddps = shifter.shifted(s, 2);
        const double den = slice_inner(zg, spec.psi, dps);
        if (!(den >= min_denominator)) {
            std::ostringstream os;
            os << "eval_nonlinearities: <psi, phi'_sigma> = " << den << " at transverse node " << j;
            throw DegenerateDenominatorError(os.str(), j);
        }
        const double k2 = 1.0 / den;
        const double k1 = -slice_inner(zg, spec.psi, ddps) * k2;

        const Eigen::MatrixXd vj = v.column(j);
        Eigen::MatrixXd h(m, nz), dv(m, nz);
        for (int i = 0; i < nz; ++i) {
            // H = sum_{p >= 2} of the directional Taylor coefficients, no subtraction.
            const Eigen::MatrixXd c = model.directional_coefficients(ps.col(i), vj.col(i));
            h.col(i) = c.cols() > 2 ? Eigen::VectorXd(c.rightCols(c.cols() - 2).rowwise().sum())
                                    : Eigen::VectorXd::Zero(m);
            dv.col(i) = (model.jacobian(ps.col(i)) - base_jac[i]) * vj.col(i);
        }
        const double n2 = k1 * grad2[j] - k2 * slice_inner(zg, spec.psi, h + dv);
        out.K1[j] = k1;
        out.K2[j] = k2;
        out.N2[j] = n2;
        out.H.set_column(j, h);
        out.N1.set_column(j, n2 * dps + dv + grad2[j] * ddps);
    }
    return out;
}

}  // namespace frontrelax
