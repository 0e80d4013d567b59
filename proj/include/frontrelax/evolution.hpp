#pragma once

#include "frontrelax/decomposition.hpp"
#include "frontrelax/fft.hpp"
#include "frontrelax/field.hpp"
#include "frontrelax/profile_shift.hpp"
#include "frontrelax/reaction_model.hpp"
#include "frontrelax/spectral_1d.hpp"
#include "frontrelax/wave_profile.hpp"

#include <functional>
#include <random>
#include <string>
#include <vector>

namespace frontrelax {

/// Transverse shape of the initial phase.
///   gaussian:            e^{-|y|^2 / (4 w^2)}, normalized to unit integral
///   gaussian_derivative: d/dy of the above (mean zero), normalized to unit sup-norm
///   random:              smoothed seeded noise under a Gaussian envelope, unit integral
struct SigmaShape {
    std::string kind = "gaussian";
    double width = 1.0;
};

/// Initial radiation shape, unit sup-norm before scaling.
///   zero:      v0 = 0
///   localized: e^{-z^2} e^{-|y|^2 / (4 w^2)} in the first component
///   random:    seeded noise in z times the Gaussian envelope in y
struct VShape {
    std::string kind = "zero";
    double width = 1.0;
};

struct EvolutionConfig {
    double dt = 0.1;
    double final_time = 1000.0;
    /// Snapshot ladder t_k = ladder_start * ladder_ratio^k up to final_time (final_time always included).
    double ladder_start = 1.0;
    double ladder_ratio = 1.189207115002721;  // 2^{1/4}
    std::string scheme = "lie_imex";
    double epsilon = 0.01;
    SigmaShape sigma0;
    VShape v0;
    /// Weight exponent of the L^2(m) H^1_z radiation norm.
    double v_weight = 3.0;
    /// Weight exponents of the recorded L^2(m~) norms of sigma.
    std::vector<double> sigma_weights{0.25, 1.0};
    DecompositionOptions decomposition;
};

/// Snapshot times from the config. Throws ValidityError if any time leaves sqrt(1+t) <= L_y / 6.
std::vector<double> snapshot_times(const EvolutionConfig& config, const TransverseGrid& ygrid);

struct NormLedger {
    double t = 0.0;
    double sigma_sup = 0.0;
    double grad_sigma_sup = 0.0;
    double v_sup = 0.0;
    double v_sup_h1 = 0.0;        ///< L^inf_y H^1_z
    double v_weighted_h1 = 0.0;   ///< L^2(m) H^1_z
    std::vector<double> sigma_weighted;  ///< one per configured weight
    double sigma_integral = 0.0;
    double decomposition_residual = 0.0;
};

struct Snapshot {
    double t = 0.0;
    const Field* w = nullptr;                     ///< u - phi
    const DecompositionResult* decomposition = nullptr;
    const NormLedger* ledger = nullptr;
};

struct Trajectory {
    std::vector<NormLedger> ledger;
    std::vector<TransverseField> sigma;  ///< sigma at every snapshot
    std::vector<double> sigma_weights;
    int steps = 0;
};

/// Advances w = u - phi for u_t = Delta u + c u_z + f(u) on the (z, y) grid.
///
/// One step: exact Fourier multiplier e^{-|k|^2 dt} in y, then
/// (I - dt (D_zz + c D_z)) w_new = w + dt (f(phi + w) - f(phi)) in z with homogeneous
/// Dirichlet values at z = +-L_z. The reaction increment is evaluated from Taylor
/// coefficients at phi, so w = 0 is preserved exactly. Not thread-safe.
class Evolver {
public:
    Evolver(const WaveProfile& profile, const ReactionModel& model, const TransverseGrid& ygrid);

    void step(Field& w, double dt);
    /// Steps of size dt (the last one shortened) from t0 to t1.
    int advance(Field& w, double t0, double t1, double dt);

    const TransverseGrid& ygrid() const noexcept { return ygrid_; }

private:
    void diffuse_y(Field& w, double dt);
    void reaction_increment(const Field& w, Field& out) const;
    void implicit_z(Field& w, double dt);

    const WaveProfile& profile_;
    const ReactionModel& model_;
    TransverseGrid ygrid_;
    int m_;
    int nz_;
    int ny_;
    double blowup_;
    RealFFT fft_;
    std::vector<cplx> hat_;
    std::vector<double> taylor_;  // scalar models: per z-node coefficients p_1..p_deg
    int deg_ = 0;
    double factor_dt_ = -1.0;
    std::vector<double> cprime_;  // Thomas forward sweep for the current dt
    std::vector<double> denom_;
    double sub_ = 0.0;
};

/// Phase shape on the y-grid, normalized as described by SigmaShape.
TransverseField make_sigma_shape(const TransverseGrid& ygrid, const SigmaShape& shape, std::mt19937_64& rng);
Field make_v_shape(const Grid1D& zgrid, const TransverseGrid& ygrid, int components, const VShape& shape,
                   std::mt19937_64& rng);

/// u0 - phi = phi(z - eps sigma0(y)) - phi(z) + eps Q0 v0. Throws InputError when eps is above
/// the admissibility threshold.
Field make_initial_data(const WaveProfile& profile, const SpectralData1D& spec, const ProfileShifter& shifter,
                        const TransverseField& sigma0, const Field& v0, double epsilon, double admissibility = 0.1);

NormLedger make_ledger(double t, const DecompositionResult& dec, const EvolutionConfig& config);

using SnapshotObserver = std::function<void(const Snapshot&)>;

/// Runs to every snapshot time, decomposes, records the ledger and calls the observer.
/// Errors from stepping or decomposition are rethrown with the failing time in the message.
Trajectory evolve(const WaveProfile& profile, const ReactionModel& model, const SpectralData1D& spec,
                  const ProfileShifter& shifter, Field w0, const EvolutionConfig& config,
                  const SnapshotObserver& observer = {});

/// CSV with columns t, sigma_sup, grad_sigma_sup, v_sup, v_sup_h1, v_weighted_h1, sigma_weighted_<m>...,
/// sigma_integral, decomposition_residual.
void write_ledger_csv(std::ostream& os, const Trajectory& trajectory);

}  // namespace frontrelax
