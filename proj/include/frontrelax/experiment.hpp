#pragma once

#include "frontrelax/evolution.hpp"
#include "frontrelax/rates_analysis.hpp"
#include "frontrelax/scaling_ops.hpp"
#include "frontrelax/spectral_1d.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace frontrelax {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// One asserted quantity: passes when lower <= value <= upper.
struct Check {
    std::string name;
    std::string property;
    double value = 0.0;
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
    bool passed = false;
};

Check make_check(std::string name, std::string property, double value, double lower, double upper);

struct Verdict {
    std::vector<Check> checks;
    Json details = Json::object();

    bool passed() const;
    void add(Check c) { checks.push_back(std::move(c)); }
};

Json to_json(const Check& c);

// ---- shared setup -----------------------------------------------------------------------------

struct GridParams {
    double z_half_length = 36.0;
    int z_nodes = 256;
    double y_half_length = 480.0;
    int y_nodes = 2048;
    double eta_half_length = 15.0;
    int eta_nodes = 256;
};

/// Bistable front with everything the analyses need. Owns its members; not copyable or movable
/// because the evolver keeps references into it.
struct FrontSetup {
    FrontSetup(double a, double z_half_length, int z_nodes, bool compute_spectrum);

    ReactionModel model;
    WaveProfile profile;
    DiscreteOperator1D op;
    SpectralData1D spec;
    ProfileShifter shifter;
    Eigen::MatrixXd l1_inv_phi2;  ///< L1^{-1} Q0[phi'']

    FrontSetup(const FrontSetup&) = delete;
    FrontSetup& operator=(const FrontSetup&) = delete;
};

std::unique_ptr<FrontSetup> make_front_setup(double a, double z_half_length, int z_nodes, bool compute_spectrum);

/// Smoothed seeded noise under a Gaussian envelope e^{-|eta|^2 / 8}, unit sup-norm.
std::vector<TransverseField> seeded_test_fields(const TransverseGrid& grid, int count, std::uint64_t seed);

// ---- relaxation runs ----------------------------------------------------------------------------

struct SnapshotRecord {
    double t = 0.0;
    double tau = 0.0;
    double sigma_sup = 0.0;
    double grad_sigma_sup = 0.0;
    double v_sup = 0.0;
    double v_sup_h1 = 0.0;
    double sigma_integral = 0.0;
    double sigma_profile_error = 0.0;
    double grad_sigma_profile_error = 0.0;
    double v_profile_error = 0.0;
    double v_quasistatic_error = 0.0;
    double gamma = 0.0;
    double alpha_psi = 0.0;
    XNorms x;
};

struct RelaxationRun {
    Trajectory trajectory;
    std::vector<SnapshotRecord> records;
    double initial_integral = 0.0;  ///< integral of sigma(0), the template amplitude
    double epsilon = 0.0;
    double seconds = 0.0;
};

/// Builds the initial data from the config shapes, evolves, and analyses every snapshot
/// (profile errors against the Gaussian templates, scaling-variable decomposition on eta_grid).
RelaxationRun run_relaxation(const FrontSetup& setup, const GridParams& grid, const EvolutionConfig& config,
                             std::uint64_t seed);

void write_records_csv(std::ostream& os, const RelaxationRun& run);

// ---- experiment parameters ------------------------------------------------------------------------

struct ProfileOracleParams {
    std::vector<double> a_values{0.2, 0.25, 0.3};
    double speed_tol = 1e-6;
    double residual_tol = 1e-10;
};

struct SpectralParams {
    double zero_tol = 1e-6;
    double normalization_tol = 1e-10;
    double adjoint_tol = 1e-8;
    int field_count = 10;
    double s_min = 1.0;
    double s_max = 20.0;
    double slope_margin = 0.02;
    double mu_max = 1000.0;
    int mu_per_decade = 8;
    double resolvent_slope = -1.0;
    double resolvent_slope_tol = 0.2;
    double resolvent_fit_min = 10.0;
};

struct SemigroupParams {
    int field_count = 20;
    std::vector<double> taus{0.1, 1.0, 5.0};
    double agreement_tol = 1e-8;
    double eigen_tol = 1e-8;
    double eta_half_length = 15.0;
    int eta_nodes = 128;
    double weight = 3.0;
    int bound_field_count = 5;
    double tau_min = 0.05;
    double tau_max = 10.0;
    int tau_count = 100;
    double trend_tol = 1e-2;
    double pointwise_tol = 1e-8;
};

struct DecompositionParams {
    int samples = 50;
    int y_nodes = 64;
    double y_half_length = 20.0;
    double max_phase = 0.05;
    double max_radiation = 0.005;
    double roundtrip_tol = 1e-10;
    double orthogonality_tol = 1e-10;
    double shift_tol = 1e-10;
};

struct RatesParams {
    double fit_min = 50.0;
    double fit_max = 1000.0;
    double sigma_exponent = -0.5;
    double sigma_tol = 0.15;
    double grad_exponent = -1.0;
    double grad_tol = 0.2;
    double v_exponent = -2.5;
    double v_tol = 0.3;
    double ledger_factor = 3.0;
    double gamma_residual_exponent = -0.35;
};

struct SharpnessParams {
    double trend_tol = 0.05;
    double plateau_variation = 0.25;
    double contrast_exponent = -0.75;
    SigmaShape contrast_sigma0{"gaussian_derivative", 1.0};
};

struct IntegralParams {
    int parameter_sets = 5;
    double tau_min = 0.5;
    double tau_max = 8.0;
    int tau_count = 40;
};

struct ExperimentConfig {
    std::string kind;
    int schema_version = kSchemaVersion;
    std::uint64_t seed = 1;
    std::string output_dir = "out";
    double a = 0.25;
    GridParams grid;
    EvolutionConfig evolution;
    ProfileOracleParams profile_oracle;
    SpectralParams spectral;
    SemigroupParams semigroup;
    DecompositionParams decomposition;
    RatesParams rates;
    SharpnessParams sharpness;
    IntegralParams integrals;
};

inline const std::vector<std::string>& experiment_kinds() {
    static const std::vector<std::string> kinds{"profile_oracle",    "spectral_report",  "semigroup_bounds",
                                                "decomposition_roundtrip", "relaxation_rates", "profile_sharpness",
                                                "integral_lemmas"};
    return kinds;
}

/// Validates against the schema; unknown keys and out-of-range values raise ConfigError with the field path.
ExperimentConfig parse_config(const Json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

// ---- experiments (each writes its artifacts into out_dir) -----------------------------------------

Verdict run_profile_oracle(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
Verdict run_spectral_report(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
Verdict run_semigroup_bounds(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
Verdict run_decomposition_roundtrip(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
Verdict run_integral_lemmas(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

/// Checks on a completed main run: decay exponents, scaling-ledger boundedness, gamma dynamics.
Verdict rates_verdict(const RelaxationRun& run, const RatesParams& p);
/// Profile convergence on the main run and the faster decay of a mean-zero contrast run.
Verdict sharpness_verdict(const RelaxationRun& main, const RelaxationRun& contrast, const RatesParams& rp,
                          const SharpnessParams& p);

Verdict run_relaxation_rates(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
Verdict run_profile_sharpness(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

/// Dispatches on cfg.kind, writes verdict.json (and error.json on failure) into cfg.output_dir.
/// Returns 0 iff every check passed.
int run_experiment(const ExperimentConfig& cfg);

/// Largest value over the smallest, each relative to the median: max(max/median, median/min).
double median_spread(const std::vector<double>& values);

/// Least-squares slope of log(values) against log(1+t) over all samples with t in [t_min, t_max].
double log_log_slope(const std::vector<double>& times, const std::vector<double>& values, double t_min,
                     double t_max);

}  // namespace frontrelax
