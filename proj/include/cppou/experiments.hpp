#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cppou/inference.hpp"
#include "cppou/model.hpp"
#include "cppou/simulate.hpp"
#include "cppou/spectral.hpp"

namespace cppou {

enum class StudyKind { normality, coverage, bandwidth_diagnostic, consistency, bias, oracle };

std::string_view to_string(StudyKind kind);
/// Accepts the names produced by to_string; throws ConfigError otherwise.
StudyKind parse_study_kind(std::string_view name);

/// Either a pinned bandwidth or the adjacent-difference selector.
struct BandwidthPolicy {
  std::optional<double> fixed_h;
  double pilot = 1.0;
  int J = 20;
  double kappa = 1.5;
};

struct StudySpec {
  StudyKind kind = StudyKind::normality;
  CppOuModel model;
  std::size_t n = 500;
  double delta = 1.0;
  std::vector<double> grid = make_grid(1.0, 0.2, 11);
  std::vector<double> points = {1.5, 2.0, 2.5};  // normality evaluation points
  std::vector<double> taus = {0.15, 0.05, 0.01};
  FlatTopKernel kernel;
  double theta_c = 500.0;
  std::optional<double> theta;  // overrides theta_c when set
  std::size_t quad_panels = 4096;
  BandwidthPolicy bandwidth;
  std::size_t replications = 1000;
  std::uint64_t base_seed = 20240501;
  std::size_t large_n = 4000;    // consistency study
  double bias_h = 0.5;           // bias study (fixed bandwidth)
  bool monotonize = false;
  unsigned threads = 0;          // 0: hardware concurrency
  double max_degenerate_fraction = 0.01;

  void validate() const;
  double theta_for(std::size_t sample_size) const;
};

/// Sample path of replication r (depends only on base seed and r).
SamplePath replication_path(const StudySpec& spec, std::size_t r, std::size_t n);

/// Bandwidth for one sample under the configured policy; the selection is
/// returned when the selector ran.
double choose_bandwidth(const StudySpec& spec, std::span<const double> sample,
                        std::optional<BandwidthSelection>* selection = nullptr);

struct PointSummary {
  double x = 0.0;
  std::size_t count = 0;
  std::optional<double> mean;
  std::optional<double> sd;
  std::optional<double> ks;  // Kolmogorov distance to N(0, 1)
  double max_abs = 0.0;
};

struct NormalityResult {
  std::vector<double> points;
  std::vector<std::uint64_t> seeds;
  std::vector<double> h;                                // chosen bandwidth per replication
  std::vector<std::vector<double>> khat;                // [rep][point]
  std::vector<std::vector<double>> sigma_hat;           // [rep][point]
  std::vector<std::vector<std::optional<double>>> stat;  // studentized, [rep][point]
  std::vector<PointSummary> studentized;
  /// Estimates centered and scaled by their Monte Carlo mean and sd.
  std::vector<PointSummary> empirical;
  std::size_t degenerate = 0;
  bool failed = false;
};

NormalityResult run_normality_study(const StudySpec& spec);

struct CoverageLevel {
  double tau = 0.0;
  double q = 0.0;
  double joint = 0.0;
  std::vector<double> pointwise;
  std::vector<double> mean_width;
  std::optional<double> joint_monotonized;
};

struct CoverageResult {
  std::vector<double> grid;
  std::vector<double> truth;
  std::vector<std::uint64_t> seeds;
  std::vector<double> h;
  std::vector<std::vector<double>> khat;
  std::vector<std::vector<double>> sigma_hat;
  std::vector<CoverageLevel> levels;
  std::size_t degenerate = 0;
  bool failed = false;
};

CoverageResult run_coverage_study(const StudySpec& spec);

struct BandwidthCurve {
  std::uint64_t seed = 0;
  std::vector<double> candidates;
  std::vector<double> distances;  // j = 2..J
  std::vector<double> errors;     // max_l |khat_{h_j}(x_l) - k(x_l)|, j = 1..J
  std::vector<std::vector<double>> estimates;
  std::size_t chosen_index = 0;
  bool fallback = false;
};

struct BandwidthDiagnosticResult {
  std::vector<double> grid;
  std::vector<BandwidthCurve> curves;
  /// Share of replications whose error at the chosen h is within 3x the
  /// minimum over candidates.
  double within_factor3 = 0.0;
};

BandwidthDiagnosticResult run_bandwidth_diagnostic(const StudySpec& spec);

struct ConsistencyResult {
  std::size_t n_small = 0;
  std::size_t n_large = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<double> error_small;
  std::vector<double> error_large;
  std::vector<double> h_small;
  std::vector<double> h_large;
  double median_small = 0.0;
  double median_large = 0.0;
  double fraction_improved = 0.0;
};

ConsistencyResult run_consistency_study(const StudySpec& spec);

struct BiasResult {
  double h = 0.0;
  std::vector<std::uint64_t> seeds;
  std::vector<double> error_sharp;
  std::vector<double> error_naive;
  double mean_error_sharp = 0.0;
  double mean_error_naive = 0.0;
};

/// Max-grid error of the symmetrized and the unsymmetrized estimator at a
/// fixed bandwidth.
BiasResult run_bias_study(const StudySpec& spec);

struct OracleCheck {
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

struct OracleOptions {
  double decay_scale = 1.0;       // mutation hook for the simulator decay factor
  double quantile_offset = 0.0;   // mutation hook added to analytic q_tau
  std::size_t transition_draws = 100000;
  std::size_t cf_path_length = 100000;
  std::size_t quantile_draws = 1000000;
  std::size_t identity_probes = 1000;
};

struct OracleReport {
  std::vector<OracleCheck> checks;
  bool passed = false;
};

OracleReport run_oracle_suite(const StudySpec& spec, const OracleOptions& options = {});

// Individual oracles (also used by the acceptance suite).
struct TransitionOracle {
  double ks = 0.0;
  double atom_frequency = 0.0;
  double atom_mass = 0.0;
};
TransitionOracle transition_oracle(const CppOuModel& model, double x0, double t, std::size_t draws,
                                   std::uint64_t seed, double decay_scale = 1.0);
/// Max over lambda t in {0.25, 0.5, 1, 2} of |int g - 1| (independent quadrature).
double g_mass_oracle(const CppOuModel& model);
/// sup over |t| <= t_max of |ecf - true_cf| on a simulated path.
double cf_oracle(const CppOuModel& model, std::size_t n, std::uint64_t seed, double t_max = 5.0);
struct QuantileOracle {
  double max_abs_error = 0.0;
  std::vector<double> analytic;  // (N, tau) in row-major {1,11,50} x taus
  std::vector<double> monte_carlo;
};
QuantileOracle quantile_oracle(const std::vector<std::size_t>& Ns, const std::vector<double>& taus,
                               std::size_t draws, std::uint64_t seed, double offset = 0.0);
/// Two-pass reimplementation of sigma^2 using the direct K_n inversion.
std::vector<double> variance_two_pass(const EcfCache& cache, const FlatTopKernel& kernel,
                                      std::span<const double> x);

struct IdentityOracle {
  double psi_literal_rel = 0.0;    // max relative gap simplified vs literal ratio
  double psi_real_rel = 0.0;       // max |Re psi| / |psi|
  double cosine_complex_rel = 0.0; // max relative gap real-cosine vs complex inversion
  double variance_rel = 0.0;       // max relative gap sigma^2 vs two-pass
  double min_variance = 0.0;
  std::size_t probes = 0;
};
IdentityOracle identity_oracle(const StudySpec& spec, std::size_t probes, std::uint64_t seed);

}  // namespace cppou
