#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cppou/rng.hpp"

namespace cppou {

struct ExponentialJumps {
  double rate = 1.0;
};

struct GammaJumps {
  double shape = 2.0;
  double rate = 1.0;
};

/// Positive jump-size law F of the driving compound Poisson process.
///
/// A closed set of families: each must provide sampler, cdf and density so the
/// transition law remains computable.
class JumpDistribution {
 public:
  using Params = std::variant<ExponentialJumps, GammaJumps>;

  static JumpDistribution exponential(double rate);
  static JumpDistribution gamma(double shape, double rate);

  double sample(Engine& rng) const;
  double cdf(double x) const;
  double survival(double x) const;
  double density(double x) const;
  double quantile(double p) const;
  double mean() const;
  /// E[(U - c)^+], the stop-loss transform used to bound quadrature tails.
  double excess_mean(double c) const;

  std::string_view kind() const;
  const Params& params() const noexcept { return params_; }

 private:
  explicit JumpDistribution(Params p) : params_(p) {}
  Params params_;
};

struct CppOuModel {
  double lambda = 0.5;  // mean-reversion rate
  double alpha = 2.1;   // Poisson intensity, also k(0)
  JumpDistribution jump = JumpDistribution::gamma(2.0, 1.0);

  /// Throws ConfigError on invalid parameters; returns non-fatal warnings.
  std::vector<std::string> validate() const;

  /// alpha * E[U], the mean of the stationary law.
  double stationary_mean() const { return alpha * jump.mean(); }
};

/// k(x) = alpha * P(U > x), the upper tail of the Levy measure.
double true_k(const CppOuModel& model, double x);

struct QuadratureSpec {
  int panels = 4096;
  int max_panels = 1 << 20;
  double cut_probability = 1e-6;  // x_cut is the (1 - cut_probability)-quantile of F
  double tolerance = 1e-6;
};

struct CfResult {
  std::complex<double> value;
  double error_estimate = 0.0;  // Richardson estimate plus analytic tail bound
  double tail_bound = 0.0;
  int panels = 0;
};

/// Stationary characteristic function exp(int_0^inf (e^{itx}-1) k(x)/x dx).
CfResult true_cf_detailed(const CppOuModel& model, double t, const QuadratureSpec& quad = {});
std::complex<double> true_cf(const CppOuModel& model, double t, const QuadratureSpec& quad = {});

/// Density of U * exp(-lambda * s), s ~ Uniform(0, t):
/// g(x; lambda t) = (F(e^{lambda t} x) - F(x)) / (lambda t x).
double g_density(const CppOuModel& model, double x, double t);
/// Distribution function of g, (1/a) int_0^a F(u e^s) ds with a = lambda t.
double g_cdf(const CppOuModel& model, double u, double t);
/// f(0+) (e^{a} - 1) / a, the limit of g at the origin.
double g_density_at_zero(const CppOuModel& model, double t);

/// Number of terms needed so the Poisson(mean) tail beyond them is below tol.
int poisson_terms_for(double mean, double tol);
/// P(N > terms) for N ~ Poisson(mean).
double poisson_tail(double mean, int terms);

struct TransitionOptions {
  int n_terms = 0;          // 0 selects the smallest count with tail < 1e-8
  double grid_step = 0.005;  // lattice step for the convolution powers of g
  double tolerance = 1e-6;  // maximal accepted Poisson truncation error
};

/// Transition law P_t(x0, .) of the process: an atom e^{-alpha lambda t} at
/// e^{-lambda t} x0 plus a Poisson mixture of convolution powers of g.
/// Built once for a support up to y_max and evaluated many times.
class TransitionLaw {
 public:
  TransitionLaw(const CppOuModel& model, double x0, double t, double y_max,
                const TransitionOptions& options = {});

  double cdf(double y) const;
  double atom_location() const noexcept { return shift_; }
  double atom_mass() const noexcept { return atom_; }
  int n_terms() const noexcept { return n_terms_; }
  /// Bound on the CDF error from truncating the Poisson series.
  double truncation_bound() const noexcept { return tail_; }
  /// Mass of g lost beyond the lattice.
  double lattice_mass_error() const noexcept { return mass_error_; }

 private:
  double shift_ = 0.0;
  double atom_ = 0.0;
  double step_ = 0.0;
  double tail_ = 0.0;
  double mass_error_ = 0.0;
  int n_terms_ = 0;
  std::vector<double> cumulative_;  // continuous part on the lattice u_m = m * step
};

double transition_cdf(const CppOuModel& model, double x0, double t, double y, int n_terms,
                      double tolerance = 1e-6);

}  // namespace cppou
