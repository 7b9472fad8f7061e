#include "cppou/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/gamma.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/random/exponential_distribution.hpp>
#include <boost/random/gamma_distribution.hpp>

#include "cppou/error.hpp"

namespace cppou {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

JumpDistribution JumpDistribution::exponential(double rate) {
  if (!positive_finite(rate)) throw ConfigError("jump.rate", "must be a positive finite number");
  return JumpDistribution(ExponentialJumps{rate});
}

JumpDistribution JumpDistribution::gamma(double shape, double rate) {
  if (!positive_finite(shape)) throw ConfigError("jump.shape", "must be a positive finite number");
  if (!positive_finite(rate)) throw ConfigError("jump.rate", "must be a positive finite number");
  return JumpDistribution(GammaJumps{shape, rate});
}

double JumpDistribution::sample(Engine& rng) const {
  return std::visit(Overloaded{
                        [&](const ExponentialJumps& e) {
                          return boost::random::exponential_distribution<double>(e.rate)(rng);
                        },
                        [&](const GammaJumps& g) {
                          return boost::random::gamma_distribution<double>(g.shape,
                                                                           1.0 / g.rate)(rng);
                        },
                    },
                    params_);
}

double JumpDistribution::cdf(double x) const {
  if (!(x > 0.0)) return 0.0;
  if (std::isinf(x)) return 1.0;
  return std::visit(Overloaded{
                        [&](const ExponentialJumps& e) { return -std::expm1(-e.rate * x); },
                        [&](const GammaJumps& g) { return boost::math::gamma_p(g.shape, g.rate * x); },
                    },
                    params_);
}

double JumpDistribution::survival(double x) const {
  if (!(x > 0.0)) return 1.0;
  if (std::isinf(x)) return 0.0;
  return std::visit(Overloaded{
                        [&](const ExponentialJumps& e) { return std::exp(-e.rate * x); },
                        [&](const GammaJumps& g) { return boost::math::gamma_q(g.shape, g.rate * x); },
                    },
                    params_);
}

double JumpDistribution::density(double x) const {
  if (x < 0.0 || std::isinf(x)) return 0.0;
  return std::visit(Overloaded{
                        [&](const ExponentialJumps& e) { return e.rate * std::exp(-e.rate * x); },
                        [&](const GammaJumps& g) {
                          if (x == 0.0) {
                            if (g.shape < 1.0) return std::numeric_limits<double>::infinity();
                            return g.shape == 1.0 ? g.rate : 0.0;
                          }
                          return g.rate * boost::math::gamma_p_derivative(g.shape, g.rate * x);
                        },
                    },
                    params_);
}

double JumpDistribution::quantile(double p) const {
  if (!(p >= 0.0 && p < 1.0)) throw DomainError("jump quantile requires p in [0, 1)");
  return std::visit(Overloaded{
                        [&](const ExponentialJumps& e) { return -std::log1p(-p) / e.rate; },
                        [&](const GammaJumps& g) {
                          return boost::math::gamma_p_inv(g.shape, p) / g.rate;
                        },
                    },
                    params_);
}

double JumpDistribution::mean() const {
  return std::visit(Overloaded{
                        [](const ExponentialJumps& e) { return 1.0 / e.rate; },
                        [](const GammaJumps& g) { return g.shape / g.rate; },
                    },
                    params_);
}

double JumpDistribution::excess_mean(double c) const {
  if (c <= 0.0) return mean() - c;
  return std::visit(Overloaded{
                        [&](const ExponentialJumps& e) { return std::exp(-e.rate * c) / e.rate; },
                        [&](const GammaJumps& g) {
                          const double z = g.rate * c;
                          return (g.shape / g.rate) * boost::math::gamma_q(g.shape + 1.0, z) -
                                 c * boost::math::gamma_q(g.shape, z);
                        },
                    },
                    params_);
}

std::string_view JumpDistribution::kind() const {
  return std::holds_alternative<ExponentialJumps>(params_) ? "exponential" : "gamma";
}

std::vector<std::string> CppOuModel::validate() const {
  if (!positive_finite(lambda)) throw ConfigError("lambda", "must be a positive finite number");
  if (!positive_finite(alpha)) throw ConfigError("alpha", "must be a positive finite number");
  std::vector<std::string> warnings;
  if (alpha <= 2.0) {
    warnings.emplace_back(
        "alpha <= 2: the k-function inference assumes a Poisson intensity above 2; "
        "bands may be unreliable");
  }
  return warnings;
}

double true_k(const CppOuModel& model, double x) {
  if (!(x >= 0.0)) throw DomainError("true_k requires x >= 0");
  return model.alpha * model.jump.survival(x);
}

namespace {

// int_0^cut (e^{itx} - 1) S(x)/x dx by composite Simpson on `panels` panels.
std::complex<double> cf_exponent_simpson(const CppOuModel& model, double t, double cut,
                                         int panels) {
  const double step = cut / panels;
  auto integrand = [&](double x) -> std::complex<double> {
    if (x == 0.0) return {0.0, t};
    const double half = std::sin(0.5 * t * x);
    const double s = model.jump.survival(x) / x;
    return {-2.0 * half * half * s, std::sin(t * x) * s};
  };
  std::complex<double> acc = integrand(0.0) + integrand(cut);
  for (int i = 1; i < panels; ++i) {
    acc += (i % 2 == 1 ? 4.0 : 2.0) * integrand(i * step);
  }
  return acc * (step / 3.0);
}

}  // namespace

CfResult true_cf_detailed(const CppOuModel& model, double t, const QuadratureSpec& quad) {
  if (quad.panels < 2 || quad.panels % 2 != 0) {
    throw ConfigError("quadrature.panels", "must be a positive even integer");
  }
  if (!(quad.cut_probability > 0.0 && quad.cut_probability < 1.0)) {
    throw ConfigError("quadrature.cut_probability", "must lie in (0, 1)");
  }
  CfResult out;
  if (t == 0.0) {
    out.value = {1.0, 0.0};
    return out;
  }
  const double cut = model.jump.quantile(1.0 - quad.cut_probability);
  // |e^{itx} - 1| <= 2 and 1/x <= 1/cut on the tail.
  out.tail_bound = 2.0 * model.alpha * model.jump.excess_mean(cut) / cut;

  int panels = quad.panels;
  std::complex<double> coarse = cf_exponent_simpson(model, t, cut, panels / 2);
  std::complex<double> fine = cf_exponent_simpson(model, t, cut, panels);
  double err = std::abs(fine - coarse) / 15.0;
  while (model.alpha * err + out.tail_bound > quad.tolerance && panels < quad.max_panels) {
    panels *= 2;
    coarse = fine;
    fine = cf_exponent_simpson(model, t, cut, panels);
    err = std::abs(fine - coarse) / 15.0;
  }
  out.panels = panels;
  out.error_estimate = model.alpha * err + out.tail_bound;
  if (out.error_estimate > quad.tolerance) {
    throw NumericalError("true_cf quadrature did not converge at t=" + std::to_string(t),
                         out.error_estimate, quad.tolerance);
  }
  out.value = std::exp(model.alpha * fine);
  return out;
}

std::complex<double> true_cf(const CppOuModel& model, double t, const QuadratureSpec& quad) {
  return true_cf_detailed(model, t, quad).value;
}

double g_density(const CppOuModel& model, double x, double t) {
  if (!(x > 0.0)) throw DomainError("g_density requires x > 0");
  if (!(t > 0.0)) throw DomainError("g_density requires t > 0");
  const double a = model.lambda * t;
  const double diff = model.jump.cdf(std::exp(a) * x) - model.jump.cdf(x);
  return std::max(diff, 0.0) / (a * x);
}

double g_density_at_zero(const CppOuModel& model, double t) {
  if (!(t > 0.0)) throw DomainError("g_density_at_zero requires t > 0");
  const double a = model.lambda * t;
  return model.jump.density(0.0) * std::expm1(a) / a;
}

double g_cdf(const CppOuModel& model, double u, double t) {
  if (!(t > 0.0)) throw DomainError("g_cdf requires t > 0");
  if (!(u > 0.0)) return 0.0;
  if (std::isinf(u)) return 1.0;
  const double a = model.lambda * t;
  const int pieces = std::max(1, static_cast<int>(std::ceil(a / 0.25)));
  const double width = a / pieces;
  double acc = 0.0;
  for (int p = 0; p < pieces; ++p) {
    const double lo = p * width;
    acc += boost::math::quadrature::gauss<double, 20>::integrate(
        [&](double s) { return model.jump.cdf(u * std::exp(s)); }, lo, lo + width);
  }
  return std::clamp(acc / a, 0.0, 1.0);
}

double poisson_tail(double mean, int terms) {
  if (terms < 0) return 1.0;
  // 1 - P(N <= terms) = P(terms + 1, mean) (regularized lower gamma).
  return boost::math::gamma_p(static_cast<double>(terms) + 1.0, mean);
}

int poisson_terms_for(double mean, double tol) {
  int terms = 1;
  while (poisson_tail(mean, terms) >= tol) ++terms;
  return terms;
}

TransitionLaw::TransitionLaw(const CppOuModel& model, double x0, double t, double y_max,
                             const TransitionOptions& options) {
  model.validate();
  if (!(t > 0.0)) throw DomainError("transition law requires t > 0");
  if (!(x0 >= 0.0)) throw DomainError("transition law requires x0 >= 0");
  if (!(options.grid_step > 0.0)) throw ConfigError("grid_step", "must be positive");

  const double a = model.lambda * t;
  const double mean_count = model.alpha * a;
  shift_ = std::exp(-a) * x0;
  atom_ = std::exp(-mean_count);
  step_ = options.grid_step;
  n_terms_ = options.n_terms > 0 ? options.n_terms : poisson_terms_for(mean_count, 1e-8);
  tail_ = poisson_tail(mean_count, n_terms_);
  if (tail_ > options.tolerance) {
    throw NumericalError("transition series truncated with " + std::to_string(n_terms_) +
                             " terms; Poisson tail bound",
                         tail_, options.tolerance);
  }

  // Beyond z_cap the series mass is complete up to 1e-12, using
  // P(S_n > z) <= n P(U > z / n) since each summand is bounded by a jump.
  auto beyond = [&](double z) {
    double acc = 0.0;
    double w = atom_;
    for (int n = 1; n <= n_terms_; ++n) {
      w *= mean_count / n;
      acc += w * n * model.jump.survival(z / n);
    }
    return acc;
  };
  double z_cap = model.jump.mean();
  while (beyond(z_cap) > 1e-12) z_cap *= 1.25;
  const double span = std::min(std::max(y_max - shift_, 0.0), z_cap);
  const auto cells = static_cast<std::size_t>(std::ceil(span / step_)) + 2;
  if (span == z_cap) tail_ += beyond(z_cap);

  // Exact cell masses of g, located at cell midpoints.
  std::vector<double> mass(cells);
  double prev = 0.0;
  for (std::size_t k = 0; k < cells; ++k) {
    const double next = g_cdf(model, (k + 1) * step_, t);
    mass[k] = std::max(next - prev, 0.0);
    prev = next;
  }
  mass_error_ = 1.0 - prev;

  // Poisson weights w_n for n = 1..n_terms.
  std::vector<double> weight(n_terms_ + 1);
  weight[0] = atom_;
  for (int n = 1; n <= n_terms_; ++n) weight[n] = weight[n - 1] * mean_count / n;

  // The n-fold lattice sum sits at (m + n/2) * step; its cumulative Q_n[m] is
  // attributed to (m + (n+1)/2) * step, which is exact for n = 1.
  cumulative_.assign(cells, 0.0);
  std::vector<double> power = mass;
  std::vector<double> scratch(cells);
  auto interp_cumulative = [&](const std::vector<double>& q_cum, double r) {
    if (r <= -1.0) return 0.0;
    if (r < 0.0) return (r + 1.0) * q_cum[0];
    const auto lo = static_cast<std::size_t>(r);
    if (lo + 1 >= q_cum.size()) return q_cum.back();
    const double frac = r - lo;
    return q_cum[lo] + frac * (q_cum[lo + 1] - q_cum[lo]);
  };
  std::vector<double> q_cum(cells);
  for (int n = 1; n <= n_terms_; ++n) {
    if (n > 1) {
      for (std::size_t m = 0; m < cells; ++m) {
        double acc = 0.0;
        for (std::size_t i = 0; i <= m; ++i) acc += power[i] * mass[m - i];
        scratch[m] = acc;
      }
      power.swap(scratch);
    }
    double run = 0.0;
    for (std::size_t m = 0; m < cells; ++m) {
      run += power[m];
      q_cum[m] = run;
    }
    const double offset = 0.5 * (n + 1);
    for (std::size_t p = 0; p < cells; ++p) {
      cumulative_[p] += weight[n] * interp_cumulative(q_cum, static_cast<double>(p) - offset);
    }
  }
}

double TransitionLaw::cdf(double y) const {
  if (y < shift_) return 0.0;
  const double z = (y - shift_) / step_;
  if (z == 0.0) return atom_;
  const auto lo = static_cast<std::size_t>(z);
  if (lo + 1 >= cumulative_.size()) return std::min(1.0, atom_ + cumulative_.back());
  const double frac = z - lo;
  const double cont = cumulative_[lo] + frac * (cumulative_[lo + 1] - cumulative_[lo]);
  return std::min(1.0, atom_ + cont);
}

double transition_cdf(const CppOuModel& model, double x0, double t, double y, int n_terms,
                      double tolerance) {
  if (n_terms < 1) throw ConfigError("n_terms", "must be a positive integer");
  TransitionOptions options;
  options.n_terms = n_terms;
  options.tolerance = tolerance;
  const TransitionLaw law(model, x0, t, y, options);
  return law.cdf(y);
}

}  // namespace cppou
