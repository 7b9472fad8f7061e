#include "cppou/inference.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <boost/math/distributions/normal.hpp>

#include "cppou/error.hpp"

namespace cppou {

std::vector<double> variance_hat(const EcfCache& cache, const FlatTopKernel& kernel,
                                 std::span<const double> x) {
  const auto kmat = khat_n_matrix(cache, kernel, x);
  const auto sample = cache.sample();
  const double n = static_cast<double>(sample.size());
  std::vector<double> out(x.size());
  for (std::size_t l = 0; l < x.size(); ++l) {
    // mean(V^2) - mean(V)^2, accumulated around the mean to avoid cancellation.
    double s1 = 0.0;
    for (std::size_t j = 0; j < sample.size(); ++j) s1 += sample[j] * kmat[l][j];  // zero where truncated
    const double m1 = s1 / n;
    double s2 = 0.0;
    for (std::size_t j = 0; j < sample.size(); ++j) {
      const double c = sample[j] * kmat[l][j] - m1;
      s2 += c * c;
    }
    out[l] = s2 / n;
  }
  return out;
}

double variance_hat(std::span<const double> sample, const SpectralConfig& cfg, double x) {
  const EcfCache cache(sample, cfg.h, cfg.theta, cfg.quad_panels);
  const double pt[] = {x};
  return variance_hat(cache, cfg.kernel, pt).front();
}

KEstimate estimate(const EcfCache& cache, const FlatTopKernel& kernel, std::span<const double> x) {
  KEstimate est;
  est.x.assign(x.begin(), x.end());
  est.n = cache.n();
  est.h = cache.h();
  est.theta = cache.theta();
  est.khat = estimate_k_sharp(cache, kernel, x);
  const auto var = variance_hat(cache, kernel, x);
  est.sigma_hat.resize(var.size());
  std::transform(var.begin(), var.end(), est.sigma_hat.begin(), [](double v) { return std::sqrt(v); });

  auto& d = est.diagnostics;
  d.clamped_nodes = cache.clamped_nodes();
  d.total_nodes = cache.nodes();
  d.clamp_fraction = cache.clamp_fraction();
  double centre = 0.0;
  for (double v : cache.sample()) centre += v;
  centre /= static_cast<double>(cache.n());
  for (double xl : x) {
    const auto kv = khat_n(cache, kernel, (xl - centre) / cache.h());
    d.max_imag_residue = std::max(d.max_imag_residue, std::abs(kv.imag_residue));
  }
  est.unreliable = d.clamp_fraction >= kUnreliableClampFraction;
  if (est.unreliable) {
    d.warnings.push_back("ECF clamped at " + std::to_string(d.clamped_nodes) + " of " +
                         std::to_string(d.total_nodes) + " quadrature nodes; bands unreliable");
  }
  return est;
}

KEstimate estimate(std::span<const double> sample, const SpectralConfig& cfg) {
  auto warnings = cfg.validate();
  const EcfCache cache(sample, cfg.h, cfg.theta, cfg.quad_panels);
  KEstimate est = estimate(cache, cfg.kernel, cfg.design_points);
  warnings.insert(warnings.end(), est.diagnostics.warnings.begin(), est.diagnostics.warnings.end());
  est.diagnostics.warnings = std::move(warnings);
  return est;
}

double quantile_max_abs_normal(std::size_t N, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw DomainError("tau must lie in (0, 1)");
  if (N < 1) throw DomainError("N must be at least 1");
  // P(|xi| > q) = 1 - (1 - tau)^{1/N}, computed without cancellation.
  const double exceed = -std::expm1(std::log1p(-tau) / static_cast<double>(N));
  const boost::math::normal_distribution<double> std_normal;
  return boost::math::quantile(boost::math::complement(std_normal, 0.5 * exceed));
}

ConfidenceBand confidence_band(const KEstimate& est, double tau) {
  if (est.khat.size() != est.x.size() || est.sigma_hat.size() != est.x.size()) {
    throw DomainError("estimate has inconsistent lengths");
  }
  ConfidenceBand band;
  band.tau = tau;
  band.q = quantile_max_abs_normal(est.x.size(), tau);
  band.x = est.x;
  band.unreliable = est.unreliable;
  const double scale = band.q / (std::sqrt(static_cast<double>(est.n)) * est.h);
  band.lower.resize(est.x.size());
  band.upper.resize(est.x.size());
  for (std::size_t l = 0; l < est.x.size(); ++l) {
    const double half = scale * est.sigma_hat[l];
    band.lower[l] = est.khat[l] - half;
    band.upper[l] = est.khat[l] + half;
  }
  return band;
}

std::vector<double> decreasing_rearrangement(std::vector<double> values) {
  std::sort(values.begin(), values.end(), std::greater<>());
  return values;
}

ConfidenceBand monotonize(ConfidenceBand band) {
  band.lower = decreasing_rearrangement(std::move(band.lower));
  band.upper = decreasing_rearrangement(std::move(band.upper));
  band.monotonized = true;
  return band;
}

KEstimate monotonize(KEstimate est) {
  est.khat = decreasing_rearrangement(std::move(est.khat));
  return est;
}

std::size_t select_from_distances(std::span<const double> distances, double kappa, bool* fallback) {
  if (distances.empty()) throw DomainError("bandwidth selection needs at least two candidates");
  const auto min_it = std::min_element(distances.begin(), distances.end());
  const double threshold = kappa * *min_it;
  for (std::size_t i = 0; i < distances.size(); ++i) {
    if (distances[i] < threshold) {
      if (fallback) *fallback = false;
      return i;
    }
  }
  if (fallback) *fallback = true;
  return static_cast<std::size_t>(min_it - distances.begin());
}

BandwidthSelection select_bandwidth(std::span<const double> sample, const SpectralConfig& base,
                                    double pilot, int J, double kappa) {
  if (J < 2) throw ConfigError("spectral.selector.J", "must be at least 2");
  if (!(kappa > 1.0)) throw ConfigError("spectral.selector.kappa", "must exceed 1");
  if (!(pilot > 0.0)) throw ConfigError("spectral.selector.pilot", "must be positive");
  BandwidthSelection sel;
  sel.pilot = pilot;
  sel.J = J;
  sel.kappa = kappa;
  sel.candidates.resize(J);
  sel.estimates.resize(J);
  for (int j = 1; j <= J; ++j) sel.candidates[j - 1] = j * pilot / J;
  for (int j = 0; j < J; ++j) {
    const EcfCache cache(sample, sel.candidates[j], base.theta, base.quad_panels);
    sel.estimates[j] = estimate_k_sharp(cache, base.kernel, base.design_points);
  }
  sel.distances.resize(J - 1);
  for (int j = 1; j < J; ++j) {
    double d = 0.0;
    for (std::size_t l = 0; l < base.design_points.size(); ++l) {
      d = std::max(d, std::abs(sel.estimates[j][l] - sel.estimates[j - 1][l]));
    }
    sel.distances[j - 1] = d;
  }
  const std::size_t pick = select_from_distances(sel.distances, kappa, &sel.fallback);
  sel.chosen_index = pick + 1;
  sel.chosen = sel.candidates[sel.chosen_index];
  return sel;
}

std::vector<std::optional<double>> studentized_stats(const KEstimate& est,
                                                     std::span<const double> truth) {
  if (truth.size() != est.khat.size()) throw DomainError("truth length differs from estimate");
  std::vector<std::optional<double>> out(truth.size());
  const double scale = std::sqrt(static_cast<double>(est.n)) * est.h;
  for (std::size_t l = 0; l < truth.size(); ++l) {
    if (est.sigma_hat[l] > 0.0) out[l] = scale * (est.khat[l] - truth[l]) / est.sigma_hat[l];
  }
  return out;
}

}  // namespace cppou
