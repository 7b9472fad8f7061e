#include "cppou/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cppou/error.hpp"
#include "phase_sweep.hpp"

namespace cppou {

using cd = std::complex<double>;

FlatTopKernel::FlatTopKernel(double b, double c) : b_(b), c_(c) {
  if (!(b > 0.0) || !std::isfinite(b)) throw ConfigError("spectral.kernel.b", "must be positive");
  if (!(c > 0.0 && c < 1.0)) throw ConfigError("spectral.kernel.c", "must lie in (0, 1)");
}

double FlatTopKernel::operator()(double u) const noexcept {
  const double a = std::abs(u);
  if (a <= c_) return 1.0;
  if (a >= 1.0) return 0.0;
  const double inner = std::exp(-b_ / ((a - c_) * (a - c_)));
  return std::exp(-b_ * inner / ((a - 1.0) * (a - 1.0)));
}

double phi_w(const FlatTopKernel& kernel, double u) { return kernel(u); }

std::vector<std::string> SpectralConfig::validate() const {
  if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("spectral.h", "must be positive");
  if (!(theta > 0.0)) throw ConfigError("spectral.theta", "must be positive");
  if (quad_panels < kMinQuadPanels) {
    throw ConfigError("spectral.quad_panels",
                      "must be at least " + std::to_string(kMinQuadPanels));
  }
  if (design_points.empty()) throw ConfigError("spectral.grid", "needs at least one design point");
  for (std::size_t i = 0; i < design_points.size(); ++i) {
    if (!(design_points[i] > 0.0)) throw ConfigError("spectral.grid", "design points must be positive");
    if (i > 0 && !(design_points[i] > design_points[i - 1])) {
      throw ConfigError("spectral.grid", "design points must be strictly increasing");
    }
  }
  std::vector<std::string> warnings;
  double min_gap = INFINITY;
  for (std::size_t i = 1; i < design_points.size(); ++i) {
    min_gap = std::min(min_gap, design_points[i] - design_points[i - 1]);
  }
  if (min_gap <= h) {
    warnings.push_back("design points closer than the bandwidth (min spacing " +
                       std::to_string(min_gap) + " <= h = " + std::to_string(h) +
                       "); estimates at neighbouring points are correlated");
  }
  return warnings;
}

double default_theta(std::size_t n, double c_theta) {
  if (n < 2) return c_theta;
  const double l = std::log(static_cast<double>(n));
  return c_theta * std::sqrt(static_cast<double>(n)) / (l * l * l);
}

std::vector<double> make_grid(double start, double step, std::size_t count) {
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i) g[i] = start + step * static_cast<double>(i);
  return g;
}

std::complex<double> ecf(std::span<const double> sample, double t) {
  if (sample.empty()) throw DomainError("empirical characteristic function of an empty sample");
  double re = 0.0;
  double im = 0.0;
  for (double x : sample) {
    re += std::cos(t * x);
    im += std::sin(t * x);
  }
  const double n = static_cast<double>(sample.size());
  return {re / n, im / n};
}

std::complex<double> ecf_deriv_trunc(std::span<const double> sample, double t, double theta) {
  if (sample.empty()) throw DomainError("empirical characteristic function of an empty sample");
  double re = 0.0;
  double im = 0.0;
  for (double x : sample) {
    if (std::abs(x) > theta) continue;
    re += x * std::cos(t * x);
    im += x * std::sin(t * x);
  }
  const double n = static_cast<double>(sample.size());
  // i * (re + i im) / n
  return {-im / n, re / n};
}

std::complex<double> clamp_modulus(std::complex<double> z, double floor) {
  const double r = std::abs(z);
  if (r >= floor) return z;
  if (r == 0.0) return {floor, 0.0};
  return z * (floor / r);
}

EcfCache::EcfCache(std::span<const double> sample, double h, double theta, std::size_t panels)
    : sample_(sample.begin(), sample.end()), h_(h), theta_(theta), panels_(panels) {
  if (sample_.empty()) throw DomainError("empirical characteristic function of an empty sample");
  if (!(h > 0.0)) throw ConfigError("spectral.h", "must be positive");
  if (!(theta > 0.0)) throw ConfigError("spectral.theta", "must be positive");
  if (panels < kMinQuadPanels) {
    throw ConfigError("spectral.quad_panels",
                      "must be at least " + std::to_string(kMinQuadPanels));
  }
  step_ = 1.0 / (h * static_cast<double>(panels));
  const double n = static_cast<double>(sample_.size());
  floor_ = 1.0 / std::sqrt(n);

  std::vector<double> weight(sample_.size());
  for (std::size_t j = 0; j < sample_.size(); ++j) {
    weight[j] = std::abs(sample_[j]) <= theta ? sample_[j] : 0.0;
  }
  phi_.resize(nodes());
  dphi_.resize(nodes());
  const std::size_t m = sample_.size();
  const double* w = weight.data();
  detail::sweep_phases(sample_, step_, nodes(), [&](std::size_t k, const double* c, const double* s) {
    double sc = 0.0, ss = 0.0, wc = 0.0, ws = 0.0;
#pragma omp simd reduction(+ : sc, ss, wc, ws)
    for (std::size_t j = 0; j < m; ++j) {
      sc += c[j];
      ss += s[j];
      wc += w[j] * c[j];
      ws += w[j] * s[j];
    }
    phi_[k] = {sc / n, ss / n};
    dphi_[k] = {-ws / n, wc / n};
  });
  phi_[0] = {1.0, 0.0};

  phi_clamped_.resize(nodes());
  for (std::size_t k = 0; k < nodes(); ++k) {
    phi_clamped_[k] = clamp_modulus(phi_[k], floor_);
    if (std::abs(phi_[k]) < floor_) ++clamped_;
  }
}

std::complex<double> psi_hat(const EcfCache& cache, double t) {
  const cd plus = cache.dphi_at(t) / clamp_modulus(cache.phi_at(t), cache.floor());
  const cd minus = cache.dphi_at(-t) / clamp_modulus(cache.phi_at(-t), cache.floor());
  return plus + minus;
}

std::complex<double> psi_hat_literal(const EcfCache& cache, double t) {
  const cd phi_p = cache.phi_at(t);
  const cd phi_m = cache.phi_at(-t);
  const cd d_p = cache.dphi_at(t);
  const cd d_m = cache.dphi_at(-t);
  const cd sharp = phi_p / phi_m;
  const cd dsharp = d_p / phi_m + d_m * phi_p / (phi_m * phi_m);
  return dsharp / sharp;
}

std::vector<double> psi_imag_on_grid(const EcfCache& cache) {
  std::vector<double> out(cache.nodes());
  for (std::size_t k = 0; k < cache.nodes(); ++k) {
    out[k] = 2.0 * (cache.dphi()[k] / cache.phi_clamped()[k]).imag();
  }
  return out;
}

namespace {

double trapezoid_weight(std::size_t k, std::size_t last, double step) {
  return (k == 0 || k == last) ? 0.5 * step : step;
}

}  // namespace

std::vector<double> estimate_k_sharp(const EcfCache& cache, const FlatTopKernel& kernel,
                                     std::span<const double> x) {
  const auto im_psi = psi_imag_on_grid(cache);
  const std::size_t last = cache.panels();
  std::vector<double> coef(cache.nodes());
  for (std::size_t k = 0; k < cache.nodes(); ++k) {
    coef[k] = trapezoid_weight(k, last, cache.step()) * im_psi[k] * kernel(cache.node(k) * cache.h());
  }
  std::vector<double> out(x.size(), 0.0);
  for (std::size_t l = 0; l < x.size(); ++l) {
    double acc = 0.0;
    for (std::size_t k = 0; k < cache.nodes(); ++k) {
      if (coef[k] != 0.0) acc += coef[k] * std::cos(cache.node(k) * x[l]);
    }
    out[l] = acc / std::numbers::pi;
  }
  return out;
}

std::vector<double> estimate_k_sharp(std::span<const double> sample, const SpectralConfig& cfg) {
  cfg.validate();
  const EcfCache cache(sample, cfg.h, cfg.theta, cfg.quad_panels);
  return estimate_k_sharp(cache, cfg.kernel, cfg.design_points);
}

std::vector<std::complex<double>> estimate_k_sharp_complex(const EcfCache& cache,
                                                           const FlatTopKernel& kernel,
                                                           std::span<const double> x) {
  const std::size_t last = cache.panels();
  const double floor = cache.floor();
  std::vector<cd> out(x.size());
  // Mirrored half-grid: the origin carries two half-weights, one from each side.
  for (std::size_t l = 0; l < x.size(); ++l) {
    cd acc = 0.0;
    for (std::size_t k = 0; k < cache.nodes(); ++k) {
      const double t = cache.node(k);
      const double w = trapezoid_weight(k, last, cache.step()) * kernel(t * cache.h());
      if (w == 0.0) continue;
      const cd phi_p = cache.phi()[k];
      const cd phi_m = std::conj(phi_p);
      const cd d_p = cache.dphi()[k];
      const cd d_m = -std::conj(d_p);
      const cd psi_p = d_p / clamp_modulus(phi_p, floor) + d_m / clamp_modulus(phi_m, floor);
      const cd psi_m = d_m / clamp_modulus(phi_m, floor) + d_p / clamp_modulus(phi_p, floor);
      acc += w * std::polar(1.0, -t * x[l]) * psi_p;
      acc += w * std::polar(1.0, t * x[l]) * psi_m;
    }
    out[l] = cd(0.0, -1.0 / (2.0 * std::numbers::pi)) * acc;
  }
  return out;
}

std::vector<double> estimate_k_naive(const EcfCache& cache, const FlatTopKernel& kernel,
                                     std::span<const double> x) {
  const std::size_t last = cache.panels();
  std::vector<cd> coef(cache.nodes());
  for (std::size_t k = 0; k < cache.nodes(); ++k) {
    const double w = trapezoid_weight(k, last, cache.step()) * kernel(cache.node(k) * cache.h());
    coef[k] = w * (cache.dphi()[k] / cache.phi_clamped()[k]);
  }
  // Combining t and -t: e^{-itx} a(t) + e^{itx} a(-t) = 2i Im(e^{-itx} a(t)).
  std::vector<double> out(x.size(), 0.0);
  for (std::size_t l = 0; l < x.size(); ++l) {
    double acc = 0.0;
    for (std::size_t k = 0; k < cache.nodes(); ++k) {
      if (coef[k] == 0.0) continue;
      const double ph = cache.node(k) * x[l];
      acc += coef[k].imag() * std::cos(ph) - coef[k].real() * std::sin(ph);
    }
    out[l] = acc / std::numbers::pi;
  }
  return out;
}

std::vector<double> estimate_k_naive(std::span<const double> sample, const SpectralConfig& cfg) {
  cfg.validate();
  const EcfCache cache(sample, cfg.h, cfg.theta, cfg.quad_panels);
  return estimate_k_naive(cache, cfg.kernel, cfg.design_points);
}

KhatValue khat_n(const EcfCache& cache, const FlatTopKernel& kernel, double y) {
  const std::size_t last = cache.panels();
  const double h = cache.h();
  cd acc = 0.0;
  for (std::size_t k = 0; k < cache.nodes(); ++k) {
    const double s = cache.node(k);
    const double w = trapezoid_weight(k, last, cache.step()) * kernel(s * h);
    if (w == 0.0) continue;
    const cd inv_p = 1.0 / cache.phi_clamped()[k];
    const cd inv_m = 1.0 / std::conj(cache.phi_clamped()[k]);
    acc += w * std::polar(1.0, -s * h * y) * inv_p;
    acc += w * std::polar(1.0, s * h * y) * inv_m;
  }
  acc *= h / (2.0 * std::numbers::pi);
  return {acc.real(), acc.imag()};
}

std::vector<std::vector<double>> khat_n_matrix(const EcfCache& cache, const FlatTopKernel& kernel,
                                               std::span<const double> x) {
  const auto sample = cache.sample();
  const std::size_t n = sample.size();
  std::vector<std::size_t> kept;
  for (std::size_t j = 0; j < n; ++j) {
    if (std::abs(sample[j]) <= cache.theta()) kept.push_back(j);
  }
  // Phase arguments s_k * (x_l - X_j) for every (l, kept j).
  std::vector<double> diff;
  diff.reserve(x.size() * kept.size());
  for (double xl : x) {
    for (std::size_t j : kept) diff.push_back(xl - sample[j]);
  }
  const std::size_t last = cache.panels();
  const double h = cache.h();
  std::vector<double> a(cache.nodes()), b(cache.nodes());
  std::size_t active = 0;
  for (std::size_t k = 0; k < cache.nodes(); ++k) {
    const double w = trapezoid_weight(k, last, cache.step()) * kernel(cache.node(k) * h);
    const cd r = w / cache.phi_clamped()[k];
    a[k] = r.real();
    b[k] = r.imag();
    if (w != 0.0) active = k + 1;
  }
  std::vector<double> acc(diff.size(), 0.0);
  double* out = acc.data();
  const std::size_t m = diff.size();
  detail::sweep_phases(diff, cache.step(), active, [&](std::size_t k, const double* c, const double* s) {
    const double ak = a[k];
    const double bk = b[k];
#pragma omp simd
    for (std::size_t i = 0; i < m; ++i) out[i] += ak * c[i] + bk * s[i];
  });
  std::vector<std::vector<double>> result(x.size(), std::vector<double>(n, 0.0));
  const double scale = h / std::numbers::pi;
  for (std::size_t l = 0; l < x.size(); ++l) {
    for (std::size_t q = 0; q < kept.size(); ++q) {
      result[l][kept[q]] = scale * acc[l * kept.size() + q];
    }
  }
  return result;
}

}  // namespace cppou
