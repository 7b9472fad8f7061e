#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace cppou {

/// Flat-top kernel given by its Fourier transform
///   phi_W(u) = 1                                       for |u| <= c
///            = exp(-b exp(-b / (|u| - c)^2) / (|u| - 1)^2)  for c < |u| < 1
///            = 0                                       for |u| >= 1.
class FlatTopKernel {
 public:
  FlatTopKernel() = default;
  FlatTopKernel(double b, double c);

  double b() const noexcept { return b_; }
  double c() const noexcept { return c_; }
  double operator()(double u) const noexcept;

 private:
  double b_ = 1.0;
  double c_ = 0.05;
};

double phi_w(const FlatTopKernel& kernel, double u);

inline constexpr std::size_t kMinQuadPanels = 256;

struct SpectralConfig {
  double h = 0.5;
  double theta = 0.0;  // truncation level; must be set (see default_theta)
  FlatTopKernel kernel;
  std::size_t quad_panels = 4096;
  std::vector<double> design_points;

  /// Throws ConfigError on invalid settings; returns soft warnings (spacing).
  std::vector<std::string> validate() const;
};

/// theta_n = c_theta * sqrt(n) / (log n)^3.
double default_theta(std::size_t n, double c_theta = 500.0);

/// Equally spaced design grid start + step * l, l = 0..count-1.
std::vector<double> make_grid(double start, double step, std::size_t count);

std::complex<double> ecf(std::span<const double> sample, double t);
/// (i/n) sum_j X_j e^{itX_j} 1{|X_j| <= theta}.
std::complex<double> ecf_deriv_trunc(std::span<const double> sample, double t, double theta);

/// Modulus clamp: values with |z| < floor are rescaled to modulus `floor`
/// keeping their phase.
std::complex<double> clamp_modulus(std::complex<double> z, double floor);

/// Empirical characteristic function and its truncated derivative on the
/// uniform grid t_k = k / (h * panels), k = 0..panels, plus the sample so
/// off-grid values can be evaluated directly. Immutable after construction.
class EcfCache {
 public:
  EcfCache(std::span<const double> sample, double h, double theta, std::size_t panels);

  std::size_t n() const noexcept { return sample_.size(); }
  double h() const noexcept { return h_; }
  double theta() const noexcept { return theta_; }
  std::size_t panels() const noexcept { return panels_; }
  std::size_t nodes() const noexcept { return panels_ + 1; }
  double step() const noexcept { return step_; }
  double node(std::size_t k) const noexcept { return k * step_; }
  /// Stabilization floor n^{-1/2} for divisions by the ECF.
  double floor() const noexcept { return floor_; }

  const std::vector<std::complex<double>>& phi() const noexcept { return phi_; }
  const std::vector<std::complex<double>>& dphi() const noexcept { return dphi_; }
  /// phi on the grid after the modulus clamp.
  const std::vector<std::complex<double>>& phi_clamped() const noexcept { return phi_clamped_; }
  std::size_t clamped_nodes() const noexcept { return clamped_; }
  double clamp_fraction() const noexcept {
    return static_cast<double>(clamped_) / static_cast<double>(nodes());
  }

  /// Direct evaluation at arbitrary t (no symmetry shortcuts).
  std::complex<double> phi_at(double t) const { return ecf(sample_, t); }
  std::complex<double> dphi_at(double t) const { return ecf_deriv_trunc(sample_, t, theta_); }

  std::span<const double> sample() const noexcept { return sample_; }

 private:
  std::vector<double> sample_;
  double h_;
  double theta_;
  std::size_t panels_;
  double step_;
  double floor_;
  std::size_t clamped_ = 0;
  std::vector<std::complex<double>> phi_;
  std::vector<std::complex<double>> dphi_;
  std::vector<std::complex<double>> phi_clamped_;
};

/// psi(t) = phi'_theta(t)/phi(t) + phi'_theta(-t)/phi(-t), evaluated directly at
/// +t and -t (clamped divisions). Purely imaginary and even in t.
std::complex<double> psi_hat(const EcfCache& cache, double t);
/// The unsimplified ratio phi'_sharp(t) / phi_sharp(t) with
///   phi_sharp = phi(t)/phi(-t),
///   phi'_sharp = phi'_theta(t)/phi(-t) + phi'_theta(-t) phi(t)/phi(-t)^2.
/// No clamping; for identity checks.
std::complex<double> psi_hat_literal(const EcfCache& cache, double t);
/// Im psi on the cached grid, 2 Im(phi'_theta / phi_clamped).
std::vector<double> psi_imag_on_grid(const EcfCache& cache);

/// Symmetrized spectral estimator, real cosine form
///   (1/pi) int_0^{1/h} cos(tx) Im psi(t) phi_W(th) dt.
std::vector<double> estimate_k_sharp(const EcfCache& cache, const FlatTopKernel& kernel,
                                     std::span<const double> x);
std::vector<double> estimate_k_sharp(std::span<const double> sample, const SpectralConfig& cfg);

/// Same estimator through the complex inversion
///   (-i/2pi) int_{-1/h}^{1/h} e^{-itx} psi(t) phi_W(th) dt
/// on the symmetric grid; the imaginary part is returned for diagnostics.
std::vector<std::complex<double>> estimate_k_sharp_complex(const EcfCache& cache,
                                                           const FlatTopKernel& kernel,
                                                           std::span<const double> x);

/// Unsymmetrized comparator based on phi'_theta(t)/phi(t) alone.
std::vector<double> estimate_k_naive(const EcfCache& cache, const FlatTopKernel& kernel,
                                     std::span<const double> x);
std::vector<double> estimate_k_naive(std::span<const double> sample, const SpectralConfig& cfg);

struct KhatValue {
  double value = 0.0;
  double imag_residue = 0.0;
};

/// K_n(y) = Re (1/2pi) int_{-1}^{1} e^{-ity} phi_W(t) / phi(t/h) dt with the
/// empirical (clamped) phi. The residue is the imaginary part of the full
/// symmetric sum.
KhatValue khat_n(const EcfCache& cache, const FlatTopKernel& kernel, double y);

/// K_n((x_l - X_j)/h) for every design point l (rows) and observation j
/// (columns, only those with |X_j| <= theta; others are zero).
std::vector<std::vector<double>> khat_n_matrix(const EcfCache& cache, const FlatTopKernel& kernel,
                                               std::span<const double> x);

}  // namespace cppou
