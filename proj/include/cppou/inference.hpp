#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cppou/spectral.hpp"

namespace cppou {

struct EstimateDiagnostics {
  std::size_t clamped_nodes = 0;
  std::size_t total_nodes = 0;
  double clamp_fraction = 0.0;
  double max_imag_residue = 0.0;  // largest |Im| of the K_n inversions probed
  std::vector<std::string> warnings;
};

/// Spectral estimate at the design points with its studentization data.
struct KEstimate {
  std::vector<double> x;
  std::vector<double> khat;
  std::vector<double> sigma_hat;
  std::size_t n = 0;
  double h = 0.0;
  double theta = 0.0;
  bool unreliable = false;  // clamp fraction at or above kUnreliableClampFraction
  EstimateDiagnostics diagnostics;
};

inline constexpr double kUnreliableClampFraction = 0.05;

/// sigma^2(x) = mean(V_j^2) - mean(V_j)^2 with
/// V_j = X_j 1{|X_j| <= theta} K_n((x - X_j)/h); clamped at 0.
std::vector<double> variance_hat(const EcfCache& cache, const FlatTopKernel& kernel,
                                 std::span<const double> x);
double variance_hat(std::span<const double> sample, const SpectralConfig& cfg, double x);

KEstimate estimate(const EcfCache& cache, const FlatTopKernel& kernel, std::span<const double> x);
KEstimate estimate(std::span<const double> sample, const SpectralConfig& cfg);

/// q with P(max_{j<=N} |xi_j| > q) = tau for iid standard normals:
/// q = Phi^{-1}((1 + (1 - tau)^{1/N}) / 2).
double quantile_max_abs_normal(std::size_t N, double tau);

struct ConfidenceBand {
  double tau = 0.05;
  double q = 0.0;
  std::vector<double> x;
  std::vector<double> lower;
  std::vector<double> upper;
  bool monotonized = false;
  bool unreliable = false;
};

/// Simultaneous intervals khat -/+ q_tau sigma_hat / (sqrt(n) h).
ConfidenceBand confidence_band(const KEstimate& est, double tau);

/// Decreasing rearrangement (values sorted in nonincreasing order).
std::vector<double> decreasing_rearrangement(std::vector<double> values);
ConfidenceBand monotonize(ConfidenceBand band);
KEstimate monotonize(KEstimate est);

struct BandwidthSelection {
  double pilot = 1.0;
  int J = 20;
  double kappa = 1.5;
  std::vector<double> candidates;              // h_j = j * pilot / J, j = 1..J
  std::vector<double> distances;               // d_j for j = 2..J
  std::vector<std::vector<double>> estimates;  // khat for each candidate
  std::size_t chosen_index = 1;                // index into candidates
  double chosen = 0.0;
  bool fallback = false;  // argmin used because no distance was strictly below threshold
};

/// Index into `distances` (0 means j = 2) of the smallest j whose distance is
/// strictly below kappa * min distance; falls back to the first argmin.
std::size_t select_from_distances(std::span<const double> distances, double kappa,
                                  bool* fallback = nullptr);

BandwidthSelection select_bandwidth(std::span<const double> sample, const SpectralConfig& base,
                                    double pilot, int J, double kappa);

/// sqrt(n) h (khat - k) / sigma_hat per point; empty where sigma_hat is 0.
std::vector<std::optional<double>> studentized_stats(const KEstimate& est,
                                                     std::span<const double> truth);

}  // namespace cppou
