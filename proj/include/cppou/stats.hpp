#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace cppou::stats {

double mean(std::span<const double> v);
/// Sample standard deviation (n - 1 denominator); empty for fewer than 2 values.
std::optional<double> sd(std::span<const double> v);
double median(std::vector<double> v);
/// Empirical quantile by linear interpolation between order statistics.
double quantile(std::vector<double> v, double p);

double normal_cdf(double z);

/// Kolmogorov distance sup |F_n - F| for a continuous reference F.
double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf);
/// Kolmogorov distance when F may have atoms: both F(y) and F(y-) are needed
/// at each sample point; `left_cdf` gives F(y-).
double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf,
                   const std::function<double(double)>& left_cdf);
double ks_distance_normal(std::span<const double> sample);

/// Two-sample Kolmogorov-Smirnov statistic and asymptotic p-value.
struct TwoSampleKs {
  double statistic = 0.0;
  double p_value = 1.0;
};
TwoSampleKs ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Survival function of the Kolmogorov distribution, P(K > x).
double kolmogorov_survival(double x);

}  // namespace cppou::stats
