#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "cppou/model.hpp"
#include "cppou/rng.hpp"

namespace cppou {

struct PathConfig {
  std::size_t n = 500;
  double delta = 1.0;
  double burn_in_time = 0.0;
  std::uint64_t seed = 0;
  double x0 = 0.0;

  void validate() const;
};

/// Discrete observations X_delta, ..., X_{n delta}.
struct SamplePath {
  double delta = 1.0;
  std::uint64_t seed = 0;
  std::vector<double> values;
  /// Retained transitions (between consecutive observations) without arrivals.
  std::size_t jump_free_steps = 0;

  std::size_t size() const noexcept { return values.size(); }
};

/// Exact one-interval transition of the process over a step of length dt.
///
/// Arrivals on the physical clock occur at rate alpha * lambda; given their
/// count the epochs are iid uniform on the interval.
class OuStepper {
 public:
  OuStepper(const CppOuModel& model, double dt);

  /// Same as the exact stepper but with the decay factor multiplied by
  /// `scale`. Only meaningful for mutation testing of oracles.
  static OuStepper with_decay_scale(const CppOuModel& model, double dt, double scale);

  double advance(double x, Engine& rng, unsigned* arrivals = nullptr) const;
  double decay() const noexcept { return decay_; }
  double dt() const noexcept { return dt_; }

 private:
  CppOuModel model_;
  double dt_;
  double decay_;
  double arrival_mean_;
};

SamplePath simulate_path(const CppOuModel& model, const PathConfig& cfg);

/// Burn-in length used by stationary_sample.
double default_burn_in(const CppOuModel& model);

/// Path started at the stationary mean, warmed up for 50 / lambda time units.
SamplePath stationary_sample(const CppOuModel& model, std::size_t n, double delta,
                             std::uint64_t seed);

/// `count` independent draws of X_t given X_0 = x0 (one step each).
std::vector<double> one_step_draws(const OuStepper& stepper, double x0, std::size_t count,
                                   std::uint64_t seed);

/// CSV with '#'-prefixed key=value header (delta, seed, model_hash) then one
/// value per line.
void write_path_csv(std::ostream& out, const SamplePath& path, std::string_view model_hash);
SamplePath read_path_csv(std::istream& in);

}  // namespace cppou
