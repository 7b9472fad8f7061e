#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cppou/experiments.hpp"

namespace cppou {

struct GridSpec {
  double start = 1.0;
  double step = 0.2;
  std::size_t count = 11;
};

/// Resolved run configuration. Every field has the default of the reference
/// simulation design, so an empty config reproduces it.
struct RunConfig {
  CppOuModel model;

  std::size_t n = 500;
  double delta = 1.0;
  std::uint64_t seed = 20240501;
  std::optional<double> burn_in;  // unset: 50 / lambda

  std::optional<double> h;  // unset: run the selector
  double pilot = 1.0;
  int J = 20;
  double kappa = 1.5;
  std::optional<double> theta;
  double theta_c = 500.0;
  FlatTopKernel kernel;
  std::size_t quad_panels = 4096;
  GridSpec grid;

  std::vector<double> taus = {0.15, 0.05, 0.01};
  bool monotonize = false;

  StudyKind kind = StudyKind::normality;
  std::optional<std::size_t> replications;  // unset: per-kind default
  std::vector<double> points = {1.5, 2.0, 2.5};
  unsigned threads = 0;
  std::size_t large_n = 4000;
  double bias_h = 0.5;

  std::string format = "csv";
  std::string path = "out";

  std::vector<double> design_points() const { return make_grid(grid.start, grid.step, grid.count); }
  double burn_in_time() const { return burn_in ? *burn_in : default_burn_in(model); }
  double theta_for(std::size_t sample_size) const;
  std::size_t replications_or_default() const;
};

/// Strict: unknown keys and wrong types raise ConfigError naming the field.
RunConfig config_from_json(const nlohmann::json& j);
/// Complete canonical form (all keys, unset optionals as null).
nlohmann::json config_to_json(const RunConfig& cfg);

/// Applies "a.b.c=value" to a JSON document. The value is read as JSON when it
/// parses, otherwise as a string.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Reads the file (if any), applies overrides in order, validates.
RunConfig load_config(const std::optional<std::filesystem::path>& file,
                      const std::vector<std::string>& overrides);

/// FNV-1a over the canonical JSON, excluding keys that cannot change output
/// bytes (output.path, study.threads). 16 hex digits.
std::string config_hash(const RunConfig& cfg);
std::string model_hash(const CppOuModel& model);
std::string fnv1a_hex(std::string_view bytes);

SpectralConfig spectral_config(const RunConfig& cfg, std::size_t n, double h);
StudySpec study_spec(const RunConfig& cfg);

}  // namespace cppou
