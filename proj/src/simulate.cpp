#include "cppou/simulate.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <boost/random/poisson_distribution.hpp>
#include <boost/random/uniform_01.hpp>

#include "cppou/error.hpp"
#include "cppou/numfmt.hpp"

namespace cppou {

void PathConfig::validate() const {
  if (n < 1) throw ConfigError("sampling.n", "must be at least 1");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw ConfigError("sampling.delta", "must be positive");
  if (!(burn_in_time >= 0.0) || !std::isfinite(burn_in_time)) {
    throw ConfigError("sampling.burn_in", "must be nonnegative");
  }
  if (!(x0 >= 0.0) || !std::isfinite(x0)) throw ConfigError("sampling.x0", "must be nonnegative");
}

OuStepper::OuStepper(const CppOuModel& model, double dt)
    : model_(model),
      dt_(dt),
      decay_(std::exp(-model.lambda * dt)),
      arrival_mean_(model.alpha * model.lambda * dt) {
  if (!(dt > 0.0)) throw DomainError("step length must be positive");
}

OuStepper OuStepper::with_decay_scale(const CppOuModel& model, double dt, double scale) {
  OuStepper s(model, dt);
  s.decay_ *= scale;
  return s;
}

double OuStepper::advance(double x, Engine& rng, unsigned* arrivals) const {
  boost::random::poisson_distribution<unsigned, double> count(arrival_mean_);
  boost::random::uniform_01<double> unif;
  const unsigned m = count(rng);
  double next = decay_ * x;
  for (unsigned i = 0; i < m; ++i) {
    const double epoch = dt_ * unif(rng);
    const double size = model_.jump.sample(rng);
    next += size * std::exp(-model_.lambda * (dt_ - epoch));
  }
  if (arrivals) *arrivals = m;
  return next;
}

SamplePath simulate_path(const CppOuModel& model, const PathConfig& cfg) {
  model.validate();
  cfg.validate();
  Engine rng = make_engine(cfg.seed);
  const OuStepper step(model, cfg.delta);

  double x = cfg.x0;
  const auto whole = static_cast<std::size_t>(std::floor(cfg.burn_in_time / cfg.delta));
  for (std::size_t i = 0; i < whole; ++i) x = step.advance(x, rng);
  const double rest = cfg.burn_in_time - whole * cfg.delta;
  if (rest > 1e-12 * cfg.delta) x = OuStepper(model, rest).advance(x, rng);

  SamplePath path;
  path.delta = cfg.delta;
  path.seed = cfg.seed;
  path.values.resize(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    unsigned arrivals = 0;
    x = step.advance(x, rng, &arrivals);
    path.values[i] = x;
    if (i > 0 && arrivals == 0) ++path.jump_free_steps;
  }
  return path;
}

double default_burn_in(const CppOuModel& model) { return 50.0 / model.lambda; }

SamplePath stationary_sample(const CppOuModel& model, std::size_t n, double delta,
                             std::uint64_t seed) {
  PathConfig cfg;
  cfg.n = n;
  cfg.delta = delta;
  cfg.seed = seed;
  cfg.x0 = model.stationary_mean();
  cfg.burn_in_time = default_burn_in(model);
  return simulate_path(model, cfg);
}

std::vector<double> one_step_draws(const OuStepper& stepper, double x0, std::size_t count,
                                   std::uint64_t seed) {
  Engine rng = make_engine(seed);
  std::vector<double> out(count);
  for (auto& v : out) v = stepper.advance(x0, rng);
  return out;
}

void write_path_csv(std::ostream& out, const SamplePath& path, std::string_view model_hash) {
  out << "# delta=" << format_double(path.delta) << '\n';
  out << "# seed=" << path.seed << '\n';
  out << "# model_hash=" << model_hash << '\n';
  out << "value\n";
  for (double v : path.values) out << format_double(v) << '\n';
}

SamplePath read_path_csv(std::istream& in) {
  SamplePath path;
  bool have_delta = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      auto key = line.substr(1, eq - 1);
      key.erase(0, key.find_first_not_of(' '));
      const auto value = line.substr(eq + 1);
      try {
        if (key == "delta") {
          path.delta = parse_double(value);
          have_delta = true;
        } else if (key == "seed") {
          path.seed = std::stoull(value);
        }
      } catch (const std::exception&) {
        throw IoError("path file line " + std::to_string(lineno) + ": bad header value '" +
                      value + "'");
      }
      continue;
    }
    if (line == "value") continue;
    try {
      path.values.push_back(parse_double(line));
    } catch (const std::exception&) {
      throw IoError("path file line " + std::to_string(lineno) + ": not a number '" + line + "'");
    }
  }
  if (!have_delta) throw IoError("path file is missing the '# delta=' header");
  if (!(path.delta > 0.0)) throw IoError("path file has a nonpositive delta");
  if (path.values.empty()) throw IoError("path file contains no observations");
  return path;
}

}  // namespace cppou
