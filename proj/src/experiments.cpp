#include "cppou/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include "cppou/error.hpp"
#include "cppou/numfmt.hpp"
#include "cppou/parallel.hpp"
#include "cppou/rng.hpp"
#include "cppou/stats.hpp"

namespace cppou {

std::string_view to_string(StudyKind kind) {
  switch (kind) {
    case StudyKind::normality: return "normality";
    case StudyKind::coverage: return "coverage";
    case StudyKind::bandwidth_diagnostic: return "bandwidth-diagnostic";
    case StudyKind::consistency: return "consistency";
    case StudyKind::bias: return "bias";
    case StudyKind::oracle: return "oracle";
  }
  return "unknown";
}

StudyKind parse_study_kind(std::string_view name) {
  for (auto k : {StudyKind::normality, StudyKind::coverage, StudyKind::bandwidth_diagnostic,
                 StudyKind::consistency, StudyKind::bias, StudyKind::oracle}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("study.kind", "unknown study kind '" + std::string(name) +
                                      "' (expected normality, coverage, bandwidth-diagnostic, "
                                      "consistency, bias or oracle)");
}

void StudySpec::validate() const {
  model.validate();
  if (n < 2) throw ConfigError("sampling.n", "studies need at least 2 observations");
  if (!(delta > 0.0)) throw ConfigError("sampling.delta", "must be positive");
  if (replications < 1) throw ConfigError("study.replications", "must be at least 1");
  if (grid.empty()) throw ConfigError("spectral.grid", "needs at least one design point");
  if (bandwidth.fixed_h && !(*bandwidth.fixed_h > 0.0)) throw ConfigError("spectral.h", "must be positive");
  if (!bandwidth.fixed_h) {
    if (bandwidth.J < 2) throw ConfigError("spectral.selector.J", "must be at least 2");
    if (!(bandwidth.kappa > 1.0)) throw ConfigError("spectral.selector.kappa", "must exceed 1");
    if (!(bandwidth.pilot > 0.0)) throw ConfigError("spectral.selector.pilot", "must be positive");
  }
  if (quad_panels < kMinQuadPanels) throw ConfigError("spectral.quad_panels", "must be at least 256");
  for (double tau : taus) {
    if (!(tau > 0.0 && tau < 1.0)) throw ConfigError("inference.tau", "levels must lie in (0, 1)");
  }
}

double StudySpec::theta_for(std::size_t sample_size) const {
  return theta ? *theta : default_theta(sample_size, theta_c);
}

SamplePath replication_path(const StudySpec& spec, std::size_t r, std::size_t n) {
  return stationary_sample(spec.model, n, spec.delta, stream_seed(spec.base_seed, r));
}

namespace {

SpectralConfig spectral_config(const StudySpec& spec, std::size_t n, double h) {
  SpectralConfig cfg;
  cfg.h = h;
  cfg.theta = spec.theta_for(n);
  cfg.kernel = spec.kernel;
  cfg.quad_panels = spec.quad_panels;
  cfg.design_points = spec.grid;
  return cfg;
}

std::vector<double> truth_on(const CppOuModel& model, std::span<const double> x) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = true_k(model, x[i]);
  return out;
}

double max_abs_error(std::span<const double> est, std::span<const double> truth) {
  double e = 0.0;
  for (std::size_t i = 0; i < est.size(); ++i) e = std::max(e, std::abs(est[i] - truth[i]));
  return e;
}

PointSummary summarize(double x, std::vector<double> values, bool against_normal) {
  // Sorted first so the summaries do not depend on replication order.
  std::sort(values.begin(), values.end());
  PointSummary s;
  s.x = x;
  s.count = values.size();
  if (values.empty()) return s;
  s.mean = stats::mean(values);
  s.sd = stats::sd(values);
  if (against_normal) s.ks = stats::ks_distance_normal(values);
  for (double v : values) s.max_abs = std::max(s.max_abs, std::abs(v));
  return s;
}

}  // namespace

double choose_bandwidth(const StudySpec& spec, std::span<const double> sample,
                        std::optional<BandwidthSelection>* selection) {
  if (spec.bandwidth.fixed_h) return *spec.bandwidth.fixed_h;
  const auto base = spectral_config(spec, sample.size(), spec.bandwidth.pilot);
  auto sel = select_bandwidth(sample, base, spec.bandwidth.pilot, spec.bandwidth.J,
                              spec.bandwidth.kappa);
  const double h = sel.chosen;
  if (selection) *selection = std::move(sel);
  return h;
}

NormalityResult run_normality_study(const StudySpec& spec) {
  spec.validate();
  const std::size_t R = spec.replications;
  NormalityResult res;
  res.points = spec.points;
  res.seeds.resize(R);
  res.h.resize(R);
  res.khat.resize(R);
  res.sigma_hat.resize(R);
  res.stat.resize(R);
  const auto truth = truth_on(spec.model, spec.points);

  parallel_for(R, spec.threads, [&](std::size_t r) {
    const auto path = replication_path(spec, r, spec.n);
    const double h = choose_bandwidth(spec, path.values);
    const EcfCache cache(path.values, h, spec.theta_for(spec.n), spec.quad_panels);
    const auto est = estimate(cache, spec.kernel, spec.points);
    res.seeds[r] = path.seed;
    res.h[r] = h;
    res.khat[r] = est.khat;
    res.sigma_hat[r] = est.sigma_hat;
    res.stat[r] = studentized_stats(est, truth);
  });

  for (std::size_t r = 0; r < R; ++r) {
    if (std::any_of(res.stat[r].begin(), res.stat[r].end(), [](const auto& v) { return !v; })) {
      ++res.degenerate;
    }
  }
  res.failed = static_cast<double>(res.degenerate) > spec.max_degenerate_fraction * static_cast<double>(R);

  for (std::size_t p = 0; p < spec.points.size(); ++p) {
    std::vector<double> z, k;
    for (std::size_t r = 0; r < R; ++r) {
      if (res.stat[r][p]) z.push_back(*res.stat[r][p]);
      k.push_back(res.khat[r][p]);
    }
    res.studentized.push_back(summarize(spec.points[p], z, true));
    const auto mk = stats::mean(k);
    const auto sk = stats::sd(k);
    std::vector<double> e;
    if (sk && *sk > 0.0) {
      for (double v : k) e.push_back((v - mk) / *sk);
    }
    res.empirical.push_back(summarize(spec.points[p], e, true));
  }
  return res;
}

CoverageResult run_coverage_study(const StudySpec& spec) {
  spec.validate();
  const std::size_t R = spec.replications;
  const std::size_t N = spec.grid.size();
  CoverageResult res;
  res.grid = spec.grid;
  res.truth = truth_on(spec.model, spec.grid);
  res.seeds.resize(R);
  res.h.resize(R);
  res.khat.resize(R);
  res.sigma_hat.resize(R);
  std::vector<KEstimate> ests(R);

  parallel_for(R, spec.threads, [&](std::size_t r) {
    const auto path = replication_path(spec, r, spec.n);
    const double h = choose_bandwidth(spec, path.values);
    const EcfCache cache(path.values, h, spec.theta_for(spec.n), spec.quad_panels);
    ests[r] = estimate(cache, spec.kernel, spec.grid);
    res.seeds[r] = path.seed;
    res.h[r] = h;
    res.khat[r] = ests[r].khat;
    res.sigma_hat[r] = ests[r].sigma_hat;
  });

  for (const auto& e : ests) {
    if (std::any_of(e.sigma_hat.begin(), e.sigma_hat.end(), [](double s) { return s == 0.0; })) {
      ++res.degenerate;
    }
  }
  res.failed = static_cast<double>(res.degenerate) > spec.max_degenerate_fraction * static_cast<double>(R);

  for (double tau : spec.taus) {
    CoverageLevel lvl;
    lvl.tau = tau;
    lvl.q = quantile_max_abs_normal(N, tau);
    lvl.pointwise.assign(N, 0.0);
    lvl.mean_width.assign(N, 0.0);
    std::size_t joint = 0;
    std::size_t joint_mono = 0;
    for (const auto& e : ests) {
      const auto band = confidence_band(e, tau);
      bool all = true;
      for (std::size_t l = 0; l < N; ++l) {
        const bool in = band.lower[l] <= res.truth[l] && res.truth[l] <= band.upper[l];
        all = all && in;
        lvl.pointwise[l] += in ? 1.0 : 0.0;
        lvl.mean_width[l] += band.upper[l] - band.lower[l];
      }
      joint += all ? 1 : 0;
      if (spec.monotonize) {
        const auto mb = monotonize(band);
        bool mall = true;
        for (std::size_t l = 0; l < N; ++l) {
          mall = mall && mb.lower[l] <= res.truth[l] && res.truth[l] <= mb.upper[l];
        }
        joint_mono += mall ? 1 : 0;
      }
    }
    const double Rd = static_cast<double>(R);
    lvl.joint = static_cast<double>(joint) / Rd;
    for (std::size_t l = 0; l < N; ++l) {
      lvl.pointwise[l] /= Rd;
      lvl.mean_width[l] /= Rd;
    }
    if (spec.monotonize) lvl.joint_monotonized = static_cast<double>(joint_mono) / Rd;
    res.levels.push_back(std::move(lvl));
  }
  return res;
}

BandwidthDiagnosticResult run_bandwidth_diagnostic(const StudySpec& spec) {
  spec.validate();
  BandwidthDiagnosticResult res;
  res.grid = spec.grid;
  const auto truth = truth_on(spec.model, spec.grid);
  res.curves.resize(spec.replications);
  parallel_for(spec.replications, spec.threads, [&](std::size_t r) {
    const auto path = replication_path(spec, r, spec.n);
    const auto base = spectral_config(spec, spec.n, spec.bandwidth.pilot);
    auto sel = select_bandwidth(path.values, base, spec.bandwidth.pilot, spec.bandwidth.J,
                                spec.bandwidth.kappa);
    BandwidthCurve c;
    c.seed = path.seed;
    c.candidates = sel.candidates;
    c.distances = sel.distances;
    c.chosen_index = sel.chosen_index;
    c.fallback = sel.fallback;
    for (const auto& est : sel.estimates) c.errors.push_back(max_abs_error(est, truth));
    c.estimates = std::move(sel.estimates);
    res.curves[r] = std::move(c);
  });
  std::size_t good = 0;
  for (const auto& c : res.curves) {
    const double best = *std::min_element(c.errors.begin(), c.errors.end());
    if (c.errors[c.chosen_index] <= 3.0 * best) ++good;
  }
  res.within_factor3 = static_cast<double>(good) / static_cast<double>(res.curves.size());
  return res;
}

ConsistencyResult run_consistency_study(const StudySpec& spec) {
  spec.validate();
  if (spec.large_n <= spec.n) throw ConfigError("study.large_n", "must exceed sampling.n");
  const std::size_t R = spec.replications;
  ConsistencyResult res;
  res.n_small = spec.n;
  res.n_large = spec.large_n;
  res.seeds.resize(R);
  res.error_small.resize(R);
  res.error_large.resize(R);
  res.h_small.resize(R);
  res.h_large.resize(R);
  const auto truth = truth_on(spec.model, spec.grid);
  parallel_for(R, spec.threads, [&](std::size_t r) {
    for (const bool large : {false, true}) {
      const std::size_t n = large ? spec.large_n : spec.n;
      const auto path = replication_path(spec, r, n);
      const double h = choose_bandwidth(spec, path.values);
      const EcfCache cache(path.values, h, spec.theta_for(n), spec.quad_panels);
      const double err = max_abs_error(estimate_k_sharp(cache, spec.kernel, spec.grid), truth);
      (large ? res.error_large : res.error_small)[r] = err;
      (large ? res.h_large : res.h_small)[r] = h;
      res.seeds[r] = path.seed;
    }
  });
  res.median_small = stats::median(res.error_small);
  res.median_large = stats::median(res.error_large);
  std::size_t better = 0;
  for (std::size_t r = 0; r < R; ++r) better += res.error_large[r] < res.error_small[r] ? 1 : 0;
  res.fraction_improved = static_cast<double>(better) / static_cast<double>(R);
  return res;
}

BiasResult run_bias_study(const StudySpec& spec) {
  spec.validate();
  const std::size_t R = spec.replications;
  BiasResult res;
  res.h = spec.bias_h;
  res.seeds.resize(R);
  res.error_sharp.resize(R);
  res.error_naive.resize(R);
  const auto truth = truth_on(spec.model, spec.grid);
  parallel_for(R, spec.threads, [&](std::size_t r) {
    const auto path = replication_path(spec, r, spec.n);
    const EcfCache cache(path.values, spec.bias_h, spec.theta_for(spec.n), spec.quad_panels);
    res.seeds[r] = path.seed;
    res.error_sharp[r] = max_abs_error(estimate_k_sharp(cache, spec.kernel, spec.grid), truth);
    res.error_naive[r] = max_abs_error(estimate_k_naive(cache, spec.kernel, spec.grid), truth);
  });
  res.mean_error_sharp = stats::mean(res.error_sharp);
  res.mean_error_naive = stats::mean(res.error_naive);
  return res;
}

TransitionOracle transition_oracle(const CppOuModel& model, double x0, double t, std::size_t draws,
                                   std::uint64_t seed, double decay_scale) {
  const auto stepper = OuStepper::with_decay_scale(model, t, decay_scale);
  const auto sample = one_step_draws(stepper, x0, draws, seed);
  const double y_max = *std::max_element(sample.begin(), sample.end());
  const TransitionLaw law(model, x0, t, y_max);
  TransitionOracle out;
  out.atom_mass = law.atom_mass();
  const auto hits = std::count(sample.begin(), sample.end(), law.atom_location());
  out.atom_frequency = static_cast<double>(hits) / static_cast<double>(draws);
  const double shift = law.atom_location();
  out.ks = stats::ks_distance(
      sample, [&](double y) { return law.cdf(y); },
      [&](double y) { return y <= shift ? 0.0 : law.cdf(y); });
  return out;
}

double g_mass_oracle(const CppOuModel& model) {
  double worst = 0.0;
  const double upper = model.jump.quantile(1.0 - 1e-13);
  for (double a : {0.25, 0.5, 1.0, 2.0}) {
    const double t = a / model.lambda;
    auto g = [&](double x) { return g_density(model, x, t); };
    // Split at the unit scale so the adaptive rule sees the peak near the origin.
    double mass = 0.0;
    const double cuts[] = {0.0, 0.25, 1.0, 4.0, upper};
    for (std::size_t i = 0; i + 1 < std::size(cuts); ++i) {
      if (cuts[i + 1] <= cuts[i]) continue;
      mass += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, cuts[i], cuts[i + 1],
                                                                            15, 1e-14);
    }
    worst = std::max(worst, std::abs(mass - 1.0));
  }
  return worst;
}

double cf_oracle(const CppOuModel& model, std::size_t n, std::uint64_t seed, double t_max) {
  const auto path = stationary_sample(model, n, 1.0, seed);
  double worst = 0.0;
  const int steps = static_cast<int>(std::round(t_max / 0.05));
  for (int i = -steps; i <= steps; ++i) {
    const double t = 0.05 * i;
    worst = std::max(worst, std::abs(ecf(path.values, t) - true_cf(model, t)));
  }
  return worst;
}

QuantileOracle quantile_oracle(const std::vector<std::size_t>& Ns, const std::vector<double>& taus,
                               std::size_t draws, std::uint64_t seed, double offset) {
  const std::size_t max_n = *std::max_element(Ns.begin(), Ns.end());
  std::vector<std::vector<double>> maxima(Ns.size(), std::vector<double>(draws));
  Engine rng = make_engine(seed);
  boost::random::normal_distribution<double> normal;
  for (std::size_t d = 0; d < draws; ++d) {
    double m = 0.0;
    std::size_t next = 0;
    for (std::size_t j = 1; j <= max_n; ++j) {
      m = std::max(m, std::abs(normal(rng)));
      for (std::size_t i = 0; i < Ns.size(); ++i) {
        if (Ns[i] == j) maxima[i][d] = m;
      }
      (void)next;
    }
  }
  QuantileOracle out;
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    for (double tau : taus) {
      const double q = quantile_max_abs_normal(Ns[i], tau) + offset;
      const double mc = stats::quantile(maxima[i], 1.0 - tau);
      out.analytic.push_back(q);
      out.monte_carlo.push_back(mc);
      out.max_abs_error = std::max(out.max_abs_error, std::abs(q - mc));
    }
  }
  return out;
}

std::vector<double> variance_two_pass(const EcfCache& cache, const FlatTopKernel& kernel,
                                      std::span<const double> x) {
  const auto sample = cache.sample();
  const double n = static_cast<double>(sample.size());
  std::vector<double> out;
  for (double xl : x) {
    std::vector<double> v(sample.size(), 0.0);
    for (std::size_t j = 0; j < sample.size(); ++j) {
      if (std::abs(sample[j]) > cache.theta()) continue;
      v[j] = sample[j] * khat_n(cache, kernel, (xl - sample[j]) / cache.h()).value;
    }
    double m = 0.0;
    for (double vj : v) m += vj;
    m /= n;
    double ss = 0.0;
    for (double vj : v) ss += (vj - m) * (vj - m);
    out.push_back(ss / n);
  }
  return out;
}

namespace {

double rel_gap(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), std::numeric_limits<double>::min()});
  return std::abs(a - b) / scale;
}

}  // namespace

IdentityOracle identity_oracle(const StudySpec& spec, std::size_t probes, std::uint64_t seed) {
  IdentityOracle out;
  out.min_variance = std::numeric_limits<double>::infinity();
  Engine rng = make_engine(seed);
  const double h = spec.bandwidth.fixed_h.value_or(0.5);
  const std::size_t samples = 4;
  const std::size_t per_sample = (probes + samples - 1) / samples;
  for (std::size_t s = 0; s < samples; ++s) {
    const auto path = stationary_sample(spec.model, spec.n, spec.delta, splitmix64(seed + s));
    const EcfCache cache(path.values, h, spec.theta_for(spec.n), spec.quad_panels);
    boost::random::uniform_real_distribution<double> unif(-1.0 / h, 1.0 / h);
    std::size_t taken = 0;
    std::size_t attempts = 0;
    while (taken < per_sample && attempts < 100 * per_sample) {
      ++attempts;
      const double t = unif(rng);
      if (std::abs(cache.phi_at(t)) < cache.floor() || std::abs(cache.phi_at(-t)) < cache.floor()) {
        continue;
      }
      const auto simple = psi_hat(cache, t);
      const auto literal = psi_hat_literal(cache, t);
      out.psi_literal_rel = std::max(out.psi_literal_rel, std::abs(simple - literal) /
                                                              std::max(std::abs(literal), 1e-300));
      out.psi_real_rel =
          std::max(out.psi_real_rel, std::abs(simple.real()) / std::max(std::abs(simple), 1e-300));
      ++taken;
    }
    out.probes += taken;
    const auto cosine = estimate_k_sharp(cache, spec.kernel, spec.grid);
    const auto complex = estimate_k_sharp_complex(cache, spec.kernel, spec.grid);
    for (std::size_t l = 0; l < spec.grid.size(); ++l) {
      out.cosine_complex_rel = std::max(out.cosine_complex_rel, rel_gap(cosine[l], complex[l].real()));
    }
    if (s < 2) {
      const auto var = variance_hat(cache, spec.kernel, spec.grid);
      const auto two = variance_two_pass(cache, spec.kernel, spec.grid);
      for (std::size_t l = 0; l < spec.grid.size(); ++l) {
        out.variance_rel = std::max(out.variance_rel, rel_gap(var[l], two[l]));
        out.min_variance = std::min(out.min_variance, var[l]);
      }
    }
  }
  return out;
}

OracleReport run_oracle_suite(const StudySpec& spec, const OracleOptions& options) {
  OracleReport rep;
  auto add = [&](std::string name, double measured, double threshold) {
    rep.checks.push_back({std::move(name), measured, threshold, measured <= threshold});
  };
  const std::uint64_t seed = spec.base_seed;
  const double t = 1.0;
  for (double x0 : {0.0, spec.model.stationary_mean()}) {
    const auto tr = transition_oracle(spec.model, x0, t, options.transition_draws,
                                      stream_seed(seed, 101 + static_cast<std::uint64_t>(x0 * 1000)),
                                      options.decay_scale);
    const std::string tag = "x0=" + format_double(x0);
    add("transition_ks[" + tag + "]", tr.ks, 0.01);
    add("transition_atom[" + tag + "]", std::abs(tr.atom_frequency - tr.atom_mass), 0.01);
  }
  // Both jump families, whichever the configured model uses.
  CppOuModel other = spec.model;
  other.jump = spec.model.jump.kind() == "gamma" ? JumpDistribution::exponential(1.0)
                                                 : JumpDistribution::gamma(2.0, 1.0);
  for (const CppOuModel* m : {&spec.model, static_cast<const CppOuModel*>(&other)}) {
    add("g_mass[" + std::string(m->jump.kind()) + "]", g_mass_oracle(*m), 1e-6);
  }
  add("cf_sup_error", cf_oracle(spec.model, options.cf_path_length, stream_seed(seed, 202)), 0.02);

  const auto id = identity_oracle(spec, options.identity_probes, stream_seed(seed, 303));
  add("psi_simplified_vs_literal", id.psi_literal_rel, 1e-10);
  add("psi_real_part", id.psi_real_rel, 1e-12);
  add("ksharp_cosine_vs_complex", id.cosine_complex_rel, 1e-10);
  add("variance_vs_two_pass", id.variance_rel, 1e-12);
  add("variance_negativity", std::max(0.0, -id.min_variance), 0.0);

  const auto qo = quantile_oracle({1, 11, 50}, {0.15, 0.05, 0.01}, options.quantile_draws,
                                  stream_seed(seed, 404), options.quantile_offset);
  add("quantile_mc", qo.max_abs_error, 0.01);

  rep.passed = std::all_of(rep.checks.begin(), rep.checks.end(), [](const auto& c) { return c.passed; });
  return rep;
}

}  // namespace cppou
