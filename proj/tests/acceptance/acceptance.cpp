// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include "cppou/experiments.hpp"
#include "cppou/rng.hpp"

using namespace cppou;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

StudySpec reference() { return StudySpec{}; }

Outcome normality() {
  auto st = reference();
  st.replications = 1000;
  const auto res = run_normality_study(st);
  bool ok = !res.failed;
  std::ostringstream d;
  for (const auto& s : res.studentized) {
    const double m = s.mean.value_or(NAN), sd = s.sd.value_or(NAN), ks = s.ks.value_or(NAN);
    ok = ok && std::abs(m) <= 0.15 && sd >= 0.8 && sd <= 1.2 && ks <= 0.10;
    d << "x=" << num(s.x) << " mean=" << num(m) << " sd=" << num(sd) << " ks=" << num(ks) << "; ";
  }
  d << "degenerate=" << res.degenerate << " | centered-and-scaled ks:";
  for (const auto& s : res.empirical) d << ' ' << num(s.ks.value_or(NAN));
  return {ok, d.str()};
}

Outcome coverage() {
  auto st = reference();
  st.replications = 500;
  st.taus = {0.05};
  const auto res = run_coverage_study(st);
  const auto& lv = res.levels.front();
  bool ok = !res.failed && lv.joint >= 0.88 && lv.joint <= 0.99;
  double min_pw = 1.0;
  for (double p : lv.pointwise) {
    ok = ok && p >= lv.joint;
    min_pw = std::min(min_pw, p);
  }
  return {ok, "joint=" + num(lv.joint) + " (window [0.88, 0.99]) min pointwise=" + num(min_pw)};
}

Outcome transition() {
  const CppOuModel m;
  bool ok = true;
  std::ostringstream d;
  for (double x0 : {0.0, 4.2}) {
    const auto r = transition_oracle(m, x0, 1.0, 100000, stream_seed(301, x0 > 0));
    const double gap = std::abs(r.atom_frequency - std::exp(-1.05));
    ok = ok && r.ks <= 0.01 && gap <= 0.01;
    d << "x0=" << num(x0) << " ks=" << num(r.ks) << " atom_freq=" << num(r.atom_frequency) << "; ";
  }
  return {ok, d.str() + "atom mass=" + num(std::exp(-1.05))};
}

Outcome g_mass() {
  CppOuModel g;
  CppOuModel e;
  e.jump = JumpDistribution::exponential(1.0);
  const double eg = g_mass_oracle(g), ee = g_mass_oracle(e);
  return {eg <= 1e-6 && ee <= 1e-6, "max |mass-1| gamma=" + num(eg) + " exponential=" + num(ee)};
}

Outcome cf() {
  const double sup = cf_oracle(CppOuModel{}, 100000, stream_seed(501, 0));
  return {sup <= 0.02, "sup |ecf - cf| over |t|<=5 = " + num(sup)};
}

Outcome identities() {
  const auto id = identity_oracle(reference(), 1000, stream_seed(601, 0));
  const bool ok = id.probes >= 1000 && id.psi_literal_rel <= 1e-10 && id.psi_real_rel <= 1e-12 &&
                  id.cosine_complex_rel <= 1e-10 && id.variance_rel <= 1e-12 && id.min_variance >= 0.0;
  return {ok, "probes=" + std::to_string(id.probes) + " psi_literal=" + num(id.psi_literal_rel) +
                  " re_psi=" + num(id.psi_real_rel) + " cos_vs_complex=" + num(id.cosine_complex_rel) +
                  " var_vs_two_pass=" + num(id.variance_rel) + " min_var=" + num(id.min_variance)};
}

Outcome quantiles() {
  const auto q = quantile_oracle({1, 11, 50}, {0.15, 0.05, 0.01}, 1000000, stream_seed(701, 0));
  return {q.max_abs_error <= 0.01, "max |analytic - MC| = " + num(q.max_abs_error)};
}

Outcome self_convergence() {
  const auto st = reference();
  double wk = 0.0, ws = 0.0;
  for (std::size_t r = 0; r < 20; ++r) {
    const auto path = replication_path(st, r, st.n);
    const double h = choose_bandwidth(st, path.values);
    const auto a = estimate(EcfCache(path.values, h, st.theta_for(st.n), 4096), st.kernel, st.grid);
    const auto b = estimate(EcfCache(path.values, h, st.theta_for(st.n), 8192), st.kernel, st.grid);
    for (std::size_t l = 0; l < st.grid.size(); ++l) {
      wk = std::max(wk, std::abs(a.khat[l] - b.khat[l]) / std::abs(b.khat[l]));
      ws = std::max(ws, std::abs(a.sigma_hat[l] - b.sigma_hat[l]) / std::abs(b.sigma_hat[l]));
    }
  }
  return {wk < 1e-6 && ws < 1e-6, "max relative change khat=" + num(wk) + " sigma=" + num(ws)};
}

Outcome bias() {
  auto st = reference();
  st.replications = 200;
  st.bias_h = 0.5;
  const auto res = run_bias_study(st);
  return {res.mean_error_naive >= res.mean_error_sharp,
          "mean max error naive=" + num(res.mean_error_naive) + " sharp=" + num(res.mean_error_sharp)};
}

Outcome consistency() {
  auto st = reference();
  st.replications = 100;
  st.large_n = 4000;
  const auto res = run_consistency_study(st);
  return {res.median_large < res.median_small && res.fraction_improved >= 0.8,
          "median n=500: " + num(res.median_small) + " n=4000: " + num(res.median_large) +
              " improved=" + num(res.fraction_improved)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"normality of studentized estimates", normality},
      {"joint band coverage", coverage},
      {"transition law oracle", transition},
      {"g density mass", g_mass},
      {"characteristic function oracle", cf},
      {"algebraic identities", identities},
      {"max-normal quantile oracle", quantiles},
      {"quadrature self-convergence", self_convergence},
      {"bias direction", bias},
      {"consistency trend", consistency},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!wanted.empty() && !wanted.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2d %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first, o.detail.c_str(),
                secs);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
