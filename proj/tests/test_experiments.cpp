#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "cppou/error.hpp"
#include "cppou/experiments.hpp"

using namespace cppou;

namespace {

StudySpec small_spec(StudyKind kind, std::size_t reps) {
  StudySpec s;
  s.kind = kind;
  s.replications = reps;
  s.threads = 1;
  return s;
}

}  // namespace

TEST_CASE("study kinds round trip through their names") {
  for (auto k : {StudyKind::normality, StudyKind::coverage, StudyKind::bandwidth_diagnostic,
                 StudyKind::consistency, StudyKind::bias, StudyKind::oracle}) {
    CHECK(parse_study_kind(to_string(k)) == k);
  }
  CHECK(to_string(StudyKind::bandwidth_diagnostic) == "bandwidth-diagnostic");
  CHECK_THROWS_AS(parse_study_kind("nope"), ConfigError);
}

TEST_CASE("study spec validation") {
  auto s = small_spec(StudyKind::normality, 0);
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s.replications = 1;
  s.bandwidth.J = 1;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s.bandwidth.J = 20;
  s.taus = {1.5};
  CHECK_THROWS_AS(s.validate(), ConfigError);
}

TEST_CASE("single replication normality study") {
  const auto res = run_normality_study(small_spec(StudyKind::normality, 1));
  REQUIRE(res.studentized.size() == 3);
  for (std::size_t p = 0; p < 3; ++p) {
    const auto& s = res.studentized[p];
    CHECK(s.count == 1);
    CHECK(*s.mean == *res.stat[0][p]);
    CHECK_FALSE(s.sd.has_value());
    CHECK(res.empirical[p].count == 0);
  }
}

TEST_CASE("replications depend only on base seed and index") {
  auto a = small_spec(StudyKind::normality, 3);
  auto b = small_spec(StudyKind::normality, 5);
  b.threads = 2;
  const auto ra = run_normality_study(a);
  const auto rb = run_normality_study(b);
  for (std::size_t r = 0; r < 3; ++r) {
    CHECK(ra.seeds[r] == rb.seeds[r]);
    CHECK(ra.h[r] == rb.h[r]);
    CHECK(ra.khat[r] == rb.khat[r]);
    CHECK(ra.sigma_hat[r] == rb.sigma_hat[r]);
  }
  const auto again = run_normality_study(a);
  CHECK(again.khat == ra.khat);
  CHECK(*again.studentized[1].mean == *ra.studentized[1].mean);
  CHECK(replication_path(a, 2, 500).values == replication_path(b, 2, 500).values);
}

TEST_CASE("coverage study basic properties") {
  auto s = small_spec(StudyKind::coverage, 6);
  s.bandwidth.fixed_h = 0.5;
  s.taus = {0.05, 0.999999};
  s.monotonize = true;
  const auto res = run_coverage_study(s);
  REQUIRE(res.levels.size() == 2);
  for (const auto& lv : res.levels) {
    for (std::size_t l = 0; l < res.grid.size(); ++l) CHECK(lv.pointwise[l] >= lv.joint);
    CHECK(lv.joint_monotonized.has_value());
  }
  CHECK(res.levels[1].joint == 0.0);
  CHECK(res.levels[1].mean_width[0] < res.levels[0].mean_width[0]);
  for (double h : res.h) CHECK(h == 0.5);
}

TEST_CASE("bandwidth diagnostic curves") {
  auto s = small_spec(StudyKind::bandwidth_diagnostic, 2);
  const auto res = run_bandwidth_diagnostic(s);
  REQUIRE(res.curves.size() == 2);
  for (const auto& c : res.curves) {
    REQUIRE(c.candidates.size() == 20);
    CHECK(c.candidates[4] == doctest::Approx(0.25));
    CHECK(c.errors.size() == 20);
    CHECK(c.distances.size() == 19);
    for (std::size_t j = 1; j < 20; ++j) {
      double d = 0.0;
      for (std::size_t l = 0; l < res.grid.size(); ++l) {
        d = std::max(d, std::abs(c.estimates[j][l] - c.estimates[j - 1][l]));
      }
      CHECK(c.distances[j - 1] == d);
    }
  }
  CHECK(res.within_factor3 >= 0.0);
  CHECK(res.within_factor3 <= 1.0);
}

TEST_CASE("consistency and bias studies run") {
  auto c = small_spec(StudyKind::consistency, 2);
  c.large_n = 1000;
  const auto cr = run_consistency_study(c);
  CHECK(cr.error_small.size() == 2);
  CHECK(cr.n_large == 1000);
  CHECK(cr.median_small > 0.0);
  c.large_n = 100;
  CHECK_THROWS_AS(run_consistency_study(c), ConfigError);

  const auto br = run_bias_study(small_spec(StudyKind::bias, 3));
  CHECK(br.h == 0.5);
  CHECK(br.error_naive.size() == 3);
  CHECK(br.mean_error_sharp > 0.0);
}

TEST_CASE("transition oracle detects a perturbed decay factor") {
  const CppOuModel m;
  const auto good = transition_oracle(m, 4.2, 1.0, 50000, 3);
  CHECK(good.ks < 0.01);
  const auto bad = transition_oracle(m, 4.2, 1.0, 50000, 3, 1.01);
  CHECK(bad.ks > 0.01);
  CHECK(std::abs(bad.atom_frequency - bad.atom_mass) > 0.01);
}

TEST_CASE("quantile oracle detects a shifted quantile") {
  const auto good = quantile_oracle({1, 11, 50}, {0.15, 0.05, 0.01}, 200000, 5);
  CHECK(good.max_abs_error < 0.03);
  const auto bad = quantile_oracle({1, 11, 50}, {0.15, 0.05, 0.01}, 200000, 5, 0.05);
  CHECK(bad.max_abs_error > 0.01);
  CHECK(good.analytic.size() == 9);
}

TEST_CASE("oracle suite rejects a mutated simulator") {
  OracleOptions opt;
  opt.decay_scale = 1.01;
  opt.quantile_draws = 100000;
  opt.cf_path_length = 20000;
  const auto rep = run_oracle_suite(StudySpec{}, opt);
  CHECK_FALSE(rep.passed);
  const auto it = std::find_if(rep.checks.begin(), rep.checks.end(),
                               [](const auto& c) { return c.name == "transition_ks[x0=4.2]"; });
  REQUIRE(it != rep.checks.end());
  CHECK_FALSE(it->passed);
}

TEST_CASE("identity oracle on model samples") {
  const auto id = identity_oracle(StudySpec{}, 200, 9);
  CHECK(id.probes > 150);
  CHECK(id.psi_literal_rel < 1e-10);
  CHECK(id.psi_real_rel < 1e-12);
  CHECK(id.cosine_complex_rel < 1e-10);
  CHECK(id.variance_rel < 1e-12);
  CHECK(id.min_variance >= 0.0);
}

TEST_CASE("selector error stays near the candidate minimum") {
  auto s = small_spec(StudyKind::bandwidth_diagnostic, 100);
  s.threads = 0;
  const auto res = run_bandwidth_diagnostic(s);
  CHECK(res.within_factor3 >= 0.70);
}
