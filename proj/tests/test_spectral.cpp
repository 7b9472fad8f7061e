#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cppou/error.hpp"
#include "cppou/simulate.hpp"
#include "cppou/spectral.hpp"

using namespace cppou;
using cd = std::complex<double>;

namespace {

std::vector<double> model_sample(std::uint64_t seed, std::size_t n = 500) {
  return stationary_sample(CppOuModel{}, n, 1.0, seed).values;
}

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace

TEST_CASE("flat-top kernel branches") {
  const FlatTopKernel w;
  CHECK(w(0.03) == 1.0);
  CHECK(w(-0.05) == 1.0);
  CHECK(w(1.0) == 0.0);
  CHECK(w(1.7) == 0.0);
  CHECK(w(0.5) == doctest::Approx(0.97174).epsilon(1e-5));
  CHECK(w(0.5) == doctest::Approx(std::exp(-std::exp(-1.0 / (0.45 * 0.45)) / 0.25)).epsilon(1e-15));
  CHECK(w(-0.7) == w(0.7));
  double prev = 1.0;
  for (double u = 0.0; u <= 1.0; u += 0.001) {
    CHECK(w(u) <= prev);
    prev = w(u);
  }
  CHECK_THROWS_AS(FlatTopKernel(0.0, 0.05), ConfigError);
  CHECK_THROWS_AS(FlatTopKernel(1.0, 1.0), ConfigError);
}

TEST_CASE("truncation default and grid") {
  CHECK(default_theta(500) == doctest::Approx(500.0 * std::sqrt(500.0) / std::pow(std::log(500.0), 3)));
  CHECK(default_theta(500) == doctest::Approx(46.58).epsilon(1e-3));
  const auto g = make_grid(1.0, 0.2, 11);
  CHECK(g.size() == 11);
  CHECK(g.front() == 1.0);
  CHECK(g.back() == doctest::Approx(3.0));
}

TEST_CASE("empirical characteristic function") {
  CHECK(ecf(std::vector<double>{1.0, 2.0}, 0.0) == cd(1.0, 0.0));
  const auto v = ecf(std::vector<double>{2.0}, std::numbers::pi / 2);
  CHECK(v.real() == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(std::abs(v.imag()) < 1e-15);
  const auto s = model_sample(1, 200);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 50; ++i) {
    const double t = u(rng);
    CHECK(std::abs(std::conj(ecf(s, t)) - ecf(s, -t)) < 1e-15);
  }
  CHECK_THROWS_AS(ecf(std::vector<double>{}, 1.0), DomainError);
}

TEST_CASE("truncated ecf derivative") {
  CHECK(ecf_deriv_trunc(std::vector<double>{1.0}, 0.0, 10.0) == cd(0.0, 1.0));
  CHECK(ecf_deriv_trunc(std::vector<double>{100.0}, 0.7, 10.0) == cd(0.0, 0.0));
  CHECK(ecf_deriv_trunc(std::vector<double>{1.0, 3.0}, 0.0, 2.0) == cd(0.0, 0.5));
}

TEST_CASE("modulus clamp keeps the phase") {
  const cd z = std::polar(1e-3, 0.7);
  const cd c = clamp_modulus(z, 0.05);
  CHECK(std::abs(c) == doctest::Approx(0.05));
  CHECK(std::arg(c) == doctest::Approx(0.7));
  CHECK(clamp_modulus(cd(0.3, 0.4), 0.05) == cd(0.3, 0.4));
  CHECK(clamp_modulus(cd(0.0, 0.0), 0.05) == cd(0.05, 0.0));
}

TEST_CASE("cached grid agrees with direct evaluation") {
  const auto s = model_sample(3);
  const EcfCache cache(s, 0.5, default_theta(500), 4096);
  CHECK(cache.nodes() == 4097);
  CHECK(cache.node(4096) == doctest::Approx(2.0));
  CHECK(cache.floor() == doctest::Approx(1.0 / std::sqrt(500.0)));
  for (std::size_t k : {0u, 1u, 63u, 64u, 65u, 1000u, 4095u, 4096u}) {
    CHECK(std::abs(cache.phi()[k] - ecf(s, cache.node(k))) < 1e-13);
    CHECK(std::abs(cache.dphi()[k] - ecf_deriv_trunc(s, cache.node(k), cache.theta())) < 1e-12);
  }
  CHECK_THROWS_AS(EcfCache(s, 0.5, 10.0, 100), ConfigError);
}

TEST_CASE("psi is imaginary, even, and equals the literal ratio") {
  std::mt19937_64 rng(4);
  for (std::uint64_t seed = 10; seed < 15; ++seed) {
    const auto s = model_sample(seed);
    const EcfCache cache(s, 0.5, default_theta(500), 4096);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int i = 0; i < 40; ++i) {
      const double t = u(rng);
      const cd p = psi_hat(cache, t);
      CHECK(std::abs(p.real()) <= 1e-12 * std::abs(p));
      CHECK(psi_hat(cache, -t) == p);
      if (std::abs(cache.phi_at(t)) >= cache.floor()) {
        CHECK(std::abs(p - psi_hat_literal(cache, t)) <= 1e-10 * std::abs(p));
      }
    }
  }
}

TEST_CASE("degenerate sample at the origin") {
  const std::vector<double> zeros(50, 0.0);
  const EcfCache cache(zeros, 0.5, 10.0, 1024);
  CHECK(psi_hat(cache, 0.8) == cd(0.0, 0.0));
  const FlatTopKernel w;
  const std::vector<double> x = {0.5, 1.0, 2.0};
  for (double v : estimate_k_sharp(cache, w, x)) CHECK(v == 0.0);
  for (double v : estimate_k_naive(cache, w, x)) CHECK(v == 0.0);
  // K_n reduces to the kernel: K_n(0) = (1/pi) int_0^1 phi_W.
  CHECK(khat_n(cache, w, 0.0).value == doctest::Approx(0.211163301697).epsilon(1e-8));
}

TEST_CASE("cosine and complex inversions agree, and the estimate is even") {
  const FlatTopKernel w;
  const auto grid = make_grid(1.0, 0.2, 11);
  std::vector<double> neg(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) neg[i] = -grid[i];
  for (std::uint64_t seed = 20; seed < 24; ++seed) {
    const auto s = model_sample(seed);
    const EcfCache cache(s, 0.6, default_theta(500), 4096);
    const auto cosine = estimate_k_sharp(cache, w, grid);
    const auto complex = estimate_k_sharp_complex(cache, w, grid);
    const auto mirrored = estimate_k_sharp(cache, w, neg);
    for (std::size_t l = 0; l < grid.size(); ++l) {
      CHECK(rel(cosine[l], complex[l].real()) < 1e-10);
      CHECK(std::abs(complex[l].imag()) < 1e-10 * (1.0 + std::abs(cosine[l])));
      CHECK(mirrored[l] == cosine[l]);
    }
  }
}

TEST_CASE("quadrature self-convergence under doubling") {
  const FlatTopKernel w;
  const auto grid = make_grid(1.0, 0.2, 11);
  for (std::uint64_t seed = 30; seed < 33; ++seed) {
    const auto s = model_sample(seed);
    for (double h : {0.4, 0.7}) {
      const auto a = estimate_k_sharp(EcfCache(s, h, default_theta(500), 4096), w, grid);
      const auto b = estimate_k_sharp(EcfCache(s, h, default_theta(500), 8192), w, grid);
      const auto c = estimate_k_naive(EcfCache(s, h, default_theta(500), 4096), w, grid);
      const auto d = estimate_k_naive(EcfCache(s, h, default_theta(500), 8192), w, grid);
      for (std::size_t l = 0; l < grid.size(); ++l) {
        CHECK(rel(a[l], b[l]) < 1e-6);
        CHECK(rel(c[l], d[l]) < 1e-6);
      }
    }
  }
}

TEST_CASE("K_n is even for symmetrized samples and nearly real") {
  const FlatTopKernel w;
  auto s = model_sample(40, 200);
  const auto half = s;
  for (double v : half) s.push_back(-v);
  const EcfCache sym(s, 0.5, 1e9, 1024);
  for (double y : {0.3, 1.1, 4.0}) {
    CHECK(khat_n(sym, w, y).value == doctest::Approx(khat_n(sym, w, -y).value).epsilon(1e-10));
  }
  const EcfCache cache(model_sample(41), 0.5, default_theta(500), 4096);
  for (double y : {-3.0, -0.4, 0.0, 0.9, 2.5}) {
    const auto k = khat_n(cache, w, y);
    CHECK(std::abs(k.imag_residue) < 1e-8 * (1.0 + std::abs(k.value)));
  }
}

TEST_CASE("K_n matrix matches the direct inversion") {
  const FlatTopKernel w;
  const auto s = model_sample(42);
  const EcfCache cache(s, 0.6, 8.0, 4096);  // low theta so some columns are truncated
  const std::vector<double> x = {1.0, 2.2};
  const auto mat = khat_n_matrix(cache, w, x);
  for (std::size_t l = 0; l < x.size(); ++l) {
    for (std::size_t j = 0; j < s.size(); j += 7) {
      const double want = std::abs(s[j]) <= 8.0 ? khat_n(cache, w, (x[l] - s[j]) / 0.6).value : 0.0;
      CHECK(mat[l][j] == doctest::Approx(want).epsilon(1e-11).scale(1.0));
    }
  }
}

TEST_CASE("spectral config validation") {
  SpectralConfig cfg;
  cfg.theta = 40.0;
  cfg.design_points = make_grid(1.0, 0.2, 11);
  cfg.h = 0.1;
  CHECK(cfg.validate().empty());
  cfg.h = 0.5;
  CHECK(cfg.validate().size() == 1);
  cfg.quad_panels = 100;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.quad_panels = 4096;
  cfg.design_points = {2.0, 1.0};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.design_points = {1.0};
  cfg.h = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
