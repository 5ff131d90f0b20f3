#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "emphlab/ar_model.hpp"
#include "emphlab/core_dsp.hpp"

using namespace emphlab;

namespace {

// Textbook lag-1 autocorrelation of an ARMA(1,1) process
// (1 - phi B) d = (1 + theta B) w.
double arma11_rho(double phi, double theta) {
  return (phi + theta) * (1.0 + phi * theta) / (1.0 + theta * theta + 2.0 * phi * theta);
}

// Sample lag-1 ratio of d(n) = a d(n-1) + w(n) - a g w(n-1), simulated
// directly from the difference equation.
double simulated_rho(double alpha, double gamma, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> w;
  double d_prev = 0.0;
  double w_prev = 0.0;
  double r0 = 0.0;
  double r1 = 0.0;
  for (std::size_t i = 0; i < n + 1000; ++i) {
    const double wn = w(rng);
    const double d = alpha * d_prev + wn - alpha * gamma * w_prev;
    if (i >= 1000) {
      r0 += d * d;
      r1 += d * d_prev;
    }
    d_prev = d;
    w_prev = wn;
  }
  return r1 / r0;
}

double plain_ratio(const std::vector<double>& x) {
  return *autocorr_01(x, std::vector<double>(x.size(), 1.0)).ratio;
}

}  // namespace

TEST_CASE("synthesize_ar1 basics") {
  const auto white = synthesize_ar1({0.0, 1.0}, 1'000'000, 3);
  CHECK(std::abs(plain_ratio(white)) <= 0.005);

  const auto ar = synthesize_ar1({0.9, 1.0}, 1'000'000, 4);
  CHECK(std::abs(plain_ratio(ar) - 0.9) <= 0.01);

  CHECK(synthesize_ar1({0.5, 2.0}, 777, 42) == synthesize_ar1({0.5, 2.0}, 777, 42));
  CHECK(synthesize_ar1({0.5, 2.0}, 777, 42) != synthesize_ar1({0.5, 2.0}, 777, 43));

  CHECK_THROWS_AS(synthesize_ar1({1.0, 1.0}, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(synthesize_ar1({0.5, 0.0}, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(synthesize_ar1({NAN, 1.0}, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(synthesize_ar1({0.5, 1.0}, 0, 1), std::invalid_argument);
}

TEST_CASE("synthesize_ar1 is stationary from the first sample") {
  // Variance of x(0) across seeds should be sigma2 / (1 - alpha^2) = 5.263.
  double acc = 0.0;
  const int n = 20000;
  for (int s = 0; s < n; ++s) {
    const double x0 = synthesize_ar1({0.9, 1.0}, 1, static_cast<std::uint64_t>(s))[0];
    acc += x0 * x0;
  }
  CHECK(acc / n == doctest::Approx(1.0 / (1.0 - 0.81)).epsilon(0.05));
}

TEST_CASE("synthesize_piecewise_ar1 concatenates segments") {
  const std::vector<double> alphas{0.9, -0.5};
  const auto x = synthesize_piecewise_ar1(alphas, 200000, 1.0, 8);
  REQUIRE(x.size() == 400000);
  const std::vector<double> a(x.begin(), x.begin() + 200000);
  const std::vector<double> b(x.begin() + 200000, x.end());
  CHECK(std::abs(plain_ratio(a) - 0.9) < 0.01);
  CHECK(std::abs(plain_ratio(b) + 0.5) < 0.01);
}

TEST_CASE("rho_of_alpha matches the ARMA(1,1) formula") {
  CHECK(rho_of_alpha(0.0, 0.3) == 0.0);
  CHECK(rho_of_alpha(0.9, 0.7) == doctest::Approx(0.44469).epsilon(1e-5));
  CHECK(rho_of_alpha(0.5, 0.5) == doctest::Approx(0.269231).epsilon(1e-6));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> a(-0.995, 0.995);
  std::uniform_real_distribution<double> g(0.01, 0.99);
  for (int i = 0; i < 1000; ++i) {
    const double alpha = a(rng);
    const double gamma = g(rng);
    CHECK(rho_of_alpha(alpha, gamma) ==
          doctest::Approx(arma11_rho(alpha, -alpha * gamma)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(rho_of_alpha(1.0, 0.7), std::invalid_argument);
  CHECK_THROWS_AS(rho_of_alpha(1.0 - 1e-10, 0.7), std::invalid_argument);
  CHECK_THROWS_AS(rho_of_alpha(0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(rho_of_alpha(0.5, 1.0), std::invalid_argument);
}

TEST_CASE("rho_of_alpha agrees with simulated pre-emphasized signals") {
  CHECK(std::abs(simulated_rho(0.9, 0.7, 10'000'000, 17) - rho_of_alpha(0.9, 0.7)) < 0.003);
  CHECK(std::abs(simulated_rho(0.5, 0.5, 10'000'000, 18) - rho_of_alpha(0.5, 0.5)) < 0.003);

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> a(-0.95, 0.95);
  std::uniform_real_distribution<double> g(0.05, 0.95);
  for (int i = 0; i < 20; ++i) {
    const double alpha = a(rng);
    const double gamma = g(rng);
    CAPTURE(alpha);
    CAPTURE(gamma);
    CHECK(std::abs(simulated_rho(alpha, gamma, 1'000'000, 100 + i) - rho_of_alpha(alpha, gamma)) <=
          0.01);
  }
}

TEST_CASE("rho_of_alpha symmetry, monotonicity and range") {
  for (double gamma : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    double prev = -2.0;
    for (int k = -98; k <= 98; ++k) {
      const double alpha = k / 100.0;
      const double rho = rho_of_alpha(alpha, gamma);
      CHECK(rho_of_alpha(-alpha, gamma) == -rho);
      CHECK(rho > prev);
      if (k != 0) CHECK(std::abs(rho) < std::abs(alpha));
      prev = rho;
    }
  }
}

TEST_CASE("percentile") {
  CHECK(percentile({3.0}, 2.5) == 3.0);
  CHECK(percentile({1, 2, 3, 4, 5}, 50) == 3.0);
  CHECK(percentile({5, 1, 4, 2, 3}, 0) == 1.0);
  CHECK(percentile({5, 1, 4, 2, 3}, 100) == 5.0);
  CHECK(percentile({0, 10}, 25) == doctest::Approx(2.5));
  CHECK_THROWS_AS(percentile({}, 50), std::invalid_argument);
}

TEST_CASE("default alpha grid spans -0.98 .. 0.98") {
  const auto grid = default_alpha_grid();
  CHECK(grid.front() == -0.98);
  CHECK(grid.back() == 0.98);
  CHECK(grid[1] == doctest::Approx(-0.88));
  CHECK(std::is_sorted(grid.begin(), grid.end()));
}

TEST_CASE("run_monte_carlo") {
  MonteCarloConfig cfg;
  cfg.gamma = 0.7;
  cfg.frame_len = 1440;
  cfg.seed = 2024;

  SUBCASE("single trial gives a degenerate interval") {
    cfg.alpha_grid = {0.5};
    cfg.n_trials = 1;
    const auto r = run_monte_carlo(cfg);
    REQUIRE(r.size() == 1);
    CHECK(r[0].estimates_encoder.size() == 1);
    CHECK(r[0].estimates_decoder.size() == 1);
    CHECK(r[0].ci95_encoder.low == r[0].ci95_encoder.high);
    CHECK(r[0].ci95_decoder.low == r[0].ci95_decoder.high);
  }

  SUBCASE("intervals cover the truth and narrow near one") {
    cfg.alpha_grid = {0.1, 0.9};
    cfg.n_trials = 2000;
    const auto r = run_monte_carlo(cfg);
    const auto& hi = r[1];
    CHECK(hi.ci95_encoder.low <= 0.9);
    CHECK(hi.ci95_encoder.high >= 0.9);
    CHECK(hi.ci95_decoder.low <= 0.9);
    CHECK(hi.ci95_decoder.high >= 0.9);
    CHECK(hi.ci95_decoder.width() < r[0].ci95_decoder.width());
    for (const auto& rep : r) {
      CHECK(rep.ci95_encoder.low <= rep.median_encoder);
      CHECK(rep.median_encoder <= rep.ci95_encoder.high);
      CHECK(rep.ci95_decoder.low <= rep.median_decoder);
      CHECK(rep.median_decoder <= rep.ci95_decoder.high);
      CHECK(rep.estimates_encoder.size() == 2000);
    }
  }

  SUBCASE("deterministic regardless of thread count") {
    cfg.alpha_grid = {-0.4, 0.7};
    cfg.n_trials = 64;
    cfg.threads = 1;
    const auto a = run_monte_carlo(cfg);
    cfg.threads = 7;
    const auto b = run_monte_carlo(cfg);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].estimates_encoder == b[i].estimates_encoder);
      CHECK(a[i].estimates_decoder == b[i].estimates_decoder);
    }
  }

  SUBCASE("invalid configuration") {
    cfg.alpha_grid = {1.0};
    cfg.n_trials = 1;
    CHECK_THROWS_AS(run_monte_carlo(cfg), std::invalid_argument);
    cfg.alpha_grid = {0.5};
    cfg.n_trials = 0;
    CHECK_THROWS_AS(run_monte_carlo(cfg), std::invalid_argument);
  }
}
