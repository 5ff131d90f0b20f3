#pragma once

// AR(1) synthesis, the exact (alpha, gamma) -> rho forward map of the
// pre-emphasized process, and the estimator Monte Carlo harness.

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace emphlab {

// |alpha| above this is rejected by the closed-form forward map.
inline constexpr double kMaxForwardAlpha = 1.0 - 1e-9;

struct ArModel {
  double alpha = 0.0;
  double sigma2 = 1.0;

  void validate() const;
};

// x(n) = alpha x(n-1) + w(n), w ~ N(0, sigma2). x(-1) is drawn from the
// stationary distribution, so the output is stationary from sample 0.
std::vector<double> synthesize_ar1(const ArModel& model, std::size_t n_samples,
                                   std::uint64_t seed);

// Concatenated AR(1) segments of segment_len samples each, one per entry of
// alphas. The recursion state carries across segment boundaries.
std::vector<double> synthesize_piecewise_ar1(std::span<const double> alphas,
                                             std::size_t segment_len,
                                             double sigma2, std::uint64_t seed);

// rho = R_d(1) / R_d(0) of d(n) = alpha d(n-1) + w(n) - alpha gamma w(n-1).
double rho_of_alpha(double alpha, double gamma);

struct Interval {
  double low = 0.0;
  double high = 0.0;
  double width() const { return high - low; }
};

struct MonteCarloReport {
  double true_alpha = 0.0;
  std::vector<double> estimates_encoder;  // alpha tilde per trial
  std::vector<double> estimates_decoder;  // alpha hat per trial
  Interval ci95_encoder;
  Interval ci95_decoder;
  double median_encoder = 0.0;
  double median_decoder = 0.0;
};

struct MonteCarloConfig {
  std::vector<double> alpha_grid;
  double gamma = 0.7;
  std::size_t n_trials = 30000;
  std::size_t frame_len = 1440;
  std::vector<double> window;  // empty: Hanning of frame_len
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0: hardware concurrency
};

// -0.98, -0.88, ..., 0.92 (steps of 0.1 starting at -0.98), then 0.98.
std::vector<double> default_alpha_grid();

// Linear-interpolation percentile (p in [0, 100]) of an unsorted sample.
double percentile(std::vector<double> values, double p);

std::vector<MonteCarloReport> run_monte_carlo(const MonteCarloConfig& config);

}  // namespace emphlab
