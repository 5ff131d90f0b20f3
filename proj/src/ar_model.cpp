#include "emphlab/ar_model.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <stdexcept>
#include <thread>

#include "emphlab/core_dsp.hpp"
#include "emphlab/estimator.hpp"

namespace emphlab {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t a = 0,
                            std::uint64_t b = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)};
  return std::mt19937_64(seq);
}

void ar1_into(std::span<double> out, double alpha, double sigma2, double& state,
              std::mt19937_64& rng) {
  std::normal_distribution<double> noise(0.0, std::sqrt(sigma2));
  for (double& x : out) {
    state = alpha * state + noise(rng);
    x = state;
  }
}

double stationary_draw(double alpha, double sigma2, std::mt19937_64& rng) {
  std::normal_distribution<double> init(0.0, std::sqrt(sigma2 / (1.0 - alpha * alpha)));
  return init(rng);
}

}  // namespace

void ArModel::validate() const {
  if (!std::isfinite(alpha) || !std::isfinite(sigma2)) {
    throw std::invalid_argument("ArModel: parameters must be finite");
  }
  if (!(std::abs(alpha) < 1.0)) {
    throw std::invalid_argument("ArModel: |alpha| must be < 1");
  }
  if (!(sigma2 > 0.0)) {
    throw std::invalid_argument("ArModel: sigma2 must be > 0");
  }
}

std::vector<double> synthesize_ar1(const ArModel& model, std::size_t n_samples,
                                   std::uint64_t seed) {
  model.validate();
  if (n_samples == 0) {
    throw std::invalid_argument("synthesize_ar1: n_samples must be >= 1");
  }
  auto rng = make_engine(seed);
  double state = stationary_draw(model.alpha, model.sigma2, rng);
  std::vector<double> x(n_samples);
  ar1_into(x, model.alpha, model.sigma2, state, rng);
  return x;
}

std::vector<double> synthesize_piecewise_ar1(std::span<const double> alphas,
                                             std::size_t segment_len,
                                             double sigma2, std::uint64_t seed) {
  if (alphas.empty() || segment_len == 0) {
    throw std::invalid_argument("synthesize_piecewise_ar1: empty request");
  }
  for (double a : alphas) ArModel{a, sigma2}.validate();
  auto rng = make_engine(seed);
  double state = stationary_draw(alphas.front(), sigma2, rng);
  std::vector<double> x(alphas.size() * segment_len);
  for (std::size_t s = 0; s < alphas.size(); ++s) {
    ar1_into(std::span(x).subspan(s * segment_len, segment_len), alphas[s], sigma2,
             state, rng);
  }
  return x;
}

double rho_of_alpha(double alpha, double gamma) {
  if (!(std::abs(alpha) < kMaxForwardAlpha)) {
    throw std::invalid_argument("rho_of_alpha: |alpha| must be < 1 - 1e-9");
  }
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("rho_of_alpha: gamma must lie in (0, 1)");
  }
  // Unit innovation power. Lag-1 and lag-0 equations:
  //   R1 = alpha R0 - alpha gamma
  //   R0 = alpha R1 + 1 - alpha^2 gamma + alpha^2 gamma^2
  const double a2 = alpha * alpha;
  const double r1 = alpha * (1.0 - gamma) * (1.0 - a2 * gamma) / (1.0 - a2);
  const double r0 = alpha * r1 + 1.0 - a2 * gamma + a2 * gamma * gamma;
  return r1 / r0;
}

std::vector<double> default_alpha_grid() {
  std::vector<double> grid;
  for (int k = 0; -0.98 + 0.1 * k < 0.98; ++k) {
    grid.push_back(std::round((-0.98 + 0.1 * k) * 100.0) / 100.0);
  }
  grid.push_back(0.98);
  return grid;
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) {
    throw std::invalid_argument("percentile: empty sample");
  }
  std::sort(values.begin(), values.end());
  const double pos = std::clamp(p, 0.0, 100.0) / 100.0 * (values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - lo;
  return values[lo] + frac * (values[hi] - values[lo]);
}

std::vector<MonteCarloReport> run_monte_carlo(const MonteCarloConfig& config) {
  if (config.n_trials == 0) {
    throw std::invalid_argument("run_monte_carlo: n_trials must be >= 1");
  }
  if (config.frame_len < 2) {
    throw std::invalid_argument("run_monte_carlo: frame_len must be >= 2");
  }
  if (!(config.gamma > 0.0 && config.gamma < 1.0)) {
    throw std::invalid_argument("run_monte_carlo: gamma must lie in (0, 1)");
  }
  for (double a : config.alpha_grid) {
    if (!(std::abs(a) < 1.0)) {
      throw std::invalid_argument("run_monte_carlo: grid alpha outside (-1, 1)");
    }
  }
  const std::vector<double> window = config.window.empty()
                                         ? make_window(WindowKind::hanning, config.frame_len)
                                         : config.window;
  if (window.size() != config.frame_len) {
    throw std::invalid_argument("run_monte_carlo: window length differs from frame_len");
  }

  std::vector<MonteCarloReport> reports(config.alpha_grid.size());
  for (std::size_t g = 0; g < reports.size(); ++g) {
    reports[g].true_alpha = config.alpha_grid[g];
    reports[g].estimates_encoder.resize(config.n_trials);
    reports[g].estimates_decoder.resize(config.n_trials);
  }

  const std::size_t total = reports.size() * config.n_trials;
  auto run_trial = [&](std::size_t job, std::vector<double>& x) {
    const std::size_t g = job / config.n_trials;
    const std::size_t t = job % config.n_trials;
    const double alpha = config.alpha_grid[g];
    // Fresh, independently seeded AR state per trial.
    auto rng = make_engine(config.seed, g, t);
    double state = stationary_draw(alpha, 1.0, rng);
    ar1_into(x, alpha, 1.0, state, rng);

    const EncoderEstimate enc = estimate_alpha_encoder(autocorr_01(x, window));
    FilterState fs;
    const auto d = pre_emphasize(x, config.gamma * enc.alpha, fs);
    reports[g].estimates_encoder[t] = enc.alpha;
    reports[g].estimates_decoder[t] = solve_alpha(config.gamma, autocorr_01(d, window));
  };

  unsigned n_threads = config.threads != 0 ? config.threads
                                           : std::max(1u, std::thread::hardware_concurrency());
  n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, total));
  std::vector<std::exception_ptr> failures(n_threads);
  {
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < n_threads; ++w) {
      workers.emplace_back([&, w] {
        try {
          std::vector<double> x(config.frame_len);
          for (std::size_t job = w; job < total; job += n_threads) run_trial(job, x);
        } catch (...) {
          failures[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  for (auto& r : reports) {
    r.ci95_encoder = {percentile(r.estimates_encoder, 2.5),
                      percentile(r.estimates_encoder, 97.5)};
    r.ci95_decoder = {percentile(r.estimates_decoder, 2.5),
                      percentile(r.estimates_decoder, 97.5)};
    r.median_encoder = percentile(r.estimates_encoder, 50.0);
    r.median_decoder = percentile(r.estimates_decoder, 50.0);
  }
  return reports;
}

}  // namespace emphlab
