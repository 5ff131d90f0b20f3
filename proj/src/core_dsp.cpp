#include "emphlab/core_dsp.hpp"

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

#include "emphlab/errors.hpp"

namespace emphlab {

void FrameConfig::validate() const {
  if (sample_rate_hz <= 0) {
    throw std::invalid_argument("FrameConfig: sample_rate_hz must be positive");
  }
  if (frame_len == 0 || window_len == 0) {
    throw std::invalid_argument("FrameConfig: frame and window lengths must be positive");
  }
  if (window_len < frame_len) {
    throw std::invalid_argument("FrameConfig: window_len must be >= frame_len");
  }
  if (lookahead_len > window_len - frame_len) {
    throw std::invalid_argument(
        "FrameConfig: lookahead_len must be <= window_len - frame_len");
  }
}

FrameConfig FrameConfig::from_ms(int sample_rate_hz, double frame_ms,
                                 double window_ms, double lookahead_ms) {
  auto to_samples = [sample_rate_hz](double ms, const char* what) {
    if (!std::isfinite(ms) || ms < 0.0) {
      throw std::invalid_argument(std::string("FrameConfig: invalid ") + what);
    }
    return static_cast<std::size_t>(std::lround(ms * sample_rate_hz / 1000.0));
  };
  FrameConfig cfg;
  cfg.sample_rate_hz = sample_rate_hz;
  cfg.frame_len = to_samples(frame_ms, "frame duration");
  cfg.window_len = to_samples(window_ms, "window duration");
  cfg.lookahead_len = to_samples(lookahead_ms, "look-ahead duration");
  cfg.validate();
  return cfg;
}

EmphasisCoeff::EmphasisCoeff(double gamma, double alpha)
    : gamma_(gamma), alpha_(alpha) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("EmphasisCoeff: gamma must lie in (0, 1]");
  }
  if (!(alpha > -1.0 && alpha < 1.0)) {
    throw std::invalid_argument("EmphasisCoeff: alpha must lie in (-1, 1)");
  }
}

std::vector<double> make_window(WindowKind kind, std::size_t len) {
  if (len < 2) {
    throw std::invalid_argument("make_window: length must be >= 2");
  }
  std::vector<double> w(len, 1.0);
  if (kind == WindowKind::hanning) {
    const double denom = static_cast<double>(len - 1);
    for (std::size_t n = 0; n < len; ++n) {
      w[n] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * n / denom));
    }
    // Force exact symmetry; cos() is not bit-symmetric around pi.
    for (std::size_t n = 0; n < len / 2; ++n) {
      w[len - 1 - n] = w[n];
    }
  }
  return w;
}

AutocorrPair autocorr_01(std::span<const double> samples,
                         std::span<const double> window) {
  if (samples.size() != window.size()) {
    throw std::invalid_argument("autocorr_01: samples and window differ in length");
  }
  if (samples.size() < 2) {
    throw std::invalid_argument("autocorr_01: need at least two samples");
  }
  AutocorrPair out;
  double prev = samples[0] * window[0];
  out.r0 = prev * prev;
  for (std::size_t n = 1; n < samples.size(); ++n) {
    const double y = samples[n] * window[n];
    out.r0 += y * y;
    out.r1 += y * prev;
    prev = y;
  }
  if (out.r0 >= kSilenceEnergy) {
    out.ratio = out.r1 / out.r0;
  }
  return out;
}

std::vector<double> analysis_buffer(std::span<const double> signal, std::size_t f,
                                    const FrameConfig& config) {
  const auto end = static_cast<std::ptrdiff_t>((f + 1) * config.frame_len + config.lookahead_len);
  const std::ptrdiff_t start = end - static_cast<std::ptrdiff_t>(config.window_len);
  std::vector<double> buf(config.window_len, 0.0);
  for (std::size_t i = 0; i < buf.size(); ++i) {
    const std::ptrdiff_t n = start + static_cast<std::ptrdiff_t>(i);
    if (n >= 0 && n < static_cast<std::ptrdiff_t>(signal.size())) {
      buf[i] = signal[static_cast<std::size_t>(n)];
    }
  }
  return buf;
}

std::vector<double> pre_emphasize(std::span<const double> frame, double tap,
                                  FilterState& state) {
  if (!(std::abs(tap) <= 1.0)) {
    throw std::invalid_argument("pre_emphasize: |tap| must be <= 1");
  }
  std::vector<double> out(frame.size());
  double prev = state.prev_input;
  for (std::size_t n = 0; n < frame.size(); ++n) {
    out[n] = frame[n] - tap * prev;
    prev = frame[n];
  }
  if (!frame.empty()) {
    state.prev_input = frame.back();
    state.prev_output = out.back();
  }
  return out;
}

std::vector<double> de_emphasize(std::span<const double> frame, double tap,
                                 FilterState& state) {
  if (!(std::abs(tap) < 1.0)) {
    throw InstabilityError("de_emphasize: |tap| must be < 1 for a stable filter");
  }
  std::vector<double> out(frame.size());
  double prev = state.prev_output;
  for (std::size_t n = 0; n < frame.size(); ++n) {
    prev = frame[n] + tap * prev;
    out[n] = prev;
  }
  if (!frame.empty()) {
    state.prev_input = frame.back();
    state.prev_output = out.back();
  }
  return out;
}

}  // namespace emphlab
