#pragma once

// Windowing, lag-0/lag-1 autocorrelation and stateful first-order
// pre-/de-emphasis filtering.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace emphlab {

// Frame geometry shared by every frame-based stage.
struct FrameConfig {
  int sample_rate_hz = 16000;
  std::size_t frame_len = 160;
  std::size_t window_len = 480;
  std::size_t lookahead_len = 160;

  // Throws std::invalid_argument when the geometry is inconsistent.
  void validate() const;

  // Builds a config from durations in milliseconds, rounding to samples.
  static FrameConfig from_ms(int sample_rate_hz, double frame_ms,
                             double window_ms, double lookahead_ms);
};

// Below this lag-0 energy a buffer is treated as silent.
inline constexpr double kSilenceEnergy = 1e-30;

struct AutocorrPair {
  double r0 = 0.0;
  double r1 = 0.0;
  // r1 / r0, absent for silent buffers.
  std::optional<double> ratio;

  bool silent() const { return !ratio.has_value(); }
};

// gamma * alpha is the actual first-order filter tap.
class EmphasisCoeff {
 public:
  // gamma in (0, 1], alpha in (-1, 1).
  EmphasisCoeff(double gamma, double alpha);

  double gamma() const { return gamma_; }
  double alpha() const { return alpha_; }
  double tap() const { return gamma_ * alpha_; }

 private:
  double gamma_;
  double alpha_;
};

// One-sample memory carried between frames.
struct FilterState {
  double prev_input = 0.0;
  double prev_output = 0.0;
};

enum class WindowKind { hanning, rectangular };

// Symmetric window of length len (len >= 2).
std::vector<double> make_window(WindowKind kind, std::size_t len);

// Windowed (unnormalized) lag-0 and lag-1 autocorrelation sums.
AutocorrPair autocorr_01(std::span<const double> samples,
                         std::span<const double> window);

// The window_len samples ending lookahead_len after the end of frame f
// (frame f covers [f * frame_len, (f + 1) * frame_len)). Samples outside
// the signal read as zero.
std::vector<double> analysis_buffer(std::span<const double> signal, std::size_t f,
                                    const FrameConfig& config);

// FIR d(n) = x(n) - tap * x(n-1). Updates state.prev_input.
std::vector<double> pre_emphasize(std::span<const double> frame, double tap,
                                  FilterState& state);

// IIR y(n) = d(n) + tap * y(n-1). Updates state.prev_output.
// Throws InstabilityError when |tap| >= 1.
std::vector<double> de_emphasize(std::span<const double> frame, double tap,
                                 FilterState& state);

}  // namespace emphlab
