#pragma once

// PCM codec simulation with fixed, forward-adaptive, backward-adaptive or
// self-adaptive (zero-bit) pre-/de-emphasis.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "emphlab/core_dsp.hpp"

namespace emphlab {

namespace mode {
struct None {};
struct Fixed {
  double beta = 0.7;
};
// Tap gamma * alpha~ from the input, shared with the decoder unquantized.
struct Forward {
  double gamma = 0.7;
};
// Tap gamma * alpha from past decoded output on both sides.
struct Backward {
  double gamma = 0.7;
};
// Encoder tap from the input; decoder re-estimates from the coded signal.
struct SelfAdaptive {
  double gamma = 0.7;
};
}  // namespace mode

using CodecMode =
    std::variant<mode::None, mode::Fixed, mode::Forward, mode::Backward, mode::SelfAdaptive>;

void validate_mode(const CodecMode& m);

// Parses {none, fixed, forward, backward, self}. For "fixed" the weight is
// used as beta. Throws std::invalid_argument on unknown names.
CodecMode parse_mode(std::string_view name, double weight);

std::string mode_name(const CodecMode& m);

// Emphasis weight of the mode (beta for Fixed, gamma for adaptive, 0 for None).
double mode_weight(const CodecMode& m);

// Uniform mid-tread quantizer with saturation: levels k * step, |k * step| <= clip.
struct QuantizerSpec {
  double step = 1.0;
  double clip = 1.0;

  // Symmetric b-bit quantizer: 2^b - 1 levels, clip = (2^(b-1) - 1) * step.
  static QuantizerSpec for_bits(double step, int bits);
};

std::vector<double> quantize(std::span<const double> samples, const QuantizerSpec& spec);

// Step maximizing SNR of quantize(signal) against signal for a b-bit
// quantizer. Coarse log-spaced scan followed by golden-section refinement.
QuantizerSpec tune_step(std::span<const double> signal, int bits_per_sample);

struct PipelineResult {
  std::vector<double> decoded;  // time-aligned with the input
  std::vector<double> coded;    // quantized pre-emphasized signal
  std::vector<double> per_frame_coeffs_enc;
  std::vector<double> per_frame_coeffs_dec;
  double snr_db = 0.0;  // NaN for an all-zero input
  std::optional<int> bits_per_sample;  // empty when quantization is disabled
  std::optional<QuantizerSpec> quantizer;
  std::size_t decoder_delay = 0;  // samples of algorithmic delay at the decoder
};

// Self-adaptive decoder. It receives only coded pre-emphasized samples and
// the constants shared by both ends; frames are emitted once their
// look-ahead has arrived.
class SelfAdaptiveDecoder {
 public:
  SelfAdaptiveDecoder(double gamma, const FrameConfig& config);

  // Appends coded samples, returns newly decoded samples.
  std::vector<double> push(std::span<const double> coded);

  // Decodes everything still buffered, zero-padding missing look-ahead.
  std::vector<double> flush();

  const std::vector<double>& taps() const { return taps_; }
  std::size_t delay() const { return config_.lookahead_len; }

 private:
  std::vector<double> decode_frame(std::size_t len, bool final);

  double gamma_;
  FrameConfig config_;
  std::vector<double> window_;
  std::vector<double> history_;  // coded samples from decoded_ - frame_len on
  std::size_t history_start_ = 0;
  std::size_t received_ = 0;
  std::size_t decoded_ = 0;
  FilterState state_;
  std::vector<double> taps_;
};

// Runs encoder, quantizer and decoder over the signal. bits_per_sample empty
// disables quantization (infinite precision); otherwise the step is tuned
// with tune_step on the encoder's pre-emphasized signal.
PipelineResult run_pipeline(std::span<const double> signal, const CodecMode& mode,
                            const FrameConfig& config,
                            std::optional<int> bits_per_sample);

// Same, with an explicit quantizer (or none).
PipelineResult run_pipeline_with(std::span<const double> signal, const CodecMode& mode,
                                 const FrameConfig& config,
                                 std::optional<QuantizerSpec> quantizer);

}  // namespace emphlab
