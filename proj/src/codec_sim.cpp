#include "emphlab/codec_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <type_traits>

#include "emphlab/estimator.hpp"
#include "emphlab/metrics.hpp"

namespace emphlab {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

// window_len samples of history ending right before sample `end`.
std::vector<double> history_buffer(std::span<const double> signal, std::size_t end,
                                   std::size_t len) {
  std::vector<double> buf(len, 0.0);
  const std::size_t take = std::min(end, len);
  std::copy(signal.begin() + static_cast<std::ptrdiff_t>(end - take),
            signal.begin() + static_cast<std::ptrdiff_t>(end), buf.end() - static_cast<std::ptrdiff_t>(take));
  return buf;
}

struct Segment {
  std::size_t begin;
  std::size_t len;
  std::size_t frame;  // index of the taps used
};

// Full frames, then a short tail that reuses the last frame's taps.
std::vector<Segment> segments(std::size_t n, std::size_t frame_len) {
  std::vector<Segment> out;
  const std::size_t full = n / frame_len;
  for (std::size_t f = 0; f < full; ++f) out.push_back({f * frame_len, frame_len, f});
  if (n % frame_len != 0) out.push_back({full * frame_len, n % frame_len, full - 1});
  return out;
}

std::vector<double> input_taps(std::span<const double> signal, double gamma,
                               const FrameConfig& cfg, const std::vector<double>& window) {
  const std::size_t full = signal.size() / cfg.frame_len;
  std::vector<double> taps(full);
  for (std::size_t f = 0; f < full; ++f) {
    const auto buf = analysis_buffer(signal, f, cfg);
    taps[f] = gamma * estimate_alpha_encoder(autocorr_01(buf, window)).alpha;
  }
  return taps;
}

std::vector<double> encoder_taps(std::span<const double> signal, const CodecMode& m,
                                 const FrameConfig& cfg) {
  const auto window = make_window(WindowKind::hanning, cfg.window_len);
  const std::size_t full = signal.size() / cfg.frame_len;
  return std::visit(
      Overloaded{
          [&](const mode::None&) { return std::vector<double>(full, 0.0); },
          [&](const mode::Fixed& f) { return std::vector<double>(full, f.beta); },
          [&](const auto& a) { return input_taps(signal, a.gamma, cfg, window); },
      },
      m);
}

std::vector<double> emphasize(std::span<const double> signal, const std::vector<double>& taps,
                              std::size_t frame_len) {
  std::vector<double> out(signal.size());
  FilterState state;
  for (const auto& seg : segments(signal.size(), frame_len)) {
    const auto d = pre_emphasize(signal.subspan(seg.begin, seg.len), taps[seg.frame], state);
    std::copy(d.begin(), d.end(), out.begin() + static_cast<std::ptrdiff_t>(seg.begin));
  }
  return out;
}

std::vector<double> deemphasize(std::span<const double> coded, const std::vector<double>& taps,
                                std::size_t frame_len) {
  std::vector<double> out(coded.size());
  FilterState state;
  for (const auto& seg : segments(coded.size(), frame_len)) {
    const auto x = de_emphasize(coded.subspan(seg.begin, seg.len), taps[seg.frame], state);
    std::copy(x.begin(), x.end(), out.begin() + static_cast<std::ptrdiff_t>(seg.begin));
  }
  return out;
}

std::vector<double> maybe_quantize(std::span<const double> d,
                                   const std::optional<QuantizerSpec>& q) {
  if (!q) return {d.begin(), d.end()};
  return quantize(d, *q);
}

PipelineResult run_backward(std::span<const double> signal, double gamma,
                            const FrameConfig& cfg, const std::optional<QuantizerSpec>& q) {
  const auto window = make_window(WindowKind::hanning, cfg.window_len);
  const std::size_t full = signal.size() / cfg.frame_len;
  PipelineResult r;
  r.decoded.resize(signal.size());
  r.coded.resize(signal.size());
  std::vector<double> taps;
  taps.reserve(full);
  FilterState enc;
  FilterState dec;
  for (const auto& seg : segments(signal.size(), cfg.frame_len)) {
    if (seg.frame == taps.size()) {
      // Local decoder output of earlier frames only; the first frame has none.
      double tap = 0.0;
      if (seg.frame > 0) {
        const auto past = history_buffer(r.decoded, seg.begin, cfg.window_len);
        tap = gamma * estimate_alpha_encoder(autocorr_01(past, window)).alpha;
      }
      taps.push_back(tap);
    }
    const double tap = taps[seg.frame];
    const auto d = pre_emphasize(signal.subspan(seg.begin, seg.len), tap, enc);
    const auto d_hat = maybe_quantize(d, q);
    const auto x_hat = de_emphasize(d_hat, tap, dec);
    std::copy(d_hat.begin(), d_hat.end(), r.coded.begin() + static_cast<std::ptrdiff_t>(seg.begin));
    std::copy(x_hat.begin(), x_hat.end(), r.decoded.begin() + static_cast<std::ptrdiff_t>(seg.begin));
  }
  r.per_frame_coeffs_enc = taps;
  r.per_frame_coeffs_dec = std::move(taps);
  return r;
}

}  // namespace

void validate_mode(const CodecMode& m) {
  std::visit(Overloaded{
                 [](const mode::None&) {},
                 [](const mode::Fixed& f) {
                   if (!(f.beta >= 0.0 && f.beta < 1.0)) {
                     throw std::invalid_argument("fixed mode: beta must lie in [0, 1)");
                   }
                 },
                 [](const auto& adaptive) {
                   if (!(adaptive.gamma > 0.0 && adaptive.gamma < 1.0)) {
                     throw std::invalid_argument("adaptive mode: gamma must lie in (0, 1)");
                   }
                 },
             },
             m);
}

CodecMode parse_mode(std::string_view name, double weight) {
  CodecMode m;
  if (name == "none") {
    m = mode::None{};
  } else if (name == "fixed") {
    m = mode::Fixed{weight};
  } else if (name == "forward") {
    m = mode::Forward{weight};
  } else if (name == "backward") {
    m = mode::Backward{weight};
  } else if (name == "self") {
    m = mode::SelfAdaptive{weight};
  } else {
    throw std::invalid_argument("unknown codec mode '" + std::string(name) +
                                "' (expected none, fixed, forward, backward or self)");
  }
  validate_mode(m);
  return m;
}

std::string mode_name(const CodecMode& m) {
  return std::visit(Overloaded{
                        [](const mode::None&) { return std::string("none"); },
                        [](const mode::Fixed&) { return std::string("fixed"); },
                        [](const mode::Forward&) { return std::string("forward"); },
                        [](const mode::Backward&) { return std::string("backward"); },
                        [](const mode::SelfAdaptive&) { return std::string("self"); },
                    },
                    m);
}

double mode_weight(const CodecMode& m) {
  return std::visit(Overloaded{
                        [](const mode::None&) { return 0.0; },
                        [](const mode::Fixed& f) { return f.beta; },
                        [](const auto& a) { return a.gamma; },
                    },
                    m);
}

QuantizerSpec QuantizerSpec::for_bits(double step, int bits) {
  if (bits < 2 || bits > 31) {
    throw std::invalid_argument("quantizer: bits per sample must lie in [2, 31]");
  }
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw std::invalid_argument("quantizer: step must be positive");
  }
  const double half_levels = std::ldexp(1.0, bits - 1) - 1.0;
  return {step, half_levels * step};
}

std::vector<double> quantize(std::span<const double> samples, const QuantizerSpec& spec) {
  if (!(spec.step > 0.0)) {
    throw std::invalid_argument("quantize: step must be positive");
  }
  std::vector<double> out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    // std::round rounds halves away from zero.
    out[i] = std::clamp(spec.step * std::round(samples[i] / spec.step), -spec.clip, spec.clip);
  }
  return out;
}

namespace {

double quantized_snr(std::span<const double> signal, double step, int bits) {
  const auto spec = QuantizerSpec::for_bits(step, bits);
  double s = 0.0;
  double e = 0.0;
  for (double x : signal) {
    const double q = std::clamp(spec.step * std::round(x / spec.step), -spec.clip, spec.clip);
    s += x * x;
    e += (x - q) * (x - q);
  }
  if (e == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(s / e);
}

}  // namespace

QuantizerSpec tune_step(std::span<const double> signal, int bits_per_sample) {
  if (bits_per_sample < 2 || bits_per_sample > 31) {
    throw std::invalid_argument("tune_step: bits per sample must lie in [2, 31]");
  }
  double peak = 0.0;
  for (double x : signal) peak = std::max(peak, std::abs(x));
  if (!(peak > 0.0) || !std::isfinite(peak)) {
    throw std::invalid_argument("tune_step: silent or non-finite signal");
  }
  // Step at which the largest sample just reaches the outermost level.
  const double full_load = peak / (std::ldexp(1.0, bits_per_sample - 1) - 1.0);

  constexpr int kScan = 96;
  const double lo_step = full_load / 256.0;
  const double ratio = std::pow(1.25 * 256.0, 1.0 / (kScan - 1));
  std::vector<double> steps(kScan);
  std::vector<double> snrs(kScan);
  int best = 0;
  for (int i = 0; i < kScan; ++i) {
    steps[i] = lo_step * std::pow(ratio, i);
    snrs[i] = quantized_snr(signal, steps[i], bits_per_sample);
    if (snrs[i] > snrs[best]) best = i;
  }

  double a = steps[std::max(best - 1, 0)];
  double b = steps[std::min(best + 1, kScan - 1)];
  double best_step = steps[best];
  double best_snr = snrs[best];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = quantized_snr(signal, c, bits_per_sample);
  double fd = quantized_snr(signal, d, bits_per_sample);
  for (int it = 0; it < 48; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = quantized_snr(signal, c, bits_per_sample);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = quantized_snr(signal, d, bits_per_sample);
    }
    if (fc > best_snr) {
      best_snr = fc;
      best_step = c;
    }
    if (fd > best_snr) {
      best_snr = fd;
      best_step = d;
    }
  }
  return QuantizerSpec::for_bits(best_step, bits_per_sample);
}

SelfAdaptiveDecoder::SelfAdaptiveDecoder(double gamma, const FrameConfig& config)
    : gamma_(gamma), config_(config) {
  config_.validate();
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("SelfAdaptiveDecoder: gamma must lie in (0, 1)");
  }
  window_ = make_window(WindowKind::hanning, config_.window_len);
}

std::vector<double> SelfAdaptiveDecoder::decode_frame(std::size_t len, bool estimate) {
  if (estimate) {
    // Window ends lookahead_len after this frame; absent samples read as zero.
    const auto end = static_cast<std::ptrdiff_t>(decoded_ + config_.frame_len +
                                                 config_.lookahead_len);
    const std::ptrdiff_t start = end - static_cast<std::ptrdiff_t>(config_.window_len);
    std::vector<double> buf(config_.window_len, 0.0);
    for (std::size_t i = 0; i < buf.size(); ++i) {
      const std::ptrdiff_t n = start + static_cast<std::ptrdiff_t>(i);
      if (n >= static_cast<std::ptrdiff_t>(history_start_) &&
          n < static_cast<std::ptrdiff_t>(received_)) {
        buf[i] = history_[static_cast<std::size_t>(n) - history_start_];
      }
    }
    taps_.push_back(gamma_ * solve_alpha(gamma_, autocorr_01(buf, window_)));
  }
  const double tap = taps_.empty() ? 0.0 : taps_.back();
  const auto first = history_.begin() + static_cast<std::ptrdiff_t>(decoded_ - history_start_);
  auto out = de_emphasize(std::span<const double>(&*first, len), tap, state_);
  decoded_ += len;

  // Keep only what the next analysis window can still reach.
  const std::size_t reach = config_.window_len - config_.lookahead_len;
  const std::size_t keep_from = decoded_ + config_.frame_len > reach
                                    ? decoded_ + config_.frame_len - reach
                                    : 0;
  if (keep_from > history_start_) {
    const std::size_t drop = std::min(keep_from - history_start_, history_.size());
    history_.erase(history_.begin(), history_.begin() + static_cast<std::ptrdiff_t>(drop));
    history_start_ += drop;
  }
  return out;
}

std::vector<double> SelfAdaptiveDecoder::push(std::span<const double> coded) {
  history_.insert(history_.end(), coded.begin(), coded.end());
  received_ += coded.size();
  std::vector<double> out;
  while (received_ >= decoded_ + config_.frame_len + config_.lookahead_len) {
    const auto x = decode_frame(config_.frame_len, true);
    out.insert(out.end(), x.begin(), x.end());
  }
  return out;
}

std::vector<double> SelfAdaptiveDecoder::flush() {
  std::vector<double> out;
  while (received_ >= decoded_ + config_.frame_len) {
    const auto x = decode_frame(config_.frame_len, true);
    out.insert(out.end(), x.begin(), x.end());
  }
  if (received_ > decoded_) {
    const auto x = decode_frame(received_ - decoded_, false);
    out.insert(out.end(), x.begin(), x.end());
  }
  return out;
}

PipelineResult run_pipeline_with(std::span<const double> signal, const CodecMode& m,
                                 const FrameConfig& config,
                                 std::optional<QuantizerSpec> quantizer) {
  config.validate();
  validate_mode(m);
  if (signal.size() < config.window_len) {
    throw std::invalid_argument("run_pipeline: signal shorter than one analysis window");
  }

  PipelineResult r;
  if (const auto* bw = std::get_if<mode::Backward>(&m)) {
    r = run_backward(signal, bw->gamma, config, quantizer);
  } else {
    const auto enc_taps = encoder_taps(signal, m, config);
    r.coded = maybe_quantize(emphasize(signal, enc_taps, config.frame_len), quantizer);
    if (const auto* sa = std::get_if<mode::SelfAdaptive>(&m)) {
      SelfAdaptiveDecoder decoder(sa->gamma, config);
      r.decoded = decoder.push(r.coded);
      const auto rest = decoder.flush();
      r.decoded.insert(r.decoded.end(), rest.begin(), rest.end());
      r.per_frame_coeffs_dec = decoder.taps();
      r.decoder_delay = decoder.delay();
    } else {
      r.decoded = deemphasize(r.coded, enc_taps, config.frame_len);
      r.per_frame_coeffs_dec = enc_taps;
    }
    r.per_frame_coeffs_enc = enc_taps;
  }
  r.quantizer = quantizer;
  const bool silent = std::all_of(signal.begin(), signal.end(), [](double v) { return v == 0.0; });
  r.snr_db = silent ? std::numeric_limits<double>::quiet_NaN() : snr_db(signal, r.decoded);
  return r;
}

PipelineResult run_pipeline(std::span<const double> signal, const CodecMode& m,
                            const FrameConfig& config, std::optional<int> bits_per_sample) {
  config.validate();
  validate_mode(m);
  if (signal.size() < config.window_len) {
    throw std::invalid_argument("run_pipeline: signal shorter than one analysis window");
  }
  std::optional<QuantizerSpec> quantizer;
  if (bits_per_sample) {
    // Tune on what the encoder feeds the quantizer. Backward mode depends on
    // its own decoded output, so its forward-adaptive counterpart stands in.
    CodecMode probe = m;
    if (const auto* bw = std::get_if<mode::Backward>(&m)) probe = mode::Forward{bw->gamma};
    const auto taps = encoder_taps(signal, probe, config);
    quantizer = tune_step(emphasize(signal, taps, config.frame_len), *bits_per_sample);
  }
  auto r = run_pipeline_with(signal, m, config, quantizer);
  r.bits_per_sample = bits_per_sample;
  return r;
}

}  // namespace emphlab
