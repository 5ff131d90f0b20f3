#include "emphlab/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "emphlab/ar_model.hpp"
#include "emphlab/codec_sim.hpp"
#include "emphlab/estimator.hpp"
#include "emphlab/metrics.hpp"
#include "emphlab/wav.hpp"

namespace emphlab::cli {

namespace {

std::filesystem::path sidecar(const std::filesystem::path& base, const char* suffix) {
  auto p = base;
  p.replace_extension();
  p += suffix;
  return p;
}

std::ostringstream csv_stream() {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out << std::setprecision(10);
  return out;
}

void require_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("gamma must lie in (0, 1)");
  }
}

}  // namespace

unsigned thread_budget() {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("EMPHLAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return hw;
}

void cmd_synth(const SynthOptions& opt) {
  if (!(opt.duration_s > 0.0) || opt.sample_rate_hz <= 0) {
    throw std::invalid_argument("synth: duration and sample rate must be positive");
  }
  const auto n = static_cast<std::size_t>(std::llround(opt.duration_s * opt.sample_rate_hz));
  if (n == 0) throw std::invalid_argument("synth: duration shorter than one sample");
  auto x = synthesize_ar1(ArModel{opt.alpha, opt.sigma2}, n, opt.seed);
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  if (peak > 0.0) {
    for (double& v : x) v *= 0.5 / peak;
  }
  write_wav(opt.out_path, WavAudio{opt.sample_rate_hz, std::move(x)});
}

void cmd_analyze(const AnalyzeOptions& opt) {
  require_gamma(opt.gamma);
  const WavAudio audio = read_wav(opt.in_path);
  const FrameConfig cfg = opt.timing.at_rate(audio.sample_rate_hz);
  const auto window = make_window(WindowKind::hanning, cfg.window_len);
  const std::size_t n_frames = audio.samples.size() / cfg.frame_len;
  const std::span<const double> x = audio.samples;

  // Encoder-side taps first, so the pre-emphasized signal switches
  // coefficients exactly as a codec would.
  std::vector<EncoderEstimate> enc(n_frames);
  std::vector<double> d(audio.samples.size(), 0.0);
  FilterState state;
  for (std::size_t f = 0; f < n_frames; ++f) {
    enc[f] = estimate_alpha_encoder(autocorr_01(analysis_buffer(x, f, cfg), window));
    const auto out = pre_emphasize(x.subspan(f * cfg.frame_len, cfg.frame_len),
                                   opt.gamma * enc[f].alpha, state);
    std::copy(out.begin(), out.end(), d.begin() + static_cast<std::ptrdiff_t>(f * cfg.frame_len));
  }

  constexpr auto kBins = static_cast<std::size_t>(2.0 / kHistogramBinWidth + 0.5);
  std::vector<std::size_t> counts(kBins, 0);
  auto out = csv_stream();
  out << "frame_index,alpha_tilde,rho_d,alpha_hat,silent\n";
  for (std::size_t f = 0; f < n_frames; ++f) {
    const AutocorrPair pd = autocorr_01(analysis_buffer(d, f, cfg), window);
    const double rho = pd.ratio.value_or(0.0);
    const double alpha_hat = solve_alpha(opt.gamma, pd);
    out << f << ',' << enc[f].alpha << ',' << rho << ',' << alpha_hat << ','
        << (enc[f].silent ? 1 : 0) << '\n';
    const auto bin = static_cast<std::ptrdiff_t>(std::floor((enc[f].alpha + 1.0) / kHistogramBinWidth));
    ++counts[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(bin, 0, kBins - 1))];
  }
  write_file_atomic(opt.out_path, out.str());

  auto hist = csv_stream();
  hist << "bin_low,bin_high,count\n";
  for (std::size_t b = 0; b < kBins; ++b) {
    hist << -1.0 + b * kHistogramBinWidth << ',' << -1.0 + (b + 1) * kHistogramBinWidth << ','
         << counts[b] << '\n';
  }
  write_file_atomic(opt.hist_path.empty() ? sidecar(opt.out_path, ".hist.csv") : opt.hist_path,
                    hist.str());
}

void cmd_codec(const CodecOptions& opt) {
  const CodecMode mode = parse_mode(opt.mode, opt.gamma);
  const WavAudio audio = read_wav(opt.in_path);
  const FrameConfig cfg = opt.timing.at_rate(audio.sample_rate_hz);
  const PipelineResult r = run_pipeline(audio.samples, mode, cfg, opt.bits);
  const LsdReport lsd = lsd_db(audio.samples, r.decoded, cfg);

  write_wav(opt.out_path, WavAudio{audio.sample_rate_hz, r.decoded});

  auto summary = csv_stream();
  summary << "mode,gamma,bits,step,snr_db,mean_lsd_db,n_frames\n";
  summary << mode_name(mode) << ',' << mode_weight(mode) << ',';
  if (opt.bits) summary << *opt.bits;
  summary << ',';
  if (r.quantizer) summary << r.quantizer->step;
  summary << ',' << r.snr_db << ',' << lsd.mean_lsd_db << ',' << r.per_frame_coeffs_enc.size()
          << '\n';
  write_file_atomic(opt.report_path, summary.str());

  auto frames = csv_stream();
  frames << "frame_index,enc_tap,dec_tap\n";
  for (std::size_t f = 0; f < r.per_frame_coeffs_enc.size(); ++f) {
    frames << f << ',' << r.per_frame_coeffs_enc[f] << ',' << r.per_frame_coeffs_dec[f] << '\n';
  }
  write_file_atomic(sidecar(opt.report_path, ".frames.csv"), frames.str());
}

void cmd_montecarlo(const MonteCarloOptions& opt) {
  require_gamma(opt.gamma);
  MonteCarloConfig mc;
  mc.alpha_grid = opt.alpha_grid.empty() ? default_alpha_grid() : opt.alpha_grid;
  mc.gamma = opt.gamma;
  mc.n_trials = opt.n_trials;
  mc.frame_len = opt.frame_len;
  mc.seed = opt.seed;
  mc.threads = thread_budget();
  const auto reports = run_monte_carlo(mc);

  auto out = csv_stream();
  out << "true_alpha,enc_lo,enc_hi,dec_lo,dec_hi\n";
  for (const auto& r : reports) {
    out << r.true_alpha << ',' << r.ci95_encoder.low << ',' << r.ci95_encoder.high << ','
        << r.ci95_decoder.low << ',' << r.ci95_decoder.high << '\n';
  }
  write_file_atomic(opt.out_path, out.str());
}

void cmd_table(const TableOptions& opt) {
  require_gamma(opt.gamma);
  const DeemphasisTable table = build_table(opt.gamma, opt.n_entries);
  auto out = csv_stream();
  out << std::setprecision(17);
  out << "rho,alpha,gamma_alpha\n";
  for (std::size_t i = 0; i < table.size(); ++i) {
    const double a = table.alpha_values()[i];
    out << table.rho_grid()[i] << ',' << a << ',' << opt.gamma * a << '\n';
  }
  write_file_atomic(opt.out_path, out.str());
}

std::vector<LsdRow> lsd_sweep(const std::vector<double>& signal, int sample_rate_hz,
                              const LsdSweepOptions& opt) {
  if (opt.gammas.empty() || opt.bits_list.empty() || opt.modes.empty()) {
    throw std::invalid_argument("lsd-sweep: gammas, bits and modes must be non-empty");
  }
  const FrameConfig cfg = opt.timing.at_rate(sample_rate_hz);
  std::vector<LsdRow> rows;
  for (const auto& m : opt.modes) {
    for (double g : opt.gammas) {
      for (int b : opt.bits_list) rows.push_back({m, g, b, 0.0, ""});
    }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      LsdRow& row = rows[i];
      try {
        const CodecMode mode = parse_mode(row.mode, row.gamma);
        const auto r = run_pipeline(signal, mode, cfg, row.bits);
        row.mean_lsd_db = lsd_db(signal, r.decoded, cfg).mean_lsd_db;
        row.status = "ok";
      } catch (const std::exception& e) {
        row.mean_lsd_db = std::nan("");
        row.status = e.what();
      }
    }
  };
  const unsigned n = std::min<std::size_t>(thread_budget(), rows.size());
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  return rows;
}

void cmd_lsd_sweep(const LsdSweepOptions& opt) {
  if (opt.gammas.empty() || opt.bits_list.empty() || opt.modes.empty()) {
    throw std::invalid_argument("lsd-sweep: gammas, bits and modes must be non-empty");
  }
  const WavAudio audio = read_wav(opt.in_path);
  const auto rows = lsd_sweep(audio.samples, audio.sample_rate_hz, opt);
  auto out = csv_stream();
  out << "mode,gamma,bits,mean_lsd,status\n";
  for (const auto& r : rows) {
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    out << r.mode << ',' << r.gamma << ',' << r.bits << ',' << r.mean_lsd_db << ',' << status
        << '\n';
  }
  write_file_atomic(opt.out_path, out.str());
}

}  // namespace emphlab::cli
