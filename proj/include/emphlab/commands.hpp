#pragma once

// Experiment drivers behind the emphlab command-line tool. Each command
// writes its outputs atomically and throws on failure; the CLI maps the
// exception type to an exit code.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "emphlab/core_dsp.hpp"

namespace emphlab::cli {

struct FrameTiming {
  double frame_ms = 10.0;
  double window_ms = 30.0;
  double lookahead_ms = 10.0;

  FrameConfig at_rate(int sample_rate_hz) const {
    return FrameConfig::from_ms(sample_rate_hz, frame_ms, window_ms, lookahead_ms);
  }
};

// Parallelism cap: EMPHLAB_THREADS if set and positive, else hardware threads.
unsigned thread_budget();

struct SynthOptions {
  double alpha = 0.9;
  double sigma2 = 1.0;
  double duration_s = 1.0;
  int sample_rate_hz = 16000;
  std::uint64_t seed = 1;
  std::filesystem::path out_path;
};

// AR(1) signal peak-normalized to 0.5 full scale.
void cmd_synth(const SynthOptions& opt);

struct AnalyzeOptions {
  std::filesystem::path in_path;
  FrameTiming timing;
  double gamma = 0.7;
  std::filesystem::path out_path;
  std::filesystem::path hist_path;  // empty: <out_path stem>.hist.csv
};

inline constexpr double kHistogramBinWidth = 0.02;

// CSV frame_index,alpha_tilde,rho_d,alpha_hat,silent plus a histogram of
// alpha_tilde (bin_low,bin_high,count).
void cmd_analyze(const AnalyzeOptions& opt);

struct CodecOptions {
  std::filesystem::path in_path;
  std::string mode = "self";
  double gamma = 0.7;  // beta for mode "fixed"
  std::optional<int> bits = 4;  // empty: no quantization
  FrameTiming timing;
  std::filesystem::path out_path;
  std::filesystem::path report_path;
};

// Decoded WAV, a one-row summary CSV at report_path
// (mode,gamma,bits,step,snr_db,mean_lsd_db,n_frames) and per-frame taps
// (frame_index,enc_tap,dec_tap) in <report stem>.frames.csv.
void cmd_codec(const CodecOptions& opt);

struct MonteCarloOptions {
  double gamma = 0.7;
  std::size_t n_trials = 30000;
  std::size_t frame_len = 1440;
  std::uint64_t seed = 1;
  std::vector<double> alpha_grid;  // empty: default grid
  std::filesystem::path out_path;
};

// CSV true_alpha,enc_lo,enc_hi,dec_lo,dec_hi.
void cmd_montecarlo(const MonteCarloOptions& opt);

struct TableOptions {
  double gamma = 0.7;
  std::size_t n_entries = 1024;
  std::filesystem::path out_path;
};

// CSV rho,alpha,gamma_alpha.
void cmd_table(const TableOptions& opt);

struct LsdSweepOptions {
  std::filesystem::path in_path;
  std::vector<double> gammas{0.3, 0.5, 0.7, 0.8, 0.9};
  std::vector<int> bits_list{3, 4, 5, 6, 7, 8};
  std::vector<std::string> modes{"self", "forward"};
  FrameTiming timing;
  std::filesystem::path out_path;
};

struct LsdRow {
  std::string mode;
  double gamma = 0.0;
  int bits = 0;
  double mean_lsd_db = 0.0;
  std::string status;  // "ok" or the error message
};

// Runs the codec over the Cartesian product of modes, gammas and bit
// depths. A failing row is reported in its status and the sweep continues.
std::vector<LsdRow> lsd_sweep(const std::vector<double>& signal, int sample_rate_hz,
                              const LsdSweepOptions& opt);

// CSV mode,gamma,bits,mean_lsd,status.
void cmd_lsd_sweep(const LsdSweepOptions& opt);

}  // namespace emphlab::cli
