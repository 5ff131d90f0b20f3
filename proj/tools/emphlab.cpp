// emphlab: self-adaptive pre-/de-emphasis experiments from the command line.
//
// Exit codes: 0 success, 1 I/O or file format, 2 usage, 3 numeric failure.

#include <CLI11.hpp>

#include <exception>
#include <iostream>
#include <stdexcept>
#include <string>

#include "emphlab/commands.hpp"
#include "emphlab/errors.hpp"

namespace {

namespace cli = emphlab::cli;

void add_timing(CLI::App* cmd, cli::FrameTiming& t) {
  cmd->add_option("--frame-ms", t.frame_ms, "Frame duration in ms")->capture_default_str();
  cmd->add_option("--window-ms", t.window_ms, "Analysis window in ms")->capture_default_str();
  cmd->add_option("--lookahead-ms", t.lookahead_ms, "Analysis look-ahead in ms")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zero-bit self-adaptive pre-/de-emphasis toolkit"};
  app.require_subcommand(1);

  cli::SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Write an AR(1) test signal as 16-bit WAV");
  synth_cmd->add_option("--alpha", synth.alpha, "AR(1) coefficient")->capture_default_str();
  synth_cmd->add_option("--sigma2", synth.sigma2, "Innovation variance")->capture_default_str();
  synth_cmd->add_option("--duration", synth.duration_s, "Duration in seconds")
      ->capture_default_str();
  synth_cmd->add_option("--rate", synth.sample_rate_hz, "Sample rate in Hz")
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
  synth_cmd->add_option("-o,--out", synth.out_path, "Output WAV")->required();

  cli::AnalyzeOptions analyze;
  auto* analyze_cmd =
      app.add_subcommand("analyze", "Per-frame alpha estimates and alpha histogram");
  analyze_cmd->add_option("input", analyze.in_path, "Input WAV")->required();
  analyze_cmd->add_option("--gamma", analyze.gamma, "Emphasis weight")->capture_default_str();
  analyze_cmd->add_option("-o,--out", analyze.out_path, "Per-frame CSV")->required();
  analyze_cmd->add_option("--hist", analyze.hist_path, "Histogram CSV (default <out>.hist.csv)");
  add_timing(analyze_cmd, analyze.timing);

  cli::CodecOptions codec;
  int codec_bits = 4;
  auto* codec_cmd = app.add_subcommand("codec", "Run the PCM codec simulation on a WAV file");
  codec_cmd->add_option("input", codec.in_path, "Input WAV")->required();
  codec_cmd->add_option("--mode", codec.mode, "none, fixed, forward, backward or self")
      ->capture_default_str();
  codec_cmd->add_option("--gamma", codec.gamma, "Emphasis weight (beta for fixed)")
      ->capture_default_str();
  codec_cmd->add_option("--bits", codec_bits, "Bits per sample; 0 disables quantization")
      ->capture_default_str();
  codec_cmd->add_option("-o,--out", codec.out_path, "Decoded WAV")->required();
  codec_cmd->add_option("--report", codec.report_path, "Summary CSV")->required();
  add_timing(codec_cmd, codec.timing);

  cli::MonteCarloOptions mc;
  auto* mc_cmd = app.add_subcommand("montecarlo", "95% intervals of alpha estimates on AR(1)");
  mc_cmd->add_option("--gamma", mc.gamma, "Emphasis weight")->capture_default_str();
  mc_cmd->add_option("--frames", mc.n_trials, "Trials (frames) per alpha")->capture_default_str();
  mc_cmd->add_option("--frame-len", mc.frame_len, "Samples per frame")->capture_default_str();
  mc_cmd->add_option("--seed", mc.seed, "Random seed")->capture_default_str();
  mc_cmd->add_option("--alphas", mc.alpha_grid, "Explicit alpha grid")->delimiter(',');
  mc_cmd->add_option("-o,--out", mc.out_path, "Output CSV")->required();

  cli::TableOptions table;
  auto* table_cmd = app.add_subcommand("table", "Tabulate de-emphasis coefficient vs rho");
  table_cmd->add_option("--gamma", table.gamma, "Emphasis weight")->capture_default_str();
  table_cmd->add_option("--entries", table.n_entries, "Table size")->capture_default_str();
  table_cmd->add_option("-o,--out", table.out_path, "Output CSV")->required();

  cli::LsdSweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("lsd-sweep", "Mean LSD over modes, weights and rates");
  sweep_cmd->add_option("input", sweep.in_path, "Input WAV")->required();
  sweep_cmd->add_option("--gammas", sweep.gammas, "Emphasis weights")->delimiter(',');
  sweep_cmd->add_option("--bits", sweep.bits_list, "Bits per sample list")->delimiter(',');
  sweep_cmd->add_option("--modes", sweep.modes, "Codec modes")->delimiter(',');
  sweep_cmd->add_option("-o,--out", sweep.out_path, "Output CSV")->required();
  add_timing(sweep_cmd, sweep.timing);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*synth_cmd) {
      cli::cmd_synth(synth);
    } else if (*analyze_cmd) {
      cli::cmd_analyze(analyze);
    } else if (*codec_cmd) {
      if (codec_bits < 0) throw std::invalid_argument("--bits must be >= 0");
      codec.bits = codec_bits == 0 ? std::nullopt : std::optional<int>(codec_bits);
      cli::cmd_codec(codec);
    } else if (*mc_cmd) {
      cli::cmd_montecarlo(mc);
    } else if (*table_cmd) {
      cli::cmd_table(table);
    } else if (*sweep_cmd) {
      std::erase(sweep.modes, std::string{});
      cli::cmd_lsd_sweep(sweep);
    }
  } catch (const emphlab::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const emphlab::FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
