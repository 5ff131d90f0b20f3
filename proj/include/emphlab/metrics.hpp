#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "emphlab/core_dsp.hpp"

namespace emphlab {

// 10 log10(sum ref^2 / sum (ref - test)^2); +infinity when the error is zero.
double snr_db(std::span<const double> reference, std::span<const double> test);

struct LsdReport {
  double mean_lsd_db = 0.0;
  std::vector<double> per_frame_lsd_db;
  std::size_t n_frames = 0;
};

// Power floor for spectral comparisons, relative to each frame's peak bin.
inline constexpr double kSpectralFloor = 1e-10;

// Log spectral distortion over Hanning-windowed frames of config.window_len
// samples with 50% overlap. Per frame: RMS over the non-negative-frequency
// bins of the dB power ratio, with an FFT size of the next power of two.
LsdReport lsd_db(std::span<const double> reference, std::span<const double> test,
                 const FrameConfig& config);

}  // namespace emphlab
