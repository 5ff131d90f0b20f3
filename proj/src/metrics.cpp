#include "emphlab/metrics.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace emphlab {

namespace {

// The FFTW planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

class RealFft {
 public:
  explicit RealFft(std::size_t n)
      : n_(n),
        in_(static_cast<double*>(fftw_malloc(sizeof(double) * n))),
        out_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)))) {
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_.get(), out_.get(), FFTW_ESTIMATE);
    if (plan_ == nullptr) throw std::runtime_error("fftw: planning failed");
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;
  ~RealFft() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }

  // Power spectrum of the zero-padded windowed frame, n/2 + 1 bins.
  void power(std::span<const double> frame, std::span<const double> window,
             std::vector<double>& out) {
    std::fill(in_.get(), in_.get() + n_, 0.0);
    for (std::size_t i = 0; i < frame.size(); ++i) in_.get()[i] = frame[i] * window[i];
    fftw_execute(plan_);
    out.resize(n_ / 2 + 1);
    for (std::size_t k = 0; k < out.size(); ++k) {
      const double re = out_.get()[k][0];
      const double im = out_.get()[k][1];
      out[k] = re * re + im * im;
    }
  }

 private:
  std::size_t n_;
  std::unique_ptr<double, FftwFree> in_;
  std::unique_ptr<fftw_complex, FftwFree> out_;
  fftw_plan plan_ = nullptr;
};

void floor_spectrum(std::vector<double>& p) {
  const double peak = *std::max_element(p.begin(), p.end());
  const double floor = std::max(kSpectralFloor * peak, std::numeric_limits<double>::min());
  for (double& v : p) v = std::max(v, floor);
}

}  // namespace

double snr_db(std::span<const double> reference, std::span<const double> test) {
  if (reference.size() != test.size()) {
    throw std::invalid_argument("snr_db: length mismatch");
  }
  double signal = 0.0;
  double noise = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double e = reference[i] - test[i];
    signal += reference[i] * reference[i];
    noise += e * e;
  }
  if (signal <= 0.0) {
    throw std::invalid_argument("snr_db: silent reference");
  }
  if (noise == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(signal / noise);
}

LsdReport lsd_db(std::span<const double> reference, std::span<const double> test,
                 const FrameConfig& config) {
  if (reference.size() != test.size()) {
    throw std::invalid_argument("lsd_db: length mismatch");
  }
  const std::size_t len = config.window_len;
  if (len < 2 || reference.size() < len) {
    throw std::invalid_argument("lsd_db: signal shorter than one analysis window");
  }
  const std::size_t hop = std::max<std::size_t>(1, len / 2);
  const auto window = make_window(WindowKind::hanning, len);
  RealFft fft(std::bit_ceil(len));

  LsdReport report;
  std::vector<double> p_ref;
  std::vector<double> p_test;
  for (std::size_t start = 0; start + len <= reference.size(); start += hop) {
    fft.power(reference.subspan(start, len), window, p_ref);
    fft.power(test.subspan(start, len), window, p_test);
    floor_spectrum(p_ref);
    floor_spectrum(p_test);
    double acc = 0.0;
    for (std::size_t k = 0; k < p_ref.size(); ++k) {
      const double db = 10.0 * std::log10(p_ref[k] / p_test[k]);
      acc += db * db;
    }
    report.per_frame_lsd_db.push_back(std::sqrt(acc / static_cast<double>(p_ref.size())));
  }
  report.n_frames = report.per_frame_lsd_db.size();
  report.mean_lsd_db = std::accumulate(report.per_frame_lsd_db.begin(),
                                       report.per_frame_lsd_db.end(), 0.0) /
                       static_cast<double>(report.n_frames);
  return report;
}

}  // namespace emphlab
