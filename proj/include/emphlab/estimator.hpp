#pragma once

// Decoder-side re-estimation of the AR(1) coefficient from the lag-1/lag-0
// autocorrelation ratio of a pre-emphasized signal whose weight gamma is
// known to both ends.
//
// Eliminating the innovation power from the lag-0 and lag-1 equations of
// the ARMA(1,1) process d(n) = a d(n-1) + w(n) - a g w(n-1) gives
//
//   g(1-g) a^3 + g rho (g-2) a^2 + (g-1) a + rho = 0.
//
// Note the linear coefficient is (g-1), not g(g-1): the latter does not
// vanish at the true alpha and contradicts the g -> 0 limit (alpha = rho).
// The cubic has exactly one root in (-1, 1) and is strictly decreasing in
// alpha across that root, so it is solved by bisection on a fixed bracket.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "emphlab/core_dsp.hpp"

namespace emphlab {

// Every emphasis coefficient is kept within this bound.
inline constexpr double kAlphaLimit = 0.999;

struct EncoderEstimate {
  double alpha = 0.0;
  bool silent = false;
};

// Least-squares alpha = r1/r0 clamped to +-kAlphaLimit; 0 for silence.
EncoderEstimate estimate_alpha_encoder(const AutocorrPair& pair);

struct CubicCoeffs {
  double c3 = 0.0;
  double c2 = 0.0;
  double c1 = 0.0;
  double c0 = 0.0;

  double operator()(double a) const { return ((c3 * a + c2) * a + c1) * a + c0; }
};

CubicCoeffs build_cubic(double gamma, double rho);

// Largest achievable rho for the given gamma, rho_of_alpha(kAlphaLimit, gamma).
double rho_max(double gamma);

// The unique root of build_cubic(gamma, rho) in [-kAlphaLimit, kAlphaLimit].
// rho outside the achievable range is clamped to it first.
double solve_alpha(double gamma, double rho);

// Re-estimate from an autocorrelation pair; silent buffers yield alpha = 0.
double solve_alpha(double gamma, const AutocorrPair& pair);

class DeemphasisTable {
 public:
  // Uniform alpha grid on [-kAlphaLimit, kAlphaLimit] with n_entries >= 2
  // points. Throws ConsistencyError if the rho grid is not strictly
  // increasing.
  static DeemphasisTable build(double gamma, std::size_t n_entries);

  // Reads "rho,alpha[,...]" rows with a header line.
  static DeemphasisTable read_csv(std::istream& in, double gamma);

  void write_csv(std::ostream& out) const;

  // Clamps rho to domain() and interpolates linearly.
  double lookup(double rho) const;

  double gamma() const { return gamma_; }
  std::span<const double> rho_grid() const { return rho_grid_; }
  std::span<const double> alpha_values() const { return alpha_values_; }
  double rho_min() const { return rho_grid_.front(); }
  double rho_max() const { return rho_grid_.back(); }
  std::size_t size() const { return rho_grid_.size(); }

 private:
  DeemphasisTable(double gamma, std::vector<double> rho, std::vector<double> alpha);

  double gamma_;
  std::vector<double> rho_grid_;
  std::vector<double> alpha_values_;
};

inline constexpr std::size_t kDefaultTableSize = 1024;

DeemphasisTable build_table(double gamma, std::size_t n_entries = kDefaultTableSize);
double lookup_alpha(const DeemphasisTable& table, double rho);

}  // namespace emphlab
