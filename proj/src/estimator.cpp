#include "emphlab/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "emphlab/ar_model.hpp"
#include "emphlab/errors.hpp"

namespace emphlab {

namespace {

constexpr double kResidualTol = 1e-12;
constexpr double kBracketTol = 1e-10;

void check_gamma(double gamma, const char* who) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument(std::string(who) + ": gamma must lie in (0, 1)");
  }
}

}  // namespace

EncoderEstimate estimate_alpha_encoder(const AutocorrPair& pair) {
  if (pair.silent()) return {0.0, true};
  return {std::clamp(*pair.ratio, -kAlphaLimit, kAlphaLimit), false};
}

CubicCoeffs build_cubic(double gamma, double rho) {
  check_gamma(gamma, "build_cubic");
  if (!(std::abs(rho) < 1.0)) {
    throw std::invalid_argument("build_cubic: |rho| must be < 1");
  }
  return {gamma * (1.0 - gamma), gamma * rho * (gamma - 2.0), gamma - 1.0, rho};
}

double rho_max(double gamma) { return rho_of_alpha(kAlphaLimit, gamma); }

double solve_alpha(double gamma, double rho) {
  check_gamma(gamma, "solve_alpha");
  if (!std::isfinite(rho)) {
    throw std::invalid_argument("solve_alpha: rho must be finite");
  }
  const double limit = rho_max(gamma);
  if (rho >= limit) return kAlphaLimit;
  if (rho <= -limit) return -kAlphaLimit;

  const CubicCoeffs f = build_cubic(gamma, rho);
  double lo = -kAlphaLimit;
  double hi = kAlphaLimit;
  const double f_lo = f(lo);
  const double f_hi = f(hi);
  // Within rounding of the domain edge the endpoint itself is the root.
  constexpr double kEdge = 1e-12;
  if (f_lo <= 0.0 && rho - (-limit) <= kEdge) return -kAlphaLimit;
  if (f_hi >= 0.0 && limit - rho <= kEdge) return kAlphaLimit;
  // f(a) = D(a) (rho - rho_of_alpha(a)) with D > 0, so f falls through zero.
  if (!(f_lo > 0.0 && f_hi < 0.0)) {
    std::ostringstream msg;
    msg << "solve_alpha: no sign change on the bracket (gamma=" << gamma
        << ", rho=" << rho << ")";
    throw ConsistencyError(msg.str());
  }
  while (hi - lo > kBracketTol) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    if (std::abs(f_mid) <= kResidualTol) return mid;
    if (f_mid > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double solve_alpha(double gamma, const AutocorrPair& pair) {
  if (pair.silent()) return 0.0;
  return solve_alpha(gamma, *pair.ratio);
}

DeemphasisTable::DeemphasisTable(double gamma, std::vector<double> rho,
                                 std::vector<double> alpha)
    : gamma_(gamma), rho_grid_(std::move(rho)), alpha_values_(std::move(alpha)) {
  if (rho_grid_.size() != alpha_values_.size() || rho_grid_.size() < 2) {
    throw std::invalid_argument("DeemphasisTable: need at least two matching entries");
  }
  for (std::size_t i = 1; i < rho_grid_.size(); ++i) {
    if (!(rho_grid_[i] > rho_grid_[i - 1]) || !(alpha_values_[i] > alpha_values_[i - 1])) {
      throw ConsistencyError("DeemphasisTable: grid is not strictly increasing");
    }
  }
}

DeemphasisTable DeemphasisTable::build(double gamma, std::size_t n_entries) {
  check_gamma(gamma, "build_table");
  if (n_entries < 2) {
    throw std::invalid_argument("build_table: need at least two entries");
  }
  std::vector<double> alpha(n_entries);
  std::vector<double> rho(n_entries);
  const double span = static_cast<double>(n_entries - 1);
  for (std::size_t i = 0; i < n_entries; ++i) {
    // Written so that mirrored entries are exact negatives.
    alpha[i] = kAlphaLimit * (2.0 * static_cast<double>(i) - span) / span;
    rho[i] = rho_of_alpha(alpha[i], gamma);
  }
  return DeemphasisTable(gamma, std::move(rho), std::move(alpha));
}

DeemphasisTable DeemphasisTable::read_csv(std::istream& in, double gamma) {
  check_gamma(gamma, "DeemphasisTable::read_csv");
  std::string line;
  if (!std::getline(in, line)) {
    throw FormatError("table csv: missing header");
  }
  std::vector<double> rho;
  std::vector<double> alpha;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    double r = 0.0;
    double a = 0.0;
    char comma = 0;
    if (!(row >> r >> comma >> a) || comma != ',') {
      throw FormatError("table csv: malformed row at line " + std::to_string(line_no));
    }
    rho.push_back(r);
    alpha.push_back(a);
  }
  return DeemphasisTable(gamma, std::move(rho), std::move(alpha));
}

void DeemphasisTable::write_csv(std::ostream& out) const {
  const auto old_precision = out.precision(17);
  out << "rho,alpha\n";
  for (std::size_t i = 0; i < size(); ++i) {
    out << rho_grid_[i] << ',' << alpha_values_[i] << '\n';
  }
  out.precision(old_precision);
}

double DeemphasisTable::lookup(double rho) const {
  if (rho <= rho_grid_.front()) return alpha_values_.front();
  if (rho >= rho_grid_.back()) return alpha_values_.back();
  const auto it = std::upper_bound(rho_grid_.begin(), rho_grid_.end(), rho);
  const auto hi = static_cast<std::size_t>(it - rho_grid_.begin());
  const std::size_t lo = hi - 1;
  const double t = (rho - rho_grid_[lo]) / (rho_grid_[hi] - rho_grid_[lo]);
  return alpha_values_[lo] + t * (alpha_values_[hi] - alpha_values_[lo]);
}

DeemphasisTable build_table(double gamma, std::size_t n_entries) {
  return DeemphasisTable::build(gamma, n_entries);
}

double lookup_alpha(const DeemphasisTable& table, double rho) {
  return table.lookup(rho);
}

}  // namespace emphlab
