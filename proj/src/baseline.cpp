#include "heisenframe/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "heisenframe/eig.hpp"

namespace heisenframe {

OmegaSequence OmegaSequence::harmonic(int K) {
  if (K < 1) throw std::invalid_argument("OmegaSequence: K must be positive");
  OmegaSequence s;
  s.K = K;
  for (long j = -K; j <= K; ++j) s.omega.push_back(static_cast<double>(j));
  s.validate();
  return s;
}

OmegaSequence OmegaSequence::uniform_shift(int K, double shift) {
  OmegaSequence s = harmonic(K);
  for (double& w : s.omega) w += shift;
  s.validate();
  return s;
}

OmegaSequence OmegaSequence::alternating(int K, double M) {
  OmegaSequence s = harmonic(K);
  for (long j = -K; j <= K; ++j) {
    s.omega[static_cast<std::size_t>(j + K)] += M * (j % 2 == 0 ? 1.0 : -1.0);
  }
  s.validate();
  return s;
}

double OmegaSequence::of(long j) const {
  if (j < -K || j > K) throw std::invalid_argument("OmegaSequence: index out of range");
  return omega[static_cast<std::size_t>(j + K)];
}

double OmegaSequence::deviation() const {
  double M = 0.0;
  for (long j = -K; j <= K; ++j) {
    M = std::max(M, std::abs(omega[static_cast<std::size_t>(j + K)] - j));
  }
  return M;
}

double OmegaSequence::separation() const {
  std::vector<double> sorted = omega;
  std::sort(sorted.begin(), sorted.end());
  double sep = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    sep = std::min(sep, sorted[i] - sorted[i - 1]);
  }
  return sep;
}

void OmegaSequence::validate() const {
  if (omega.size() != 2 * static_cast<std::size_t>(K) + 1) {
    throw std::invalid_argument("OmegaSequence: table size does not match K");
  }
  if (!(separation() > 0.0)) {
    throw numerical_error("omega sequence has coinciding frequencies (separation 0)");
  }
}

double ds_gram_entry(double u, double v) { return sinc(u - v); }

BoundsReport ds_frame_bounds(const OmegaSequence& s) {
  s.validate();
  std::size_t m = s.omega.size();
  SymMatrix G = SymMatrix::zero(m);
  SymMatrix D = SymMatrix::zero(m);
  for (std::size_t i = 0; i < m; ++i) {
    double wi = s.omega[i];
    double hi = static_cast<double>(static_cast<long>(i) - s.K);
    for (std::size_t j = 0; j < m; ++j) {
      double wj = s.omega[j];
      double hj = static_cast<double>(static_cast<long>(j) - s.K);
      G.at(i, j) = ds_gram_entry(wi, wj);
      D.at(i, j) = ds_gram_entry(wi, wj) - ds_gram_entry(hi, wj) -
                   ds_gram_entry(wi, hj) + ds_gram_entry(hi, hj);
    }
  }
  EigDecomposition eig = eigh(G);
  double T = std::max(0.0, eigh_values(D).back());
  double rt = std::sqrt(T);

  BoundsReport rep;
  rep.A_est = eig.values.front();
  rep.B_est = eig.values.back();
  rep.C_M = 0.0;
  rep.T_est = T;
  rep.degenerate_lower = rt >= 1.0;
  rep.envelope_lo = rep.degenerate_lower ? 0.0 : (1.0 - rt) * (1.0 - rt);
  rep.envelope_hi = (1.0 + rt) * (1.0 + rt);
  rep.condition_number = rep.A_est > 0.0
                             ? rep.B_est / rep.A_est
                             : std::numeric_limits<double>::infinity();
  rep.deviation = s.deviation();
  rep.weighted = false;
  rep.K_xy = s.K;
  rep.K_t = 0;
  rep.index_count = m;
  return rep;
}

}  // namespace heisenframe
