#pragma once

#include <cstddef>
#include <vector>

#include "heisenframe/report.hpp"
#include "heisenframe/util.hpp"

namespace heisenframe {

// Perturbed integer frequencies omega_j, j in [-K, K], for exponentials on
// the unit interval (-1/2, 1/2). Construction rejects sequences with
// coinciding frequencies: the Gram degenerates there.
struct OmegaSequence {
  int K = 16;
  std::vector<double> omega;  // slot j + K

  static OmegaSequence harmonic(int K);
  static OmegaSequence uniform_shift(int K, double shift);
  static OmegaSequence alternating(int K, double M);

  double of(long j) const;
  double deviation() const;
  double separation() const;
  void validate() const;
};

// <e^{2 pi i v .}, e^{2 pi i u .}> over (-1/2, 1/2) = sinc(u - v).
double ds_gram_entry(double u, double v);

// Extremal eigenvalues of the sinc Gram on the truncated span, and the
// stability constant against the integer frequencies. There are no shell
// weights in one dimension, so C_M = 0.
BoundsReport ds_frame_bounds(const OmegaSequence& s);

}  // namespace heisenframe
