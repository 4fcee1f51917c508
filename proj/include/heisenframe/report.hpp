#pragma once

#include <cstddef>

namespace heisenframe {

// Truncated-span frame bound estimates together with the perturbation
// constants they are compared against. A_est and B_est are exact for the
// truncated span and heuristic for the full space; the stability tests
// (doubling the truncation) quantify the gap.
struct BoundsReport {
  double A_est = 0.0;
  double B_est = 0.0;
  double C_M = 0.0;
  double T_est = 0.0;
  double envelope_lo = 0.0;
  double envelope_hi = 0.0;
  double condition_number = 0.0;
  double deviation = 0.0;
  bool degenerate_lower = false;
  bool weighted = false;
  int K_xy = 0;
  int K_t = 0;
  std::size_t index_count = 0;
};

}  // namespace heisenframe
