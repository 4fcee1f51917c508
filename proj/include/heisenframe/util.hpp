#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace heisenframe {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Failure of a numerical procedure (not a frame, non-convergence,
// insufficient enumeration radius). The CLI maps this to exit code 3.
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File-format or filesystem failure. The CLI maps this to exit code 4.
class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// sin(pi s) / (pi s) with sinc(0) = 1 and exact zeros at nonzero integers.
inline double sinc(double s) {
  if (s == 0.0) return 1.0;
  if (s == std::round(s)) return 0.0;
  return std::sin(kPi * s) / (kPi * s);
}

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  double center() const { return 0.5 * (lo + hi); }
  bool contains(double v) const { return v >= lo && v < hi; }
};

using Box = std::vector<Interval>;

// printf "%.17g" formatting; round-trips doubles exactly.
std::string format_g17(double v);

std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

// Thread budget: HEISENFRAME_THREADS caps parallelism, 0 or unset means auto.
int effective_threads();

// Splits [0, count) into contiguous chunks, one worker per chunk. Chunk
// boundaries are deterministic; chunks must write disjoint state.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t, std::size_t)>& run);

}  // namespace heisenframe
