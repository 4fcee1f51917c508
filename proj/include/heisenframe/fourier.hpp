#pragma once

#include "heisenframe/grid.hpp"

namespace heisenframe {

// Frequency triple (b, beta, omega) of the Euclidean transform
//   f^(b,beta,omega) = int f(x,xi,t) e^{-2 pi i (b.x + beta.xi + omega t)}.
// All integrals here are Lebesgue and approximated by the midpoint rule on
// the function's grid.
struct Frequency {
  std::vector<double> b;
  std::vector<double> beta;
  double omega = 0.0;

  Frequency() = default;
  Frequency(std::vector<double> b_, std::vector<double> beta_, double omega_);
  // n = 1 convenience.
  Frequency(double b_, double beta_, double omega_);
};

cplx fourier_at(const GridFunction& f, const Frequency& freq);

// Elementwise fourier_at; each frequency uses the same reduction order as an
// independent call, so results match bit for bit.
std::vector<cplx> fourier_many(const GridFunction& f,
                               const std::vector<Frequency>& freqs);

// Transform along the central axis only: slice(x,xi) = sum_t f e^{-2pi i w t} h_t.
Tensor partial_fourier_t(const GridFunction& f, double omega);

// Finishes a partial_fourier_t slice at one noncentral frequency pair.
cplx slice_fourier_at(const Tensor& slice, const std::vector<double>& b,
                      const std::vector<double>& beta);

// Separable product-set transform: per_axis_freqs[axis] lists the frequency
// values probed along that axis (2n+1 lists). Returns fourier_at of every
// product frequency, row major with the last list fastest, computed by
// contracting one axis at a time.
std::vector<cplx> fourier_grid(const GridFunction& f,
                               const std::vector<std::vector<double>>& per_axis_freqs);

// Same factored contraction over the 2n noncentral axes of a slice.
std::vector<cplx> slice_fourier_grid(const Tensor& slice,
                                     const std::vector<std::vector<double>>& per_axis_freqs);

}  // namespace heisenframe
