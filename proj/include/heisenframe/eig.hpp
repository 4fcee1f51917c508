#pragma once

#include "heisenframe/util.hpp"

namespace heisenframe {

// Dense real symmetric matrix, row major. Callers must fill both triangles.
struct SymMatrix {
  std::size_t n = 0;
  std::vector<double> a;

  static SymMatrix zero(std::size_t n);
  double& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
  const double& at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

// values ascending; vectors row major, column j paired with values[j].
struct EigDecomposition {
  std::size_t n = 0;
  std::vector<double> values;
  std::vector<double> vectors;

  double vec(std::size_t i, std::size_t j) const { return vectors[i * n + j]; }
};

// Householder tridiagonalization followed by implicit-shift QL. Deterministic
// and single-threaded. Diagonal input passes through exactly (no rounding).
EigDecomposition eigh(const SymMatrix& A);
std::vector<double> eigh_values(const SymMatrix& A);

// Rayleigh quotient after `iters` power steps from a fixed starting vector.
// For symmetric A this never exceeds the true largest eigenvalue.
double rayleigh_max(const SymMatrix& A, int iters);

// x = V diag(1/lambda) V^T b. Throws numerical_error when an eigenvalue lies
// at or below `eigenvalue_floor` (matrix not usably positive definite).
std::vector<double> solve_spd(const EigDecomposition& d,
                              const std::vector<double>& b,
                              double eigenvalue_floor);
std::vector<cplx> solve_spd(const EigDecomposition& d,
                            const std::vector<cplx>& b,
                            double eigenvalue_floor);

}  // namespace heisenframe
