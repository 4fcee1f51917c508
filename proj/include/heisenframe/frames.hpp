#pragma once

#include <cstdint>

#include "heisenframe/eig.hpp"
#include "heisenframe/fourier.hpp"
#include "heisenframe/grid.hpp"
#include "heisenframe/report.hpp"

namespace heisenframe {

// Index z = (a, alpha, k) of one frame atom. The embedded lattice character
// frequency is (a, alpha, 2k): central frequencies live on 2Z because the
// fundamental central period is 1/2.
struct FrameIndex {
  std::vector<long> a;
  std::vector<long> alpha;
  long k = 0;
};

struct Truncation {
  int K_xy = 4;
  int K_t = 4;

  Truncation() = default;
  Truncation(int kxy, int kt);

  std::size_t pair_count(std::size_t n) const;
  std::size_t index_count(std::size_t n) const;
  bool contains(const FrameIndex& z) const;
  bool operator==(const Truncation& o) const {
    return K_xy == o.K_xy && K_t == o.K_t;
  }
};

// All indices with ||a||_inf, ||alpha||_inf <= K_xy and |k| <= K_t, row major
// over (a_0..a_{n-1}, alpha_0..alpha_{n-1}, k) with k fastest, each digit
// ascending. File formats and coefficient tables share this order.
std::vector<FrameIndex> enumerate_indices(std::size_t n, const Truncation& t);

// Perturbed frequency family over a truncation: the k = 0 shell moves the
// noncentral frequencies a -> b_a, alpha -> beta_alpha; the k != 0 shells
// move only the central frequency 2k -> omega_k. Construction rejects
// schemes that cannot be frames (some omega_k = 0, or deviation >= 2/n).
struct PerturbationScheme {
  std::size_t n = 1;
  Truncation trunc;
  std::vector<std::vector<double>> b;     // (2K_xy+1)^n rows, row major over a
  std::vector<std::vector<double>> beta;  // same layout over alpha
  std::vector<double> omega;              // 2K_t+1 slots; slot k=0 unused

  static PerturbationScheme harmonic(std::size_t n, const Truncation& t);
  static PerturbationScheme alternating(std::size_t n, const Truncation& t,
                                        double M);
  static PerturbationScheme uniform_omega_shift(std::size_t n,
                                                const Truncation& t,
                                                double shift);
  static PerturbationScheme random(std::size_t n, const Truncation& t,
                                   double M, std::uint64_t seed);

  const std::vector<double>& b_of(const std::vector<long>& a) const;
  const std::vector<double>& beta_of(const std::vector<long>& alpha) const;
  double omega_of(long k) const;

  // Checks table shapes, omega_k != 0 for k != 0, and deviation < 2/n.
  // Factories call it; call it again after editing tables by hand.
  void validate() const;
};

// k = 0 -> (b_a, beta_alpha, 0); k != 0 -> (a, alpha, omega_k).
Frequency tilde_map(const PerturbationScheme& s, const FrameIndex& z);

// Unperturbed frequency (a, alpha, 2k).
Frequency harmonic_frequency(const FrameIndex& z);

// M = max over the truncation of ||b_a - a||_inf, ||beta_alpha - alpha||_inf,
// |omega_k - 2k|.
double scheme_deviation(const PerturbationScheme& s);

// C(M) = nM / (2 - nM), the relative distortion of the |2k/omega_k|^n shell
// weights. Domain 0 <= M < 2/n.
double weight_distortion_bound(double M, std::size_t n);

enum class Convention { kLebesgueRaw, kHaarNormalized };

// Coefficients over a truncation in canonical index order. haar-normalized
// values carry the extra sqrt(2) that makes the harmonic family Parseval.
struct CoefficientTable {
  std::size_t n = 1;
  Truncation trunc;
  Convention convention = Convention::kHaarNormalized;
  std::vector<cplx> values;
};

// c_z = fourier_at(f, tilde(z)), times sqrt(2) under haar normalization.
CoefficientTable analysis(const GridFunction& f, const PerturbationScheme& s,
                          Convention convention = Convention::kHaarNormalized);

// q: k = 0 shell at the perturbed noncentral frequencies; r: k != 0 shells
// weighted by |2k/omega_k|^n; phi: the same shells unweighted; p = q + r.
// All Lebesgue-raw. The sandwich (1-C(M)) phi <= r <= (1+C(M)) phi holds by
// construction of C(M).
struct QuadraticForms {
  double q = 0.0;
  double r = 0.0;
  double phi = 0.0;
  double p = 0.0;
};

QuadraticForms quadratic_forms(const GridFunction& f,
                               const PerturbationScheme& s);

// Inner product of exponentials over the reproducing box in closed form:
// with d = u - v, prod_i sinc(d_i) * (1/2) sinc(d_omega / 2). Real-valued;
// returned as complex to keep the Hermitian-form signature.
cplx gram_entry(const Frequency& u, const Frequency& v);

// G[z][w] = 2 * gram_entry(tilde(z), tilde(w)), scaled by sqrt(w_z w_w) when
// weighted (w_z = |2k/omega_k|^n on the k != 0 shells). The harmonic scheme
// gives exactly the identity. Entries are real, so the matrix is symmetric.
SymMatrix gram_matrix(const PerturbationScheme& s, bool weighted);

// Gram of the same atoms under the grid (midpoint) inner product instead of
// the exact integrals. This is the matrix the sampled atoms actually satisfy,
// so reconstruction on a grid must invert it rather than the continuum Gram.
// Closed form per axis; requires a centered box.
SymMatrix discrete_gram_matrix(const PerturbationScheme& s,
                               const GridSpec& grid);

// T_est = 2 * lambda_max(D) with D[z][w] = <d_w, d_z>, d_z the difference
// between the perturbed and harmonic atoms. Bounds the relative l2 change of
// coefficient sequences on the truncated harmonic span, for every f, since it
// is the squared norm of the difference of the two analysis operators.
double stability_constant(const PerturbationScheme& s);

struct Envelope {
  double lo = 0.0;
  double hi = 0.0;
  bool degenerate_lower = false;
};

// lo = (1-C(M))(1-sqrt(T))^2 clamped at 0, hi = (1+C(M))(1+sqrt(T))^2. The
// lower bound is vacuous once sqrt(T) >= 1 or C(M) >= 1; the flag records
// that.
Envelope bound_envelope(double M, double T, std::size_t n);

// Extremal eigenvalues of the (weighted) Gram on the truncated span, plus the
// perturbation constants. The dense eigensolve is cross-checked by power
// iteration from both spectral ends.
BoundsReport frame_bounds(const PerturbationScheme& s, bool weighted);

// f = sum_z g_z * scale * e_{tilde(z)} sampled on `target`, with
// scale = sqrt(2) under haar normalization and 1 for Lebesgue-raw. Attaches
// the exact evaluator.
GridFunction synthesize(const CoefficientTable& g, const PerturbationScheme& s,
                        const GridSpec& target);

enum class ReconstructMethod { kGramSolve, kFrameIteration };

struct ReconstructResult {
  GridFunction f;
  int iterations = 0;
  double residual = 0.0;
};

// Recovers f from analysis coefficients. gram-solve inverts the discrete
// Gram; frame-iteration relaxes with step 2/(A+B) from the discrete Gram
// extremes until the coefficient residual drops below tol. Throws
// numerical_error when the truncated family is not a frame on the grid or
// the iteration fails to converge within max_iter.
ReconstructResult reconstruct(const CoefficientTable& c,
                              const PerturbationScheme& s,
                              const GridSpec& target, ReconstructMethod method,
                              double tol, int max_iter);

}  // namespace heisenframe
