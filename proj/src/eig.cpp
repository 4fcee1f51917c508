#include "heisenframe/eig.hpp"

#include <cmath>
#include <stdexcept>

namespace heisenframe {

SymMatrix SymMatrix::zero(std::size_t n) {
  SymMatrix m;
  m.n = n;
  m.a.assign(n * n, 0.0);
  return m;
}

namespace {

// Householder reduction to symmetric tridiagonal form (EISPACK tred2 lineage).
// On exit V holds the accumulated orthogonal transform, d the diagonal and e
// the subdiagonal (e[0] = 0). Rows/columns already tridiagonal are skipped, so
// diagonal input is returned untouched.
void tred2(std::size_t n, std::vector<double>& V, std::vector<double>& d,
           std::vector<double>& e) {
  auto v = [&](std::size_t i, std::size_t j) -> double& { return V[i * n + j]; };

  for (std::size_t j = 0; j < n; ++j) d[j] = v(n - 1, j);

  for (std::size_t i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (std::size_t j = 0; j < i; ++j) {
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
        v(j, i) = 0.0;
      }
    } else {
      for (std::size_t k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0.0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;

      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        v(j, i) = f;
        g = e[j] + v(j, j) * f;
        for (std::size_t k = j + 1; k < i; ++k) {
          g += v(k, j) * d[k];
          e[k] += v(k, j) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      double hh = f / (h + h);
      for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (std::size_t k = j; k < i; ++k) v(k, j) -= f * e[k] + g * d[k];
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
      }
    }
    d[i] = h;
  }

  for (std::size_t i = 0; i + 1 < n; ++i) {
    v(n - 1, i) = v(i, i);
    v(i, i) = 1.0;
    double h = d[i + 1];
    if (h != 0.0) {
      for (std::size_t k = 0; k <= i; ++k) d[k] = v(k, i + 1) / h;
      for (std::size_t j = 0; j <= i; ++j) {
        double g = 0.0;
        for (std::size_t k = 0; k <= i; ++k) g += v(k, i + 1) * v(k, j);
        for (std::size_t k = 0; k <= i; ++k) v(k, j) -= g * d[k];
      }
    }
    for (std::size_t k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = v(n - 1, j);
    v(n - 1, j) = 0.0;
  }
  v(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

// Implicit-shift QL for symmetric tridiagonal (EISPACK tql2 lineage). Zero
// off-diagonal input converges in zero iterations per eigenvalue.
void tql2(std::size_t n, std::vector<double>& d, std::vector<double>& e,
          std::vector<double>& V) {
  auto v = [&](std::size_t i, std::size_t j) -> double& { return V[i * n + j]; };

  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  double f = 0.0;
  double tst1 = 0.0;
  const double eps = std::ldexp(1.0, -52);
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n) {
      if (std::abs(e[m]) <= eps * tst1) break;
      ++m;
    }
    if (m > l) {
      int iter = 0;
      do {
        if (++iter > 60) {
          throw numerical_error("eigh: QL iteration failed to converge");
        }
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0.0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0;
        double c2 = c;
        double c3 = c;
        double el1 = e[l + 1];
        double s = 0.0;
        double s2 = 0.0;
        for (std::size_t i = m; i-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          for (std::size_t k = 0; k < n; ++k) {
            h = v(k, i + 1);
            v(k, i + 1) = s * v(k, i) + c * h;
            v(k, i) = c * v(k, i) - s * h;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }

  // Ascending selection sort, eigenvectors in lockstep.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::size_t k = i;
    double p = d[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      if (d[j] < p) {
        k = j;
        p = d[j];
      }
    }
    if (k != i) {
      d[k] = d[i];
      d[i] = p;
      for (std::size_t j = 0; j < n; ++j) std::swap(v(j, i), v(j, k));
    }
  }
}

}  // namespace

EigDecomposition eigh(const SymMatrix& A) {
  if (A.n == 0) throw std::invalid_argument("eigh: empty matrix");
  EigDecomposition out;
  out.n = A.n;
  out.vectors = A.a;
  out.values.assign(A.n, 0.0);
  std::vector<double> e(A.n, 0.0);
  if (A.n == 1) {
    out.values[0] = A.a[0];
    out.vectors[0] = 1.0;
    return out;
  }
  tred2(A.n, out.vectors, out.values, e);
  tql2(A.n, out.values, e, out.vectors);
  return out;
}

std::vector<double> eigh_values(const SymMatrix& A) {
  return eigh(A).values;
}

double rayleigh_max(const SymMatrix& A, int iters) {
  std::size_t n = A.n;
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = 1.0 + 0.01 * std::sin(static_cast<double>(i) + 1.0);
  }
  for (int it = 0; it < iters; ++it) {
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += A.at(i, j) * x[j];
      y[i] = acc;
      norm += acc * acc;
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) return 0.0;
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / norm;
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += A.at(i, j) * x[j];
    num += x[i] * acc;
    den += x[i] * x[i];
  }
  return num / den;
}

namespace {

template <typename Scalar>
std::vector<Scalar> solve_spd_impl(const EigDecomposition& d,
                                   const std::vector<Scalar>& b,
                                   double eigenvalue_floor) {
  std::size_t n = d.n;
  if (b.size() != n) throw std::invalid_argument("solve_spd: size mismatch");
  if (n == 0) return {};
  if (d.values.front() <= eigenvalue_floor) {
    throw numerical_error("solve_spd: eigenvalue " + format_g17(d.values.front()) +
                          " at or below floor " + format_g17(eigenvalue_floor));
  }
  std::vector<Scalar> proj(n, Scalar(0));
  for (std::size_t j = 0; j < n; ++j) {
    Scalar acc(0);
    for (std::size_t i = 0; i < n; ++i) acc += d.vec(i, j) * b[i];
    proj[j] = acc / d.values[j];
  }
  std::vector<Scalar> x(n, Scalar(0));
  for (std::size_t i = 0; i < n; ++i) {
    Scalar acc(0);
    for (std::size_t j = 0; j < n; ++j) acc += d.vec(i, j) * proj[j];
    x[i] = acc;
  }
  return x;
}

}  // namespace

std::vector<double> solve_spd(const EigDecomposition& d,
                              const std::vector<double>& b,
                              double eigenvalue_floor) {
  return solve_spd_impl(d, b, eigenvalue_floor);
}

std::vector<cplx> solve_spd(const EigDecomposition& d,
                            const std::vector<cplx>& b,
                            double eigenvalue_floor) {
  return solve_spd_impl(d, b, eigenvalue_floor);
}

}  // namespace heisenframe
