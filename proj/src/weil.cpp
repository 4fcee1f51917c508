#include "heisenframe/weil.hpp"

#include <cmath>
#include <stdexcept>

namespace heisenframe {

std::size_t default_gamma_radius(const GridSpec& spec) {
  double need = 1.0;
  for (std::size_t axis = 0; axis < 2 * spec.n; ++axis) {
    need = std::max({need, std::abs(spec.box[axis].lo), std::abs(spec.box[axis].hi)});
  }
  const Interval& ct = spec.box[2 * spec.n];
  need = std::max({need, 2.0 * std::abs(ct.lo), 2.0 * std::abs(ct.hi)});
  return static_cast<std::size_t>(std::ceil(need - 1e-12));
}

namespace {

// Lattice elements (a, alpha, m/2) with max(|a|, |alpha|, |m|) == shell.
std::vector<Point> lattice_shell(std::size_t n, long shell) {
  std::vector<Point> out;
  std::size_t dims = 2 * n + 1;
  std::vector<long> c(dims, -shell);
  bool done = false;
  while (!done) {
    long norm = 0;
    for (long v : c) norm = std::max(norm, std::labs(v));
    if (norm == shell) {
      Point p;
      p.x.resize(n);
      p.xi.resize(n);
      for (std::size_t i = 0; i < n; ++i) p.x[i] = static_cast<double>(c[i]);
      for (std::size_t i = 0; i < n; ++i) p.xi[i] = static_cast<double>(c[n + i]);
      p.t = 0.5 * static_cast<double>(c[2 * n]);
      out.push_back(std::move(p));
    }
    done = true;
    for (std::size_t axis = dims; axis-- > 0;) {
      if (++c[axis] <= shell) {
        done = false;
        break;
      }
      c[axis] = -shell;
    }
  }
  return out;
}

// Folds a point into the fundamental domain [0,1)^{2n} x [0,1/2) by left
// multiplication with its folding lattice element.
Point fold_into_domain(const Point& g) {
  std::size_t n = g.x.size();
  Point q;
  q.x.resize(n);
  q.xi.resize(n);
  double twist = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double a = -std::floor(g.x[i]);
    double al = -std::floor(g.xi[i]);
    q.x[i] = g.x[i] + a;
    q.xi[i] = g.xi[i] + al;
    twist += a * g.xi[i] - g.x[i] * al;
  }
  double t1 = g.t + 0.5 * twist;
  q.t = t1 + 0.5 * -std::floor(2.0 * t1);
  return q;
}

// Sums f(gamma q) over the folded nodes q and the given gammas. `absolute`
// switches to summing |f(gamma q)| (sentinel-mass mode).
cplx translated_sum(const std::vector<Point>& nodes,
                    const std::function<cplx(const Point&)>& f,
                    const std::vector<Point>& gammas, bool absolute) {
  std::size_t total = nodes.size();
  std::size_t workers = static_cast<std::size_t>(effective_threads());
  if (workers == 0) workers = 1;
  std::vector<cplx> partial(workers, 0.0);

  std::size_t chunk = (total + workers - 1) / workers;
  parallel_for(workers, [&](std::size_t wlo, std::size_t whi) {
    for (std::size_t w = wlo; w < whi; ++w) {
      std::size_t lo = w * chunk;
      std::size_t hi = std::min(total, lo + chunk);
      Point prod;
      cplx acc = 0.0;
      for (std::size_t flat = lo; flat < hi; ++flat) {
        const Point& q = nodes[flat];
        std::size_t n = q.x.size();
        prod.x.resize(n);
        prod.xi.resize(n);
        for (const Point& gamma : gammas) {
          double twist = 0.0;
          for (std::size_t i = 0; i < n; ++i) {
            prod.x[i] = gamma.x[i] + q.x[i];
            prod.xi[i] = gamma.xi[i] + q.xi[i];
            twist += gamma.x[i] * q.xi[i] - q.x[i] * gamma.xi[i];
          }
          prod.t = gamma.t + q.t + 0.5 * twist;
          cplx v = f(prod);
          acc += absolute ? cplx(std::abs(v), 0.0) : v;
        }
      }
      partial[w] = acc;
    }
  });

  cplx total_sum = 0.0;
  for (const cplx& v : partial) total_sum += v;
  return total_sum;
}

std::vector<Point> folded_nodes(const GridSpec& grid) {
  std::size_t n = grid.n;
  std::vector<Point> out(grid.size());
  std::vector<std::size_t> idx(grid.axes(), 0);
  Point g;
  g.x.resize(n);
  g.xi.resize(n);
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    std::size_t rem = flat;
    for (std::size_t axis = grid.axes(); axis-- > 0;) {
      idx[axis] = rem % grid.counts[axis];
      rem /= grid.counts[axis];
    }
    for (std::size_t i = 0; i < n; ++i) g.x[i] = grid.coord(i, idx[i]);
    for (std::size_t i = 0; i < n; ++i) g.xi[i] = grid.coord(n + i, idx[n + i]);
    g.t = grid.coord(2 * n, idx[2 * n]);
    out[flat] = fold_into_domain(g);
  }
  return out;
}

}  // namespace

std::pair<cplx, cplx> weil_check(const GridFunction& f, std::size_t radius) {
  if (!f.evaluator || !*f.evaluator) {
    throw std::invalid_argument("weil_check: f carries no analytic evaluator");
  }
  if (radius == 0) {
    throw std::invalid_argument("weil_check: radius must be positive");
  }
  // The quotient rule transports f's own nodes through the fold, which is
  // measure preserving only while the box meets each period class once.
  for (std::size_t axis = 0; axis < f.spec.axes(); ++axis) {
    double period = axis < 2 * f.spec.n ? 1.0 : 0.5;
    if (f.spec.box[axis].length() > period + 1e-12) {
      throw std::invalid_argument(
          "weil_check: grid box spans more than one lattice period on axis " +
          std::to_string(axis) + "; fold-based quadrature would overcount");
    }
  }

  cplx lhs = 0.0;
  for (const cplx& v : f.values) lhs += v;
  lhs *= kHaarScale * f.spec.cell_volume();

  double cellvol = f.spec.cell_volume();
  std::vector<Point> nodes = folded_nodes(f.spec);

  std::vector<Point> gammas;
  for (long shell = 0; shell <= static_cast<long>(radius); ++shell) {
    auto part = lattice_shell(f.spec.n, shell);
    gammas.insert(gammas.end(), part.begin(), part.end());
  }
  cplx rhs = translated_sum(nodes, *f.evaluator, gammas, false) *
             (kHaarScale * cellvol);

  auto sentinel = lattice_shell(f.spec.n, static_cast<long>(radius) + 1);
  double sentinel_mass =
      translated_sum(nodes, *f.evaluator, sentinel, true).real() * cellvol;
  if (sentinel_mass > 1e-12 * std::max(1.0, std::abs(lhs))) {
    throw numerical_error("weil_check: gamma radius insufficient, boundary shell carries mass " +
                          format_g17(sentinel_mass));
  }
  return {lhs, rhs};
}

std::pair<cplx, cplx> weil_check(const GridFunction& f) {
  return weil_check(f, default_gamma_radius(f.spec));
}

}  // namespace heisenframe
