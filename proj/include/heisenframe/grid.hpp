#pragma once

#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "heisenframe/point.hpp"
#include "heisenframe/util.hpp"

namespace heisenframe {

// Midpoint grid on a (2n+1)-dimensional box. Axis i has counts[i] cells of
// width spacing(i); nodes sit at cell centers. Axes are ordered
// x_0..x_{n-1}, xi_0..xi_{n-1}, t. Values are stored row major with the last
// axis fastest.
struct GridSpec {
  std::size_t n = 1;
  std::vector<std::size_t> counts;
  Box box;

  static GridSpec reproducing(std::size_t n, std::size_t per_axis);
  static GridSpec over(std::size_t n, Box box, std::vector<std::size_t> counts);

  std::size_t axes() const { return 2 * n + 1; }
  double spacing(std::size_t axis) const {
    return box[axis].length() / static_cast<double>(counts[axis]);
  }
  double coord(std::size_t axis, std::size_t i) const {
    return box[axis].lo + (static_cast<double>(i) + 0.5) * spacing(axis);
  }
  std::size_t size() const;
  double cell_volume() const;
  Point point_at(const std::vector<std::size_t>& idx) const;
  bool operator==(const GridSpec& o) const;
};

// Sampled function on a grid. `evaluator`, when present, is the analytic
// function the samples came from; resampling routines use it to evaluate off
// the grid.
struct GridFunction {
  GridSpec spec;
  std::vector<cplx> values;
  std::shared_ptr<const std::function<cplx(const Point&)>> evaluator;

  cplx& at(const std::vector<std::size_t>& idx);
  const cplx& at(const std::vector<std::size_t>& idx) const;
};

// Dense multi-index array over an arbitrary box (used for operator kernels).
struct Tensor {
  std::vector<std::size_t> counts;
  Box box;
  std::vector<cplx> values;

  double spacing(std::size_t axis) const {
    return box[axis].length() / static_cast<double>(counts[axis]);
  }
  double coord(std::size_t axis, std::size_t i) const {
    return box[axis].lo + (static_cast<double>(i) + 0.5) * spacing(axis);
  }
  std::size_t size() const;
  double cell_volume() const;
};

std::size_t flat_index(const std::vector<std::size_t>& counts,
                       const std::vector<std::size_t>& idx);

// Runs `body(flat, idx)` over the full grid in row-major order.
void for_each_index(const std::vector<std::size_t>& counts,
                    const std::function<void(std::size_t,
                                             const std::vector<std::size_t>&)>& body);

GridFunction sample(const GridSpec& spec,
                    std::function<cplx(const Point&)> f);

// Smooth compactly supported bump centered at the box center. widths[i] in
// (0,1] scales the support to that fraction of the half axis; the factor for
// axis i is exp(-1/(1-s^2)) with s = offset / (halfwidth * widths[i]).
GridFunction make_bump(const GridSpec& spec, const std::vector<double>& widths);

// Finite combination of lattice characters
//   sum_c coeff[c] e^{2 pi i (a.x + alpha.xi + 2 m t)},
// keyed by the integer vector (a, alpha, m') with m' = 2m even. Rejects odd
// central keys: those characters are not periodic on the fundamental domain.
GridFunction trig_poly(const GridSpec& spec,
                       const std::map<std::vector<int>, cplx>& coeffs);

// Lebesgue L2 norm squared via the midpoint rule.
double norm_sq(const GridFunction& f);
double norm_sq(const std::vector<cplx>& values, double cell_volume);

// Cyclic shift along the central axis by `steps` cells. Drops the evaluator:
// the shifted samples no longer match it.
GridFunction translate_t(const GridFunction& f, long steps);

}  // namespace heisenframe
