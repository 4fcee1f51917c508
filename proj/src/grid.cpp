#include "heisenframe/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace heisenframe {

GridSpec GridSpec::reproducing(std::size_t n, std::size_t per_axis) {
  GridSpec s;
  s.n = n;
  s.counts.assign(2 * n + 1, per_axis);
  s.box = reproducing_box(n);
  return s;
}

GridSpec GridSpec::over(std::size_t n, Box box, std::vector<std::size_t> counts) {
  if (box.size() != 2 * n + 1 || counts.size() != 2 * n + 1) {
    throw std::invalid_argument("GridSpec::over: need 2n+1 axes");
  }
  GridSpec s;
  s.n = n;
  s.counts = std::move(counts);
  s.box = std::move(box);
  return s;
}

std::size_t GridSpec::size() const {
  std::size_t total = 1;
  for (std::size_t c : counts) total *= c;
  return total;
}

double GridSpec::cell_volume() const {
  double v = 1.0;
  for (std::size_t axis = 0; axis < axes(); ++axis) v *= spacing(axis);
  return v;
}

Point GridSpec::point_at(const std::vector<std::size_t>& idx) const {
  Point p;
  p.x.resize(n);
  p.xi.resize(n);
  for (std::size_t i = 0; i < n; ++i) p.x[i] = coord(i, idx[i]);
  for (std::size_t i = 0; i < n; ++i) p.xi[i] = coord(n + i, idx[n + i]);
  p.t = coord(2 * n, idx[2 * n]);
  return p;
}

bool GridSpec::operator==(const GridSpec& o) const {
  if (n != o.n || counts != o.counts || box.size() != o.box.size()) return false;
  for (std::size_t i = 0; i < box.size(); ++i) {
    if (box[i].lo != o.box[i].lo || box[i].hi != o.box[i].hi) return false;
  }
  return true;
}

std::size_t flat_index(const std::vector<std::size_t>& counts,
                       const std::vector<std::size_t>& idx) {
  std::size_t flat = 0;
  for (std::size_t axis = 0; axis < counts.size(); ++axis) {
    flat = flat * counts[axis] + idx[axis];
  }
  return flat;
}

void for_each_index(const std::vector<std::size_t>& counts,
                    const std::function<void(std::size_t,
                                             const std::vector<std::size_t>&)>& body) {
  std::vector<std::size_t> idx(counts.size(), 0);
  std::size_t total = 1;
  for (std::size_t c : counts) total *= c;
  for (std::size_t flat = 0; flat < total; ++flat) {
    body(flat, idx);
    for (std::size_t axis = counts.size(); axis-- > 0;) {
      if (++idx[axis] < counts[axis]) break;
      idx[axis] = 0;
    }
  }
}

cplx& GridFunction::at(const std::vector<std::size_t>& idx) {
  return values[flat_index(spec.counts, idx)];
}

const cplx& GridFunction::at(const std::vector<std::size_t>& idx) const {
  return values[flat_index(spec.counts, idx)];
}

std::size_t Tensor::size() const {
  std::size_t total = 1;
  for (std::size_t c : counts) total *= c;
  return total;
}

double Tensor::cell_volume() const {
  double v = 1.0;
  for (std::size_t axis = 0; axis < counts.size(); ++axis) v *= spacing(axis);
  return v;
}

GridFunction sample(const GridSpec& spec,
                    std::function<cplx(const Point&)> f) {
  GridFunction g;
  g.spec = spec;
  g.values.resize(spec.size());
  g.evaluator = std::make_shared<const std::function<cplx(const Point&)>>(std::move(f));

  // Per-axis coordinates once, then odometer walk.
  for_each_index(spec.counts, [&](std::size_t flat, const std::vector<std::size_t>& idx) {
    g.values[flat] = (*g.evaluator)(spec.point_at(idx));
  });
  return g;
}

GridFunction make_bump(const GridSpec& spec, const std::vector<double>& widths) {
  if (widths.size() != spec.axes()) {
    throw std::invalid_argument("make_bump: one width per axis");
  }
  for (double w : widths) {
    if (!(w > 0.0 && w <= 1.0)) {
      throw std::invalid_argument("make_bump: widths must lie in (0,1]");
    }
  }
  std::vector<double> center(spec.axes()), halfwidth(spec.axes());
  for (std::size_t axis = 0; axis < spec.axes(); ++axis) {
    center[axis] = spec.box[axis].center();
    halfwidth[axis] = 0.5 * spec.box[axis].length() * widths[axis];
  }
  std::size_t n = spec.n;
  auto eval = [center, halfwidth, n](const Point& p) -> cplx {
    double a = 0.0;
    auto axis_term = [&](double v, std::size_t axis) -> bool {
      double s = (v - center[axis]) / halfwidth[axis];
      if (std::abs(s) >= 1.0) return false;
      a += -1.0 / (1.0 - s * s);
      return true;
    };
    for (std::size_t i = 0; i < n; ++i) {
      if (!axis_term(p.x[i], i)) return 0.0;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!axis_term(p.xi[i], n + i)) return 0.0;
    }
    if (!axis_term(p.t, 2 * n)) return 0.0;
    return std::exp(a);
  };
  return sample(spec, eval);
}

GridFunction trig_poly(const GridSpec& spec,
                       const std::map<std::vector<int>, cplx>& coeffs) {
  std::size_t axes = spec.axes();
  for (const auto& [key, c] : coeffs) {
    (void)c;
    if (key.size() != axes) {
      throw std::invalid_argument("trig_poly: key dimension mismatch");
    }
    if (key.back() % 2 != 0) {
      throw std::invalid_argument("trig_poly: central frequency must be even");
    }
  }
  std::size_t n = spec.n;
  auto coeffs_copy = coeffs;
  auto eval = [coeffs_copy, n](const Point& p) -> cplx {
    cplx acc = 0.0;
    for (const auto& [key, c] : coeffs_copy) {
      double phase = 0.0;
      for (std::size_t i = 0; i < n; ++i) phase += key[i] * p.x[i];
      for (std::size_t i = 0; i < n; ++i) phase += key[n + i] * p.xi[i];
      phase += key[2 * n] * p.t;
      acc += c * std::polar(1.0, kTwoPi * phase);
    }
    return acc;
  };
  return sample(spec, eval);
}

double norm_sq(const std::vector<cplx>& values, double cell_volume) {
  double s = 0.0;
  for (const cplx& v : values) s += std::norm(v);
  return s * cell_volume;
}

double norm_sq(const GridFunction& f) {
  return norm_sq(f.values, f.spec.cell_volume());
}

GridFunction translate_t(const GridFunction& f, long steps) {
  GridFunction g;
  g.spec = f.spec;
  g.values.resize(f.values.size());
  std::size_t nt = f.spec.counts.back();
  long wrap = ((steps % static_cast<long>(nt)) + static_cast<long>(nt)) %
              static_cast<long>(nt);
  std::size_t blocks = f.values.size() / nt;
  for (std::size_t b = 0; b < blocks; ++b) {
    const cplx* src = f.values.data() + b * nt;
    cplx* dst = g.values.data() + b * nt;
    for (std::size_t j = 0; j < nt; ++j) {
      dst[(j + static_cast<std::size_t>(wrap)) % nt] = src[j];
    }
  }
  return g;
}

}  // namespace heisenframe
