#include "heisenframe/fourier.hpp"

#include <cmath>
#include <stdexcept>

namespace heisenframe {

Frequency::Frequency(std::vector<double> b_, std::vector<double> beta_,
                     double omega_)
    : b(std::move(b_)), beta(std::move(beta_)), omega(omega_) {
  if (b.size() != beta.size()) {
    throw std::invalid_argument("Frequency: b and beta dimensions differ");
  }
}

Frequency::Frequency(double b_, double beta_, double omega_)
    : b{b_}, beta{beta_}, omega(omega_) {}

namespace {

// e^{-2 pi i freq * coord} for every node of one axis.
std::vector<cplx> phase_table(double lo, double h, std::size_t count,
                              double freq) {
  std::vector<cplx> table(count);
  for (std::size_t i = 0; i < count; ++i) {
    double c = lo + (static_cast<double>(i) + 0.5) * h;
    table[i] = std::polar(1.0, -kTwoPi * freq * c);
  }
  return table;
}

double axis_frequency(const Frequency& freq, std::size_t n, std::size_t axis) {
  if (axis < n) return freq.b[axis];
  if (axis < 2 * n) return freq.beta[axis - n];
  return freq.omega;
}

// out[rest, j] = h * sum_i e^{-2 pi i freqs[j] coords_i} data[i * rest + r].
// Contracts the first axis and appends the frequency index as the new last
// (fastest) axis.
std::vector<cplx> contract_first_axis(const std::vector<cplx>& data,
                                      std::size_t m, std::size_t rest,
                                      double lo, double h,
                                      const std::vector<double>& freqs) {
  std::size_t nf = freqs.size();
  std::vector<cplx> weights(nf * m);
  for (std::size_t j = 0; j < nf; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      double c = lo + (static_cast<double>(i) + 0.5) * h;
      weights[j * m + i] = std::polar(h, -kTwoPi * freqs[j] * c);
    }
  }
  std::vector<cplx> out(rest * nf);
  for (std::size_t r = 0; r < rest; ++r) {
    for (std::size_t j = 0; j < nf; ++j) {
      const cplx* w = weights.data() + j * m;
      cplx acc = 0.0;
      for (std::size_t i = 0; i < m; ++i) acc += w[i] * data[i * rest + r];
      out[r * nf + j] = acc;
    }
  }
  return out;
}

std::vector<cplx> separable_transform(std::vector<cplx> data,
                                      std::vector<std::size_t> counts,
                                      const Box& box,
                                      const std::vector<std::vector<double>>& freqs) {
  if (freqs.size() != counts.size()) {
    throw std::invalid_argument("separable transform: one frequency list per axis");
  }
  std::size_t axes = counts.size();
  for (std::size_t step = 0; step < axes; ++step) {
    std::size_t m = counts[step];
    std::size_t rest = data.size() / m;
    double h = box[step].length() / static_cast<double>(m);
    data = contract_first_axis(data, m, rest, box[step].lo, h, freqs[step]);
  }
  return data;
}

}  // namespace

cplx fourier_at(const GridFunction& f, const Frequency& freq) {
  const GridSpec& spec = f.spec;
  if (freq.b.size() != spec.n) {
    throw std::invalid_argument("fourier_at: frequency dimension mismatch");
  }
  std::size_t axes = spec.axes();
  std::vector<std::vector<cplx>> tables(axes);
  for (std::size_t axis = 0; axis < axes; ++axis) {
    tables[axis] = phase_table(spec.box[axis].lo, spec.spacing(axis),
                               spec.counts[axis], axis_frequency(freq, spec.n, axis));
  }
  cplx acc = 0.0;
  for_each_index(spec.counts, [&](std::size_t flat, const std::vector<std::size_t>& idx) {
    cplx phase = tables[0][idx[0]];
    for (std::size_t axis = 1; axis < axes; ++axis) phase *= tables[axis][idx[axis]];
    acc += f.values[flat] * phase;
  });
  return acc * spec.cell_volume();
}

std::vector<cplx> fourier_many(const GridFunction& f,
                               const std::vector<Frequency>& freqs) {
  std::vector<cplx> out(freqs.size());
  parallel_for(freqs.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) out[i] = fourier_at(f, freqs[i]);
  });
  return out;
}

Tensor partial_fourier_t(const GridFunction& f, double omega) {
  const GridSpec& spec = f.spec;
  std::size_t axes = spec.axes();
  Tensor slice;
  slice.counts.assign(spec.counts.begin(), spec.counts.end() - 1);
  slice.box.assign(spec.box.begin(), spec.box.end() - 1);
  std::size_t nt = spec.counts[axes - 1];
  double ht = spec.spacing(axes - 1);
  std::vector<cplx> table = phase_table(spec.box[axes - 1].lo, ht, nt, omega);
  for (auto& w : table) w *= ht;
  std::size_t blocks = spec.size() / nt;
  slice.values.resize(blocks);
  parallel_for(blocks, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t b = lo; b < hi; ++b) {
      const cplx* src = f.values.data() + b * nt;
      cplx acc = 0.0;
      for (std::size_t j = 0; j < nt; ++j) acc += src[j] * table[j];
      slice.values[b] = acc;
    }
  });
  return slice;
}

cplx slice_fourier_at(const Tensor& slice, const std::vector<double>& b,
                      const std::vector<double>& beta) {
  std::size_t axes = slice.counts.size();
  std::size_t n = axes / 2;
  if (b.size() != n || beta.size() != n) {
    throw std::invalid_argument("slice_fourier_at: dimension mismatch");
  }
  std::vector<std::vector<cplx>> tables(axes);
  for (std::size_t axis = 0; axis < axes; ++axis) {
    double freq = axis < n ? b[axis] : beta[axis - n];
    tables[axis] = phase_table(slice.box[axis].lo, slice.spacing(axis),
                               slice.counts[axis], freq);
  }
  cplx acc = 0.0;
  for_each_index(slice.counts, [&](std::size_t flat, const std::vector<std::size_t>& idx) {
    cplx phase = tables[0][idx[0]];
    for (std::size_t axis = 1; axis < axes; ++axis) phase *= tables[axis][idx[axis]];
    acc += slice.values[flat] * phase;
  });
  return acc * slice.cell_volume();
}

std::vector<cplx> fourier_grid(const GridFunction& f,
                               const std::vector<std::vector<double>>& per_axis_freqs) {
  return separable_transform(f.values, f.spec.counts, f.spec.box, per_axis_freqs);
}

std::vector<cplx> slice_fourier_grid(const Tensor& slice,
                                     const std::vector<std::vector<double>>& per_axis_freqs) {
  return separable_transform(slice.values, slice.counts, slice.box, per_axis_freqs);
}

}  // namespace heisenframe
