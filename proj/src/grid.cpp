#include "phasemod/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace phasemod {

bool Axis::same_shape(const Axis& other, double rel_tol) const {
  return samples == other.samples &&
         std::abs(extent - other.extent) <= rel_tol * std::max(extent, other.extent);
}

std::vector<Axis> GridSpec::axes(const std::vector<std::string>& labels) const {
  if (labels.size() != dim_count) {
    throw std::invalid_argument("grid: expected " + std::to_string(dim_count) + " labels");
  }
  std::vector<Axis> out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back({l, samples, extent});
  return out;
}

GridSpec make_grid(std::size_t dim_count, std::size_t samples, double extent) {
  if (dim_count == 0) throw std::invalid_argument("make_grid: dim_count must be positive");
  if (samples < 2 || samples % 2 != 0) {
    throw std::invalid_argument("make_grid: sample count must be even and >= 2");
  }
  if (!(extent > 0.0) || !std::isfinite(extent)) {
    throw std::invalid_argument("make_grid: extent must be positive");
  }
  return {dim_count, samples, extent};
}

std::vector<std::string> group_labels(std::string_view base, std::size_t d) {
  if (d == 1) return {std::string(base)};
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= d; ++i) out.push_back(std::string(base) + std::to_string(i));
  return out;
}

SampledField::SampledField(std::vector<Axis> axes) : axes_(std::move(axes)) {
  check_labels();
  std::size_t n = 1;
  for (const auto& a : axes_) n *= a.samples;
  values_.assign(n, cplx{});
}

SampledField::SampledField(std::vector<Axis> axes, std::vector<cplx> values)
    : axes_(std::move(axes)), values_(std::move(values)) {
  check_labels();
  std::size_t n = 1;
  for (const auto& a : axes_) n *= a.samples;
  if (values_.size() != n) {
    throw std::invalid_argument("SampledField: value count does not match axis shape");
  }
}

void SampledField::check_labels() const {
  std::unordered_set<std::string> seen;
  for (const auto& a : axes_) {
    if (a.samples < 2 || a.samples % 2 != 0) {
      throw std::invalid_argument("SampledField: axis '" + a.label + "' needs an even sample count");
    }
    if (!(a.extent > 0.0)) {
      throw std::invalid_argument("SampledField: axis '" + a.label + "' needs a positive extent");
    }
    if (!seen.insert(a.label).second) {
      throw std::invalid_argument("SampledField: duplicate axis label '" + a.label + "'");
    }
  }
}

std::vector<std::string> SampledField::labels() const {
  std::vector<std::string> out;
  for (const auto& a : axes_) out.push_back(a.label);
  return out;
}

std::vector<std::size_t> SampledField::shape() const {
  std::vector<std::size_t> out;
  for (const auto& a : axes_) out.push_back(a.samples);
  return out;
}

std::vector<std::size_t> SampledField::strides() const {
  std::vector<std::size_t> out(axes_.size(), 1);
  for (std::size_t i = axes_.size(); i-- > 1;) out[i - 1] = out[i] * axes_[i].samples;
  return out;
}

std::size_t SampledField::axis_index(std::string_view label) const {
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    if (axes_[i].label == label) return i;
  }
  throw std::invalid_argument("SampledField: no axis labeled '" + std::string(label) + "'");
}

bool SampledField::has_axis(std::string_view label) const {
  return std::any_of(axes_.begin(), axes_.end(), [&](const Axis& a) { return a.label == label; });
}

double SampledField::cell_volume() const {
  double v = 1.0;
  for (const auto& a : axes_) v *= a.spacing();
  return v;
}

SampledField SampledField::relabeled(const std::vector<std::string>& labels) const {
  if (labels.size() != axes_.size()) {
    throw std::invalid_argument("relabeled: label count does not match rank");
  }
  auto axes = axes_;
  for (std::size_t i = 0; i < axes.size(); ++i) axes[i].label = labels[i];
  return SampledField(std::move(axes), values_);
}

SampledField SampledField::permuted(const std::vector<std::string>& order) const {
  if (order.size() != axes_.size()) {
    throw std::invalid_argument("permuted: order must name every axis");
  }
  std::vector<std::size_t> src_axis(order.size());
  std::vector<Axis> axes;
  for (std::size_t i = 0; i < order.size(); ++i) {
    src_axis[i] = axis_index(order[i]);
    axes.push_back(axes_[src_axis[i]]);
  }
  SampledField out(std::move(axes));
  const auto src_strides = strides();
  const auto out_shape = out.shape();
  std::vector<std::size_t> idx(order.size());
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    unravel(flat, out_shape, idx);
    std::size_t src = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) src += idx[i] * src_strides[src_axis[i]];
    out[flat] = values_[src];
  }
  return out;
}

bool SampledField::same_grid(const SampledField& other) const {
  if (rank() != other.rank()) return false;
  for (std::size_t i = 0; i < rank(); ++i) {
    if (!axes_[i].same_shape(other.axes_[i])) return false;
  }
  return true;
}

void unravel(std::size_t flat, std::span<const std::size_t> shape, std::span<std::size_t> out) {
  for (std::size_t i = shape.size(); i-- > 0;) {
    out[i] = flat % shape[i];
    flat /= shape[i];
  }
}

SampledField sample(const CoordFunction& fn, const std::vector<Axis>& axes) {
  SampledField out(axes);
  const auto shape = out.shape();
  std::vector<std::size_t> idx(axes.size());
  std::vector<double> coords(axes.size());
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    unravel(flat, shape, idx);
    for (std::size_t i = 0; i < axes.size(); ++i) coords[i] = axes[i].coord(idx[i]);
    out[flat] = fn(coords);
  }
  return out;
}

SampledField sample(const CoordFunction& fn, const GridSpec& grid,
                    const std::vector<std::string>& labels) {
  return sample(fn, grid.axes(labels));
}

cplx integrate(const SampledField& field) {
  cplx sum{};
  for (const auto& v : field.values()) sum += v;
  return sum * field.cell_volume();
}

SampledField tensor(const SampledField& a, const SampledField& b) {
  for (const auto& ax : b.axes()) {
    if (a.has_axis(ax.label)) {
      throw std::invalid_argument("tensor: shared axis label '" + ax.label + "'");
    }
  }
  auto axes = a.axes();
  axes.insert(axes.end(), b.axes().begin(), b.axes().end());
  std::vector<cplx> values;
  values.reserve(a.size() * b.size());
  for (const auto& u : a.values()) {
    for (const auto& v : b.values()) values.push_back(u * v);
  }
  return SampledField(std::move(axes), std::move(values));
}

namespace {

// Checks that a field splits into two groups of identical axes and returns the group size.
std::size_t shear_group(const SampledField& field) {
  if (field.rank() == 0 || field.rank() % 2 != 0) {
    throw std::invalid_argument("coordinate_shear: field needs two equal axis groups");
  }
  const std::size_t d = field.rank() / 2;
  for (std::size_t i = 0; i < d; ++i) {
    if (!field.axis(i).same_shape(field.axis(i + d))) {
      throw std::invalid_argument("coordinate_shear: axis groups differ in shape");
    }
  }
  return d;
}

template <typename IndexMap>
SampledField remap_groups(const SampledField& field, IndexMap map) {
  const std::size_t d = shear_group(field);
  SampledField out(field.axes());
  const auto shape = field.shape();
  const auto strides = field.strides();
  std::vector<std::size_t> idx(field.rank());
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    unravel(flat, shape, idx);
    std::size_t src = 0;
    for (std::size_t i = 0; i < d; ++i) {
      const auto [first, second] = map(idx[i], idx[i + d], shape[i]);
      src += first * strides[i] + second * strides[i + d];
    }
    out[flat] = field[src];
  }
  return out;
}

}  // namespace

SampledField coordinate_shear(const SampledField& field) {
  // Index of the coordinate x - t is j - m + N/2 (mod N).
  return remap_groups(field, [](std::size_t j, std::size_t m, std::size_t n) {
    return std::pair{(j + n + n / 2 - m) % n, j};
  });
}

SampledField coordinate_unshear(const SampledField& field) {
  // G(u, v) = F(v, v - u).
  return remap_groups(field, [](std::size_t u, std::size_t v, std::size_t n) {
    return std::pair{v, (v + n + n / 2 - u) % n};
  });
}

SampledField conjugate(const SampledField& f) {
  SampledField out(f.axes());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = std::conj(f[i]);
  return out;
}

SampledField multiply(const SampledField& a, const SampledField& b) {
  if (!a.same_grid(b)) throw std::invalid_argument("multiply: grid mismatch");
  SampledField out(a.axes());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

SampledField scaled(const SampledField& f, cplx factor) {
  SampledField out(f.axes());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = factor * f[i];
  return out;
}

SampledField combine(cplx alpha, const SampledField& a, cplx beta, const SampledField& b) {
  if (!a.same_grid(b)) throw std::invalid_argument("combine: grid mismatch");
  SampledField out(a.axes());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = alpha * a[i] + beta * b[i];
  return out;
}

double max_abs(const SampledField& f) {
  double m = 0.0;
  for (const auto& v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_difference(const SampledField& a, const SampledField& b) {
  if (a.size() != b.size()) throw std::invalid_argument("max_abs_difference: size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace phasemod
