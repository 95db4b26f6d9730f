#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace phasemod {

using cplx = std::complex<double>;

// One sampled coordinate: N points x_j = (j - N/2) * L / N on [-L/2, L/2).
struct Axis {
  std::string label;
  std::size_t samples = 0;
  double extent = 0.0;

  double spacing() const { return extent / static_cast<double>(samples); }
  double coord(std::size_t j) const {
    return (static_cast<double>(j) - static_cast<double>(samples / 2)) * spacing();
  }
  // Reciprocal axis: same sample count, extent N / L.
  Axis dual(std::string new_label) const {
    return {std::move(new_label), samples, static_cast<double>(samples) / extent};
  }
  bool same_shape(const Axis& other, double rel_tol = 1e-12) const;
};

struct GridSpec {
  std::size_t dim_count = 0;
  std::size_t samples = 0;
  double extent = 0.0;

  double spacing() const { return extent / static_cast<double>(samples); }
  double coord(std::size_t j) const {
    return (static_cast<double>(j) - static_cast<double>(samples / 2)) * spacing();
  }
  std::vector<Axis> axes(const std::vector<std::string>& labels) const;
};

GridSpec make_grid(std::size_t dim_count, std::size_t samples, double extent);

// Labels for a group of d axes sharing a base name: "x" for d = 1, "x1","x2" for d = 2.
std::vector<std::string> group_labels(std::string_view base, std::size_t d);

// Complex samples over labeled axes, stored row-major (last axis fastest).
class SampledField {
 public:
  SampledField() = default;
  explicit SampledField(std::vector<Axis> axes);
  SampledField(std::vector<Axis> axes, std::vector<cplx> values);

  const std::vector<Axis>& axes() const { return axes_; }
  const Axis& axis(std::size_t i) const { return axes_.at(i); }
  const Axis& axis(std::string_view label) const { return axes_[axis_index(label)]; }
  std::size_t rank() const { return axes_.size(); }
  std::size_t size() const { return values_.size(); }
  std::vector<std::string> labels() const;
  std::vector<std::size_t> shape() const;
  std::vector<std::size_t> strides() const;

  std::size_t axis_index(std::string_view label) const;
  bool has_axis(std::string_view label) const;

  std::span<const cplx> values() const { return values_; }
  std::span<cplx> values() { return values_; }
  const cplx& operator[](std::size_t i) const { return values_[i]; }
  cplx& operator[](std::size_t i) { return values_[i]; }

  // Product of axis spacings.
  double cell_volume() const;

  SampledField relabeled(const std::vector<std::string>& labels) const;
  // Reorders axes (and data) so that labels appear in the given order.
  SampledField permuted(const std::vector<std::string>& order) const;
  bool same_grid(const SampledField& other) const;

 private:
  void check_labels() const;

  std::vector<Axis> axes_;
  std::vector<cplx> values_;
};

using CoordFunction = std::function<cplx(std::span<const double>)>;

SampledField sample(const CoordFunction& fn, const std::vector<Axis>& axes);
SampledField sample(const CoordFunction& fn, const GridSpec& grid,
                    const std::vector<std::string>& labels);

cplx integrate(const SampledField& field);

SampledField tensor(const SampledField& a, const SampledField& b);

// output(x, t) = F(x - t, x) for a field whose axes split into two equal groups.
SampledField coordinate_shear(const SampledField& field);
// Inverse index map: recovers F from coordinate_shear(F).
SampledField coordinate_unshear(const SampledField& field);

// Pointwise helpers.
SampledField conjugate(const SampledField& f);
SampledField multiply(const SampledField& a, const SampledField& b);
SampledField scaled(const SampledField& f, cplx factor);
SampledField combine(cplx alpha, const SampledField& a, cplx beta, const SampledField& b);
double max_abs(const SampledField& f);
double max_abs_difference(const SampledField& a, const SampledField& b);

// Decodes a flat row-major index into per-axis indices.
void unravel(std::size_t flat, std::span<const std::size_t> shape, std::span<std::size_t> out);

}  // namespace phasemod
