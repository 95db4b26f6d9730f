#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "phasemod/grid.hpp"

namespace phasemod {

struct WindowSpec {
  enum class Kind { standard_gaussian, gaussian_scaled, explicit_field };

  Kind kind = Kind::standard_gaussian;
  double lambda = 1.0;
  std::optional<SampledField> field;
  bool normalize = false;

  // e^{-pi |z|^2 / 2}
  static WindowSpec standard();
  // e^{-pi lambda |z|^2}
  static WindowSpec gaussian_scaled(double lambda);
  static WindowSpec explicit_field(SampledField field);
  // Same window rescaled to unit L2 norm on the grid where it is realized.
  WindowSpec normalized() const;
  std::string describe() const;
};

// Samples the window on the given axes; explicit windows must already live there.
SampledField realize_window(const WindowSpec& window, const std::vector<Axis>& axes);

// Default reciprocal label: x <-> xi, t <-> nu, numeric suffixes kept.
std::string dual_label(std::string_view label);

// Riemann-sum Fourier transform over every axis, kernel e^{-2 pi i x xi}; output on the dual grid.
SampledField fourier(const SampledField& f, std::vector<std::string> labels = {});
// Exact discrete inverse of fourier.
SampledField inverse_fourier(const SampledField& f, std::vector<std::string> labels = {});
// Transform over a subset of axes; other axes are untouched. sign = -1 forward, +1 inverse.
SampledField fourier_partial(const SampledField& f, const std::vector<std::string>& which,
                             const std::vector<std::string>& new_labels, int sign = -1);

// Periodic shift by a grid-aligned vector (one entry per axis).
SampledField translate(const SampledField& f, std::span<const double> shift);
// Pointwise multiplication by e^{2 pi i x . freq}; freq must lie on the dual grid.
SampledField modulate(const SampledField& f, std::span<const double> freq);

// Fourier transform over phase space with kernel e^{-2 pi i (x.nu - xi.t)}.
// Input axes: d position axes then d frequency axes. Output axes: (t..., nu...).
SampledField symplectic_fourier(const SampledField& field, std::vector<std::string> labels = {});
// Pointwise multiplication by e^{2 pi i (x.nu - xi.t)}.
SampledField symplectic_modulate(const SampledField& field, std::span<const double> t,
                                 std::span<const double> nu);

// V f(t, nu) = integral f(x) conj(w(x - t)) e^{-2 pi i x nu} dx, output axes (t..., nu...).
SampledField stft(const SampledField& f, const WindowSpec& window,
                  std::vector<std::string> position_labels = {},
                  std::vector<std::string> frequency_labels = {});
// Same transform with an already realized window on f's grid.
SampledField stft_with(const SampledField& f, const SampledField& window,
                       const std::vector<std::string>& position_labels,
                       const std::vector<std::string>& frequency_labels);

// Phase-space STFT with axis order (x, t, xi, nu).
SampledField symplectic_stft(const SampledField& field, const WindowSpec& window);
// Ordinary STFT over phase space with axis order (x, xi, nu, t).
SampledField stft_2d(const SampledField& field, const WindowSpec& window);

namespace detail {

// One position slice of the STFT: out = fourier(f * conj(shifted window)) at flat position index.
void stft_slice(const SampledField& f, const SampledField& window, std::size_t position,
                std::span<cplx> out);
// In-place centered transform of a row-major block shaped like `axes`.
void centered_dft(std::span<cplx> data, const std::vector<Axis>& axes, int sign);
// Index of the negated coordinate on a centered grid.
inline std::size_t negate_index(std::size_t j, std::size_t n) { return (n - j) % n; }

}  // namespace detail

}  // namespace phasemod
