#include "phasemod/transforms.hpp"

#include <cctype>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "phasemod/detail/fft.hpp"
#include "phasemod/detail/roots.hpp"
#include "phasemod/parallel.hpp"

namespace phasemod {
namespace {

// Centered transform over the axes listed in `which`, scaled by the input spacings.
void centered_dft_axes(std::span<cplx> data, const std::vector<Axis>& axes,
                       const std::vector<std::size_t>& which, int sign) {
  std::vector<std::size_t> shape, strides(axes.size(), 1);
  for (const auto& a : axes) shape.push_back(a.samples);
  for (std::size_t i = axes.size(); i-- > 1;) strides[i - 1] = strides[i] * shape[i];

  double scale = 1.0;
  for (auto a : which) {
    scale *= axes[a].spacing();
    if ((axes[a].samples / 2) % 2 != 0) scale = -scale;
  }
  // (-1)^(j_a) before and (-1)^(k_a) after the DFT center both grids. Every step of an
  // odometer digit on a transformed axis flips the parity (N_a is even, so wrapping does too).
  std::vector<char> counted(axes.size(), 0);
  for (auto a : which) counted[a] = 1;
  auto apply_parity = [&](double factor) {
    std::vector<std::size_t> idx(shape.size(), 0);
    bool odd = false;
    for (std::size_t flat = 0; flat < data.size(); ++flat) {
      data[flat] *= odd ? -factor : factor;
      for (std::size_t a = shape.size(); a-- > 0;) {
        if (counted[a]) odd = !odd;
        if (++idx[a] < shape[a]) break;
        idx[a] = 0;
      }
    }
  };
  apply_parity(1.0);
  detail::dft_axes(data, shape, which, sign);
  apply_parity(scale);
}

long long grid_steps(double amount, double unit, const char* what) {
  const double steps = amount / unit;
  const double rounded = std::round(steps);
  if (std::abs(steps - rounded) > 1e-9 * std::max(1.0, std::abs(steps))) {
    throw std::invalid_argument(std::string(what) + ": shift is not a grid multiple");
  }
  return static_cast<long long>(rounded);
}

std::size_t wrap(long long i, std::size_t n) {
  const long long m = static_cast<long long>(n);
  return static_cast<std::size_t>(((i % m) + m) % m);
}

std::vector<std::string> default_duals(const SampledField& f) {
  std::vector<std::string> out;
  for (const auto& a : f.axes()) out.push_back(dual_label(a.label));
  return out;
}

std::size_t phase_group(const SampledField& field, const char* what) {
  if (field.rank() == 0 || field.rank() % 2 != 0) {
    throw std::invalid_argument(std::string(what) + ": phase-space field needs an even axis count");
  }
  return field.rank() / 2;
}

}  // namespace

WindowSpec WindowSpec::standard() { return {}; }

WindowSpec WindowSpec::gaussian_scaled(double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("WindowSpec: scale must be positive");
  WindowSpec w;
  w.kind = Kind::gaussian_scaled;
  w.lambda = lambda;
  return w;
}

WindowSpec WindowSpec::explicit_field(SampledField field) {
  WindowSpec w;
  w.kind = Kind::explicit_field;
  w.field = std::move(field);
  return w;
}

WindowSpec WindowSpec::normalized() const {
  WindowSpec w = *this;
  w.normalize = true;
  return w;
}

std::string WindowSpec::describe() const {
  std::string base;
  switch (kind) {
    case Kind::standard_gaussian: base = "standard-gaussian"; break;
    case Kind::gaussian_scaled: base = "gaussian-scaled(" + std::to_string(lambda) + ")"; break;
    case Kind::explicit_field: base = "explicit"; break;
  }
  return normalize ? base + "/normalized" : base;
}

SampledField realize_window(const WindowSpec& window, const std::vector<Axis>& axes) {
  SampledField w;
  switch (window.kind) {
    case WindowSpec::Kind::explicit_field: {
      if (!window.field) throw std::invalid_argument("window: explicit kind without a field");
      SampledField target(axes);
      if (!window.field->same_grid(target)) {
        throw std::invalid_argument("window: explicit field does not match the signal grid");
      }
      w = window.field->relabeled(target.labels());
      break;
    }
    case WindowSpec::Kind::standard_gaussian:
    case WindowSpec::Kind::gaussian_scaled: {
      const double a = window.kind == WindowSpec::Kind::standard_gaussian ? 0.5 : window.lambda;
      w = sample(
          [a](std::span<const double> z) {
            double r2 = 0.0;
            for (double c : z) r2 += c * c;
            return cplx{std::exp(-std::numbers::pi * a * r2), 0.0};
          },
          axes);
      break;
    }
  }
  if (window.normalize) {
    double energy = 0.0;
    for (const auto& v : w.values()) energy += std::norm(v);
    energy *= w.cell_volume();
    if (!(energy > 0.0)) throw std::invalid_argument("window: cannot normalize a zero window");
    w = scaled(w, 1.0 / std::sqrt(energy));
  }
  return w;
}

std::string dual_label(std::string_view label) {
  std::size_t cut = label.size();
  while (cut > 0 && std::isdigit(static_cast<unsigned char>(label[cut - 1]))) --cut;
  const std::string base(label.substr(0, cut));
  const std::string suffix(label.substr(cut));
  static const std::map<std::string, std::string> pairs{
      {"x", "xi"}, {"xi", "x"}, {"t", "nu"}, {"nu", "t"}};
  if (auto it = pairs.find(base); it != pairs.end()) return it->second + suffix;
  constexpr std::string_view hat = "_hat";
  if (base.size() > hat.size() && base.ends_with(hat)) {
    return base.substr(0, base.size() - hat.size()) + suffix;
  }
  return base + std::string(hat) + suffix;
}

namespace detail {

void centered_dft(std::span<cplx> data, const std::vector<Axis>& axes, int sign) {
  std::vector<std::size_t> which(axes.size());
  for (std::size_t i = 0; i < which.size(); ++i) which[i] = i;
  centered_dft_axes(data, axes, which, sign);
}

void stft_slice(const SampledField& f, const SampledField& window, std::size_t position,
                std::span<cplx> out) {
  const auto shape = f.shape();
  const std::size_t r = shape.size();
  std::vector<std::size_t> pos(r), idx(r, 0);
  unravel(position, shape, pos);
  const auto strides = f.strides();
  // offsets[a][i]: contribution of axis index i to the flat index of w(x - position).
  std::vector<std::vector<std::size_t>> offsets(r);
  for (std::size_t a = 0; a < r; ++a) {
    const std::size_t n = shape[a];
    offsets[a].resize(n);
    for (std::size_t i = 0; i < n; ++i) offsets[a][i] = ((i + n + n / 2 - pos[a]) % n) * strides[a];
  }
  for (std::size_t flat = 0; flat < f.size(); ++flat) {
    std::size_t w = 0;
    for (std::size_t a = 0; a < r; ++a) w += offsets[a][idx[a]];
    out[flat] = f[flat] * std::conj(window[w]);
    for (std::size_t a = r; a-- > 0;) {
      if (++idx[a] < shape[a]) break;
      idx[a] = 0;
    }
  }
  centered_dft(out, f.axes(), -1);
}

}  // namespace detail

SampledField fourier_partial(const SampledField& f, const std::vector<std::string>& which,
                             const std::vector<std::string>& new_labels, int sign) {
  if (which.size() != new_labels.size()) {
    throw std::invalid_argument("fourier_partial: one new label per transformed axis");
  }
  auto axes = f.axes();
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < which.size(); ++i) {
    const std::size_t a = f.axis_index(which[i]);
    idx.push_back(a);
  }
  std::vector<cplx> values(f.values().begin(), f.values().end());
  centered_dft_axes(values, axes, idx, sign);
  for (std::size_t i = 0; i < idx.size(); ++i) axes[idx[i]] = axes[idx[i]].dual(new_labels[i]);
  return SampledField(std::move(axes), std::move(values));
}

SampledField fourier(const SampledField& f, std::vector<std::string> labels) {
  if (labels.empty()) labels = default_duals(f);
  return fourier_partial(f, f.labels(), labels, -1);
}

SampledField inverse_fourier(const SampledField& f, std::vector<std::string> labels) {
  if (labels.empty()) labels = default_duals(f);
  return fourier_partial(f, f.labels(), labels, +1);
}

SampledField translate(const SampledField& f, std::span<const double> shift) {
  if (shift.size() != f.rank()) throw std::invalid_argument("translate: one shift per axis");
  std::vector<long long> steps;
  for (std::size_t a = 0; a < f.rank(); ++a) {
    steps.push_back(grid_steps(shift[a], f.axis(a).spacing(), "translate"));
  }
  SampledField out(f.axes());
  const auto shape = f.shape();
  const auto strides = f.strides();
  std::vector<std::size_t> idx(f.rank());
  for (std::size_t flat = 0; flat < f.size(); ++flat) {
    unravel(flat, shape, idx);
    std::size_t src = 0;
    for (std::size_t a = 0; a < idx.size(); ++a) {
      src += wrap(static_cast<long long>(idx[a]) - steps[a], shape[a]) * strides[a];
    }
    out[flat] = f[src];
  }
  return out;
}

SampledField modulate(const SampledField& f, std::span<const double> freq) {
  if (freq.size() != f.rank()) throw std::invalid_argument("modulate: one frequency per axis");
  std::vector<long long> steps;
  std::vector<detail::RootTable> roots;
  for (std::size_t a = 0; a < f.rank(); ++a) {
    steps.push_back(grid_steps(freq[a], 1.0 / f.axis(a).extent, "modulate"));
    roots.emplace_back(f.axis(a).samples);
  }
  SampledField out(f.axes());
  const auto shape = f.shape();
  std::vector<std::size_t> idx(f.rank());
  for (std::size_t flat = 0; flat < f.size(); ++flat) {
    unravel(flat, shape, idx);
    cplx phase{1.0, 0.0};
    for (std::size_t a = 0; a < idx.size(); ++a) {
      const long long h = static_cast<long long>(shape[a] / 2);
      phase *= roots[a]((static_cast<long long>(idx[a]) - h) * steps[a]);
    }
    out[flat] = f[flat] * phase;
  }
  return out;
}

SampledField symplectic_fourier(const SampledField& field, std::vector<std::string> labels) {
  const std::size_t d = phase_group(field, "symplectic_fourier");
  if (labels.empty()) {
    labels = group_labels("t", d);
    for (auto& l : group_labels("nu", d)) labels.push_back(l);
  }
  if (labels.size() != 2 * d) throw std::invalid_argument("symplectic_fourier: label count");
  std::vector<cplx> g(field.values().begin(), field.values().end());
  detail::centered_dft(g, field.axes(), -1);

  // t pairs with the frequency group, nu with the position group.
  std::vector<Axis> axes;
  for (std::size_t i = 0; i < d; ++i) axes.push_back(field.axis(d + i).dual(labels[i]));
  for (std::size_t i = 0; i < d; ++i) axes.push_back(field.axis(i).dual(labels[d + i]));
  SampledField out(axes);
  const auto out_shape = out.shape();
  const auto in_strides = field.strides();
  std::vector<std::size_t> idx(2 * d);
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    unravel(flat, out_shape, idx);
    std::size_t src = 0;
    for (std::size_t i = 0; i < d; ++i) {
      src += idx[d + i] * in_strides[i];
      src += detail::negate_index(idx[i], out_shape[i]) * in_strides[d + i];
    }
    out[flat] = g[src];
  }
  return out;
}

SampledField symplectic_modulate(const SampledField& field, std::span<const double> t,
                                 std::span<const double> nu) {
  const std::size_t d = phase_group(field, "symplectic_modulate");
  if (t.size() != d || nu.size() != d) {
    throw std::invalid_argument("symplectic_modulate: shift dimension mismatch");
  }
  std::vector<double> freq(2 * d);
  for (std::size_t i = 0; i < d; ++i) {
    freq[i] = nu[i];
    freq[d + i] = -t[i];
  }
  return modulate(field, freq);
}

SampledField stft_with(const SampledField& f, const SampledField& window,
                       const std::vector<std::string>& position_labels,
                       const std::vector<std::string>& frequency_labels) {
  if (!window.same_grid(f)) throw std::invalid_argument("stft: window grid does not match signal");
  if (position_labels.size() != f.rank() || frequency_labels.size() != f.rank()) {
    throw std::invalid_argument("stft: one position and one frequency label per axis");
  }
  std::vector<Axis> axes;
  for (std::size_t a = 0; a < f.rank(); ++a) {
    Axis p = f.axis(a);
    p.label = position_labels[a];
    axes.push_back(p);
  }
  for (std::size_t a = 0; a < f.rank(); ++a) axes.push_back(f.axis(a).dual(frequency_labels[a]));
  SampledField out(std::move(axes));
  const std::size_t m = f.size();
  auto data = out.values();
  parallel_for(m, [&](std::size_t p) { detail::stft_slice(f, window, p, data.subspan(p * m, m)); });
  return out;
}

SampledField stft(const SampledField& f, const WindowSpec& window,
                  std::vector<std::string> position_labels,
                  std::vector<std::string> frequency_labels) {
  if (position_labels.empty()) position_labels = group_labels("t", f.rank());
  if (frequency_labels.empty()) frequency_labels = group_labels("nu", f.rank());
  return stft_with(f, realize_window(window, f.axes()), position_labels, frequency_labels);
}

SampledField stft_2d(const SampledField& field, const WindowSpec& window) {
  const std::size_t d = phase_group(field, "stft_2d");
  auto freq = group_labels("nu", d);
  for (auto& l : group_labels("t", d)) freq.push_back(l);
  return stft_with(field, realize_window(window, field.axes()), field.labels(), freq);
}

SampledField symplectic_stft(const SampledField& field, const WindowSpec& window) {
  const std::size_t d = phase_group(field, "symplectic_stft");
  const SampledField v = stft_2d(field, window);  // (x, xi, nu, t)

  const auto& in = v.axes();
  std::vector<Axis> axes;
  for (std::size_t i = 0; i < d; ++i) axes.push_back(in[i]);          // x
  for (std::size_t i = 0; i < d; ++i) axes.push_back(in[3 * d + i]);  // t
  for (std::size_t i = 0; i < d; ++i) axes.push_back(in[d + i]);      // xi
  for (std::size_t i = 0; i < d; ++i) axes.push_back(in[2 * d + i]);  // nu
  SampledField out(std::move(axes));
  const auto out_shape = out.shape();
  const auto in_strides = v.strides();
  std::vector<std::size_t> idx(4 * d);
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    unravel(flat, out_shape, idx);
    std::size_t src = 0;
    for (std::size_t i = 0; i < d; ++i) {
      src += idx[i] * in_strides[i];
      src += detail::negate_index(idx[d + i], out_shape[d + i]) * in_strides[3 * d + i];
      src += idx[2 * d + i] * in_strides[d + i];
      src += idx[3 * d + i] * in_strides[2 * d + i];
    }
    out[flat] = v[src];
  }
  return out;
}

}  // namespace phasemod
