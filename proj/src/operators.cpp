#include "phasemod/operators.hpp"

#include <stdexcept>

#include "phasemod/detail/roots.hpp"
#include "phasemod/parallel.hpp"
#include "phasemod/transforms.hpp"

namespace phasemod {
namespace {

std::vector<Axis> frequency_axes(const SampledField& f) {
  std::vector<Axis> out;
  for (const auto& a : f.axes()) out.push_back(a.dual(dual_label(a.label)));
  return out;
}

void require_dual_layout(const SampledField& field) {
  if (field.rank() == 0 || field.rank() % 2 != 0) {
    throw std::invalid_argument("symbol: field needs (x..., xi...) axes");
  }
  const std::size_t d = field.rank() / 2;
  for (std::size_t i = 0; i < d; ++i) {
    const Axis expected = field.axis(i).dual(field.axis(d + i).label);
    if (!expected.same_shape(field.axis(d + i), 1e-9)) {
      throw std::invalid_argument("symbol: frequency axis '" + field.axis(d + i).label +
                                  "' is not the dual grid of '" + field.axis(i).label + "'");
    }
  }
}

void require_compatible(const SymbolField& sigma, const SampledField& f) {
  const std::size_t d = sigma.dim();
  if (f.rank() != d) throw std::invalid_argument("apply_kn: dimension mismatch");
  for (std::size_t i = 0; i < d; ++i) {
    if (!sigma.field.axis(i).same_shape(f.axis(i))) {
      throw std::invalid_argument("apply_kn: symbol position grid differs from the input grid");
    }
  }
}

// Product over axes of e^{2 pi i x_j xi_k}, for flat indices over d axes.
class PhaseKernel {
 public:
  explicit PhaseKernel(const std::vector<Axis>& axes) {
    for (const auto& a : axes) {
      shape_.push_back(a.samples);
      roots_.emplace_back(a.samples);
    }
  }

  cplx operator()(std::span<const std::size_t> j, std::span<const std::size_t> k) const {
    cplx p{1.0, 0.0};
    for (std::size_t a = 0; a < shape_.size(); ++a) p *= roots_[a].centered(j[a], k[a]);
    return p;
  }

  const std::vector<std::size_t>& shape() const { return shape_; }

 private:
  std::vector<std::size_t> shape_;
  std::vector<detail::RootTable> roots_;
};

}  // namespace

std::string to_string(SymbolField::Provenance provenance) {
  switch (provenance) {
    case SymbolField::Provenance::direct: return "direct";
    case SymbolField::Provenance::tensor: return "tensor";
    case SymbolField::Provenance::eta: return "eta";
    case SymbolField::Provenance::sigma_lambda: return "sigma_lambda";
  }
  return "unknown";
}

SymbolField make_symbol(SampledField field, SymbolField::Provenance provenance) {
  require_dual_layout(field);
  return {std::move(field), provenance};
}

SampledField apply_kn(const SymbolField& sigma, const SampledField& f) {
  require_compatible(sigma, f);
  const SampledField fhat = fourier(f);
  const PhaseKernel kernel(f.axes());
  const std::size_t m = f.size();
  const auto& shape = kernel.shape();
  std::vector<std::vector<std::size_t>> decoded(m, std::vector<std::size_t>(shape.size()));
  for (std::size_t i = 0; i < m; ++i) unravel(i, shape, decoded[i]);
  const double dxi = fhat.cell_volume();

  SampledField out(f.axes());
  parallel_for(m, [&](std::size_t j) {
    cplx acc{};
    const cplx* row = sigma.field.values().data() + j * m;
    for (std::size_t k = 0; k < m; ++k) acc += row[k] * fhat[k] * kernel(decoded[j], decoded[k]);
    out[j] = acc * dxi;
  });
  return out;
}

SampledField apply_kn_fast(const SymbolField& sigma, const SampledField& f) {
  require_compatible(sigma, f);
  const SampledField fhat = fourier(f);
  const auto xi_axes = fhat.axes();
  const std::size_t m = f.size();
  SampledField out(f.axes());
  parallel_for(m, [&](std::size_t j) {
    std::vector<cplx> row(m);
    const cplx* s = sigma.field.values().data() + j * m;
    for (std::size_t k = 0; k < m; ++k) row[k] = s[k] * fhat[k];
    detail::centered_dft(row, xi_axes, +1);
    out[j] = row[j];
  });
  return out;
}

SampledField rihaczek(const SampledField& f, const SampledField& g) {
  if (!f.same_grid(g)) throw std::invalid_argument("rihaczek: f and g must share a grid");
  const SampledField fhat = fourier(f);
  auto axes = f.axes();
  for (const auto& a : fhat.axes()) axes.push_back(a);
  SampledField out(axes);
  const PhaseKernel kernel(f.axes());
  const std::size_t m = f.size();
  const auto& shape = kernel.shape();
  std::vector<std::size_t> j_idx(shape.size()), k_idx(shape.size());
  for (std::size_t j = 0; j < m; ++j) {
    unravel(j, shape, j_idx);
    const cplx gbar = std::conj(g[j]);
    for (std::size_t k = 0; k < m; ++k) {
      unravel(k, shape, k_idx);
      out[j * m + k] = kernel(j_idx, k_idx) * fhat[k] * gbar;
    }
  }
  return out;
}

std::pair<cplx, cplx> duality_pair(const SymbolField& sigma, const SampledField& f,
                                   const SampledField& g) {
  if (!f.same_grid(g)) throw std::invalid_argument("duality_pair: f and g must share a grid");
  const SampledField tf = apply_kn(sigma, f);
  const cplx lhs = integrate(multiply(tf, conjugate(g)));
  const SampledField r = rihaczek(f, g);
  if (!r.same_grid(sigma.field)) throw std::invalid_argument("duality_pair: symbol grid mismatch");
  // (sigma, conj R) = integral sigma * conj(conj R) = integral sigma * R.
  const cplx rhs = integrate(multiply(sigma.field, r));
  return {lhs, rhs};
}

SampledField convolve(const SampledField& f, const SampledField& g) {
  if (!f.same_grid(g)) throw std::invalid_argument("convolve: f and g must share a grid");
  return inverse_fourier(multiply(fourier(f), fourier(g)), f.labels());
}

SampledField eta_density(const SampledField& h1, const SampledField& h2) {
  if (!h1.same_grid(h2)) throw std::invalid_argument("eta_density: h1 and h2 must share a grid");
  const std::size_t d = h1.rank();
  const SampledField h1hat = fourier(h1);
  std::vector<Axis> axes;
  const auto t_labels = group_labels("t", d);
  const auto nu_labels = group_labels("nu", d);
  for (std::size_t i = 0; i < d; ++i) axes.push_back({t_labels[i], h2.axis(i).samples, h2.axis(i).extent});
  for (std::size_t i = 0; i < d; ++i) {
    Axis a = h1hat.axis(i);
    a.label = nu_labels[i];
    axes.push_back(a);
  }
  SampledField out(axes);
  const PhaseKernel kernel(h2.axes());
  const std::size_t m = h2.size();
  const auto& shape = kernel.shape();
  std::vector<std::size_t> j_idx(d), k_idx(d);
  for (std::size_t j = 0; j < m; ++j) {
    unravel(j, shape, j_idx);
    for (std::size_t k = 0; k < m; ++k) {
      unravel(k, shape, k_idx);
      out[j * m + k] = std::conj(kernel(j_idx, k_idx)) * h2[j] * h1hat[k];
    }
  }
  return out;
}

SymbolField symbol_from_eta(const SampledField& h1, const SampledField& h2) {
  if (!h1.same_grid(h2)) throw std::invalid_argument("symbol_from_eta: h1 and h2 must share a grid");
  const std::size_t d = h1.rank();
  const auto xi_axes = frequency_axes(h1);
  auto axes = h1.axes();
  for (const auto& a : xi_axes) axes.push_back(a);
  SampledField sigma(axes);
  const std::size_t m = h1.size();
  std::vector<std::size_t> xi_shape;
  for (const auto& a : xi_axes) xi_shape.push_back(a.samples);

  parallel_for(m, [&](std::size_t k) {
    std::vector<std::size_t> k_idx(d);
    unravel(k, xi_shape, k_idx);
    std::vector<double> shift(d);
    for (std::size_t a = 0; a < d; ++a) shift[a] = -xi_axes[a].coord(k_idx[a]);
    const SampledField column = convolve(modulate(h2, shift), h1);
    for (std::size_t j = 0; j < m; ++j) sigma[j * m + k] = column[j];
  });
  return {std::move(sigma), SymbolField::Provenance::eta};
}

SymbolField symbol_outer(const SampledField& h1, const SampledField& k,
                         SymbolField::Provenance provenance) {
  if (h1.rank() != k.rank()) throw std::invalid_argument("symbol_outer: dimension mismatch");
  return make_symbol(tensor(h1, k), provenance);
}

SymbolField symbol_tensor(const SampledField& h1, const SampledField& h2) {
  if (!h1.same_grid(h2)) throw std::invalid_argument("symbol_tensor: h1 and h2 must share a grid");
  return symbol_outer(h1, fourier(h2));
}

}  // namespace phasemod
