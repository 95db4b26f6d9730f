#include "phasemod/norms.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "phasemod/operators.hpp"
#include "phasemod/parallel.hpp"

namespace phasemod {
namespace {

void check_exponent(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("norm: exponent must lie in [1, inf]");
}

// (sum |v|^p * cell)^(1/p), or max |v| for p = inf. Values are nonnegative.
double reduce(const double* v, std::size_t n, std::size_t stride, double p, double cell) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, v[i * stride]);
  if (std::isinf(p) || m == 0.0) return m;
  double acc = 0.0;
  if (p == 1.0) {
    for (std::size_t i = 0; i < n; ++i) acc += v[i * stride];
    return acc * cell;
  }
  if (p == 2.0) {
    for (std::size_t i = 0; i < n; ++i) {
      const double r = v[i * stride] / m;
      acc += r * r;
    }
    return m * std::sqrt(acc * cell);
  }
  for (std::size_t i = 0; i < n; ++i) acc += std::pow(v[i * stride] / m, p);
  return m * std::pow(acc * cell, 1.0 / p);
}

// Maps each target axis to its stride in a weight field (0 when the weight omits it).
std::vector<std::size_t> weight_strides(const SampledField& w, const std::vector<Axis>& target) {
  std::vector<std::size_t> out(target.size(), 0);
  const auto strides = w.strides();
  for (const auto& wa : w.axes()) {
    bool found = false;
    for (std::size_t i = 0; i < target.size(); ++i) {
      if (target[i].label == wa.label) {
        if (!target[i].same_shape(wa, 1e-9)) {
          throw std::invalid_argument("weight: axis '" + wa.label + "' does not match the field grid");
        }
        out[i] = strides[w.axis_index(wa.label)];
        found = true;
      }
    }
    if (!found) throw std::invalid_argument("weight: axis '" + wa.label + "' not present in field");
  }
  return out;
}

std::vector<double> weighted_magnitudes(const SampledField& field, const Weight& weight) {
  std::vector<double> mag(field.size());
  if (weight.is_unit()) {
    for (std::size_t i = 0; i < mag.size(); ++i) mag[i] = std::abs(field[i]);
    return mag;
  }
  const auto ws = weight_strides(*weight.values, field.axes());
  const auto shape = field.shape();
  std::vector<std::size_t> idx(shape.size());
  for (std::size_t i = 0; i < mag.size(); ++i) {
    unravel(i, shape, idx);
    std::size_t w = 0;
    for (std::size_t a = 0; a < idx.size(); ++a) w += idx[a] * ws[a];
    mag[i] = std::abs(field[i]) * std::abs((*weight.values)[w]);
  }
  return mag;
}

double reduce_chain(std::vector<double> mag, std::vector<Axis> axes, const ExponentChain& chain) {
  // Permute so the innermost chain step is the fastest-varying axis.
  std::vector<std::size_t> order;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    std::size_t found = axes.size();
    for (std::size_t i = 0; i < axes.size(); ++i) {
      if (axes[i].label == it->label) found = i;
    }
    if (found == axes.size()) {
      throw std::invalid_argument("mixed_norm: chain names unknown axis '" + it->label + "'");
    }
    if (std::find(order.begin(), order.end(), found) != order.end()) {
      throw std::invalid_argument("mixed_norm: axis '" + it->label + "' listed twice");
    }
    check_exponent(it->exponent);
    order.push_back(found);
  }
  if (order.size() != axes.size()) throw std::invalid_argument("mixed_norm: chain must cover every axis");

  std::vector<std::size_t> shape, strides(axes.size(), 1);
  for (const auto& a : axes) shape.push_back(a.samples);
  for (std::size_t i = axes.size(); i-- > 1;) strides[i - 1] = strides[i] * shape[i];
  std::vector<std::size_t> pshape;
  for (auto o : order) pshape.push_back(shape[o]);
  std::vector<double> work(mag.size());
  std::vector<std::size_t> idx(order.size());
  for (std::size_t flat = 0; flat < work.size(); ++flat) {
    unravel(flat, pshape, idx);
    std::size_t src = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) src += idx[i] * strides[order[i]];
    work[flat] = mag[src];
  }

  std::size_t len = work.size();
  for (std::size_t step = 0; step < chain.size(); ++step) {
    const Axis& ax = axes[order[order.size() - 1 - step]];
    const std::size_t n = ax.samples;
    const std::size_t outer = len / n;
    for (std::size_t o = 0; o < outer; ++o) {
      work[o] = reduce(work.data() + o * n, n, 1, chain[step].exponent, ax.spacing());
    }
    len = outer;
  }
  return work[0];
}

SampledField weight_product(const std::vector<Axis>& axes, const std::function<double(std::span<const std::size_t>)>& fn) {
  SampledField out(axes);
  const auto shape = out.shape();
  std::vector<std::size_t> idx(shape.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    unravel(i, shape, idx);
    out[i] = fn(idx);
  }
  return out;
}

}  // namespace

Weight Weight::unit() { return {}; }

Weight Weight::from_field(SampledField values) {
  for (const auto& v : values.values()) {
    if (!(v.real() >= 0.0) || v.imag() != 0.0) {
      throw std::invalid_argument("Weight: values must be real and nonnegative");
    }
  }
  Weight w;
  w.kind = Kind::explicit_field;
  w.values = std::move(values);
  return w;
}

SampledField Weight::expand(const std::vector<Axis>& axes) const {
  SampledField out(axes);
  if (is_unit()) {
    for (auto& v : out.values()) v = 1.0;
    return out;
  }
  const auto ws = weight_strides(*values, axes);
  const auto shape = out.shape();
  std::vector<std::size_t> idx(shape.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    unravel(i, shape, idx);
    std::size_t w = 0;
    for (std::size_t a = 0; a < idx.size(); ++a) w += idx[a] * ws[a];
    out[i] = (*values)[w];
  }
  return out;
}

double mixed_norm(const SampledField& field, const ExponentChain& chain, const Weight& weight) {
  return reduce_chain(weighted_magnitudes(field, weight), field.axes(), chain);
}

double lp_norm(const SampledField& f, double p) {
  ExponentChain chain;
  for (const auto& a : f.axes()) chain.push_back({a.label, p});
  return mixed_norm(f, chain);
}

double modulation_norm(const SampledField& f, double p, double q, const WindowSpec& window,
                       const Weight& weight) {
  const std::size_t d = f.rank();
  const auto t = group_labels("t", d);
  const auto nu = group_labels("nu", d);
  const SampledField v = stft(f, window, t, nu);
  ExponentChain chain;
  for (const auto& l : t) chain.push_back({l, p});
  for (const auto& l : nu) chain.push_back({l, q});
  return mixed_norm(v, chain, weight);
}

double modulation_norm_tilde(const SampledField& f, double p, double q, const WindowSpec& window) {
  const std::size_t d = f.rank();
  const auto t = group_labels("t", d);
  const auto nu = group_labels("nu", d);
  const SampledField v = stft(f, window, t, nu);
  ExponentChain chain;
  for (const auto& l : nu) chain.push_back({l, q});
  for (const auto& l : t) chain.push_back({l, p});
  return mixed_norm(v, chain);
}

std::vector<double> phase_modulation_norms(const SampledField& field,
                                           const std::vector<PhaseExponents>& exps,
                                           const WindowSpec& window, const Weight& weight) {
  if (field.rank() == 0 || field.rank() % 2 != 0) {
    throw std::invalid_argument("phase_modulation_norm: field needs (x..., xi...) axes");
  }
  for (const auto& e : exps) {
    for (double p : {e.p1, e.p2, e.q1, e.q2}) check_exponent(p);
  }
  const std::size_t d = field.rank() / 2;
  const SampledField w = realize_window(window, field.axes());
  const auto shape = field.shape();
  std::vector<std::size_t> x_shape(shape.begin(), shape.begin() + d);
  std::vector<std::size_t> xi_shape(shape.begin() + d, shape.end());
  std::size_t nx = 1, nxi = 1;
  for (auto n : x_shape) nx *= n;
  for (auto n : xi_shape) nxi *= n;
  const std::size_t m = field.size();  // nx * nxi; slice layout (nu..., tau...)

  // Output axes of the symplectic STFT, used for weights and spacings.
  std::vector<Axis> out_axes;
  const auto t_labels = group_labels("t", d);
  const auto nu_labels = group_labels("nu", d);
  for (std::size_t i = 0; i < d; ++i) out_axes.push_back(field.axis(i));
  for (std::size_t i = 0; i < d; ++i) out_axes.push_back(field.axis(d + i).dual(t_labels[i]));
  for (std::size_t i = 0; i < d; ++i) out_axes.push_back(field.axis(d + i));
  for (std::size_t i = 0; i < d; ++i) out_axes.push_back(field.axis(i).dual(nu_labels[i]));
  std::vector<std::size_t> ws;
  if (!weight.is_unit()) ws = weight_strides(*weight.values, out_axes);

  double dx = 1.0, dt = 1.0, dxi = 1.0, dnu = 1.0;
  for (std::size_t i = 0; i < d; ++i) {
    dx *= out_axes[i].spacing();
    dt *= out_axes[d + i].spacing();
    dxi *= out_axes[2 * d + i].spacing();
    dnu *= out_axes[3 * d + i].spacing();
  }
  const std::size_t nt = nxi, nnu = nx;

  // Flat t index of each frequency-slice column b (t = -b on every axis).
  std::vector<std::size_t> t_of_b(nxi);
  {
    std::vector<std::size_t> b_idx(d);
    for (std::size_t b = 0; b < nxi; ++b) {
      unravel(b, xi_shape, b_idx);
      std::size_t t_flat = 0;
      for (std::size_t i = 0; i < d; ++i) {
        t_flat = t_flat * xi_shape[i] + detail::negate_index(b_idx[i], xi_shape[i]);
      }
      t_of_b[b] = t_flat;
    }
  }

  // partial[e][k * nnu + n]: after reducing x and t at frequency shift k.
  std::vector<std::vector<double>> partial(exps.size(), std::vector<double>(nxi * nnu));
  parallel_for(nxi, [&](std::size_t k) {
    std::vector<cplx> slice(m);
    std::vector<double> slab(nx * nt * nnu);  // [j][t][n]
    std::vector<std::size_t> j_idx(d), k_idx(d), a_idx(d), t_idx(d);
    unravel(k, xi_shape, k_idx);
    for (std::size_t j = 0; j < nx; ++j) {
      unravel(j, x_shape, j_idx);
      detail::stft_slice(field, w, j * nxi + k, slice);
      // slice index (a, b): a dual to x gives nu, b dual to xi gives -t.
      for (std::size_t a = 0; a < nx; ++a) {
        if (!ws.empty()) unravel(a, x_shape, a_idx);
        for (std::size_t b = 0; b < nxi; ++b) {
          const std::size_t t_flat = t_of_b[b];
          double v = std::abs(slice[a * nxi + b]);
          if (!ws.empty()) {
            std::size_t widx = 0;
            unravel(t_flat, xi_shape, t_idx);
            for (std::size_t i = 0; i < d; ++i) {
              widx += j_idx[i] * ws[i] + t_idx[i] * ws[d + i] + k_idx[i] * ws[2 * d + i] +
                      a_idx[i] * ws[3 * d + i];
            }
            v *= std::abs((*weight.values)[widx]);
          }
          slab[(j * nt + t_flat) * nnu + a] = v;
        }
      }
    }
    std::vector<double> over_x(nt * nnu);
    for (std::size_t e = 0; e < exps.size(); ++e) {
      for (std::size_t tn = 0; tn < nt * nnu; ++tn) {
        over_x[tn] = reduce(slab.data() + tn, nx, nt * nnu, exps[e].p1, dx);
      }
      for (std::size_t n = 0; n < nnu; ++n) {
        partial[e][k * nnu + n] = reduce(over_x.data() + n, nt, nnu, exps[e].p2, dt);
      }
    }
  });

  std::vector<double> result;
  for (std::size_t e = 0; e < exps.size(); ++e) {
    std::vector<double> over_xi(nnu);
    for (std::size_t n = 0; n < nnu; ++n) {
      over_xi[n] = reduce(partial[e].data() + n, nxi, nnu, exps[e].q1, dxi);
    }
    result.push_back(reduce(over_xi.data(), nnu, 1, exps[e].q2, dnu));
  }
  return result;
}

double phase_modulation_norm(const SampledField& field, const PhaseExponents& exps,
                             const WindowSpec& window, const Weight& weight) {
  return phase_modulation_norms(field, {exps}, window, weight).front();
}

double phase_m_norm(const SampledField& field, const PhaseMExponents& exps,
                    const WindowSpec& window, const Weight& weight) {
  const SampledField v = stft_2d(field, window);  // (x, xi, nu, t)
  const std::size_t d = field.rank() / 2;
  ExponentChain chain;
  for (std::size_t i = 0; i < d; ++i) chain.push_back({v.axis(i).label, exps.p1});
  for (std::size_t i = 0; i < d; ++i) chain.push_back({v.axis(d + i).label, exps.q1});
  for (std::size_t i = 0; i < d; ++i) chain.push_back({v.axis(2 * d + i).label, exps.q2});
  for (std::size_t i = 0; i < d; ++i) chain.push_back({v.axis(3 * d + i).label, exps.p2});
  return mixed_norm(v, chain, weight);
}

double fl_norm(const SampledField& f, double p) { return lp_norm(inverse_fourier(f), p); }

Weight weight_ws(double s, const std::vector<Axis>& frequency_axes) {
  SampledField values = sample(
      [s](std::span<const double> xi) {
        double r2 = 0.0;
        for (double c : xi) r2 += c * c;
        return cplx{std::pow(1.0 + r2, s / 2.0), 0.0};
      },
      frequency_axes);
  Weight w;
  w.kind = s == 0.0 ? Weight::Kind::unit : Weight::Kind::polynomial;
  w.s = s;
  if (s != 0.0) {
    w.values = std::move(values);
    w.moderation = Weight::Moderation{"w_|s|", std::pow(2.0, std::abs(s) / 2.0)};
  }
  return w;
}

Weight phase_product_weight(const Weight& w1, const Weight& w2, const std::vector<Axis>& phase_axes) {
  if (phase_axes.empty() || phase_axes.size() % 2 != 0) {
    throw std::invalid_argument("phase_product_weight: phase axes must be (x..., xi...)");
  }
  const std::size_t d = phase_axes.size() / 2;
  const SampledField a = w1.expand(phase_axes);
  const SampledField b = w2.expand(phase_axes);
  std::vector<Axis> axes;
  const auto t_labels = group_labels("t", d);
  const auto nu_labels = group_labels("nu", d);
  for (std::size_t i = 0; i < d; ++i) axes.push_back(phase_axes[i]);
  for (std::size_t i = 0; i < d; ++i) axes.push_back({t_labels[i], phase_axes[i].samples, phase_axes[i].extent});
  for (std::size_t i = 0; i < d; ++i) axes.push_back(phase_axes[d + i]);
  for (std::size_t i = 0; i < d; ++i) {
    axes.push_back({nu_labels[i], phase_axes[d + i].samples, phase_axes[d + i].extent});
  }
  const auto strides = a.strides();
  SampledField values = weight_product(axes, [&](std::span<const std::size_t> idx) {
    std::size_t ia = 0, ib = 0;
    for (std::size_t i = 0; i < d; ++i) {
      const std::size_t nx = phase_axes[i].samples, nxi = phase_axes[d + i].samples;
      const std::size_t x = idx[i], t = idx[d + i], xi = idx[2 * d + i], nu = idx[3 * d + i];
      ia += ((x + nx + nx / 2 - t) % nx) * strides[i] + xi * strides[d + i];
      ib += x * strides[i] + ((nu + xi + nxi / 2) % nxi) * strides[d + i];
    }
    return a[ia].real() * b[ib].real();
  });
  Weight w;
  w.kind = (w1.is_unit() && w2.is_unit()) ? Weight::Kind::unit : Weight::Kind::product;
  if (w.kind != Weight::Kind::unit) w.values = std::move(values);
  return w;
}

ModerationReport is_moderate_check(const Weight& w, const Weight& v, const std::vector<Axis>& axes,
                                   double constant, std::size_t trials, std::uint64_t seed) {
  const SampledField wf = w.expand(axes);
  const SampledField vf = v.expand(axes);
  const auto shape = wf.shape();
  const auto strides = wf.strides();
  std::mt19937_64 rng(seed);
  ModerationReport report;
  std::vector<std::size_t> xi(axes.size()), yi(axes.size());
  while (report.trials < trials) {
    std::size_t x = 0, y = 0, sum = 0;
    bool inside = true;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      std::uniform_int_distribution<std::size_t> pick(0, shape[a] - 1);
      xi[a] = pick(rng);
      yi[a] = pick(rng);
      // coordinate of x + y has index xi + yi - N/2
      const long long s = static_cast<long long>(xi[a] + yi[a]) - static_cast<long long>(shape[a] / 2);
      if (s < 0 || s >= static_cast<long long>(shape[a])) inside = false;
      x += xi[a] * strides[a];
      y += yi[a] * strides[a];
      sum += static_cast<std::size_t>(std::max(0LL, s)) * strides[a];
    }
    if (!inside) continue;
    ++report.trials;
    const double lhs = wf[sum].real();
    const double base = wf[x].real() * vf[y].real();
    const double ratio = base > 0.0 ? lhs / base : (lhs > 0.0 ? kInfinity : 0.0);
    report.worst_ratio = std::max(report.worst_ratio, ratio);
    if (lhs > constant * base * (1.0 + 1e-12)) ++report.violations;
  }
  report.pass = report.violations == 0;
  return report;
}

double sobolev_norm(const SampledField& f, double p, double s) {
  std::vector<Axis> xi_axes;
  for (const auto& a : f.axes()) xi_axes.push_back(a.dual(dual_label(a.label)));
  auto axes = f.axes();
  for (const auto& a : xi_axes) axes.push_back(a);
  const std::size_t d = f.rank();
  const SampledField symbol = sample(
      [d, s](std::span<const double> z) {
        double r2 = 0.0;
        for (std::size_t i = d; i < z.size(); ++i) r2 += z[i] * z[i];
        return cplx{std::pow(1.0 + r2, s / 2.0), 0.0};
      },
      axes);
  return lp_norm(apply_kn(make_symbol(symbol), f), p);
}

}  // namespace phasemod
