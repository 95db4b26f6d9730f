#include "phasemod/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "phasemod/detail/roots.hpp"
#include "phasemod/parallel.hpp"
#include "phasemod/testfns.hpp"

namespace phasemod {
namespace {

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::size_t ravel(std::span<const std::size_t> idx, std::span<const std::size_t> shape) {
  std::size_t flat = 0;
  for (std::size_t a = 0; a < idx.size(); ++a) flat = flat * shape[a] + idx[a];
  return flat;
}

double relative_error(const SampledField& value, const SampledField& reference) {
  const double diff = max_abs_difference(value, reference);
  const double scale = max_abs(reference);
  if (scale == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return diff / scale;
}

void require_real(const SampledField& w, const char* what) {
  for (const auto& v : w.values()) {
    if (v.imag() != 0.0) throw std::invalid_argument(std::string(what) + ": window must be real");
  }
}

void require_even(const SampledField& w, const char* what) {
  const auto shape = w.shape();
  std::vector<std::size_t> idx(shape.size()), neg(shape.size());
  const double tol = 1e-12 * std::max(max_abs(w), 1e-300);
  for (std::size_t flat = 0; flat < w.size(); ++flat) {
    unravel(flat, shape, idx);
    for (std::size_t a = 0; a < idx.size(); ++a) neg[a] = detail::negate_index(idx[a], shape[a]);
    if (std::abs(w[flat] - w[ravel(neg, shape)]) > tol) {
      throw std::invalid_argument(std::string(what) + ": window must be even");
    }
  }
}

// STFT of the sheared product conj(f)(x - t) g(x) with the sheared window, axes (x, t, nu, xi).
SampledField sheared_product_stft(const SampledField& f, const SampledField& g, const SampledField& phi) {
  const std::size_t d = f.rank();
  const auto x = group_labels("x", d);
  const auto t = group_labels("t", d);
  const SampledField product = coordinate_shear(tensor(conjugate(f).relabeled(x), g.relabeled(t)));
  const SampledField window = coordinate_shear(tensor(phi.relabeled(x), phi.relabeled(t)));
  return stft_with(product, window, concat(x, t), concat(group_labels("nu", d), group_labels("xi", d)));
}

// conj(V f(x - t, xi)) V g(x, nu + xi) laid out on the axes of `like` = (x, t, nu, xi).
SampledField factorized_product(const SampledField& f, const SampledField& g, const SampledField& phi,
                                const SampledField& like) {
  const std::size_t d = f.rank();
  const SampledField vf = stft_with(f, phi, group_labels("a", d), group_labels("b", d));
  const SampledField vg = stft_with(g, phi, group_labels("a", d), group_labels("b", d));
  const auto n = f.shape();
  const auto v_shape = vf.shape();
  const auto shape = like.shape();
  SampledField out(like.axes());
  parallel_for(out.size() / vf.size(), [&](std::size_t outer) {
    std::vector<std::size_t> idx(4 * d), pf(2 * d), pg(2 * d);
    const std::size_t block = vf.size();
    for (std::size_t inner = 0; inner < block; ++inner) {
      const std::size_t flat = outer * block + inner;
      unravel(flat, shape, idx);
      for (std::size_t a = 0; a < d; ++a) {
        const std::size_t j = idx[a], m = idx[d + a], nu = idx[2 * d + a], k = idx[3 * d + a];
        pf[a] = (j + n[a] + n[a] / 2 - m) % n[a];
        pf[d + a] = k;
        pg[a] = j;
        pg[d + a] = (nu + k + n[a] - n[a] / 2) % n[a];
      }
      out[flat] = std::conj(vf[ravel(pf, v_shape)]) * vg[ravel(pg, v_shape)];
    }
  });
  return out;
}

std::vector<Axis> concat_axes(std::vector<Axis> a, const std::vector<Axis>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

SlopeReport scaling_slope(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 3) throw std::invalid_argument("scaling_slope: need at least three samples");
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (!(samples[i].first > samples[i - 1].first)) {
      throw std::invalid_argument("scaling_slope: lambdas must be strictly increasing");
    }
  }
  SlopeReport r;
  double sx = 0, sy = 0;
  for (const auto& [lambda, value] : samples) {
    if (!(lambda > 0.0) || !(value > 0.0)) {
      throw std::invalid_argument("scaling_slope: lambdas and values must be positive");
    }
    r.lambdas.push_back(lambda);
    r.values.push_back(value);
    sx += std::log(lambda);
    sy += std::log(value);
  }
  const double n = static_cast<double>(samples.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& [lambda, value] : samples) {
    const double dx = std::log(lambda) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(value) - my);
  }
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  for (const auto& [lambda, value] : samples) {
    r.max_residual = std::max(r.max_residual,
                              std::abs(std::log(value) - r.intercept - r.slope * std::log(lambda)));
  }
  return r;
}

double verify_stft_factorization(const SampledField& f, const SampledField& g, const WindowSpec& window) {
  if (!f.same_grid(g)) throw std::invalid_argument("verify_stft_factorization: f and g must share a grid");
  const SampledField phi = realize_window(window, f.axes());
  require_real(phi, "verify_stft_factorization");
  const SampledField lhs = sheared_product_stft(f, g, phi);
  return relative_error(lhs, factorized_product(f, g, phi, lhs));
}

double verify_rihaczek_window_relation(const SampledField& f, const SampledField& g,
                                       const WindowSpec& window) {
  if (!f.same_grid(g)) {
    throw std::invalid_argument("verify_rihaczek_window_relation: f and g must share a grid");
  }
  const SampledField phi = realize_window(window, f.axes());
  require_real(phi, "verify_rihaczek_window_relation");
  require_even(phi, "verify_rihaczek_window_relation");
  const std::size_t d = f.rank();
  const auto x = group_labels("x", d);
  const auto xi = group_labels("xi", d);
  const auto phase_labels = concat(x, xi);
  const SampledField r = conjugate(rihaczek(f, g)).relabeled(phase_labels);
  const SampledField rw = conjugate(rihaczek(phi, phi)).relabeled(phase_labels);
  const SampledField lhs = stft_with(r, rw, phase_labels, concat(group_labels("nu", d), group_labels("t", d)));

  // rhs(x, xi, nu, t) = e^{-2 pi i xi t} P(x, -t, nu, xi), P the sheared-product STFT.
  const SampledField sheared = sheared_product_stft(f, g, phi);
  const auto p_shape = sheared.shape();
  const auto shape = lhs.shape();
  std::vector<detail::RootTable> roots;
  for (std::size_t a = 0; a < d; ++a) roots.emplace_back(shape[a]);
  SampledField rhs(lhs.axes());
  std::vector<std::size_t> idx(4 * d), src(4 * d);
  for (std::size_t flat = 0; flat < rhs.size(); ++flat) {
    unravel(flat, shape, idx);
    cplx phase{1.0, 0.0};
    for (std::size_t a = 0; a < d; ++a) {
      const std::size_t j = idx[a], k = idx[d + a], n = idx[2 * d + a], m = idx[3 * d + a];
      src[a] = j;
      src[d + a] = detail::negate_index(m, shape[3 * d + a]);
      src[2 * d + a] = n;
      src[3 * d + a] = k;
      phase *= std::conj(roots[a].centered(m, k));
    }
    rhs[flat] = phase * sheared[ravel(src, p_shape)];
  }
  return relative_error(lhs, rhs);
}

TransformCheck check_transforms(std::uint64_t seed, const std::vector<Axis>& position_axes,
                                double fraction) {
  const std::size_t d = position_axes.size();
  const auto phase_axes = concat_axes(position_axes, dual_axes(position_axes));
  const SampledField field = random_bandlimited(seed, phase_axes, fraction);
  TransformCheck out;
  const SampledField spectrum = fourier(field);
  out.round_trip = relative_error(inverse_fourier(spectrum, field.labels()), field);
  const double energy = std::real(integrate(multiply(field, conjugate(field))));
  const double spectral = std::real(integrate(multiply(spectrum, conjugate(spectrum))));
  out.parseval = std::abs(spectral - energy) / energy;

  const SampledField once = symplectic_fourier(field);
  const SampledField twice = symplectic_fourier(once);
  out.symplectic_involution = relative_error(SampledField(field.axes(), {twice.values().begin(), twice.values().end()}), field);

  // F~(t, nu) against F^ at (nu, -t): spectrum axes are (dual of x, dual of xi).
  const auto shape = once.shape();
  const auto s_shape = spectrum.shape();
  SampledField reference(once.axes());
  std::vector<std::size_t> idx(2 * d), src(2 * d);
  for (std::size_t flat = 0; flat < reference.size(); ++flat) {
    unravel(flat, shape, idx);
    for (std::size_t a = 0; a < d; ++a) {
      src[a] = idx[d + a];
      src[d + a] = detail::negate_index(idx[a], shape[a]);
    }
    reference[flat] = spectrum[ravel(src, s_shape)];
  }
  out.symplectic_vs_fourier = relative_error(once, reference);
  return out;
}

NumericExponents NumericExponents::from(const ExponentConfig& cfg) {
  return {cfg.p1.value(), cfg.q1.value(), cfg.p2.value(), cfg.q2.value(),
          cfg.p3.value(), cfg.p4.value(), cfg.q3.value(), cfg.q4.value()};
}

std::vector<RatioTable> boundedness_sweep(const std::vector<NumericExponents>& exps,
                                          const std::vector<OperatorInstance>& family,
                                          const WindowSpec& window) {
  std::vector<RatioTable> tables(exps.size());
  std::vector<PhaseExponents> symbol_exps;
  for (const auto& e : exps) symbol_exps.push_back(e.symbol_exponents());
  const auto modulation = [](const SampledField& v, double p, double q) {
    ExponentChain chain;
    for (const auto& l : group_labels("t", v.rank() / 2)) chain.push_back({l, p});
    for (const auto& l : group_labels("nu", v.rank() / 2)) chain.push_back({l, q});
    return mixed_norm(v, chain);
  };
  for (const auto& inst : family) {
    const SampledField tf = apply_kn_fast(inst.sigma, inst.f);
    const SampledField v_out = stft(tf, window);
    const SampledField v_in = stft(inst.f, window);
    const auto symbol_norms = phase_modulation_norms(inst.sigma.field, symbol_exps, window);
    for (std::size_t c = 0; c < exps.size(); ++c) {
      RatioRow row{inst.id, modulation(v_out, exps[c].p2, exps[c].q2), symbol_norms[c],
                   modulation(v_in, exps[c].p1, exps[c].q1), 0.0};
      const double denom = row.symbol_norm * row.input_norm;
      row.flagged = !(denom > 0.0);
      if (row.flagged) {
        ++tables[c].flagged;
      } else {
        row.ratio = row.output_norm / denom;
        tables[c].max_ratio = std::max(tables[c].max_ratio, row.ratio);
      }
      tables[c].rows.push_back(std::move(row));
    }
  }
  return tables;
}

RatioTable boundedness_sweep(const NumericExponents& exps, const std::vector<OperatorInstance>& family,
                             const WindowSpec& window) {
  return boundedness_sweep(std::vector<NumericExponents>{exps}, family, window).front();
}

std::string to_string(NecessityCase c) {
  switch (c) {
    case NecessityCase::p4_gt_p1_conj: return "p4";
    case NecessityCase::q4_gt_q1_conj: return "q4";
    case NecessityCase::p_sum: return "p_sum";
    case NecessityCase::q_sum: return "q_sum";
    case NecessityCase::p4_gt_p2: return "p4_p2";
    case NecessityCase::q4_gt_q2: return "q4_q2";
  }
  return "unknown";
}

NecessityCase parse_necessity_case(std::string_view name) {
  for (auto c : {NecessityCase::p4_gt_p1_conj, NecessityCase::q4_gt_q1_conj, NecessityCase::p_sum,
                 NecessityCase::q_sum, NecessityCase::p4_gt_p2, NecessityCase::q4_gt_q2}) {
    if (to_string(c) == name) return c;
  }
  throw std::invalid_argument("unknown necessity case '" + std::string(name) + "'");
}

std::string violated_condition(NecessityCase c) {
  switch (c) {
    case NecessityCase::p4_gt_p1_conj: return "p4_le_p1_conj";
    case NecessityCase::q4_gt_q1_conj: return "q4_le_q1_conj";
    case NecessityCase::p_sum: return "p_sum";
    case NecessityCase::q_sum: return "q_sum";
    case NecessityCase::p4_gt_p2: return "p4_le_p2";
    case NecessityCase::q4_gt_q2: return "q4_le_q2";
  }
  return "unknown";
}

double predicted_necessity_slope(NecessityCase c, const ExponentConfig& cfg) {
  const auto u = [](const ExtExponent& e) { return boost::rational_cast<double>(e.reciprocal()); };
  switch (c) {
    case NecessityCase::p4_gt_p1_conj: return 1.0 - u(cfg.p1) - u(cfg.p4);
    case NecessityCase::q4_gt_q1_conj: return 1.0 - u(cfg.q1) - u(cfg.q4);
    case NecessityCase::p_sum: return (1.0 - u(cfg.p1) + u(cfg.p2) - u(cfg.p3) - u(cfg.p4)) / 2.0;
    case NecessityCase::q_sum: return (1.0 - u(cfg.q1) + u(cfg.q2) - u(cfg.q3) - u(cfg.q4)) / 2.0;
    case NecessityCase::p4_gt_p2: return (u(cfg.p2) - u(cfg.p4)) / 2.0;
    case NecessityCase::q4_gt_q2: return u(cfg.q2) - u(cfg.q4);
  }
  return 0.0;
}

NecessityOptions default_necessity_options(NecessityCase c) {
  const std::vector<double> lambdas{2.0, 4.0, 8.0, 16.0};
  switch (c) {
    case NecessityCase::p4_gt_p1_conj: return {2048, 128.0, 2.0, lambdas};
    case NecessityCase::q4_gt_q1_conj: return {1024, 8.0, 2.0, lambdas};
    case NecessityCase::q4_gt_q2: return {1024, 8.0, 2.0, lambdas};
    case NecessityCase::q_sum: return {1024, 16.0, 2.0, lambdas};
    case NecessityCase::p_sum: return {1024, 32.0, 2.0, lambdas};
    case NecessityCase::p4_gt_p2: return {1024, 48.0, 2.0, {4.0, 8.0, 16.0, 32.0}};
  }
  return {};
}

double tensor_symbol_norm(const SampledField& h1, const SampledField& k, const PhaseExponents& exps,
                          const WindowSpec& window) {
  return modulation_norm(h1, exps.p1, exps.q2, window) * modulation_norm_tilde(k, exps.q1, exps.p2, window);
}

double eta_symbol_norm(const SampledField& h1, const SampledField& h2, const PhaseExponents& exps,
                       const WindowSpec& window) {
  return modulation_norm(h1, exps.p1, exps.q2, window) * modulation_norm(h2, exps.p2, exps.q1, window);
}

WindowSpec eta_matched_window(const std::vector<Axis>& position_axes, const WindowSpec& window) {
  const SampledField w = realize_window(window, position_axes);
  return WindowSpec::explicit_field(symbol_from_eta(w, w).field);
}

double compact_support_norm(const SymbolField& sigma, double p4, double q4) {
  const std::size_t d = sigma.dim();
  const SampledField spectrum = symplectic_fourier(sigma.field);
  ExponentChain chain;
  for (const auto& l : group_labels("t", d)) chain.push_back({l, p4});
  for (const auto& l : group_labels("nu", d)) chain.push_back({l, q4});
  return mixed_norm(spectrum, chain);
}

SlopeReport necessity_growth(NecessityCase c, const ExponentConfig& cfg, const NecessityOptions& options) {
  const AdmissibilityReport report = admissible(cfg);
  const auto failed = report.failed();
  if (failed.size() != 1 || failed.front() != violated_condition(c)) {
    std::string names;
    for (const auto& n : failed) names += (names.empty() ? "" : ", ") + n;
    throw std::invalid_argument("necessity_growth: case '" + to_string(c) + "' needs exactly '" +
                                violated_condition(c) + "' to fail; failing: {" + names + "}");
  }
  const NumericExponents e = NumericExponents::from(cfg);
  const auto x_axes = make_grid(1, options.samples, options.extent).axes({"x"});
  const auto xi_axes = dual_axes(x_axes);
  const double r = options.radius;

  const auto ratio_for = [&](double lambda) {
    SymbolField sigma;
    SampledField f;
    double symbol_norm = 0.0;
    switch (c) {
      case NecessityCase::p4_gt_p1_conj: {
        sigma = sigma_lambda(x_axes, r, lambda);
        f = f_lambda(x_axes, r, lambda);
        symbol_norm = tensor_symbol_norm(bump(x_axes, r), chirp(bump(xi_axes, r), lambda),
                                         e.symbol_exponents());
        break;
      }
      case NecessityCase::q4_gt_q2: {
        const SampledField h = chirp(bump(x_axes, r), lambda);
        const SampledField h2 = bump(xi_axes, r);
        const detail::RootTable roots(options.samples);
        SampledField field(concat_axes(x_axes, xi_axes));
        const std::size_t n = options.samples;
        for (std::size_t j = 0; j < n; ++j) {
          for (std::size_t k = 0; k < n; ++k) field[j * n + k] = std::conj(roots.centered(j, k)) * h[j] * h2[k];
        }
        sigma = make_symbol(std::move(field));
        f = gaussian_lambda(0.5, x_axes);
        symbol_norm = compact_support_norm(sigma, e.p4, e.q4);
        break;
      }
      case NecessityCase::q4_gt_q1_conj: {
        const SampledField h1 = chirp(bump(x_axes, r), lambda);
        const SampledField h2 = inverse_fourier(bump(xi_axes, r), {"x"});
        sigma = symbol_from_eta(h1, h2);
        f = conjugate(h1);
        symbol_norm = eta_symbol_norm(h1, h2, e.symbol_exponents());
        break;
      }
      case NecessityCase::p_sum:
      case NecessityCase::q_sum: {
        const double s = c == NecessityCase::p_sum ? 1.0 / lambda : lambda;
        const SampledField h1 = gaussian_lambda(s, x_axes);
        const SampledField k = gaussian_lambda(1.0 / s, xi_axes);
        sigma = symbol_outer(h1, k);
        f = h1;
        symbol_norm = tensor_symbol_norm(h1, k, e.symbol_exponents());
        break;
      }
      case NecessityCase::p4_gt_p2: {
        const SampledField h1 = gaussian_lambda(0.5, x_axes);
        const SampledField h2 = gaussian_lambda(1.0 / lambda, x_axes);
        sigma = symbol_from_eta(h1, h2);
        f = h1;
        symbol_norm = eta_symbol_norm(h1, h2, e.symbol_exponents());
        break;
      }
    }
    const SampledField tf = apply_kn_fast(sigma, f);
    return modulation_norm(tf, e.p2, e.q2) / (symbol_norm * modulation_norm(f, e.p1, e.q1));
  };

  std::vector<std::pair<double, double>> samples;
  for (double lambda : options.lambdas) samples.emplace_back(lambda, ratio_for(lambda));
  SlopeReport out = scaling_slope(samples);
  out.predicted = predicted_necessity_slope(c, cfg);
  return out;
}

EquivalenceReport verify_compact_support_equiv(const std::vector<SymbolField>& family,
                                               const PhaseExponents& exps, double radius,
                                               double bound) {
  if (family.empty()) throw std::invalid_argument("verify_compact_support_equiv: empty family");
  EquivalenceReport report{std::numeric_limits<double>::infinity(), 0.0, true};
  for (const auto& sigma : family) {
    if (support_radius(sigma.field) > radius) {
      throw std::invalid_argument("verify_compact_support_equiv: symbol not supported in the radius");
    }
    double window_radius = 1.0;
    for (const auto& a : sigma.field.axes()) window_radius = std::min(window_radius, 0.45 * a.extent);
    const WindowSpec window = WindowSpec::explicit_field(bump(sigma.field.axes(), window_radius));
    const double ratio = phase_modulation_norm(sigma.field, exps, window) /
                         compact_support_norm(sigma, exps.p2, exps.q2);
    report.min_ratio = std::min(report.min_ratio, ratio);
    report.max_ratio = std::max(report.max_ratio, ratio);
  }
  report.pass = report.min_ratio > 0.0 && report.max_ratio / report.min_ratio < bound;
  return report;
}

EmbeddingReport verify_embedding(EmbeddingKind kind, const std::vector<SampledField>& family,
                                 const PhaseExponents& smaller, const PhaseExponents& larger,
                                 const WindowSpec& window) {
  const PhaseExponents& e = smaller;
  switch (kind) {
    case EmbeddingKind::phase_below_m:
      if (!(e.p2 <= std::min(e.q1, e.q2))) {
        throw std::invalid_argument("verify_embedding: needs p2 <= min(q1, q2)");
      }
      break;
    case EmbeddingKind::m_below_phase:
      if (!(std::max(e.q1, e.q2) <= e.p2)) {
        throw std::invalid_argument("verify_embedding: needs max(q1, q2) <= p2");
      }
      break;
    case EmbeddingKind::exponent_monotone:
      if (!(larger.p1 >= e.p1 && larger.p2 >= e.p2 && larger.q1 >= e.q1 && larger.q2 >= e.q2)) {
        throw std::invalid_argument("verify_embedding: larger exponents must dominate entrywise");
      }
      break;
  }
  EmbeddingReport report;
  report.min_ratio = std::numeric_limits<double>::infinity();
  for (const auto& field : family) {
    double lhs = 0.0, rhs = 0.0;
    if (kind == EmbeddingKind::exponent_monotone) {
      const auto norms = phase_modulation_norms(field, {larger, smaller}, window);
      lhs = norms[0];
      rhs = norms[1];
    } else {
      const double phase = phase_modulation_norm(field, e, window);
      const double m = phase_m_norm(field, {e.p1, e.q1, e.q2, e.p2}, window);
      lhs = kind == EmbeddingKind::phase_below_m ? phase : m;
      rhs = kind == EmbeddingKind::phase_below_m ? m : phase;
      if (lhs > rhs * (1.0 + 1e-12)) ++report.violations;
    }
    const double ratio = lhs / rhs;
    report.max_ratio = std::max(report.max_ratio, ratio);
    report.min_ratio = std::min(report.min_ratio, ratio);
    ++report.count;
  }
  return report;
}

}  // namespace phasemod
