#include "phasemod/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <variant>

#include "phasemod/analysis.hpp"
#include "phasemod/exponent.hpp"
#include "phasemod/norms.hpp"
#include "phasemod/operators.hpp"
#include "phasemod/parallel.hpp"
#include "phasemod/testfns.hpp"
#include "phasemod/transforms.hpp"

#ifndef PHASEMOD_VERSION
#define PHASEMOD_VERSION "0.0.0"
#endif

namespace phasemod::cli {
namespace {

using json = nlohmann::json;
using Cell = std::variant<double, long long, std::string>;

// ---------------------------------------------------------------------------
// Resolved configuration

struct Config {
  std::string experiment;
  std::string case_name;
  std::size_t d = 1;
  std::size_t samples = 64;
  double extent = 8.0;
  std::map<std::string, ExtExponent> exponents;
  std::vector<double> lambdas;
  std::uint64_t seed = 1;
  std::size_t count = 1;
  double radius = 2.0;
  double bandwidth = 0.5;
  std::string window_kind = "standard";
  double window_lambda = 1.0;
  bool normalize = false;
  std::string weight_kind = "unit";
  double weight_s = 0.0;
  std::string output_path;
  std::string format = "csv";
  double tolerance = 1e-6;

  std::string id() const { return experiment + ":" + case_name; }
  const ExtExponent& exp(const std::string& key) const { return exponents.at(key); }
  double value(const std::string& key) const { return exponents.at(key).value(); }

  WindowSpec window() const {
    WindowSpec w = window_kind == "gaussian" ? WindowSpec::gaussian_scaled(window_lambda) : WindowSpec::standard();
    return normalize ? w.normalized() : w;
  }
  std::vector<Axis> axes(const std::vector<std::string>& labels) const {
    return make_grid(d, samples, extent).axes(labels);
  }
  std::vector<Axis> x_axes() const { return axes(group_labels("x", d)); }
  std::vector<Axis> phase_axes() const {
    auto a = x_axes();
    for (const auto& b : dual_axes(a)) a.push_back(b);
    return a;
  }
  std::string grid_label() const {
    return "d=" + std::to_string(d) + " N=" + std::to_string(samples) + " L=" + format_number(extent);
  }

  json to_json() const {
    json e = json::object();
    for (const auto& [k, v] : exponents) e[k] = v.to_string();
    return json{{"experiment", experiment},
                {"case", case_name},
                {"grid", {{"d", d}, {"N", samples}, {"L", extent}}},
                {"exponents", e},
                {"family",
                 {{"lambdas", lambdas}, {"seed", seed}, {"count", count}, {"radius", radius}, {"bandwidth", bandwidth}}},
                {"window", {{"kind", window_kind}, {"lambda", window_lambda}, {"normalize", normalize}}},
                {"weight", {{"kind", weight_kind}, {"s", weight_s}}},
                {"output", {{"path", output_path}, {"format", format}}},
                {"tolerance", tolerance}};
  }
};

// ---------------------------------------------------------------------------
// Reports

struct Row {
  std::vector<Cell> cells;
  std::uint64_t seed = 0;
};

struct Report {
  std::vector<std::string> columns;
  std::vector<Row> rows;
  json summary = json::object();
  bool pass = true;
  std::string failure;

  void add(std::vector<Cell> cells, std::uint64_t seed) { rows.push_back({std::move(cells), seed}); }
  void fail(const std::string& invariant) {
    if (pass) failure = invariant;
    pass = false;
  }
};

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

json cell_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return format_number(*d);
    return *d;
  }
  if (const auto* i = std::get_if<long long>(&c)) return *i;
  return std::get<std::string>(c);
}

std::string render_csv(const Report& report, const Config& cfg) {
  const std::string config = cfg.to_json().dump();
  const std::string window = cfg.window().describe();
  std::ostringstream out;
  std::vector<std::string> header = report.columns;
  for (const char* extra : {"case", "version", "config", "grid", "window", "seed"}) header.emplace_back(extra);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << csv_escape(header[i]);
  out << "\n";
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < row.cells.size(); ++i) out << (i ? "," : "") << csv_escape(cell_text(row.cells[i]));
    out << "," << csv_escape(cfg.id()) << "," << csv_escape(std::string(library_version())) << ","
        << csv_escape(config) << "," << csv_escape(cfg.grid_label()) << "," << csv_escape(window) << ","
        << row.seed << "\n";
  }
  return out.str();
}

std::string render_json(const Report& report, const Config& cfg) {
  json rows = json::array();
  for (const auto& row : report.rows) {
    json r = json::object();
    for (std::size_t i = 0; i < row.cells.size(); ++i) r[report.columns[i]] = cell_json(row.cells[i]);
    r["seed"] = row.seed;
    rows.push_back(std::move(r));
  }
  json doc{{"id", cfg.id()},
           {"version", std::string(library_version())},
           {"config", cfg.to_json()},
           {"provenance", {{"grid", cfg.grid_label()}, {"window", cfg.window().describe()}}},
           {"pass", report.pass},
           {"failure", report.failure},
           {"summary", report.summary},
           {"columns", report.columns},
           {"rows", rows}};
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Shared helpers for runners

double relative_l2(const SampledField& value, const SampledField& reference) {
  return lp_norm(combine(1.0, value, -1.0, reference), 2.0) / lp_norm(reference, 2.0);
}

void check_bound(Report& report, const std::string& what, double value, double bound) {
  if (!(value <= bound)) {
    report.fail(what + " = " + format_number(value) + " exceeds " + format_number(bound));
  }
}

PhaseExponents symbol_exponents(const Config& cfg) {
  return {cfg.value("p3"), cfg.value("p4"), cfg.value("q3"), cfg.value("q4")};
}

PhaseExponents phase_exponents(const Config& cfg, const char* a, const char* b, const char* c, const char* d) {
  return {cfg.value(a), cfg.value(b), cfg.value(c), cfg.value(d)};
}

ExponentConfig exponent_config(const Config& cfg) {
  return {cfg.exp("p1"), cfg.exp("q1"), cfg.exp("p2"), cfg.exp("q2"),
          cfg.exp("p3"), cfg.exp("p4"), cfg.exp("q3"), cfg.exp("q4")};
}

std::string rational_text(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

double window_gaussian_rate(const Config& cfg) { return cfg.window_kind == "gaussian" ? cfg.window_lambda : 0.5; }

// ||e^{-pi a x^2}||_{M^{pq}} with window e^{-pi b x^2}, d = 1.
double gaussian_modulation_norm(double a, double b, double p, double q) {
  const double s = a + b;
  double value = 1.0 / std::sqrt(s);
  if (!std::isinf(p)) value *= std::pow(p * a * b / s, -1.0 / (2.0 * p));
  if (!std::isinf(q)) value *= std::pow(s / q, 1.0 / (2.0 * q));
  return value;
}

std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t stream) {
  return seed * 0x9E3779B97F4A7C15ull + stream;
}

// ---------------------------------------------------------------------------
// Runners

Report run_norm_gaussian(const Config& cfg) {
  Report r;
  r.columns = {"lambda", "computed", "closed_form", "rel_error"};
  const auto axes = cfg.x_axes();
  const double b = window_gaussian_rate(cfg);
  const double p = cfg.value("p"), q = cfg.value("q");
  double worst = 0.0;
  for (double lambda : cfg.lambdas) {
    const double computed = modulation_norm(gaussian_lambda(lambda, axes), p, q, cfg.window());
    double exact = gaussian_modulation_norm(lambda, b, p, q);
    if (cfg.normalize) exact /= std::pow(2.0 * b, -0.25);
    const double err = std::abs(computed - exact) / exact;
    worst = std::max(worst, err);
    r.add({lambda, computed, exact, err}, cfg.seed);
  }
  r.summary = {{"max_rel_error", worst}};
  check_bound(r, "max relative error against the closed-form Gaussian norm", worst, cfg.tolerance);
  return r;
}

Report run_norm_random(const Config& cfg) {
  Report r;
  r.columns = {"index", "norm"};
  const auto axes = cfg.x_axes();
  auto nu_axes = dual_axes(axes);
  const auto labels = group_labels("nu", cfg.d);
  for (std::size_t i = 0; i < nu_axes.size(); ++i) nu_axes[i].label = labels[i];
  const Weight w = cfg.weight_kind == "polynomial" ? weight_ws(cfg.weight_s, nu_axes) : Weight::unit();
  for (std::size_t i = 0; i < cfg.count; ++i) {
    const SampledField f = random_bandlimited(cfg.seed + i, axes, cfg.bandwidth);
    r.add({static_cast<long long>(i), modulation_norm(f, cfg.value("p"), cfg.value("q"), cfg.window(), w)},
          cfg.seed + i);
  }
  return r;
}

Report run_stft_moyal(const Config& cfg) {
  Report r;
  r.columns = {"index", "stft_l2", "product_l2", "rel_error"};
  const auto axes = cfg.x_axes();
  const double wnorm = lp_norm(realize_window(cfg.window(), axes), 2.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < cfg.count; ++i) {
    const SampledField f = random_bandlimited(cfg.seed + i, axes, cfg.bandwidth);
    const double lhs = lp_norm(stft(f, cfg.window()), 2.0);
    const double rhs = lp_norm(f, 2.0) * wnorm;
    const double err = std::abs(lhs - rhs) / rhs;
    worst = std::max(worst, err);
    r.add({static_cast<long long>(i), lhs, rhs, err}, cfg.seed + i);
  }
  r.summary = {{"max_rel_error", worst}};
  check_bound(r, "STFT isometry error", worst, cfg.tolerance);
  return r;
}

Report run_stft_spectrogram(const Config& cfg) {
  Report r;
  r.columns = {"t", "nu", "magnitude"};
  const auto axes = cfg.x_axes();
  const SampledField f = chirp(bump(axes, cfg.radius), cfg.lambdas.front());
  const SampledField v = stft(f, cfg.window());
  const std::size_t n = cfg.samples;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      r.add({v.axis(0).coord(j), v.axis(1).coord(k), std::abs(v[j * n + k])}, cfg.seed);
    }
  }
  return r;
}

Report run_apply_duality(const Config& cfg) {
  Report r;
  r.columns = {"index", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "rel_gap"};
  const auto axes = cfg.x_axes();
  const auto phase = cfg.phase_axes();
  double worst = 0.0;
  for (std::size_t i = 0; i < cfg.count; ++i) {
    const std::uint64_t s = cfg.seed + i;
    const SymbolField sigma = make_symbol(random_bandlimited(s, phase, cfg.bandwidth));
    const SampledField f = random_bandlimited(derived_seed(s, 1), axes, cfg.bandwidth);
    const SampledField g = random_bandlimited(derived_seed(s, 2), axes, cfg.bandwidth);
    const auto [lhs, rhs] = duality_pair(sigma, f, g);
    const double gap = std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs));
    worst = std::max(worst, gap);
    r.add({static_cast<long long>(i), lhs.real(), lhs.imag(), rhs.real(), rhs.imag(), gap}, s);
  }
  r.summary = {{"max_rel_gap", worst}};
  check_bound(r, "Rihaczek duality gap", worst, cfg.tolerance);
  return r;
}

Report run_apply_factorized(const Config& cfg, bool eta) {
  Report r;
  r.columns = {"index", "operator_rel_error", "phase_norm", "factorized_norm", "norm_rel_error"};
  const auto axes = cfg.x_axes();
  const PhaseExponents exps = symbol_exponents(cfg);
  double worst_op = 0.0, worst_norm = 0.0;
  for (std::size_t i = 0; i < cfg.count; ++i) {
    const std::uint64_t s = cfg.seed + i;
    const SampledField h1 = random_bandlimited(s, axes, cfg.bandwidth);
    const SampledField h2 = random_bandlimited(derived_seed(s, 1), axes, cfg.bandwidth);
    const SampledField f = random_bandlimited(derived_seed(s, 2), axes, cfg.bandwidth);
    double op_err = 0.0, direct = 0.0, factored = 0.0;
    if (eta) {
      const SymbolField sigma = symbol_from_eta(h1, h2);
      op_err = relative_l2(apply_kn(sigma, f), convolve(multiply(h1, f), h2));
      direct = phase_modulation_norm(sigma.field, exps, eta_matched_window(axes, cfg.window()));
      factored = eta_symbol_norm(h1, h2, exps, cfg.window());
    } else {
      const SymbolField sigma = symbol_tensor(h1, h2);
      op_err = relative_l2(apply_kn(sigma, f), multiply(h1, convolve(h2, f)));
      direct = phase_modulation_norm(sigma.field, exps, cfg.window());
      factored = tensor_symbol_norm(h1, fourier(h2), exps, cfg.window());
    }
    const double norm_err = std::abs(direct - factored) / factored;
    worst_op = std::max(worst_op, op_err);
    worst_norm = std::max(worst_norm, norm_err);
    r.add({static_cast<long long>(i), op_err, direct, factored, norm_err}, s);
  }
  r.summary = {{"max_operator_rel_error", worst_op}, {"max_norm_rel_error", worst_norm}};
  check_bound(r, "operator identity error", worst_op, cfg.tolerance);
  check_bound(r, "norm factorization error", worst_norm, 1e-5);
  return r;
}

Report run_region_side(const Config& cfg, Side side) {
  Report r;
  r.columns = {"vertex", "u3", "u4", "u3_value", "u4_value"};
  const char* a = side == Side::p ? "p1" : "q1";
  const char* b = side == Side::p ? "p2" : "q2";
  const Region region = region_boundary(cfg.exp(a), cfg.exp(b), side);
  for (std::size_t i = 0; i < region.vertices.size(); ++i) {
    const auto& v = region.vertices[i];
    r.add({static_cast<long long>(i), rational_text(v.u3), rational_text(v.u4),
           boost::rational_cast<double>(v.u3), boost::rational_cast<double>(v.u4)},
          cfg.seed);
  }
  r.summary = {{"shape", to_string(region.shape)},
               {"sum_bound", rational_text(region.constraint.sum_bound)},
               {"u4_lower", rational_text(region.constraint.u4_lower)}};
  return r;
}

Report run_region_admissible(const Config& cfg) {
  Report r;
  r.columns = {"condition", "holds"};
  const AdmissibilityReport a = admissible(exponent_config(cfg));
  for (const auto& c : a.conditions) r.add({c.name, std::string(c.holds ? "true" : "false")}, cfg.seed);
  r.summary = {{"admissible", a.admissible}};
  return r;
}

Report run_region_lp_case(const Config& cfg) {
  Report r;
  r.columns = {"side", "sum_bound", "u4_lower"};
  const LpCase c = lp_case_conditions(cfg.exp("p"), cfg.exp("q"));
  r.add({std::string("p"), rational_text(c.p_side.sum_bound), rational_text(c.p_side.u4_lower)}, cfg.seed);
  r.add({std::string("q"), rational_text(c.q_side.sum_bound), rational_text(c.q_side.u4_lower)}, cfg.seed);
  r.summary = {{"branch", c.tag}};
  return r;
}

Report run_verify_transforms(const Config& cfg) {
  Report r;
  r.columns = {"metric", "value", "bound"};
  const TransformCheck c = check_transforms(cfg.seed, cfg.x_axes(), cfg.bandwidth);
  const double tight = cfg.tolerance / 100.0;
  const std::vector<std::tuple<std::string, double, double>> metrics{
      {"round_trip", c.round_trip, tight},
      {"parseval", c.parseval, cfg.tolerance},
      {"symplectic_involution", c.symplectic_involution, cfg.tolerance},
      {"symplectic_vs_fourier", c.symplectic_vs_fourier, cfg.tolerance}};
  for (const auto& [name, value, bound] : metrics) {
    r.add({name, value, bound}, cfg.seed);
    check_bound(r, name, value, bound);
  }
  return r;
}

std::pair<SampledField, SampledField> packet_pair(const Config& cfg) {
  const auto axes = cfg.x_axes();
  const SampledField f = sample(
      [](std::span<const double> z) {
        return std::exp(-std::numbers::pi * (z[0] - 0.5) * (z[0] - 0.5)) *
               std::polar(1.0, 2.0 * std::numbers::pi * z[0]);
      },
      axes);
  const SampledField g = sample(
      [](std::span<const double> z) { return cplx{std::exp(-2.0 * std::numbers::pi * (z[0] + 0.25) * (z[0] + 0.25))}; },
      axes);
  return {f, g};
}

Report run_verify_identity(const Config& cfg, bool rihaczek_window) {
  Report r;
  r.columns = {"max_rel_error"};
  const auto [f, g] = packet_pair(cfg);
  const double err = rihaczek_window ? verify_rihaczek_window_relation(f, g, cfg.window())
                                     : verify_stft_factorization(f, g, cfg.window());
  r.add({err}, cfg.seed);
  r.summary = {{"max_rel_error", err}};
  check_bound(r, "max relative error", err, cfg.tolerance);
  return r;
}

Report run_verify_compact_support(const Config& cfg) {
  Report r;
  r.columns = {"index", "ratio"};
  const auto phase = cfg.phase_axes();
  const std::vector<Axis> x{phase[0]}, xi{phase[1]};
  const SampledField base = tensor(bump(x, cfg.radius), bump(xi, cfg.radius));
  const double declared = cfg.radius * std::numbers::sqrt2;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t i = 0; i < cfg.count; ++i) {
    const double shift_x = static_cast<double>(i % 3) / phase[0].extent;
    const double shift_xi = static_cast<double>(i % 2) / phase[1].extent;
    const std::vector<double> freq{shift_x, shift_xi};
    const SymbolField sigma = make_symbol(modulate(base, freq));
    const EquivalenceReport e = verify_compact_support_equiv({sigma}, symbol_exponents(cfg), declared, cfg.tolerance);
    lo = std::min(lo, e.min_ratio);
    hi = std::max(hi, e.max_ratio);
    r.add({static_cast<long long>(i), e.max_ratio}, cfg.seed);
  }
  r.summary = {{"min_ratio", lo}, {"max_ratio", hi}, {"bound", cfg.tolerance}};
  check_bound(r, "compact-support ratio spread max/min", hi / lo, cfg.tolerance);
  return r;
}

Report run_verify_embedding(const Config& cfg, EmbeddingKind kind) {
  Report r;
  r.columns = {"index", "ratio"};
  const auto phase = cfg.phase_axes();
  std::vector<SampledField> family;
  for (std::size_t i = 0; i < cfg.count; ++i) family.push_back(random_bandlimited(cfg.seed + i, phase, cfg.bandwidth));
  const PhaseExponents smaller = phase_exponents(cfg, "p1", "p2", "q1", "q2");
  const PhaseExponents larger = kind == EmbeddingKind::exponent_monotone
                                    ? phase_exponents(cfg, "p3", "p4", "q3", "q4")
                                    : PhaseExponents{};
  const EmbeddingReport e = verify_embedding(kind, family, smaller, larger, cfg.window());
  for (std::size_t i = 0; i < family.size(); ++i) {
    const EmbeddingReport one = verify_embedding(kind, {family[i]}, smaller, larger, cfg.window());
    r.add({static_cast<long long>(i), one.max_ratio}, cfg.seed + i);
  }
  r.summary = {{"violations", e.violations}, {"max_ratio", e.max_ratio}, {"min_ratio", e.min_ratio}};
  if (e.violations > 0) r.fail("norm inequality violated on " + std::to_string(e.violations) + " fields");
  if (kind == EmbeddingKind::exponent_monotone) check_bound(r, "monotone ratio", e.max_ratio, cfg.tolerance);
  return r;
}

Report run_verify_moderate(const Config& cfg) {
  Report r;
  r.columns = {"trials", "violations", "worst_ratio"};
  const auto axes = dual_axes(cfg.x_axes());
  const double s = cfg.weight_kind == "polynomial" ? cfg.weight_s : 0.0;
  const Weight w = weight_ws(s, axes);
  const Weight v = weight_ws(std::abs(s), axes);
  const double constant = std::pow(2.0, std::abs(s) / 2.0);
  const ModerationReport m = is_moderate_check(w, v, axes, constant, cfg.count, cfg.seed);
  r.add({static_cast<long long>(m.trials), static_cast<long long>(m.violations), m.worst_ratio}, cfg.seed);
  r.summary = {{"constant", constant}, {"worst_ratio", m.worst_ratio}};
  if (!m.pass) r.fail("moderateness w(x+y) <= C w(x) v(y) violated");
  return r;
}

Report run_sweep_boundedness(const Config& cfg) {
  Report r;
  r.columns = {"id", "N", "output_norm", "symbol_norm", "input_norm", "ratio", "flagged"};
  const NumericExponents exps = NumericExponents::from(exponent_config(cfg));
  std::vector<double> maxima;
  for (std::size_t level = 0; level < 2; ++level) {
    const std::size_t n = cfg.samples << level;
    const double extent = cfg.extent * (level ? std::numbers::sqrt2 : 1.0);
    const auto axes = make_grid(1, n, extent).axes({"x"});
    const auto family = wave_packet_family(cfg.seed, cfg.count, axes);
    const RatioTable table = boundedness_sweep(exps, family, cfg.window());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      const auto& row = table.rows[i];
      r.add({row.id, static_cast<long long>(n), row.output_norm, row.symbol_norm, row.input_norm, row.ratio,
             std::string(row.flagged ? "true" : "false")},
            cfg.seed + i);
    }
    maxima.push_back(table.max_ratio);
  }
  const double change = std::abs(maxima[1] - maxima[0]) / maxima[0];
  r.summary = {{"max_ratio", maxima[0]}, {"max_ratio_refined", maxima[1]}, {"relative_change", change}};
  if (!std::isfinite(maxima[0]) || !std::isfinite(maxima[1])) r.fail("max ratio is not finite");
  check_bound(r, "relative change of the max ratio under refinement", change, cfg.tolerance);
  const bool hilbert_schmidt = std::all_of(cfg.exponents.begin(), cfg.exponents.end(), [](const auto& kv) {
    return kv.second == ExtExponent::from_value(Rational(2));
  });
  if (hilbert_schmidt && cfg.normalize) {
    check_bound(r, "Hilbert-Schmidt ratio", std::max(maxima[0], maxima[1]), 1.0 + 1e-6);
  }
  return r;
}

enum class ScalingLaw { gaussian_decay, gaussian_spread, chirp_spread };

Report run_sweep_scaling(const Config& cfg, ScalingLaw law) {
  Report r;
  r.columns = {"lambda", "norm", "closed_form"};
  const auto axes = cfg.x_axes();
  const double p = cfg.value("p"), q = cfg.value("q");
  const double b = window_gaussian_rate(cfg);
  std::vector<std::pair<double, double>> measured, exact;
  for (double lambda : cfg.lambdas) {
    SampledField f;
    double closed = std::numeric_limits<double>::quiet_NaN();
    switch (law) {
      case ScalingLaw::gaussian_decay:
        f = gaussian_lambda(lambda, axes);
        closed = gaussian_modulation_norm(lambda, b, p, q);
        break;
      case ScalingLaw::gaussian_spread:
        f = gaussian_lambda(1.0 / lambda, axes);
        closed = gaussian_modulation_norm(1.0 / lambda, b, p, q);
        break;
      case ScalingLaw::chirp_spread:
        f = chirp(bump(axes, cfg.radius), lambda);
        break;
    }
    const double value = modulation_norm(f, p, q, cfg.window());
    measured.emplace_back(lambda, value);
    if (std::isfinite(closed)) exact.emplace_back(lambda, closed);
    r.add({lambda, value, closed}, cfg.seed);
  }
  const SlopeReport fit = scaling_slope(measured);
  const double up = 1.0 / p, uq = 1.0 / q;
  const double predicted = law == ScalingLaw::gaussian_decay    ? -(1.0 - uq)
                           : law == ScalingLaw::gaussian_spread ? up
                                                                : uq - 0.5;
  r.summary = {{"slope", fit.slope}, {"predicted", predicted}, {"intercept", fit.intercept},
               {"max_residual", fit.max_residual}};
  if (!exact.empty()) r.summary["closed_form_slope"] = scaling_slope(exact).slope;
  check_bound(r, "|slope - predicted|", std::abs(fit.slope - predicted), cfg.tolerance);
  return r;
}

Report run_necessity(const Config& cfg) {
  Report r;
  r.columns = {"lambda", "ratio"};
  const NecessityCase c = parse_necessity_case(cfg.case_name);
  NecessityOptions options{cfg.samples, cfg.extent, cfg.radius, cfg.lambdas};
  const SlopeReport fit = necessity_growth(c, exponent_config(cfg), options);
  for (std::size_t i = 0; i < fit.lambdas.size(); ++i) r.add({fit.lambdas[i], fit.values[i]}, cfg.seed);
  r.summary = {{"slope", fit.slope}, {"predicted", fit.predicted}, {"max_residual", fit.max_residual}};
  check_bound(r, "|slope - predicted|", std::abs(fit.slope - fit.predicted), cfg.tolerance);
  if (!(fit.slope > 0.0)) r.fail("growth slope is not positive");
  return r;
}

// ---------------------------------------------------------------------------
// Catalog

struct Defaults {
  std::size_t d = 1;
  std::size_t samples = 64;
  double extent = 8.0;
  std::map<std::string, std::string> exponents;
  std::vector<double> lambdas{1.0, 2.0, 4.0, 8.0, 16.0};
  std::size_t count = 1;
  double radius = 2.0;
  bool normalize = false;
  double tolerance = 1e-6;
  std::string weight_kind = "unit";
  double weight_s = 0.0;
  bool allow_2d = false;
};

struct CaseDef {
  CatalogEntry entry;
  Defaults defaults;
  std::function<Report(const Config&)> run;
};

std::map<std::string, std::string> all_exponents(std::initializer_list<const char*> values) {
  static const char* keys[] = {"p1", "q1", "p2", "q2", "p3", "p4", "q3", "q4"};
  std::map<std::string, std::string> out;
  std::size_t i = 0;
  for (const char* v : values) out[keys[i++]] = v;
  return out;
}

const std::vector<CaseDef>& case_table() {
  static const std::vector<CaseDef> table = [] {
    std::vector<CaseDef> t;
    const auto add = [&t](std::string id, std::string description, std::string anchor, Defaults defaults,
                          std::function<Report(const Config&)> run) {
      t.push_back({{std::move(id), std::move(description), std::move(anchor)}, std::move(defaults), std::move(run)});
    };
    const std::map<std::string, std::string> pq{{"p", "2"}, {"q", "4"}};

    add("norm:gaussian", "Modulation norm of e^{-pi lambda x^2} against its closed form",
        "$\\|\\varphi_\\lambda\\|_{M^{pq}}$",
        {.samples = 1024, .extent = 16.0, .exponents = pq, .lambdas = {0.5, 1.0, 2.0, 4.0}, .tolerance = 1e-6,
         .allow_2d = false},
        run_norm_gaussian);
    add("norm:random", "Weighted modulation norms of seeded band-limited signals", "$\\|f\\|_{M^{pq}_{w}}$",
        {.samples = 128, .extent = 8.0, .exponents = pq, .count = 4, .weight_kind = "unit"}, run_norm_random);
    add("stft:moyal", "STFT isometry ||V f|| = ||f|| ||window|| on seeded signals", "$V_\\varphi f$",
        {.samples = 128, .extent = 8.0, .exponents = {}, .count = 4, .tolerance = 1e-10}, run_stft_moyal);
    add("stft:spectrogram", "Spectrogram of a chirp h_lambda, emitted as plot data",
        "$h_\\lambda(x)=h(x)e^{-\\pi i\\lambda|x|^2}$",
        {.samples = 128, .extent = 8.0, .exponents = {}, .lambdas = {2.0}, .radius = 2.0}, run_stft_spectrogram);
    add("apply:duality", "Rihaczek duality gap over seeded (sigma, f, g) triples",
        "$(T_\\sigma f,g)=(\\sigma,\\overline{R(f,g)})$",
        {.samples = 64, .extent = 8.0, .exponents = {}, .count = 20, .tolerance = 1e-8}, run_apply_duality);
    add("apply:eta", "Eta-symbol operator identity and norm factorization", "$T_\\sigma f=(h_1f)*h_2$",
        {.samples = 32, .extent = std::sqrt(32.0),
         .exponents = {{"p3", "3/2"}, {"p4", "3"}, {"q3", "4"}, {"q4", "6/5"}}, .count = 3, .tolerance = 1e-8},
        [](const Config& c) { return run_apply_factorized(c, true); });
    add("apply:tensor", "Tensor-symbol operator identity and norm factorization", "$T_\\sigma f=h_1\\cdot(h_2*f)$",
        {.samples = 32, .extent = std::sqrt(32.0),
         .exponents = {{"p3", "3/2"}, {"p4", "3"}, {"q3", "4"}, {"q4", "6/5"}}, .count = 3, .tolerance = 1e-8},
        [](const Config& c) { return run_apply_factorized(c, false); });
    add("region:p", "Admissible (1/p3, 1/p4) polygon for a domain/range pair",
        "$\\frac{1}{p'_1}+\\frac{1}{p_2}\\leq\\frac{1}{p_3}+\\frac{1}{p_4}$",
        {.exponents = {{"p1", "2"}, {"p2", "2"}}}, [](const Config& c) { return run_region_side(c, Side::p); });
    add("region:q", "Admissible (1/q3, 1/q4) polygon for a domain/range pair", "$q_4\\leq\\min\\{q'_1,q_2\\}$",
        {.exponents = {{"q1", "2"}, {"q2", "2"}}}, [](const Config& c) { return run_region_side(c, Side::q); });
    add("region:admissible", "Per-condition admissibility of an exponent configuration",
        "$p_4\\leq\\min\\{p'_1,p_2\\}$", {.exponents = all_exponents({"2", "2", "2", "2", "2", "2", "2", "2"})},
        run_region_admissible);
    add("region:lp_case", "Symbol conditions for boundedness from L^p to L^q",
        "if $1\\leq p\\leq 2\\leq q$", {.exponents = {{"p", "1"}, {"q", "4"}}}, run_region_lp_case);
    add("verify:transforms", "Fourier round trip, Parseval and symplectic Fourier identities",
        "$\\widetilde{F}(t,\\nu)=\\widehat F(\\nu,-t)$",
        {.samples = 64, .extent = 8.0, .exponents = {}, .tolerance = 1e-10, .allow_2d = true}, run_verify_transforms);
    add("verify:stft_factorization", "STFT of the sheared tensor product against the product of STFTs",
        "$\\overline{V_\\varphi f(x-t,\\xi)}\\,V_\\varphi g(x,\\nu+\\xi)$",
        {.samples = 32, .extent = 8.0, .exponents = {}, .tolerance = 1e-6}, [](const Config& c) { return run_verify_identity(c, false); });
    add("verify:rihaczek_window", "Rihaczek-window STFT against the phase-twisted sheared product",
        "$e^{-2\\pi i\\xi t}$", {.samples = 32, .extent = 8.0, .exponents = {}, .tolerance = 1e-6},
        [](const Config& c) { return run_verify_identity(c, true); });
    add("verify:compact_support", "Phase-space norm against the Fourier-Lebesgue norm on a fixed support",
        "$\\|\\sigma\\|_{{\\widetilde{M}}^{p_3 p_4 q_3 q_4}}\\asymp\\|\\sigma\\|_{{\\cal F}\\widetilde{L}^{q_4 p_4}}$",
        {.samples = 32, .extent = std::sqrt(32.0), .exponents = all_exponents({"2", "2", "2", "2", "2", "2", "2", "2"}),
         .count = 6, .radius = 1.25, .tolerance = 50.0},
        run_verify_compact_support);
    add("verify:embedding_phase_below_m", "Phase-space norm bounded by the reordered norm when p2 <= min(q1, q2)",
        "If $p_2\\leq\\min\\{q_1,q_2\\}$",
        {.samples = 16, .extent = 4.0, .exponents = {{"p1", "2"}, {"p2", "1"}, {"q1", "2"}, {"q2", "2"}}, .count = 100,
         .tolerance = 1e-12},
        [](const Config& c) { return run_verify_embedding(c, EmbeddingKind::phase_below_m); });
    add("verify:embedding_m_below_phase", "Reordered norm bounded by the phase-space norm when max(q1, q2) <= p2",
        "$\\max\\{q_1,q_2\\}\\leq p_2$",
        {.samples = 16, .extent = 4.0, .exponents = {{"p1", "2"}, {"p2", "inf"}, {"q1", "2"}, {"q2", "2"}},
         .count = 100, .tolerance = 1e-12},
        [](const Config& c) { return run_verify_embedding(c, EmbeddingKind::m_below_phase); });
    add("verify:exponent_monotone", "Ratio of phase-space norms for entrywise larger exponents (p3..q4 larger)",
        "$p_1\\leq \\widetilde{p}_1$",
        {.samples = 16, .extent = 4.0, .exponents = all_exponents({"1", "1", "1", "1", "2", "2", "2", "2"}),
         .count = 20, .tolerance = 1.0},
        [](const Config& c) { return run_verify_embedding(c, EmbeddingKind::exponent_monotone); });
    add("verify:moderate_weight", "Moderateness of the Sobolev weight (1 + |xi|^2)^{s/2}", "$w(x+y)\\leq C\\,w(x)v(y)$",
        {.samples = 64, .extent = 8.0, .exponents = {}, .count = 2000, .weight_kind = "polynomial", .weight_s = 2.0},
        run_verify_moderate);
    add("sweep:boundedness", "Ratio table for seeded wave packets at N and 2N",
        "$\\|T_{\\sigma}\\|_{\\mathcal{L}(M^{p_1q_1}, M^{p_2 q_2})}\\leq C\\, \\|\\sigma\\|_{{\\widetilde{M}}^{p_3 p_4 q_3 q_4}}$",
        {.samples = 32, .extent = std::sqrt(32.0), .exponents = all_exponents({"2", "2", "2", "2", "2", "2", "2", "2"}),
         .count = 50, .normalize = true, .tolerance = 0.15},
        run_sweep_boundedness);
    add("sweep:gaussian_decay", "Slope of ||phi_lambda||_{M^{pq}} in lambda", "$\\asymp \\lambda^{-d/q'}$",
        {.samples = 2048, .extent = 32.0, .exponents = pq, .tolerance = 0.05},
        [](const Config& c) { return run_sweep_scaling(c, ScalingLaw::gaussian_decay); });
    add("sweep:gaussian_spread", "Slope of ||phi_{1/lambda}||_{M^{pq}} in lambda", "$\\asymp \\lambda^{d/p}$",
        {.samples = 2048, .extent = 32.0, .exponents = pq, .tolerance = 0.05},
        [](const Config& c) { return run_sweep_scaling(c, ScalingLaw::gaussian_spread); });
    add("sweep:chirp_spread", "Slope of ||h_lambda||_{M^{pq}} in lambda", "$\\asymp\\lambda^{d/q-d/2}$",
        {.samples = 2048, .extent = 16.0, .exponents = pq, .radius = 2.0, .tolerance = 0.05},
        [](const Config& c) { return run_sweep_scaling(c, ScalingLaw::chirp_spread); });

    struct NecessityDefault {
      const char* name;
      const char* description;
      const char* anchor;
      std::initializer_list<const char*> exps;
    };
    const NecessityDefault necessity[] = {
        {"p4", "Growth along the chirp family when p4 > p1'", "$\\lambda^{(d/p_4)+(d/p_1)-d}$",
         {"2", "2", "4", "2", "1", "4", "2", "2"}},
        {"q4", "Growth along the eta chirp family when q4 > q1'", "$\\lambda^{(d/q_4)+(d/q_1)-d}$",
         {"2", "2", "2", "4", "2", "2", "1", "4"}},
        {"p_sum", "Growth along the Gaussian family when the p-sum condition fails",
         "$\\lambda^{d/p_3-d/p'_4-d/p'_1+d/p'_2}\\geq 1$", {"2", "2", "2", "2", "inf", "2", "2", "2"}},
        {"q_sum", "Growth along the Gaussian family when the q-sum condition fails",
         "$\\lambda^{d/q_3-d/q'_4-d/q'_1+d/q'_2}\\geq 1$", {"2", "2", "2", "2", "2", "2", "inf", "2"}},
        {"p4_p2", "Growth along the eta Gaussian family when p4 > p2", "$\\lambda^{(d/p_2)-(d/p_4)}$",
         {"1", "2", "1", "2", "1", "inf", "2", "2"}},
        {"q4_q2", "Growth along the chirp family when q4 > q2", "$\\lambda^{(d/q_4)-(d/q_2)}\\geq C$",
         {"2", "1", "2", "2", "2", "2", "2", "4"}},
    };
    for (const auto& n : necessity) {
      const NecessityOptions o = default_necessity_options(parse_necessity_case(n.name));
      std::map<std::string, std::string> exps;
      static const char* keys[] = {"p1", "q1", "p2", "q2", "p3", "p4", "q3", "q4"};
      std::size_t i = 0;
      for (const char* v : n.exps) exps[keys[i++]] = v;
      add(std::string("necessity:") + n.name, n.description, n.anchor,
          {.samples = o.samples, .extent = o.extent, .exponents = exps, .lambdas = o.lambdas, .radius = o.radius,
           .tolerance = 0.1},
          run_necessity);
    }
    return t;
  }();
  return table;
}

const CaseDef& find_case(const std::string& id) {
  for (const auto& c : case_table()) {
    if (c.entry.id == id) return c;
  }
  std::string known;
  for (const auto& c : case_table()) known += (known.empty() ? "" : ", ") + c.entry.id;
  throw ConfigError("unknown experiment '" + id + "'; known: " + known);
}

// ---------------------------------------------------------------------------
// Schema validation

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw ConfigError("unknown key '" + where + key + "'");
    }
  }
}

const json& require_object(const json& j, const std::string& name) {
  if (!j.is_object()) throw ConfigError("'" + name + "' must be an object");
  return j;
}

double require_number(const json& j, const std::string& name) {
  if (!j.is_number()) throw ConfigError("'" + name + "' must be a number");
  return j.get<double>();
}

double require_positive(const json& j, const std::string& name) {
  const double v = require_number(j, name);
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("'" + name + "' must be positive and finite");
  return v;
}

std::uint64_t require_count(const json& j, const std::string& name, bool allow_zero) {
  if (!j.is_number_integer()) throw ConfigError("'" + name + "' must be an integer");
  const auto v = j.get<long long>();
  if (v < 0 || (!allow_zero && v == 0)) {
    throw ConfigError("'" + name + "' must be " + (allow_zero ? "non-negative" : "positive"));
  }
  return static_cast<std::uint64_t>(v);
}

std::string require_string(const json& j, const std::string& name) {
  if (!j.is_string()) throw ConfigError("'" + name + "' must be a string");
  return j.get<std::string>();
}

std::string require_choice(const json& j, const std::string& name, std::initializer_list<const char*> choices) {
  const std::string v = require_string(j, name);
  if (std::none_of(choices.begin(), choices.end(), [&](const char* c) { return v == c; })) {
    std::string list;
    for (const char* c : choices) list += (list.empty() ? "" : ", ") + std::string(c);
    throw ConfigError("'" + name + "' must be one of {" + list + "} (got '" + v + "')");
  }
  return v;
}

ExtExponent parse_exponent(const json& j, const std::string& name) {
  try {
    if (j.is_string()) return ExtExponent::parse(j.get<std::string>());
    if (j.is_number()) return ExtExponent::from_double(j.get<double>());
  } catch (const std::invalid_argument& e) {
    throw ConfigError("'" + name + "': " + e.what());
  }
  throw ConfigError("'" + name + "' must be a number or a string such as \"4/3\" or \"inf\"");
}

Config resolve(const json& doc) {
  require_object(doc, "config");
  reject_unknown(doc, "", {"experiment", "case", "grid", "exponents", "family", "window", "weight", "output", "tolerance"});
  if (!doc.contains("experiment")) throw ConfigError("missing required key 'experiment'");
  if (!doc.contains("case")) throw ConfigError("missing required key 'case'");
  Config cfg;
  cfg.experiment = require_choice(doc["experiment"], "experiment",
                                  {"norm", "stft", "apply", "region", "verify", "sweep", "necessity"});
  cfg.case_name = require_string(doc["case"], "case");
  const CaseDef& def = find_case(cfg.id());
  const Defaults& dd = def.defaults;

  cfg.d = dd.d;
  cfg.samples = dd.samples;
  cfg.extent = dd.extent;
  cfg.lambdas = dd.lambdas;
  cfg.count = dd.count;
  cfg.radius = dd.radius;
  cfg.normalize = dd.normalize;
  cfg.tolerance = dd.tolerance;
  cfg.weight_kind = dd.weight_kind;
  cfg.weight_s = dd.weight_s;
  cfg.output_path = def.entry.id;
  std::replace(cfg.output_path.begin(), cfg.output_path.end(), ':', '_');
  for (const auto& [k, v] : dd.exponents) cfg.exponents[k] = ExtExponent::parse(v);

  if (doc.contains("grid")) {
    const json& g = require_object(doc["grid"], "grid");
    reject_unknown(g, "grid.", {"d", "N", "L"});
    if (g.contains("d")) {
      cfg.d = require_count(g["d"], "grid.d", false);
      if (cfg.d > (dd.allow_2d ? 2u : 1u)) {
        throw ConfigError("'grid.d' = " + std::to_string(cfg.d) + " is not supported by " + cfg.id());
      }
    }
    if (g.contains("N")) {
      cfg.samples = require_count(g["N"], "grid.N", false);
      if (cfg.samples % 2 != 0 || cfg.samples < 4) {
        throw ConfigError("'grid.N' must be an even integer >= 4 (got " + std::to_string(cfg.samples) + ")");
      }
    }
    if (g.contains("L")) cfg.extent = require_positive(g["L"], "grid.L");
  }
  if (doc.contains("exponents")) {
    const json& e = require_object(doc["exponents"], "exponents");
    for (const auto& [key, value] : e.items()) {
      if (!dd.exponents.contains(key)) {
        std::string used;
        for (const auto& [k, v] : dd.exponents) used += (used.empty() ? "" : ", ") + k;
        throw ConfigError("unknown key 'exponents." + key + "' for " + cfg.id() + " (uses: " +
                          (used.empty() ? std::string("none") : used) + ")");
      }
      cfg.exponents[key] = parse_exponent(value, "exponents." + key);
    }
  }
  if (doc.contains("family")) {
    const json& f = require_object(doc["family"], "family");
    reject_unknown(f, "family.", {"lambdas", "seed", "count", "radius", "bandwidth"});
    if (f.contains("lambdas")) {
      if (!f["lambdas"].is_array() || f["lambdas"].empty()) {
        throw ConfigError("'family.lambdas' must be a non-empty array");
      }
      cfg.lambdas.clear();
      for (const auto& v : f["lambdas"]) cfg.lambdas.push_back(require_positive(v, "family.lambdas[]"));
      for (std::size_t i = 1; i < cfg.lambdas.size(); ++i) {
        if (!(cfg.lambdas[i] > cfg.lambdas[i - 1])) throw ConfigError("'family.lambdas' must be strictly increasing");
      }
    }
    if (f.contains("seed")) cfg.seed = require_count(f["seed"], "family.seed", true);
    if (f.contains("count")) cfg.count = require_count(f["count"], "family.count", false);
    if (f.contains("radius")) cfg.radius = require_positive(f["radius"], "family.radius");
    if (f.contains("bandwidth")) {
      cfg.bandwidth = require_positive(f["bandwidth"], "family.bandwidth");
      if (cfg.bandwidth > 1.0) throw ConfigError("'family.bandwidth' must lie in (0, 1]");
    }
  }
  if (doc.contains("window")) {
    const json& w = require_object(doc["window"], "window");
    reject_unknown(w, "window.", {"kind", "lambda", "normalize"});
    if (w.contains("kind")) cfg.window_kind = require_choice(w["kind"], "window.kind", {"standard", "gaussian"});
    if (w.contains("lambda")) cfg.window_lambda = require_positive(w["lambda"], "window.lambda");
    if (w.contains("normalize")) {
      if (!w["normalize"].is_boolean()) throw ConfigError("'window.normalize' must be a boolean");
      cfg.normalize = w["normalize"].get<bool>();
    }
  }
  if (doc.contains("weight")) {
    const json& w = require_object(doc["weight"], "weight");
    reject_unknown(w, "weight.", {"kind", "s"});
    if (w.contains("kind")) cfg.weight_kind = require_choice(w["kind"], "weight.kind", {"unit", "polynomial"});
    if (w.contains("s")) cfg.weight_s = require_number(w["s"], "weight.s");
    const bool uses_weight = cfg.id() == "norm:random" || cfg.id() == "verify:moderate_weight";
    if (cfg.weight_kind != "unit" && !uses_weight) {
      throw ConfigError("'weight' other than unit is not supported by " + cfg.id());
    }
  }
  if (doc.contains("output")) {
    const json& o = require_object(doc["output"], "output");
    reject_unknown(o, "output.", {"path", "format"});
    if (o.contains("path")) {
      cfg.output_path = require_string(o["path"], "output.path");
      if (cfg.output_path.empty()) throw ConfigError("'output.path' must not be empty");
    }
    if (o.contains("format")) cfg.format = require_choice(o["format"], "output.format", {"csv", "json"});
  }
  if (doc.contains("tolerance")) cfg.tolerance = require_positive(doc["tolerance"], "tolerance");
  return cfg;
}

std::filesystem::path report_path(const Config& cfg, const RunOptions& options) {
  std::filesystem::path p = options.out_dir / cfg.output_path;
  p.replace_extension(cfg.format);
  return p;
}

RunResult execute(const json& doc, const RunOptions& options) {
  RunResult result;
  Config cfg;
  try {
    cfg = resolve(doc);
    if (options.format) {
      if (*options.format != "csv" && *options.format != "json") {
        throw ConfigError("--format must be csv or json (got '" + *options.format + "')");
      }
      cfg.format = *options.format;
    }
  } catch (const std::exception& e) {
    return {kExitUsage, std::string("config error: ") + e.what(), {}, {}};
  }
  result.resolved_config = cfg.to_json().dump();
  if (options.check_only) return result;
  if (options.threads) set_thread_count(*options.threads);

  Report report;
  try {
    report = find_case(cfg.id()).run(cfg);
  } catch (const std::invalid_argument& e) {
    return {kExitUsage, std::string("invalid configuration for ") + cfg.id() + ": " + e.what(), {},
            result.resolved_config};
  }
  result.report = report_path(cfg, options);
  std::error_code ec;
  if (result.report.has_parent_path()) std::filesystem::create_directories(result.report.parent_path(), ec);
  std::ofstream out(result.report, std::ios::binary);
  if (!out) return {kExitUsage, "cannot write report '" + result.report.string() + "'", {}, result.resolved_config};
  out << (cfg.format == "json" ? render_json(report, cfg) : render_csv(report, cfg));
  if (!report.pass) {
    result.exit_code = kExitFailure;
    result.message = cfg.id() + ": " + report.failure;
  } else {
    result.message = cfg.id() + ": pass";
  }
  return result;
}

}  // namespace

std::string_view library_version() { return PHASEMOD_VERSION; }

const std::vector<CatalogEntry>& list_experiments() {
  static const std::vector<CatalogEntry> entries = [] {
    std::vector<CatalogEntry> out;
    for (const auto& c : case_table()) out.push_back(c.entry);
    return out;
  }();
  return entries;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";
  char buf[512];
  const auto fmt = std::abs(value) < 1e-3 ? std::chars_format::scientific : std::chars_format::fixed;
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, fmt);
  return std::string(buf, res.ptr);
}

RunResult run_config_text(std::string_view json_text, const RunOptions& options) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    return {kExitUsage, std::string("config error: malformed JSON: ") + e.what(), {}, {}};
  }
  return execute(doc, options);
}

RunResult run_config_file(const std::filesystem::path& path, const RunOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {kExitUsage, "config error: cannot read '" + path.string() + "'", {}, {}};
  std::ostringstream text;
  text << in.rdbuf();
  return run_config_text(text.str(), options);
}

int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Time-frequency experiments for Kohn-Nirenberg operators on modulation spaces", "phasemod"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(library_version()));

  std::string config_path;
  std::string out_dir = ".";
  std::string format;
  unsigned threads = 0;
  bool check_only = false;
  auto* run = app.add_subcommand("run", "Run one experiment configuration");
  run->add_option("config", config_path, "JSON configuration file")->required();
  run->add_option("--out", out_dir, "Directory for the report");
  run->add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "json"}));
  run->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  run->add_flag("--check", check_only, "Validate and print the resolved configuration only");
  auto* list = app.add_subcommand("list", "Print the experiment catalog");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kExitPass : kExitUsage;
  }

  if (list->parsed()) {
    for (const auto& entry : list_experiments()) {
      out << entry.id << "\t" << entry.description << "\t" << entry.anchor << "\n";
    }
    return kExitPass;
  }

  RunOptions options;
  options.out_dir = out_dir;
  if (!format.empty()) options.format = format;
  if (threads > 0) options.threads = threads;
  options.check_only = check_only;
  const RunResult r = run_config_file(config_path, options);
  if (check_only && r.exit_code == kExitPass) {
    out << r.resolved_config << "\n";
    return kExitPass;
  }
  if (r.exit_code == kExitPass) {
    out << r.message << " -> " << r.report.string() << "\n";
  } else {
    err << r.message << "\n";
  }
  return r.exit_code;
}

}  // namespace phasemod::cli
