#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "phasemod/exponent.hpp"
#include "phasemod/grid.hpp"
#include "phasemod/norms.hpp"
#include "phasemod/operators.hpp"
#include "phasemod/transforms.hpp"

namespace phasemod {

// Trigonometric polynomial with i.i.d. complex normal coefficients on |m| <= band per axis,
// band = min(floor(fraction * N / 2), N / 2 - 1). Same seed, same field.
SampledField random_bandlimited(std::uint64_t seed, const std::vector<Axis>& axes, double fraction);

struct TransformCheck {
  double round_trip = 0.0;           // max |F^{-1} F f - f| / max |f|
  double parseval = 0.0;             // | ||F f||^2 - ||f||^2 | / ||f||^2
  double symplectic_involution = 0.0;  // max |F~ F~ F - F| / max |F|
  double symplectic_vs_fourier = 0.0;  // max |F~(t, nu) - F^(nu, -t)| / max |F^|
};

// Transform identities on a seeded band-limited phase-space field over (x..., xi...).
TransformCheck check_transforms(std::uint64_t seed, const std::vector<Axis>& position_axes,
                                double fraction = 0.5);

struct SlopeReport {
  std::vector<double> lambdas;
  std::vector<double> values;
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;  // in log space
  double predicted = 0.0;
};

// Least-squares fit of log(value) against log(lambda); needs three or more strictly increasing lambdas.
SlopeReport scaling_slope(const std::vector<std::pair<double, double>>& samples);

// Relative max error between the STFT of the sheared tensor product conj(f) x g and
// conj(V f(x - t, xi)) V g(x, nu + xi). The window must be real.
double verify_stft_factorization(const SampledField& f, const SampledField& g, const WindowSpec& window);
// Relative max error of the Rihaczek-window STFT against the phase-shifted, reflected
// factorization above. The window must be real and even.
double verify_rihaczek_window_relation(const SampledField& f, const SampledField& g,
                                       const WindowSpec& window);

// Numeric exponents for a boundedness check, in the roles of ExponentConfig.
struct NumericExponents {
  double p1 = 2, q1 = 2, p2 = 2, q2 = 2, p3 = 2, p4 = 2, q3 = 2, q4 = 2;
  static NumericExponents from(const ExponentConfig& cfg);
  PhaseExponents symbol_exponents() const { return {p3, p4, q3, q4}; }
};

struct OperatorInstance {
  std::string id;
  SymbolField sigma;
  SampledField f;
};

// Seeded smooth wave-packet symbols and inputs; instance i depends only on seed + i.
std::vector<OperatorInstance> wave_packet_family(std::uint64_t seed, std::size_t count,
                                                 const std::vector<Axis>& position_axes);

struct RatioRow {
  std::string id;
  double output_norm = 0.0;
  double symbol_norm = 0.0;
  double input_norm = 0.0;
  double ratio = 0.0;
  bool flagged = false;  // zero symbol or input norm; excluded from max_ratio
};

struct RatioTable {
  std::vector<RatioRow> rows;
  double max_ratio = 0.0;
  std::size_t flagged = 0;
};

// ||T f||_{M^{p2 q2}} / (||sigma|| ||f||_{M^{p1 q1}}) for each instance and every exponent tuple.
// Result[c] is the table for exps[c]; the phase-space transform is computed once per instance.
std::vector<RatioTable> boundedness_sweep(const std::vector<NumericExponents>& exps,
                                          const std::vector<OperatorInstance>& family,
                                          const WindowSpec& window);
RatioTable boundedness_sweep(const NumericExponents& exps, const std::vector<OperatorInstance>& family,
                             const WindowSpec& window);

enum class NecessityCase { p4_gt_p1_conj, q4_gt_q1_conj, p_sum, q_sum, p4_gt_p2, q4_gt_q2 };

std::string to_string(NecessityCase c);
NecessityCase parse_necessity_case(std::string_view name);
// Condition of the admissibility report that the case violates.
std::string violated_condition(NecessityCase c);
// Growth rate of the ratio in lambda predicted for d = 1.
double predicted_necessity_slope(NecessityCase c, const ExponentConfig& cfg);

struct NecessityOptions {
  std::size_t samples = 1024;
  double extent = 16.0;
  double radius = 2.0;
  std::vector<double> lambdas;
};

// Grid defaults that keep each family resolved for the lambdas used in the checks.
NecessityOptions default_necessity_options(NecessityCase c);

// Ratio ||T f|| / (||sigma|| ||f||) along the extremal family for the case. The configuration
// must violate exactly the targeted condition.
SlopeReport necessity_growth(NecessityCase c, const ExponentConfig& cfg, const NecessityOptions& options);

// Phase-space norm (exponents in the symbol roles p3, p4, q3, q4) of h1(x) k(xi), k on the dual
// grid: ||h1||_{M^{p3 q4}} ||k||_{M~^{q3 p4}}. Exact for the product window w(x) w(xi).
double tensor_symbol_norm(const SampledField& h1, const SampledField& k, const PhaseExponents& exps,
                          const WindowSpec& window = WindowSpec::standard());
// Phase-space norm of symbol_from_eta(h1, h2): ||h1||_{M^{p3 q4}} ||h2||_{M^{p4 q3}}.
// Exact for the phase-space window eta_matched_window(w).
double eta_symbol_norm(const SampledField& h1, const SampledField& h2, const PhaseExponents& exps,
                       const WindowSpec& window = WindowSpec::standard());
// symbol_from_eta(w, w) for w realized on the position grid.
WindowSpec eta_matched_window(const std::vector<Axis>& position_axes, const WindowSpec& window);

// Norm of sigma on a fixed compact support: ||F~ sigma|| with the chain (t: p4 inner, nu: q4 outer).
double compact_support_norm(const SymbolField& sigma, double p4, double q4);

struct EquivalenceReport {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  bool pass = false;  // max_ratio / min_ratio below the bound
};

// Ratio of the phase-space modulation norm with a compactly supported window to the
// Fourier-Lebesgue norm, for symbols vanishing outside |(x, xi)| <= radius.
EquivalenceReport verify_compact_support_equiv(const std::vector<SymbolField>& family,
                                               const PhaseExponents& exps, double radius,
                                               double bound = 50.0);

enum class EmbeddingKind { phase_below_m, m_below_phase, exponent_monotone };

struct EmbeddingReport {
  std::size_t count = 0;
  std::size_t violations = 0;
  double max_ratio = 0.0;  // largest lhs / rhs
  double min_ratio = 0.0;
};

// phase_below_m (p2 <= min(q1, q2)): phase_modulation_norm <= phase_m_norm for `smaller`.
// m_below_phase (max(q1, q2) <= p2): the reverse inequality.
// exponent_monotone: ratio ||F||_{larger} / ||F||_{smaller}, larger >= smaller entrywise.
EmbeddingReport verify_embedding(EmbeddingKind kind, const std::vector<SampledField>& family,
                                 const PhaseExponents& smaller,
                                 const PhaseExponents& larger = {},
                                 const WindowSpec& window = WindowSpec::standard());

}  // namespace phasemod
