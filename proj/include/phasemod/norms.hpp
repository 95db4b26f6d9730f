#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "phasemod/grid.hpp"
#include "phasemod/transforms.hpp"

namespace phasemod {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct ChainStep {
  std::string label;
  double exponent = 2.0;  // in [1, inf]
};

// Reduction order for an iterated norm, innermost step first.
using ExponentChain = std::vector<ChainStep>;

// Nonnegative sampled weight. Axes absent from the weight are broadcast.
struct Weight {
  enum class Kind { unit, polynomial, product, explicit_field };

  struct Moderation {
    std::string majorant;
    double constant = 1.0;
  };

  Kind kind = Kind::unit;
  double s = 0.0;
  std::optional<SampledField> values;
  std::optional<Moderation> moderation;

  static Weight unit();
  static Weight from_field(SampledField values);
  bool is_unit() const { return kind == Kind::unit || !values; }
  // Weight realized on the given axes (broadcast over axes it does not name).
  SampledField expand(const std::vector<Axis>& axes) const;
};

double mixed_norm(const SampledField& field, const ExponentChain& chain,
                  const Weight& weight = Weight::unit());

// L^p norm over all axes jointly.
double lp_norm(const SampledField& f, double p);

// Mixed norm of the STFT with chain ((t, p), (nu, q)).
double modulation_norm(const SampledField& f, double p, double q,
                       const WindowSpec& window = WindowSpec::standard(),
                       const Weight& weight = Weight::unit());
// Frequency variable innermost: chain ((nu, q), (t, p)).
double modulation_norm_tilde(const SampledField& f, double p, double q,
                             const WindowSpec& window = WindowSpec::standard());

struct PhaseExponents {
  double p1 = 2.0, p2 = 2.0, q1 = 2.0, q2 = 2.0;
};

// Phase-space modulation norm, chain ((x,p1),(t,p2),(xi,q1),(nu,q2)) on the symplectic STFT.
// Streams one frequency-shift slab at a time; the window lives on the field's (x, xi) grid.
double phase_modulation_norm(const SampledField& field, const PhaseExponents& exps,
                             const WindowSpec& window = WindowSpec::standard(),
                             const Weight& weight = Weight::unit());
// Several exponent tuples evaluated from a single pass over the transform.
std::vector<double> phase_modulation_norms(const SampledField& field,
                                           const std::vector<PhaseExponents>& exps,
                                           const WindowSpec& window = WindowSpec::standard(),
                                           const Weight& weight = Weight::unit());

struct PhaseMExponents {
  double p1 = 2.0, q1 = 2.0, q2 = 2.0, p2 = 2.0;
};

// Chain ((x,p1),(xi,q1),(nu,q2),(t,p2)) on stft_2d.
double phase_m_norm(const SampledField& field, const PhaseMExponents& exps,
                    const WindowSpec& window = WindowSpec::standard(),
                    const Weight& weight = Weight::unit());

// L^p norm of the inverse Fourier transform.
double fl_norm(const SampledField& f, double p);

// (1 + |xi|^2)^{s/2} on the given frequency axes.
Weight weight_ws(double s, const std::vector<Axis>& frequency_axes);

// w(x,t,xi,nu) = w1(x - t, xi) * w2(x, nu + xi) on axes (x..., t..., xi..., nu...).
// phase_axes are the (x..., xi...) axes both weights are expanded onto.
Weight phase_product_weight(const Weight& w1, const Weight& w2, const std::vector<Axis>& phase_axes);

struct ModerationReport {
  bool pass = true;
  double worst_ratio = 0.0;
  std::size_t violations = 0;
  std::size_t trials = 0;
};

// Samples grid pairs (x, y) with x + y on the grid and tests w(x + y) <= C w(x) v(y).
ModerationReport is_moderate_check(const Weight& w, const Weight& v, const std::vector<Axis>& axes,
                                   double constant, std::size_t trials, std::uint64_t seed);

// L^p norm of the Fourier multiplier (1 + |xi|^2)^{s/2} applied to f.
double sobolev_norm(const SampledField& f, double p, double s);

}  // namespace phasemod
