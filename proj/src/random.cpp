#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "phasemod/analysis.hpp"

namespace phasemod {
namespace {

struct Packet {
  std::vector<double> center;
  std::vector<double> frequency;
  double width = 1.0;
  cplx amplitude{1.0, 0.0};

  cplx operator()(std::span<const double> z) const {
    double r2 = 0.0, phase = 0.0;
    for (std::size_t a = 0; a < z.size(); ++a) {
      const double u = z[a] - center[a];
      r2 += u * u;
      phase += frequency[a] * z[a];
    }
    return amplitude * std::exp(-std::numbers::pi * r2 / (width * width)) *
           std::polar(1.0, 2.0 * std::numbers::pi * phase);
  }
};

Packet draw_packet(std::mt19937_64& rng, std::size_t rank) {
  std::uniform_real_distribution<double> shift(-0.75, 0.75);
  std::uniform_real_distribution<double> freq(-0.5, 0.5);
  std::uniform_real_distribution<double> width(0.8, 1.2);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  Packet p;
  for (std::size_t a = 0; a < rank; ++a) p.center.push_back(shift(rng));
  for (std::size_t a = 0; a < rank; ++a) p.frequency.push_back(freq(rng));
  p.width = width(rng);
  p.amplitude = std::polar(1.0, angle(rng));
  return p;
}

}  // namespace

SampledField random_bandlimited(std::uint64_t seed, const std::vector<Axis>& axes, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("random_bandlimited: fraction must lie in (0, 1]");
  }
  std::vector<Axis> freq_axes;
  std::vector<long long> band;
  double scale = 1.0;
  for (const auto& a : axes) {
    freq_axes.push_back(a.dual(dual_label(a.label)));
    const auto n = static_cast<long long>(a.samples);
    band.push_back(std::min(static_cast<long long>(std::floor(fraction * static_cast<double>(n) / 2.0)),
                            n / 2 - 1));
    scale *= a.extent;
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  SampledField coeffs(freq_axes);
  const auto shape = coeffs.shape();
  std::vector<std::size_t> idx(shape.size());
  for (std::size_t flat = 0; flat < coeffs.size(); ++flat) {
    unravel(flat, shape, idx);
    bool inside = true;
    for (std::size_t a = 0; a < idx.size(); ++a) {
      const long long m = static_cast<long long>(idx[a]) - static_cast<long long>(shape[a] / 2);
      inside = inside && std::llabs(m) <= band[a];
    }
    if (!inside) continue;
    const double re = normal(rng);
    const double im = normal(rng);
    coeffs[flat] = cplx{re, im} * scale;
  }
  std::vector<std::string> labels;
  for (const auto& a : axes) labels.push_back(a.label);
  SampledField out = inverse_fourier(coeffs, labels);
  // Reattach the caller's axes so the result compares equal to other fields on them.
  return SampledField(axes, std::vector<cplx>(out.values().begin(), out.values().end()));
}

std::vector<OperatorInstance> wave_packet_family(std::uint64_t seed, std::size_t count,
                                                 const std::vector<Axis>& position_axes) {
  auto phase_axes = position_axes;
  for (const auto& a : position_axes) phase_axes.push_back(a.dual(dual_label(a.label)));
  const std::size_t d = position_axes.size();
  std::vector<OperatorInstance> family;
  family.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::mt19937_64 rng(seed + i);
    const Packet s1 = draw_packet(rng, 2 * d);
    const Packet s2 = draw_packet(rng, 2 * d);
    const Packet in = draw_packet(rng, d);
    SampledField sigma = sample([&](std::span<const double> z) { return s1(z) + 0.5 * s2(z); }, phase_axes);
    family.push_back({"packet_" + std::to_string(i), make_symbol(std::move(sigma)),
                      sample([&](std::span<const double> z) { return in(z); }, position_axes)});
  }
  return family;
}

}  // namespace phasemod
