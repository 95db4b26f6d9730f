#include "phasemod/testfns.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "phasemod/transforms.hpp"

namespace phasemod {

SampledField gaussian_lambda(double lambda, const std::vector<Axis>& axes) {
  if (!(lambda > 0.0)) throw std::invalid_argument("gaussian_lambda: lambda must be positive");
  return sample(
      [lambda](std::span<const double> z) {
        double r2 = 0.0;
        for (double c : z) r2 += c * c;
        return cplx{std::exp(-std::numbers::pi * lambda * r2), 0.0};
      },
      axes);
}

SampledField gaussian_lambda(double lambda, const GridSpec& grid,
                             const std::vector<std::string>& labels) {
  return gaussian_lambda(lambda, grid.axes(labels));
}

SampledField bump(const std::vector<Axis>& axes, double radius) {
  for (const auto& a : axes) {
    if (!(radius > 0.0) || !(radius < a.extent / 2.0)) {
      throw std::invalid_argument("bump: radius must lie in (0, L/2)");
    }
  }
  return sample(
      [radius](std::span<const double> z) {
        double r2 = 0.0;
        for (double c : z) r2 += c * c;
        const double u = r2 / (radius * radius);
        if (u >= 1.0) return cplx{};
        return cplx{std::exp(1.0 - 1.0 / (1.0 - u)), 0.0};
      },
      axes);
}

double support_radius(const SampledField& h) {
  const auto shape = h.shape();
  std::vector<std::size_t> idx(shape.size());
  double r = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (h[i] == cplx{}) continue;
    unravel(i, shape, idx);
    double r2 = 0.0;
    for (std::size_t a = 0; a < idx.size(); ++a) {
      const double c = h.axis(a).coord(idx[a]);
      r2 += c * c;
    }
    r = std::max(r, std::sqrt(r2));
  }
  return r;
}

SampledField chirp(const SampledField& h, double lambda) {
  if (!(lambda >= 1.0)) throw std::invalid_argument("chirp: lambda must be at least 1");
  const double r = support_radius(h);
  for (const auto& a : h.axes()) {
    const double limit = static_cast<double>(a.samples) / (2.0 * a.extent);
    if (lambda * r >= limit) {
      std::ostringstream msg;
      msg << "chirp: lambda * r = " << lambda * r << " reaches the Nyquist limit N/(2L) = " << limit
          << " on axis '" << a.label << "'";
      throw std::invalid_argument(msg.str());
    }
  }
  SampledField out(h.axes());
  const auto shape = h.shape();
  std::vector<std::size_t> idx(shape.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    unravel(i, shape, idx);
    double r2 = 0.0;
    for (std::size_t a = 0; a < idx.size(); ++a) {
      const double c = h.axis(a).coord(idx[a]);
      r2 += c * c;
    }
    out[i] = h[i] * std::polar(1.0, -std::numbers::pi * lambda * r2);
  }
  return out;
}

std::vector<Axis> dual_axes(const std::vector<Axis>& position_axes) {
  std::vector<Axis> out;
  for (const auto& a : position_axes) out.push_back(a.dual(dual_label(a.label)));
  return out;
}

SymbolField sigma_lambda(const std::vector<Axis>& position_axes, double radius, double lambda) {
  const SampledField h = bump(position_axes, radius);
  const SampledField h_lambda = chirp(bump(dual_axes(position_axes), radius), lambda);
  return symbol_outer(h, h_lambda, SymbolField::Provenance::sigma_lambda);
}

SampledField f_lambda(const std::vector<Axis>& position_axes, double radius, double lambda) {
  const SampledField h_lambda = chirp(bump(dual_axes(position_axes), radius), lambda);
  std::vector<std::string> labels;
  for (const auto& a : position_axes) labels.push_back(a.label);
  return inverse_fourier(conjugate(h_lambda), labels);
}

}  // namespace phasemod
