#pragma once

#include <vector>

#include "phasemod/grid.hpp"
#include "phasemod/operators.hpp"

namespace phasemod {

// e^{-pi lambda |x|^2}
SampledField gaussian_lambda(double lambda, const std::vector<Axis>& axes);
SampledField gaussian_lambda(double lambda, const GridSpec& grid,
                             const std::vector<std::string>& labels);

// Mollifier exp(1 - 1/(1 - |x/r|^2)) on |x| < r, zero elsewhere; peak 1 at the origin.
SampledField bump(const std::vector<Axis>& axes, double radius);

// Largest |x| over grid points where the field is nonzero.
double support_radius(const SampledField& h);

// h(x) e^{-pi i lambda |x|^2}. Refuses lambda * r >= N / (2L) on any axis, r the support radius.
SampledField chirp(const SampledField& h, double lambda);

// sigma(x, xi) = h(x) h_lambda(xi) with h the bump of the given radius on both grids.
SymbolField sigma_lambda(const std::vector<Axis>& position_axes, double radius, double lambda);
// inverse Fourier transform of conj(h_lambda) sampled on the dual grid.
SampledField f_lambda(const std::vector<Axis>& position_axes, double radius, double lambda);

// The dual axes of a position grid with default frequency labels.
std::vector<Axis> dual_axes(const std::vector<Axis>& position_axes);

}  // namespace phasemod
