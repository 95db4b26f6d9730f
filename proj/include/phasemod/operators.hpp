#pragma once

#include <string>
#include <utility>

#include "phasemod/grid.hpp"

namespace phasemod {

// Kohn-Nirenberg symbol on (x..., xi...) with the xi grid dual to the x grid.
struct SymbolField {
  enum class Provenance { direct, tensor, eta, sigma_lambda };

  SampledField field;
  Provenance provenance = Provenance::direct;

  std::size_t dim() const { return field.rank() / 2; }
};

std::string to_string(SymbolField::Provenance provenance);

// Validates the phase-space layout and wraps the field.
SymbolField make_symbol(SampledField field,
                        SymbolField::Provenance provenance = SymbolField::Provenance::direct);

// T f(x) = integral sigma(x, xi) fhat(xi) e^{2 pi i x xi} dxi by direct summation.
SampledField apply_kn(const SymbolField& sigma, const SampledField& f);
// Same operator through one inverse FFT per output row.
SampledField apply_kn_fast(const SymbolField& sigma, const SampledField& f);

// R(f, g)(x, xi) = e^{2 pi i x xi} fhat(xi) conj(g(x)).
SampledField rihaczek(const SampledField& f, const SampledField& g);

// Both sides of (T f, g) = (sigma, conj R(f, g)); the pairing is antilinear in its second slot.
std::pair<cplx, cplx> duality_pair(const SymbolField& sigma, const SampledField& f,
                                   const SampledField& g);

// Periodic convolution with Riemann weight, computed through the Fourier transform.
SampledField convolve(const SampledField& f, const SampledField& g);

// eta(t, nu) = e^{-2 pi i t nu} h2(t) h1hat(nu).
SampledField eta_density(const SampledField& h1, const SampledField& h2);
// sigma(x, xi) = (M_{-xi} h2 * h1)(x), the symplectic Fourier transform of eta_density.
// T_sigma f = (h1 f) * h2.
SymbolField symbol_from_eta(const SampledField& h1, const SampledField& h2);
// sigma(x, xi) = h1(x) h2hat(xi); T_sigma f = h1 (h2 * f).
SymbolField symbol_tensor(const SampledField& h1, const SampledField& h2);
// sigma(x, xi) = h1(x) k(xi) for k already sampled on the dual grid.
SymbolField symbol_outer(const SampledField& h1, const SampledField& k,
                         SymbolField::Provenance provenance = SymbolField::Provenance::tensor);

}  // namespace phasemod
