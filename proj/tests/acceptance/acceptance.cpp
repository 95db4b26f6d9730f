#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "phasemod/analysis.hpp"
#include "phasemod/exponent.hpp"
#include "phasemod/testfns.hpp"

using namespace phasemod;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [violated]");
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

std::vector<Axis> line(std::size_t n, double extent) { return make_grid(1, n, extent).axes({"x"}); }

std::vector<Axis> phase_of(const std::vector<Axis>& x) {
  auto out = x;
  for (const auto& a : dual_axes(x)) out.push_back(a);
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double rel_l2(const SampledField& a, const SampledField& b) {
  return lp_norm(combine(1.0, a, -1.0, b), 2.0) / lp_norm(b, 2.0);
}

ExtExponent ex(const char* text) { return ExtExponent::parse(text); }

SampledField packet(const std::vector<Axis>& x, double center, double rate, double freq) {
  return sample(
      [=](std::span<const double> z) {
        return std::exp(-std::numbers::pi * rate * (z[0] - center) * (z[0] - center)) *
               std::polar(1.0, 2.0 * std::numbers::pi * freq * z[0]);
      },
      x);
}

void transforms(Outcome& o) {
  const auto start = std::chrono::steady_clock::now();
  TransformCheck worst;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const TransformCheck c = check_transforms(seed, line(64, 8.0));
    worst.round_trip = std::max(worst.round_trip, c.round_trip);
    worst.parseval = std::max(worst.parseval, c.parseval);
    worst.symplectic_involution = std::max(worst.symplectic_involution, c.symplectic_involution);
    worst.symplectic_vs_fourier = std::max(worst.symplectic_vs_fourier, c.symplectic_vs_fourier);
  }
  const double elapsed = seconds_since(start);
  o.require(worst.round_trip <= 1e-12, "round trip " + fmt(worst.round_trip));
  o.require(worst.parseval <= 1e-10, "Parseval " + fmt(worst.parseval));
  o.require(worst.symplectic_involution <= 1e-10, "involution " + fmt(worst.symplectic_involution));
  o.require(worst.symplectic_vs_fourier <= 1e-10, "F~ vs F^ " + fmt(worst.symplectic_vs_fourier));
  o.require(elapsed < 5.0, "runtime " + fmt(elapsed) + " s");
}

void stft_factorization(Outcome& o) {
  const auto start = std::chrono::steady_clock::now();
  const auto x = line(32, 8.0);
  const double err = verify_stft_factorization(packet(x, 0.5, 1.0, 1.0), packet(x, -0.25, 2.0, 0.0), WindowSpec::standard());
  const double elapsed = seconds_since(start);
  o.require(err < 1e-6, "max rel error " + fmt(err));
  o.require(elapsed < 60.0, "runtime " + fmt(elapsed) + " s");
}

void rihaczek_window(Outcome& o) {
  const auto x = line(32, 8.0);
  const double err =
      verify_rihaczek_window_relation(packet(x, 0.5, 1.0, 1.0), packet(x, -0.25, 2.0, 0.0), WindowSpec::standard());
  o.require(err < 1e-6, "max rel error " + fmt(err));
}

void duality(Outcome& o) {
  const auto x = line(64, 8.0);
  const auto phase = phase_of(x);
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const SymbolField sigma = make_symbol(random_bandlimited(1000 + i, phase, 0.5));
    const auto [lhs, rhs] = duality_pair(sigma, random_bandlimited(2000 + i, x, 0.5), random_bandlimited(3000 + i, x, 0.5));
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs)));
  }
  o.require(worst < 1e-8, "max relative gap over 20 triples " + fmt(worst));
}

void operator_identities(Outcome& o) {
  const auto x = line(32, std::sqrt(32.0));
  const PhaseExponents e{1.5, 3.0, 4.0, 1.2};
  const WindowSpec w = WindowSpec::standard();
  double op_eta = 0.0, op_tensor = 0.0, norm_eta = 0.0, norm_tensor = 0.0;
  for (std::uint64_t i = 0; i < 3; ++i) {
    const SampledField h1 = random_bandlimited(10 + i, x, 0.5);
    const SampledField h2 = random_bandlimited(20 + i, x, 0.5);
    const SampledField f = random_bandlimited(30 + i, x, 0.5);
    const SymbolField eta = symbol_from_eta(h1, h2);
    const SymbolField tens = symbol_tensor(h1, h2);
    op_eta = std::max(op_eta, rel_l2(apply_kn(eta, f), convolve(multiply(h1, f), h2)));
    op_tensor = std::max(op_tensor, rel_l2(apply_kn(tens, f), multiply(h1, convolve(h2, f))));
    const double eta_direct = phase_modulation_norm(eta.field, e, eta_matched_window(x, w));
    const double eta_factor = eta_symbol_norm(h1, h2, e, w);
    norm_eta = std::max(norm_eta, std::abs(eta_direct - eta_factor) / eta_factor);
    const double tensor_direct = phase_modulation_norm(tens.field, e, w);
    const double tensor_factor = tensor_symbol_norm(h1, fourier(h2), e, w);
    norm_tensor = std::max(norm_tensor, std::abs(tensor_direct - tensor_factor) / tensor_factor);
  }
  o.require(op_eta < 1e-8, "eta operator " + fmt(op_eta));
  o.require(op_tensor < 1e-8, "tensor operator " + fmt(op_tensor));
  o.require(norm_eta < 1e-5, "eta norm factorization " + fmt(norm_eta));
  o.require(norm_tensor < 1e-5, "tensor norm factorization " + fmt(norm_tensor));
}

void scaling_laws(Outcome& o) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> lambdas{1, 2, 4, 8, 16};
  const auto gauss_axes = line(2048, 32.0);
  const auto chirp_axes = line(2048, 16.0);
  const SampledField h = bump(chirp_axes, 2.0);
  const std::pair<double, double> pairs[] = {{2.0, 4.0}, {1.0, kInfinity}, {4.0, 4.0 / 3.0}};
  for (const auto& [p, q] : pairs) {
    const double up = 1.0 / p, uq = 1.0 / q;
    std::vector<std::pair<double, double>> decay, spread, chirps;
    for (double lambda : lambdas) {
      decay.emplace_back(lambda, modulation_norm(gaussian_lambda(lambda, gauss_axes), p, q));
      spread.emplace_back(lambda, modulation_norm(gaussian_lambda(1.0 / lambda, gauss_axes), p, q));
      chirps.emplace_back(lambda, modulation_norm(chirp(h, lambda), p, q));
    }
    const std::string tag = "(" + fmt(p) + "," + fmt(q) + ")";
    const double s1 = scaling_slope(decay).slope, s2 = scaling_slope(spread).slope, s3 = scaling_slope(chirps).slope;
    o.require(std::abs(s1 + (1.0 - uq)) <= 0.05, tag + " Gaussian decay " + fmt(s1) + " vs " + fmt(-(1.0 - uq)));
    o.require(std::abs(s2 - up) <= 0.05, tag + " Gaussian spread " + fmt(s2) + " vs " + fmt(up));
    o.require(std::abs(s3 - (uq - 0.5)) <= 0.05, tag + " chirp " + fmt(s3) + " vs " + fmt(uq - 0.5));
  }
  const double elapsed = seconds_since(start);
  o.require(elapsed < 30.0, "runtime " + fmt(elapsed) + " s");
}

void necessity(Outcome& o) {
  const ExponentConfig p4{ex("2"), ex("2"), ex("4"), ex("2"), ex("1"), ex("4"), ex("2"), ex("2")};
  const ExponentConfig q4q2{ex("2"), ex("1"), ex("2"), ex("2"), ex("2"), ex("2"), ex("2"), ex("4")};
  const std::pair<NecessityCase, ExponentConfig> cases[] = {{NecessityCase::p4_gt_p1_conj, p4},
                                                            {NecessityCase::q4_gt_q2, q4q2}};
  for (const auto& [c, cfg] : cases) {
    const SlopeReport r = necessity_growth(c, cfg, default_necessity_options(c));
    o.require(std::abs(r.slope - r.predicted) <= 0.1 && r.slope > 0.0,
              to_string(c) + " slope " + fmt(r.slope) + " vs " + fmt(r.predicted));
  }
}

void boundedness(Outcome& o) {
  const NumericExponents hs{};
  const NumericExponents sj{2, 2, 2, 2, kInfinity, 1, kInfinity, 1};
  const WindowSpec window = WindowSpec::standard().normalized();
  std::vector<std::vector<RatioTable>> levels;
  for (std::size_t n : {32u, 64u}) {
    const auto x = line(n, std::sqrt(static_cast<double>(n)));
    levels.push_back(boundedness_sweep(std::vector<NumericExponents>{hs, sj}, wave_packet_family(1, 50, x), window));
  }
  const char* names[] = {"Hilbert-Schmidt", "Sjostrand"};
  for (std::size_t c = 0; c < 2; ++c) {
    const double coarse = levels[0][c].max_ratio, fine = levels[1][c].max_ratio;
    const double change = std::abs(fine - coarse) / coarse;
    o.require(std::isfinite(coarse) && std::isfinite(fine) && change < 0.15,
              std::string(names[c]) + " max " + fmt(coarse) + " -> " + fmt(fine));
  }
  const double hs_max = std::max(levels[0][0].max_ratio, levels[1][0].max_ratio);
  o.require(hs_max <= 1.0 + 1e-6, "Hilbert-Schmidt ratio " + fmt(hs_max) + " <= 1");
}

void exponent_arithmetic(Outcome& o) {
  const auto lattice = oracle::lattice_numerators();
  const long long half = oracle::kLattice / 2;
  std::vector<ExtExponent> exps;
  for (long long n : lattice) {
    const auto [a, b] = oracle::reduce(n);
    exps.push_back(ExtExponent::from_reciprocal(Rational(a, b)));
  }
  const ExtExponent two = ex("2");
  std::size_t points = 0, mismatches = 0;
  for (std::size_t a = 0; a < lattice.size(); ++a) {
    for (std::size_t b = 0; b < lattice.size(); ++b) {
      const Region region = region_boundary(exps[a], exps[b], Side::p);
      for (std::size_t c = 0; c < lattice.size(); ++c) {
        for (std::size_t d = 0; d < lattice.size(); ++d) {
          const bool expected = oracle::side_holds(lattice[a], lattice[b], lattice[c], lattice[d]);
          const bool p_side = admissible({exps[a], two, exps[b], two, exps[c], exps[d], two, two}).admissible;
          const bool q_side = admissible({two, exps[a], two, exps[b], two, two, exps[c], exps[d]}).admissible;
          const bool inside = region.contains({exps[c].reciprocal(), exps[d].reciprocal()});
          mismatches += (p_side != expected) + (q_side != expected) + (inside != expected);
          points += 3;
        }
      }
    }
  }
  for (std::size_t a = 0; a < lattice.size(); ++a) {
    for (std::size_t b = 0; b < lattice.size(); ++b) {
      const LpCase lp = lp_case_conditions(exps[a], exps[b]);
      const long long up = lattice[a], uq = lattice[b], D = oracle::kLattice;
      const bool p_small = up >= half, q_small = uq >= half;
      long long qa = D - up, qb = uq;
      if (p_small && q_small) qa = up, qb = uq;
      else if (p_small) qa = up, qb = D - uq;
      else if (!q_small || uq == half) qa = D - up, qb = D - uq;
      for (std::size_t c = 0; c < lattice.size(); ++c) {
        for (std::size_t d = 0; d < lattice.size(); ++d) {
          const Rational& u3 = exps[c].reciprocal();
          const Rational& u4 = exps[d].reciprocal();
          mismatches += lp.q_side.satisfied_by(u3, u4) != oracle::side_holds(D - qa, qb, lattice[c], lattice[d]);
          mismatches += lp.p_side.satisfied_by(u3, u4) != oracle::side_holds(up, uq, lattice[c], lattice[d]);
          points += 2;
        }
      }
    }
  }
  const ExponentConfig hs{two, two, two, two, two, two, two, two};
  const ExponentConfig sj{two, two, two, two, ex("inf"), ex("1"), ex("inf"), ex("1")};
  o.require(mismatches == 0, std::to_string(mismatches) + " mismatches over " + std::to_string(points) + " lattice checks");
  o.require(admissible(hs).admissible && admissible(sj).admissible, "Hilbert-Schmidt and Sjostrand admissible");
}

void embeddings(Outcome& o) {
  const auto phase = make_grid(2, 16, 4.0).axes({"x", "xi"});
  std::vector<SampledField> family;
  for (std::uint64_t s = 0; s < 100; ++s) family.push_back(random_bandlimited(500 + s, phase, 0.5));
  const EmbeddingReport below = verify_embedding(EmbeddingKind::phase_below_m, family, {2, 1, 2, 2});
  const EmbeddingReport above = verify_embedding(EmbeddingKind::m_below_phase, family, {2, kInfinity, 2, 2});
  o.require(below.violations == 0 && below.count == 100,
            "p2 <= min(q1,q2): " + std::to_string(below.violations) + " violations, max ratio " + fmt(below.max_ratio));
  o.require(above.violations == 0 && above.count == 100,
            "max(q1,q2) <= p2: " + std::to_string(above.violations) + " violations, max ratio " + fmt(above.max_ratio));
}

}  // namespace

int main() {
  std::setvbuf(stdout, nullptr, _IONBF, 0);
  const std::pair<const char*, std::function<void(Outcome&)>> criteria[] = {
      {"transform correctness", transforms},
      {"sheared-product STFT factorization", stft_factorization},
      {"Rihaczek-window relation", rihaczek_window},
      {"Rihaczek duality", duality},
      {"eta and tensor operator identities", operator_identities},
      {"scaling laws", scaling_laws},
      {"necessity growth", necessity},
      {"boundedness sweeps", boundedness},
      {"exponent arithmetic", exponent_arithmetic},
      {"norm embeddings", embeddings},
  };
  int failures = 0;
  int index = 1;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    std::printf("criterion %d: %s - %s (%s) [%.1f s]\n", index++, o.pass ? "PASS" : "FAIL", name,
                o.detail.str().c_str(), seconds_since(start));
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
