#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "phasemod/analysis.hpp"
#include "phasemod/testfns.hpp"

using namespace phasemod;

namespace {

std::vector<Axis> phase_of(const std::vector<Axis>& x) {
  auto out = x;
  for (const auto& a : dual_axes(x)) out.push_back(a);
  return out;
}

ExtExponent ex(const char* text) { return ExtExponent::parse(text); }

}  // namespace

TEST_CASE("seeded band-limited fields") {
  const auto x = make_grid(1, 32, 4.0).axes({"x"});
  const SampledField a = random_bandlimited(5, x, 0.25);
  CHECK(max_abs_difference(a, random_bandlimited(5, x, 0.25)) == 0.0);
  CHECK(max_abs_difference(a, random_bandlimited(6, x, 0.25)) > 0.0);
  CHECK(a.labels() == std::vector<std::string>{"x"});
  const SampledField A = fourier(a);
  double outside = 0.0, inside = 0.0;
  for (std::size_t k = 0; k < 32; ++k) {
    const long long m = static_cast<long long>(k) - 16;
    if (std::llabs(m) <= 4) inside = std::max(inside, std::abs(A[k]));
    else outside = std::max(outside, std::abs(A[k]));
  }
  CHECK(inside > 0.0);
  CHECK(outside < 1e-12 * inside);
  CHECK_THROWS_AS(random_bandlimited(1, x, 0.0), std::invalid_argument);
}

TEST_CASE("transform identities on a seeded field") {
  const TransformCheck c = check_transforms(3, make_grid(1, 32, 4.0).axes({"x"}));
  CHECK(c.round_trip < 1e-12);
  CHECK(c.parseval < 1e-10);
  CHECK(c.symplectic_involution < 1e-10);
  CHECK(c.symplectic_vs_fourier < 1e-10);
}

TEST_CASE("scaling slope fit") {
  const SlopeReport r = scaling_slope({{1.0, 1.0}, {2.0, std::pow(2.0, -0.75)}, {4.0, std::pow(4.0, -0.75)}});
  CHECK(r.slope == doctest::Approx(-0.75).epsilon(1e-12));
  CHECK(r.intercept == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r.max_residual < 1e-12);
  CHECK_THROWS_AS(scaling_slope({{1.0, 1.0}, {2.0, 2.0}}), std::invalid_argument);
  CHECK_THROWS_AS(scaling_slope({{1.0, 1.0}, {1.0, 2.0}, {4.0, 3.0}}), std::invalid_argument);
  CHECK_THROWS_AS(scaling_slope({{1.0, 1.0}, {2.0, 0.0}, {4.0, 3.0}}), std::invalid_argument);
}

TEST_CASE("sheared-product STFT factorizes and the Rihaczek-window relation holds") {
  const auto x = make_grid(1, 16, 4.0).axes({"x"});
  const SampledField f = oracle::noise(1, x);
  const SampledField g = oracle::noise(2, x);
  CHECK(verify_stft_factorization(f, g, WindowSpec::standard()) < 1e-12);
  CHECK(verify_rihaczek_window_relation(f, g, WindowSpec::gaussian_scaled(2.0)) < 1e-12);
  const WindowSpec complex_window = WindowSpec::explicit_field(modulate(gaussian_lambda(1.0, x), std::vector<double>{1.0}));
  CHECK_THROWS_AS(verify_stft_factorization(f, g, complex_window), std::invalid_argument);
  const WindowSpec odd_window = WindowSpec::explicit_field(translate(gaussian_lambda(1.0, x), std::vector<double>{0.25}));
  CHECK_THROWS_AS(verify_rihaczek_window_relation(f, g, odd_window), std::invalid_argument);
}

TEST_CASE("wave-packet family depends only on seed plus index") {
  const auto x = make_grid(1, 16, 4.0).axes({"x"});
  const auto family = wave_packet_family(10, 3, x);
  REQUIRE(family.size() == 3);
  const auto single = wave_packet_family(12, 1, x);
  CHECK(max_abs_difference(family[2].sigma.field, single[0].sigma.field) == 0.0);
  CHECK(max_abs_difference(family[2].f, single[0].f) == 0.0);
  CHECK(family[0].id == "packet_0");
}

TEST_CASE("boundedness sweep ratios, flagging and the Hilbert-Schmidt bound") {
  const auto x = make_grid(1, 16, 4.0).axes({"x"});
  auto family = wave_packet_family(1, 6, x);
  family.push_back({"zero_input", family[0].sigma, SampledField(x)});
  const NumericExponents hs{};
  const WindowSpec window = WindowSpec::standard().normalized();
  const RatioTable table = boundedness_sweep(hs, family, window);
  REQUIRE(table.rows.size() == 7);
  CHECK(table.flagged == 1);
  CHECK(table.rows.back().flagged);
  double largest = 0.0;
  for (std::size_t i = 0; i + 1 < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    CHECK_FALSE(row.flagged);
    CHECK(row.ratio == doctest::Approx(row.output_norm / (row.symbol_norm * row.input_norm)));
    CHECK(row.ratio <= 1.0 + 1e-6);
    largest = std::max(largest, row.ratio);
  }
  CHECK(table.max_ratio == largest);

  const NumericExponents sj{2, 2, 2, 2, kInfinity, 1, kInfinity, 1};
  const auto both = boundedness_sweep(std::vector<NumericExponents>{hs, sj}, family, window);
  CHECK(both[0].max_ratio == doctest::Approx(table.max_ratio).epsilon(1e-13));
  const RatioTable sj_alone = boundedness_sweep(sj, family, window);
  CHECK(both[1].max_ratio == doctest::Approx(sj_alone.max_ratio).epsilon(1e-13));
}

TEST_CASE("necessity cases: names, violated conditions and predicted slopes") {
  for (auto c : {NecessityCase::p4_gt_p1_conj, NecessityCase::q4_gt_q1_conj, NecessityCase::p_sum,
                 NecessityCase::q_sum, NecessityCase::p4_gt_p2, NecessityCase::q4_gt_q2}) {
    CHECK(parse_necessity_case(to_string(c)) == c);
  }
  CHECK_THROWS_AS(parse_necessity_case("nope"), std::invalid_argument);
  CHECK(violated_condition(NecessityCase::q4_gt_q2) == "q4_le_q2");
  const ExponentConfig p4{ex("2"), ex("2"), ex("4"), ex("2"), ex("1"), ex("4"), ex("2"), ex("2")};
  CHECK(predicted_necessity_slope(NecessityCase::p4_gt_p1_conj, p4) == doctest::Approx(0.25));
  const ExponentConfig q4q2{ex("2"), ex("1"), ex("2"), ex("2"), ex("2"), ex("2"), ex("2"), ex("4")};
  CHECK(predicted_necessity_slope(NecessityCase::q4_gt_q2, q4q2) == doctest::Approx(0.25));
  // The configuration must violate exactly the targeted condition.
  CHECK_THROWS_AS(necessity_growth(NecessityCase::q4_gt_q2, p4, default_necessity_options(NecessityCase::q4_gt_q2)),
                  std::invalid_argument);
}

TEST_CASE("necessity growth for q4 > q2 has a positive slope") {
  const ExponentConfig cfg{ex("2"), ex("1"), ex("2"), ex("2"), ex("2"), ex("2"), ex("2"), ex("4")};
  NecessityOptions options = default_necessity_options(NecessityCase::q4_gt_q2);
  const SlopeReport r = necessity_growth(NecessityCase::q4_gt_q2, cfg, options);
  CHECK(r.slope > 0.0);
  CHECK(std::abs(r.slope - r.predicted) < 0.1);
  CHECK(r.lambdas == options.lambdas);
}

TEST_CASE("factorized symbol norms against the direct phase-space norm") {
  const auto x = make_grid(1, 16, 4.0).axes({"x"});
  const SampledField h1 = oracle::noise(20, x);
  const SampledField h2 = oracle::noise(21, x);
  const PhaseExponents e{1.5, 3.0, 4.0, 1.25};
  const double tensor_direct = phase_modulation_norm(symbol_tensor(h1, h2).field, e);
  CHECK(tensor_symbol_norm(h1, fourier(h2), e) == doctest::Approx(tensor_direct).epsilon(1e-10));
  const double eta_direct =
      phase_modulation_norm(symbol_from_eta(h1, h2).field, e, eta_matched_window(x, WindowSpec::standard()));
  CHECK(eta_symbol_norm(h1, h2, e) == doctest::Approx(eta_direct).epsilon(1e-10));
}

TEST_CASE("compact-support norm equivalence") {
  const auto x = make_grid(1, 16, 4.0).axes({"x"});
  const auto phase = phase_of(x);
  const SymbolField sigma = make_symbol(tensor(bump({phase[0]}, 1.0), bump({phase[1]}, 1.0)));
  const PhaseExponents e{2, 4.0 / 3.0, 2, 4};
  const EquivalenceReport r = verify_compact_support_equiv({sigma}, e, 1.5);
  CHECK(r.pass);
  CHECK(r.min_ratio > 0.0);
  CHECK(compact_support_norm(sigma, 2.0, 2.0) == doctest::Approx(lp_norm(sigma.field, 2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(verify_compact_support_equiv({sigma}, e, 0.5), std::invalid_argument);
}

TEST_CASE("norm embeddings hold on random fields") {
  const auto phase = make_grid(2, 8, std::sqrt(8.0)).axes({"x", "xi"});
  std::vector<SampledField> family;
  for (std::uint64_t s = 0; s < 10; ++s) family.push_back(random_bandlimited(s, phase, 0.5));
  const EmbeddingReport below = verify_embedding(EmbeddingKind::phase_below_m, family, {2, 1, 2, 2});
  CHECK(below.violations == 0);
  CHECK(below.count == 10);
  CHECK(below.max_ratio <= 1.0 + 1e-12);
  const EmbeddingReport above = verify_embedding(EmbeddingKind::m_below_phase, family, {2, kInfinity, 2, 2});
  CHECK(above.violations == 0);
  CHECK_THROWS_AS(verify_embedding(EmbeddingKind::phase_below_m, family, {2, 4, 2, 2}), std::invalid_argument);
  CHECK_THROWS_AS(verify_embedding(EmbeddingKind::m_below_phase, family, {2, 1, 2, 2}), std::invalid_argument);
  const EmbeddingReport mono = verify_embedding(EmbeddingKind::exponent_monotone, family, {1, 1, 1, 1}, {2, 2, 2, 2});
  CHECK(mono.count == 10);
  CHECK(mono.max_ratio > 0.0);
  CHECK_THROWS_AS(verify_embedding(EmbeddingKind::exponent_monotone, family, {2, 2, 2, 2}, {1, 1, 1, 1}),
                  std::invalid_argument);
}

TEST_CASE("numeric exponents from an exact configuration") {
  const ExponentConfig cfg{ex("1"), ex("inf"), ex("2"), ex("4/3"), ex("3"), ex("4"), ex("5"), ex("6")};
  const NumericExponents n = NumericExponents::from(cfg);
  CHECK(n.p1 == 1.0);
  CHECK(std::isinf(n.q1));
  CHECK(n.q2 == doctest::Approx(4.0 / 3.0));
  const PhaseExponents s = n.symbol_exponents();
  CHECK(s.p1 == 3.0);
  CHECK(s.p2 == 4.0);
  CHECK(s.q1 == 5.0);
  CHECK(s.q2 == 6.0);
}
