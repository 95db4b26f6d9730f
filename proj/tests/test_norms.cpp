#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "phasemod/norms.hpp"
#include "phasemod/testfns.hpp"

using namespace phasemod;

TEST_CASE("lp norm of a constant") {
  const auto axes = make_grid(1, 32, 4.0).axes({"x"});
  const SampledField one = sample([](std::span<const double>) { return cplx{1.0}; }, axes);
  CHECK(lp_norm(one, 1.0) == doctest::Approx(4.0));
  CHECK(lp_norm(one, 2.0) == doctest::Approx(2.0));
  CHECK(lp_norm(one, 3.0) == doctest::Approx(std::cbrt(4.0)));
  CHECK(lp_norm(one, kInfinity) == 1.0);
  CHECK_THROWS_AS(lp_norm(one, 0.5), std::invalid_argument);
}

TEST_CASE("mixed norm reduces axes in chain order") {
  const auto axes = make_grid(2, 6, 3.0).axes({"a", "b"});
  const SampledField f = oracle::noise(7, axes);
  const double h = 0.5;
  const auto direct = [&](bool a_inner, double inner, double outer) {
    double total = 0.0;
    for (std::size_t o = 0; o < 6; ++o) {
      double acc = 0.0;
      for (std::size_t i = 0; i < 6; ++i) {
        const std::size_t flat = a_inner ? i * 6 + o : o * 6 + i;
        acc += std::pow(std::abs(f[flat]), inner) * h;
      }
      total += std::pow(std::pow(acc, 1.0 / inner), outer) * h;
    }
    return std::pow(total, 1.0 / outer);
  };
  CHECK(mixed_norm(f, {{"a", 1.0}, {"b", 3.0}}) == doctest::Approx(direct(true, 1.0, 3.0)).epsilon(1e-13));
  CHECK(mixed_norm(f, {{"b", 1.0}, {"a", 3.0}}) == doctest::Approx(direct(false, 1.0, 3.0)).epsilon(1e-13));
  CHECK_THROWS_AS(mixed_norm(f, {{"a", 2.0}}), std::invalid_argument);
  CHECK_THROWS_AS(mixed_norm(f, {{"a", 2.0}, {"c", 2.0}}), std::invalid_argument);
}

TEST_CASE("modulation norm of a Gaussian matches the closed form") {
  const auto axes = make_grid(1, 512, 16.0).axes({"x"});
  const std::pair<double, double> exponents[] = {{2.0, 4.0}, {1.0, kInfinity}, {4.0, 4.0 / 3.0}, {kInfinity, 1.0}};
  for (double a : {0.5, 1.0, 3.0}) {
    const SampledField g = gaussian_lambda(a, axes);
    for (const auto& [p, q] : exponents) {
      const double exact = oracle::gaussian_modulation_norm(a, 0.5, p, q);
      CHECK(modulation_norm(g, p, q) == doctest::Approx(exact).epsilon(1e-8));
      const double scaled = oracle::gaussian_modulation_norm(a, 2.0, p, q);
      CHECK(modulation_norm(g, p, q, WindowSpec::gaussian_scaled(2.0)) == doctest::Approx(scaled).epsilon(1e-8));
      // Unit L2 norm of e^{-pi b x^2} divides by (2b)^{-1/4}.
      CHECK(modulation_norm(g, p, q, WindowSpec::gaussian_scaled(2.0).normalized()) ==
            doctest::Approx(scaled / std::pow(4.0, -0.25)).epsilon(1e-8));
    }
  }
}

TEST_CASE("property: STFT energy is the product of signal and window energies") {
  const auto axes = make_grid(1, 32, 4.0).axes({"x"});
  const double wnorm = lp_norm(realize_window(WindowSpec::standard(), axes), 2.0);
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const SampledField f = oracle::noise(seed, axes);
    CHECK(modulation_norm(f, 2.0, 2.0) == doctest::Approx(lp_norm(f, 2.0) * wnorm).epsilon(1e-12));
  }
}

TEST_CASE("property: modulation norms are invariant under grid shifts and modulations") {
  const auto axes = make_grid(1, 32, 4.0).axes({"x"});
  const std::vector<double> shift{1.25};
  const std::vector<double> freq{1.5};
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const SampledField f = oracle::noise(100 + seed, axes);
    const double base = modulation_norm(f, 3.0, 1.5);
    CHECK(modulation_norm(translate(f, shift), 3.0, 1.5) == doctest::Approx(base).epsilon(1e-12));
    CHECK(modulation_norm(modulate(f, freq), 3.0, 1.5) == doctest::Approx(base).epsilon(1e-12));
    CHECK(modulation_norm(scaled(f, cplx{0.0, 2.0}), 3.0, 1.5) == doctest::Approx(2.0 * base).epsilon(1e-12));
  }
}

TEST_CASE("tilde norm swaps the reduction order") {
  const auto axes = make_grid(1, 16, 4.0).axes({"x"});
  const SampledField f = oracle::noise(5, axes);
  CHECK(modulation_norm_tilde(f, 3.0, 3.0) == doctest::Approx(modulation_norm(f, 3.0, 3.0)).epsilon(1e-12));
  const SampledField v = stft(f, WindowSpec::standard());
  CHECK(modulation_norm_tilde(f, 1.0, 4.0) == doctest::Approx(mixed_norm(v, {{"nu", 4.0}, {"t", 1.0}})).epsilon(1e-12));
}

TEST_CASE("phase-space norm of a tensor symbol factorizes") {
  const auto x = make_grid(1, 16, 4.0).axes({"x"});
  const auto xi = dual_axes(x);
  const SampledField h = oracle::noise(8, x);
  const SampledField k = oracle::noise(9, xi);
  const PhaseExponents e{1.5, 3.0, 4.0, 1.25};
  const double direct = phase_modulation_norm(tensor(h, k), e);
  const double product = modulation_norm(h, e.p1, e.q2) * modulation_norm_tilde(k, e.q1, e.p2);
  CHECK(direct == doctest::Approx(product).epsilon(1e-12));
}

TEST_CASE("batched phase-space norms equal single evaluations") {
  const auto phase = make_grid(2, 8, std::sqrt(8.0)).axes({"x", "xi"});
  const SampledField F = oracle::noise(10, phase);
  const std::vector<PhaseExponents> list{{2, 2, 2, 2}, {1, kInfinity, 3, 1.5}, {kInfinity, 1, kInfinity, 1}};
  const auto batch = phase_modulation_norms(F, list);
  for (std::size_t i = 0; i < list.size(); ++i) {
    CHECK(batch[i] == doctest::Approx(phase_modulation_norm(F, list[i])).epsilon(1e-13));
  }
}

TEST_CASE("all-2 phase-space norms agree and equal the L2 product") {
  const auto phase = make_grid(2, 8, std::sqrt(8.0)).axes({"x", "xi"});
  const SampledField F = oracle::noise(12, phase);
  const double l2 = lp_norm(F, 2.0) * lp_norm(realize_window(WindowSpec::standard(), phase), 2.0);
  CHECK(phase_modulation_norm(F, {2, 2, 2, 2}) == doctest::Approx(l2).epsilon(1e-12));
  CHECK(phase_m_norm(F, {2, 2, 2, 2}) == doctest::Approx(l2).epsilon(1e-12));
}

TEST_CASE("Fourier-Lebesgue and Sobolev norms") {
  const auto axes = make_grid(1, 32, 4.0).axes({"x"});
  const SampledField f = oracle::noise(13, axes);
  CHECK(fl_norm(f, 2.0) == doctest::Approx(lp_norm(f, 2.0)).epsilon(1e-12));
  CHECK(sobolev_norm(f, 3.0, 0.0) == doctest::Approx(lp_norm(f, 3.0)).epsilon(1e-12));
  const SampledField F = fourier(f);
  const Weight w = weight_ws(2.0, F.axes());
  const SampledField multiplied = inverse_fourier(multiply(F, w.expand(F.axes())));
  CHECK(sobolev_norm(f, 2.0, 2.0) == doctest::Approx(lp_norm(multiplied, 2.0)).epsilon(1e-12));
}

TEST_CASE("weights: values, broadcasting and moderateness") {
  const auto nu = make_grid(1, 16, 4.0).axes({"nu"});
  const Weight w = weight_ws(2.0, nu);
  const SampledField values = w.expand(nu);
  for (std::size_t k = 0; k < 16; ++k) {
    CHECK(values[k].real() == doctest::Approx(1.0 + nu[0].coord(k) * nu[0].coord(k)));
  }
  const auto tnu = make_grid(2, 16, 4.0).axes({"t", "nu"});
  const SampledField wide = w.expand(tnu);
  CHECK(wide[3 * 16 + 5] == values[5]);

  const ModerationReport ok = is_moderate_check(w, w, nu, 2.0, 500, 1);
  CHECK(ok.pass);
  CHECK(ok.violations == 0);
  CHECK(ok.trials == 500);
  const ModerationReport bad = is_moderate_check(w, Weight::unit(), nu, 1.0, 500, 1);
  CHECK_FALSE(bad.pass);
  CHECK(bad.violations > 0);
}

TEST_CASE("weighted modulation norm applies the weight on the frequency axis") {
  const auto axes = make_grid(1, 16, 4.0).axes({"x"});
  const SampledField f = oracle::noise(14, axes);
  auto nu = dual_axes(axes);
  nu[0].label = "nu";
  const Weight w = weight_ws(1.0, nu);
  const SampledField v = stft(f, WindowSpec::standard());
  const SampledField weighted = multiply(v, w.expand(v.axes()));
  CHECK(modulation_norm(f, 2.0, 3.0, WindowSpec::standard(), w) ==
        doctest::Approx(mixed_norm(weighted, {{"t", 2.0}, {"nu", 3.0}})).epsilon(1e-12));
}
