#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "phasemod/grid.hpp"

using namespace phasemod;

TEST_CASE("centered axis coordinates") {
  const Axis a{"x", 8, 4.0};
  CHECK(a.spacing() == doctest::Approx(0.5));
  CHECK(a.coord(0) == doctest::Approx(-2.0));
  CHECK(a.coord(4) == 0.0);
  CHECK(a.coord(7) == doctest::Approx(1.5));
  const Axis d = a.dual("xi");
  CHECK(d.samples == 8);
  CHECK(d.extent == doctest::Approx(2.0));
  CHECK(d.spacing() * a.spacing() * 8.0 == doctest::Approx(1.0));
}

TEST_CASE("grid construction rejects bad shapes") {
  CHECK_THROWS_AS(make_grid(1, 7, 4.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1, 8, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(0, 8, 4.0), std::invalid_argument);
  CHECK_THROWS_AS(SampledField({Axis{"x", 5, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(SampledField({Axis{"x", 4, 1.0}, Axis{"x", 4, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(SampledField({Axis{"x", 4, 1.0}}, std::vector<cplx>(3)), std::invalid_argument);
}

TEST_CASE("group labels") {
  CHECK(group_labels("x", 1) == std::vector<std::string>{"x"});
  CHECK(group_labels("nu", 2) == std::vector<std::string>{"nu1", "nu2"});
}

TEST_CASE("row-major layout and unravel") {
  const auto axes = make_grid(2, 4, 2.0).axes({"x1", "x2"});
  const SampledField f(axes);
  CHECK(f.shape() == std::vector<std::size_t>{4, 4});
  CHECK(f.strides() == std::vector<std::size_t>{4, 1});
  CHECK(f.cell_volume() == doctest::Approx(0.25));
  std::vector<std::size_t> idx(2);
  const std::vector<std::size_t> shape{4, 4};
  unravel(9, shape, idx);
  CHECK(idx == std::vector<std::size_t>{2, 1});
}

TEST_CASE("Riemann sum of a Gaussian matches its integral") {
  const auto axes = make_grid(1, 96, 12.0).axes({"x"});
  for (double lambda : {0.5, 1.0, 2.0}) {
    const SampledField g = sample([&](std::span<const double> z) { return cplx{std::exp(-oracle::kPi * lambda * z[0] * z[0])}; }, axes);
    CHECK(std::abs(integrate(g) - cplx{1.0 / std::sqrt(lambda)}) < 1e-12);
  }
}

TEST_CASE("tensor product values") {
  const auto x = make_grid(1, 4, 2.0).axes({"x"});
  const auto t = make_grid(1, 6, 3.0).axes({"t"});
  const SampledField a = oracle::noise(1, x);
  const SampledField b = oracle::noise(2, t);
  const SampledField ab = tensor(a, b);
  REQUIRE(ab.shape() == std::vector<std::size_t>{4, 6});
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 6; ++j) CHECK(std::abs(ab[i * 6 + j] - a[i] * b[j]) == 0.0);
  }
  CHECK_THROWS_AS(tensor(a, a), std::invalid_argument);
}

TEST_CASE("coordinate shear reads F(x - t, x)") {
  const std::size_t n = 8;
  const auto axes = make_grid(2, n, 4.0).axes({"x", "t"});
  const SampledField f = oracle::noise(3, axes);
  const SampledField s = coordinate_shear(f);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t m = 0; m < n; ++m) {
      const std::size_t diff = (j + n + n / 2 - m) % n;
      CHECK(s[j * n + m] == f[diff * n + j]);
    }
  }
}

TEST_CASE("property: shear and unshear are inverse") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto axes = make_grid(2, 6 + 2 * seed, 3.0).axes({"x", "t"});
    const SampledField f = oracle::noise(seed, axes);
    CHECK(max_abs_difference(coordinate_unshear(coordinate_shear(f)), f) == 0.0);
    CHECK(max_abs_difference(coordinate_shear(coordinate_unshear(f)), f) == 0.0);
  }
}

TEST_CASE("property: permuting axes and back is the identity") {
  const auto axes = make_grid(3, 4, 2.0).axes({"a", "b", "c"});
  const SampledField f = oracle::noise(9, axes);
  const SampledField p = f.permuted({"c", "a", "b"});
  CHECK(p.labels() == std::vector<std::string>{"c", "a", "b"});
  CHECK(max_abs_difference(p.permuted({"a", "b", "c"}), f) == 0.0);
  CHECK(f[1 * 16 + 2 * 4 + 3] == p[3 * 16 + 1 * 4 + 2]);
}

TEST_CASE("pointwise helpers") {
  const auto axes = make_grid(1, 8, 4.0).axes({"x"});
  const SampledField a = oracle::noise(4, axes);
  const SampledField b = oracle::noise(5, axes);
  const SampledField c = combine(2.0, a, cplx{0.0, 1.0}, b);
  const SampledField m = multiply(a, conjugate(b));
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(std::abs(c[i] - (2.0 * a[i] + cplx{0.0, 1.0} * b[i])) < 1e-15);
    CHECK(std::abs(m[i] - a[i] * std::conj(b[i])) < 1e-15);
  }
  CHECK(max_abs(scaled(a, 0.0)) == 0.0);
  const SampledField other(make_grid(1, 8, 2.0).axes({"x"}));
  CHECK_FALSE(a.same_grid(other));
  CHECK_THROWS_AS(multiply(a, other), std::invalid_argument);
}
