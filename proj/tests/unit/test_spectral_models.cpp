#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kwlab/error.hpp"
#include "kwlab/exact.hpp"
#include "kwlab/spectral_models.hpp"
#include "oracles.hpp"

using namespace kwlab;

TEST_CASE("rational arithmetic reduces and orders") {
  const Rational a(6, -8);
  CHECK(a.num() == -3);
  CHECK(a.den() == 4);
  CHECK(a + Rational(3, 4) == Rational(0));
  CHECK(Rational(1, 3) * Rational(3, 5) == Rational(1, 5));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK_THROWS_AS(Rational(1, 0), InvalidParameterError);
  CHECK(Rational(9, 25).str() == "9/25");
}

TEST_CASE("parse_exact recognizes exact squares") {
  auto c = parse_exact("sqrt(1/2)");
  REQUIRE(c.exact());
  CHECK(*c.square == Rational(1, 2));
  CHECK(c.value == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));

  auto d = parse_exact("0.6");
  REQUIRE(d.exact());
  CHECK(*d.square == Rational(9, 25));

  auto e = parse_exact("1/sqrt(2)");
  REQUIRE(e.exact());
  CHECK(*e.square == Rational(1, 2));

  auto pi = parse_exact("3.141592653589793");
  CHECK_FALSE(pi.exact());
  CHECK_THROWS_AS(parse_exact("abc"), InvalidParameterError);
}

TEST_CASE("ExactSquare::str round-trips") {
  for (const char* s : {"3/5", "sqrt(1/2)", "1/4", "2"}) {
    const auto x = parse_exact(s);
    const auto y = parse_exact(x.str());
    CHECK(x.value == y.value);
    CHECK(x.square == y.square);
  }
}

TEST_CASE("ladder membership is exact at the boundary") {
  // mu = 1, c = 1/2, lambda = 3, eps = 1/2: |1 - 3/2| = 1/2 exactly.
  const auto r = ladder_member(ExactSquare::from_integer(1), parse_exact("1/2"), ExactSquare::from_integer(3),
                               parse_exact("1/2"));
  CHECK(r.inside);
  CHECK(r.exact);
  // mu = 1, c = 1/sqrt2, lambda = sqrt2 (c lambda = 1), eps -> tiny: still inside.
  const auto s = ladder_member(ExactSquare::from_integer(1), parse_exact("sqrt(1/2)"),
                               ExactSquare::from_rational_square(Rational(2)), parse_exact("1/1000000"));
  CHECK(s.inside);
  CHECK(s.exact);
}

TEST_CASE("lattice shell counts match brute force") {
  for (int n : {1, 2, 3}) {
    const auto counts = lattice_shell_counts(n, 60);
    for (std::int64_t R = 0; R <= 60; ++R) CHECK(counts[static_cast<std::size_t>(R)] == oracle::lattice_shell(n, R));
  }
}

TEST_CASE("torus levels carry sqrt(|j|^2) and shell multiplicity") {
  const auto levels = enumerate_torus_levels(2, 10.0);
  REQUIRE_FALSE(levels.empty());
  CHECK(levels.front().index == 0);
  CHECK(levels.front().multiplicity == 1);
  for (const auto& l : levels) {
    CHECK(l.value == doctest::Approx(std::sqrt(static_cast<double>(l.index))));
    CHECK(l.multiplicity == oracle::lattice_shell(2, l.index));
    CHECK(l.value <= 10.0);
  }
}

TEST_CASE("sphere multiplicity equals the harmonic dimension") {
  for (int n : {1, 2, 3})
    for (int N = 0; N <= 7; ++N) CHECK(sphere_multiplicity(n, N) == static_cast<std::uint64_t>(oracle::harmonic_dimension(n + 1, N)));
  CHECK(sphere_multiplicity(2, 10) == 21);  // 2N + 1
}

TEST_CASE("sphere levels are lambda = N") {
  const auto levels = enumerate_sphere_levels(2, 5);
  REQUIRE(levels.size() == 6);
  for (std::size_t i = 0; i < levels.size(); ++i) {
    CHECK(levels[i].value == doctest::Approx(static_cast<double>(i)));
    CHECK(levels[i].multiplicity == 2 * i + 1);
  }
}

TEST_CASE("volumes") {
  constexpr double pi = std::numbers::pi;
  CHECK(unit_sphere_volume(1) == doctest::Approx(2 * pi));
  CHECK(unit_sphere_volume(2) == doctest::Approx(4 * pi));
  CHECK(unit_sphere_volume(3) == doctest::Approx(2 * pi * pi));
  CHECK(ambient_volume(ManifoldSpec::torus(3)) == doctest::Approx(std::pow(2 * pi, 3)));
  CHECK(hausdorff_volume(SubmanifoldSpec::coordinate_subtorus(1), ManifoldSpec::torus(2)) == doctest::Approx(2 * pi));
  CHECK(hausdorff_volume(SubmanifoldSpec::great_subsphere(2), ManifoldSpec::sphere(3)) == doctest::Approx(4 * pi));
}

TEST_CASE("invalid pairs are rejected") {
  CHECK_THROWS_AS(validate_pair(ManifoldSpec::torus(2), SubmanifoldSpec::coordinate_subtorus(2)), InvalidParameterError);
  CHECK_THROWS_AS(validate_pair(ManifoldSpec::torus(2), SubmanifoldSpec::great_subsphere(1)), InvalidParameterError);
  CHECK_NOTHROW(validate_pair(ManifoldSpec::sphere(2), SubmanifoldSpec::great_subsphere(1)));
}
