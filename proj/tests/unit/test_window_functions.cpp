#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kwlab/error.hpp"
#include "kwlab/window_functions.hpp"
#include "oracles.hpp"

using namespace kwlab;

namespace {

double beta(double u) { return std::abs(u) < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0; }

double simpson01(double (*f)(double), int panels) {
  const double h = 2.0 / panels;
  double s = f(-1.0) + f(1.0);
  for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(-1.0 + h * i);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("sharp indicator transform is 2 sin(eps tau) / tau") {
  const auto w = WindowFunction::sharp(0.25);
  CHECK(w.is_sharp());
  CHECK(w(0.25) == 1.0);
  CHECK(w(0.2500001) == 0.0);
  CHECK(w.ft(0.0) == doctest::Approx(0.5));
  for (double tau : {0.3, 1.0, 7.5, 40.0}) CHECK(w.ft(tau) == doctest::Approx(2.0 * std::sin(0.25 * tau) / tau).epsilon(1e-14));
  CHECK(std::isinf(w.ft_support_radius()));
}

TEST_CASE("bump-square window: positivity, compact transform, normalization") {
  const double int_beta = simpson01(beta, 20000);
  const double int_beta2 = simpson01([](double u) { return beta(u) * beta(u); }, 20000);
  for (double a : {1.0, 6.0, 30.0}) {
    const auto w = WindowFunction::bump_square(a);
    CHECK(w.ft_support_radius() == doctest::Approx(2.0 * a));
    CHECK(w.ft(2.0 * a) == 0.0);
    CHECK(w.ft(2.5 * a) == 0.0);
    // psi_hat(0) = a / (2pi) int beta^2, psi(0) = (a / 2pi int beta)^2
    CHECK(w.ft(0.0) == doctest::Approx(a / (2 * std::numbers::pi) * int_beta2).epsilon(1e-8));
    CHECK(w(0.0) == doctest::Approx(std::pow(a / (2 * std::numbers::pi) * int_beta, 2)).epsilon(1e-8));
    for (double x : {0.0, 0.1, 1.3, 4.0}) CHECK(w(x / a) >= 0.0);
  }
}

TEST_CASE("bump-square transform agrees with direct quadrature of psi") {
  const auto w = WindowFunction::bump_square(2.0);
  const double X = 40.0;
  for (double tau : {0.0, 0.7, 2.2, 3.6}) {
    const double direct = oracle::cosine_transform([&](double x) { return w(x); }, tau, X, 40000);
    CHECK(w.ft(tau) == doctest::Approx(direct).epsilon(1e-6).scale(1e-3));
  }
}

TEST_CASE("tail bounds dominate the window and shrink") {
  const auto w = WindowFunction::bump_square(3.0);
  double prev = w.tail_bound(0.0);
  for (double X = 0.5; X < 20.0; X += 0.5) {
    const double tb = w.tail_bound(X);
    CHECK(tb <= prev * (1.0 + 1e-12));
    CHECK(tb >= w(X) * (1.0 - 1e-9));
    prev = tb;
  }
  const double r = w.tail_radius(1e-10);
  CHECK(w.tail_bound(r) <= 1e-10);
}

TEST_CASE("mollifier has unit mass and mollified indicator converges in L1") {
  const auto m = WindowFunction::mollifier(4.0);
  CHECK(m.ft(0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.ft(4.0) == 0.0);
  CHECK(m.ft_support_radius() == doctest::Approx(4.0));
  CHECK(m.delta0() > 0.0);
  CHECK(m.eps0() > 0.0);

  double prev = 1e300;
  for (double T : {2.0, 4.0, 8.0, 16.0}) {
    const auto w = WindowFunction::mollified_indicator(T, 0.25);
    CHECK(w.ft(0.0) == doctest::Approx(0.5).epsilon(1e-12));
    const double d = w.l1_distance_to_indicator();
    CHECK(d < prev);
    prev = d;
  }
}

TEST_CASE("support sufficiency and parameter checks") {
  const auto narrow = WindowFunction::bump_square(1.0);
  const double s_values[] = {2.5, -2.5};
  CHECK(support_is_sufficiently_small(narrow, s_values));
  const auto wide = WindowFunction::bump_square(30.0);
  CHECK_FALSE(support_is_sufficiently_small(wide, s_values));
  CHECK_THROWS_AS(WindowFunction::bump_square(0.0), InvalidParameterError);
  CHECK_THROWS_AS(WindowFunction::mollifier(-1.0), InvalidParameterError);
  CHECK(narrow.scaled(3.0).ft(0.0) == doctest::Approx(3.0 * narrow.ft(0.0)));
}
