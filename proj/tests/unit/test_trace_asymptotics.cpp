#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "kwlab/asymptotics.hpp"
#include "kwlab/error.hpp"
#include "kwlab/trace.hpp"
#include "oracles.hpp"

using namespace kwlab;

TEST_CASE("uniform grid covers both endpoints") {
  const auto g = uniform_grid(-1.0, 1.0, 0.25);
  REQUIRE(g.size() == 9);
  CHECK(g.front() == -1.0);
  CHECK(g.back() == doctest::Approx(1.0));
}

TEST_CASE("taper vanishes at the band edges") {
  CHECK(taper_value(TaperKind::Bump, 0.0) == 0.0);
  CHECK(taper_value(TaperKind::Bump, 1.0) == 0.0);
  CHECK(taper_value(TaperKind::Bump, 0.5) == doctest::Approx(1.0));
  CHECK(taper_value(TaperKind::LowPass, 0.0) == doctest::Approx(1.0));
  CHECK(taper_value(TaperKind::LowPass, 1.0) == 0.0);
  CHECK(parse_taper("lowpass") == TaperKind::LowPass);
}

TEST_CASE("trace of a single level is a tapered plane wave") {
  const std::vector<LevelContribution> levels{{0, 3.0, 2.0, 0}};
  const auto grid = uniform_grid(-2.0, 2.0, 0.5);
  const auto tp = trace_from_levels(levels, 6.0, grid);
  const double chi = taper_value(TaperKind::Bump, 0.5);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(tp.value[i].real() == doctest::Approx(2.0 * chi * std::cos(3.0 * grid[i])));
    CHECK(tp.value[i].imag() == doctest::Approx(2.0 * chi * std::sin(3.0 * grid[i])));
  }
}

TEST_CASE("peak detection finds planted peaks and nothing else") {
  TraceProfile tp;
  tp.t = uniform_grid(-10.0, 10.0, 0.01);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> noise(0.5, 1.5);
  const double centers[] = {-6.0, 0.0, 2.5, 7.25};
  for (double t : tp.t) {
    double v = 1e-3 * noise(rng);
    for (double c : centers) v += std::exp(-std::pow((t - c) / 0.05, 2));
    tp.value.emplace_back(v, 0.0);
  }
  const auto rep = detect_singular_support(tp);
  REQUIRE(rep.peaks.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(rep.peaks[i].t == doctest::Approx(centers[i]).epsilon(1e-9).scale(1.0));
    CHECK(std::abs(rep.peaks[i].t_refined - centers[i]) < 0.01);
    CHECK(rep.peaks[i].half_width > 0.0);
  }
}

TEST_CASE("growth-exponent fit recovers a power law") {
  std::vector<double> x, y;
  for (int i = 0; i < 20; ++i) {
    x.push_back(10.0 * std::pow(1.3, i));
    y.push_back(3.0 * std::pow(x.back(), 1.5) * (1.0 + 0.01 * std::sin(i)));
  }
  const auto fit = fit_growth_exponent(x, y);
  const auto ref = oracle::ols_loglog(x, y);
  CHECK(fit.slope == doctest::Approx(ref.slope).epsilon(1e-12));
  CHECK(fit.slope == doctest::Approx(1.5).epsilon(1e-2));
  CHECK(fit.half_width < 0.01);
  CHECK(fit.points == 20);
}

TEST_CASE("fit rejects short or narrow data") {
  const std::vector<double> x{1, 2, 3}, y{1, 2, 3};
  CHECK_THROWS_AS(fit_growth_exponent(x, y), InvalidParameterError);
  std::vector<double> xn, yn;
  for (int i = 0; i < 10; ++i) {
    xn.push_back(1.0 + 0.1 * i);
    yn.push_back(xn.back());
  }
  CHECK_THROWS_AS(fit_growth_exponent(xn, yn), InvalidParameterError);
}

TEST_CASE("torus main term reproduces 8 eps (1 - c^2)^{-1/2} lambda / 2pi") {
  constexpr double pi = std::numbers::pi;
  const double c = std::sqrt(0.5), eps = 0.25;
  auto pred = leading_coeff(2, 1, c, WindowFunction::sharp(eps), 2 * pi, {});
  pred.universal_constant = 2.0 / (pi * pi);
  CHECK(pred.exponent == 1);
  CHECK(pred.predict(3000.0) == doctest::Approx(8 * eps / std::sqrt(1 - c * c) * 3000.0 / (2 * pi)).epsilon(1e-14));
}

TEST_CASE("fuzzy main term sums the transform over components") {
  const auto w = WindowFunction::bump_square(30.0);
  const double s = 25.0 * std::numbers::pi / 2.0;
  const auto pred = leading_coeff(2, 1, 0.6, w, 2 * std::numbers::pi, {0.0, s, -s});
  const auto p0 = leading_coeff(2, 1, 0.6, w, 2 * std::numbers::pi, {0.0});
  CHECK(pred.base / p0.base == doctest::Approx((w.ft(0) + 2 * w.ft(s)) / w.ft(0)).epsilon(1e-14));
}

TEST_CASE("verdict helpers") {
  CHECK(verdict_rel("a", "x", 1.02, 1.0, 0.03).pass);
  CHECK_FALSE(verdict_rel("a", "x", 1.04, 1.0, 0.03).pass);
  CHECK(verdict_abs("b", "x", 0.1, 0.0, 0.15).pass);
  CHECK(verdict_range("c", "x", -0.9, -1.3, -0.7).pass);
  CHECK_FALSE(verdict_range("c", "x", -0.6, -1.3, -0.7).pass);
  CHECK_FALSE(verdict_flag("d", "x", false).pass);
}
