#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kwlab/error.hpp"
#include "kwlab/joint_spectrum.hpp"
#include "kwlab/ladder_sums.hpp"
#include "kwlab/restriction_weights.hpp"
#include "oracles.hpp"

using namespace kwlab;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double brute_sharp(double lambda, const oracle::RationalLadder& L) {
  const auto r_max = static_cast<std::int64_t>(std::floor(lambda * lambda + 1e-9));
  const auto shells = oracle::torus2_ladder_shell_counts(r_max, L);
  std::uint64_t total = 0;
  for (auto v : shells) total += v;
  return static_cast<double>(total) / two_pi;
}

}  // namespace

TEST_CASE("sharp torus sum equals the brute-force lattice count") {
  TorusSpectrum sp(2, 1, 80.0);
  SUBCASE("c = 3/5, eps = 1/4, lambda = 40") {
    const auto ladder = LadderWindow::make(parse_exact("3/5"), WindowFunction::sharp(parse_exact("1/4")));
    CHECK(sharp_ladder_sum(sp, ladder, 40.0) == doctest::Approx(brute_sharp(40.0, {9, 25, 1, 4})).epsilon(1e-13));
  }
  SUBCASE("c = 1/sqrt2 at every level up to 80") {
    const auto ladder = LadderWindow::make(parse_exact("sqrt(1/2)"), WindowFunction::sharp(parse_exact("1/4")));
    const auto shells = oracle::torus2_ladder_shell_counts(6400, {1, 2, 1, 4});
    const auto contrib = ladder_level_contributions(sp, ladder, 80.0);
    std::uint64_t expect = 0;
    std::size_t next = 0;
    for (std::int64_t R = 0; R <= 6400; ++R) {
      if (shells[static_cast<std::size_t>(R)] == 0) continue;
      REQUIRE(next < contrib.size());
      CHECK(contrib[next].level_index == R);
      CHECK(contrib[next].count == shells[static_cast<std::size_t>(R)]);
      expect += shells[static_cast<std::size_t>(R)];
      ++next;
    }
    CHECK(next == contrib.size());
    SumDiagnostics diag;
    const double s = sharp_ladder_sum(sp, ladder, 80.0, &diag);
    CHECK(s == doctest::Approx(static_cast<double>(expect) / two_pi).epsilon(1e-13));
    REQUIRE(diag.count.has_value());
    CHECK(*diag.count == expect);
    CHECK(diag.float_tests == 0);
  }
}

TEST_CASE("fuzzy torus sum equals direct lattice summation") {
  TorusSpectrum sp(2, 1, 40.0);
  const auto w = WindowFunction::bump_square(2.0);
  const auto ladder = LadderWindow::make(parse_exact("3/5"), w);
  double direct = 0.0;
  for (int x = -40; x <= 40; ++x)
    for (int y = -40; y <= 40; ++y) {
      const double r = std::sqrt(double(x * x + y * y));
      if (r <= 30.0) direct += w(std::abs(x) - 0.6 * r) / two_pi;
    }
  CHECK(fuzzy_ladder_sum(sp, ladder, 30.0, nullptr, 1e-12) == doctest::Approx(direct).epsilon(1e-9));
}

TEST_CASE("jump sums accumulate to the ladder sum") {
  const auto ladder = LadderWindow::make(parse_exact("1/2"), WindowFunction::sharp(parse_exact("1/4")));
  TorusSpectrum torus(2, 1, 100.0);
  SphereSpectrum sphere(2, SubmanifoldSpec::great_subsphere(1), 100);
  for (const JointSpectrum* sp : {static_cast<const JointSpectrum*>(&torus), static_cast<const JointSpectrum*>(&sphere)}) {
    double acc = 0.0;
    for (const auto& level : sp->levels(100.0)) acc += jump_at(*sp, ladder, level.value);
    CHECK(acc == doctest::Approx(sharp_ladder_sum(*sp, ladder, 100.0)).epsilon(1e-12));
  }
}

TEST_CASE("sphere jumps: zero at odd N and constant in N") {
  SphereSpectrum sp(2, SubmanifoldSpec::great_subsphere(1), 400);
  const auto ladder = LadderWindow::make(parse_exact("1/2"), WindowFunction::sharp(parse_exact("1/4")));
  for (int N : {101, 203, 399}) CHECK(jump_at(sp, ladder, N) == 0.0);
  const double j100 = jump_at(sp, ladder, 100.0);
  const double j400 = jump_at(sp, ladder, 400.0);
  CHECK(j100 == doctest::Approx(oracle::s2_great_circle_weight(100, 50)).epsilon(1e-10));
  CHECK(j400 / j100 == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("epsilon staircase at N = 200 on S^2") {
  SphereSpectrum sp(2, SubmanifoldSpec::great_subsphere(1), 200);
  const auto grid = offset_eps_grid(3.0, 20);
  const auto st = epsilon_staircase(sp, parse_exact("1/2"), 200.0, grid);
  REQUIRE_FALSE(st.membership_breakpoints.empty());
  CHECK(st.membership_breakpoints.front() == doctest::Approx(0.0));  // M = 100 itself
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double expect = 0.0;
    for (std::int64_t M = 0; M <= 200; ++M)
      if (std::abs(M - 100.0) <= grid[i]) expect += oracle::s2_great_circle_weight(200, M);
    CHECK(st.series.y[i] == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("torus staircase at |j|^2 = 625 against the shell") {
  TorusSpectrum sp(2, 1, 30.0);
  const std::vector<double> grid{0.1, 0.5, 1.5, 3.2, 6.9, 12.0};
  const auto st = epsilon_staircase(sp, parse_exact("3/5"), 25.0, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    int count = 0;
    for (int x = -25; x <= 25; ++x)
      for (int y = -25; y <= 25; ++y)
        if (x * x + y * y == 625 && std::abs(std::abs(x) - 15.0) <= grid[i]) ++count;
    CHECK(st.series.y[i] == doctest::Approx(count / two_pi).epsilon(1e-13).scale(1.0));
  }
}

TEST_CASE("ladder slopes are validated") {
  const auto w = WindowFunction::sharp(0.25);
  CHECK_THROWS_AS(LadderWindow::make(parse_exact("1"), w), InvalidParameterError);
  CHECK_THROWS_AS(LadderWindow::make(parse_exact("13/10"), w), InvalidParameterError);
  CHECK_NOTHROW(LadderWindow::forbidden(parse_exact("13/10"), w));
  CHECK_THROWS_AS(LadderWindow::forbidden(parse_exact("1"), w), InvalidParameterError);
}

TEST_CASE("forbidden region carries exact zeros") {
  TorusSpectrum torus(2, 1, 60.0);
  SphereSpectrum sphere(2, SubmanifoldSpec::great_subsphere(1), 60);
  for (const JointSpectrum* sp : {static_cast<const JointSpectrum*>(&torus), static_cast<const JointSpectrum*>(&sphere)}) {
    int visited = 0;
    sp->for_each_mode(60.0, std::nullopt, [&](const JointMode& m) {
      ++visited;
      if (m.mu.value > m.lambda.value + 1e-12) CHECK(m.weight == 0.0);
    });
    CHECK(visited > 0);
  }
  SphereJumpEvaluator ev(2, 1, 0.0, 40);
  for (int M = 41; M < 60; ++M) CHECK(ev.weight(M) == 0.0);
}

TEST_CASE("midpoint grid sits strictly between levels") {
  TorusSpectrum sp(2, 1, 20.0);
  const auto grid = midpoint_grid(sp, 20.0, 1000);
  const auto levels = sp.levels(20.0);
  REQUIRE(grid.size() + 1 == levels.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(grid[i] > levels[i].value);
    CHECK(grid[i] < levels[i + 1].value);
  }
  CHECK(midpoint_grid(sp, 20.0, 10).size() <= 10);
}
