#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kwlab/joint_spectrum.hpp"
#include "kwlab/legendre.hpp"
#include "kwlab/restriction_weights.hpp"
#include "oracles.hpp"

using namespace kwlab;

TEST_CASE("torus mode weight is (2pi)^{d-n} on matching tangential part") {
  const std::int64_t j[] = {3, -4};
  const std::int64_t k_hit[] = {3};
  const std::int64_t k_miss[] = {-3};
  CHECK(torus_mode_weight(j, k_hit) == doctest::Approx(1.0 / (2 * std::numbers::pi)));
  CHECK(torus_mode_weight(j, k_miss) == 0.0);
  CHECK(torus_unit_weight(3, 1) == doctest::Approx(std::pow(2 * std::numbers::pi, -2)));
}

TEST_CASE("Legendre catalog p_j = 4^-j C(2j, j)") {
  LegendreCatalog cat(50);
  CHECK(cat.p(0) == 1.0);
  CHECK(cat.p(1) == doctest::Approx(0.5));
  CHECK(cat.p(2) == doctest::Approx(0.375));
  CHECK(cat.p(3) == doctest::Approx(0.3125));
  // p_j ~ 1 / sqrt(pi j)
  CHECK(cat.p(50) * std::sqrt(std::numbers::pi * 50) == doctest::Approx(1.0).epsilon(3e-3));
}

TEST_CASE("legendre_p matches the recurrence oracle") {
  for (int N : {0, 1, 2, 7, 40, 301})
    for (double x : {-1.0, -0.3, 0.0, 0.5, 0.99}) CHECK(legendre_p(N, x) == doctest::Approx(oracle::legendre(N, x)).epsilon(1e-12));
}

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2n-1") {
  const auto rule = gauss_legendre(6);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], 10);
  CHECK(s == doctest::Approx(2.0 / 11.0).epsilon(1e-13));
  const auto jac = gauss_jacobi(5, 0.5, 0.5);
  double w = 0.0;
  for (double x : jac.weights) w += x;
  CHECK(w == doctest::Approx(std::numbers::pi / 2).epsilon(1e-13));
}

TEST_CASE("zonal meridian coefficients match quadrature") {
  for (std::int64_t N : {0, 1, 2, 5, 12, 37, 100}) {
    const auto profile = zonal_meridian_profile(N);
    for (const auto& zc : profile) {
      const double ref = oracle::zonal_meridian_weight(N, zc.m);
      if (ref > 1e-14)
        CHECK(zc.weight == doctest::Approx(ref).epsilon(1e-10));
      else
        CHECK(std::abs(zc.weight) < 1e-14);
    }
  }
}

TEST_CASE("P_2(cos phi) = 1/4 + (3/4) cos 2phi on a meridian") {
  const auto profile = zonal_meridian_profile(2);
  double w0 = 0.0, w2 = 0.0;
  for (const auto& zc : profile) {
    if (zc.m == 0) w0 = zc.weight;
    if (zc.m == 2) w2 = zc.weight;
  }
  // a_0 ~ 1/4, a_{+-2} ~ 3/8
  REQUIRE(w0 > 0.0);
  CHECK(w2 / w0 == doctest::Approx(9.0 / 4.0).epsilon(1e-14));
}

TEST_CASE("zonal restricted norm matches quadrature") {
  LegendreCatalog cat(1200);
  for (std::int64_t N : {4, 50, 300})
    CHECK(zonal_restricted_norm(N, cat) == doctest::Approx(oracle::zonal_meridian_norm(N)).epsilon(1e-10));
}

TEST_CASE("S^2 great-circle weights: p-product, quadrature and oracle agree") {
  LegendreCatalog cat(600);
  for (std::int64_t N : {0, 1, 4, 9, 64, 200}) {
    SphereJumpEvaluator ev(2, 1, 0.0, N);
    for (std::int64_t M = 0; M <= N + 2; ++M) {
      const double ref = oracle::s2_great_circle_weight(N, M);
      const double pp = great_circle_jump_s2(N, M, cat);
      const double q = ev.weight(M);
      CHECK(pp == doctest::Approx(ref).epsilon(1e-10).scale(1.0));
      CHECK(q == doctest::Approx(ref).epsilon(1e-10).scale(1.0));
      if (M > N || (N - M) % 2 != 0) {
        CHECK(pp == 0.0);
        CHECK(q == 0.0);
      }
    }
  }
}

TEST_CASE("S^3 great-circle weights match the closed-form kernel") {
  for (std::int64_t N : {3, 8, 33}) {
    SphereJumpEvaluator ev(3, 1, 0.0, N);
    for (std::int64_t M = 0; M <= N; ++M)
      CHECK(ev.weight(M) == doctest::Approx(oracle::s3_great_circle_weight(N, M)).epsilon(1e-10).scale(1.0));
  }
  // W(N, M) = 2(N+1)/pi for M <= N with N - M even and M > 0.
  CHECK(sphere_eigenspace_jump(3, 1, 20, 6) == doctest::Approx(2.0 * 21 / std::numbers::pi).epsilon(1e-12));
}

TEST_CASE("Parseval per level on tori and spheres") {
  struct Case {
    ManifoldSpec m;
    SubmanifoldSpec h;
    double lambda;
  };
  const Case cases[] = {
      {ManifoldSpec::torus(2), SubmanifoldSpec::coordinate_subtorus(1), 40.0},
      {ManifoldSpec::torus(3), SubmanifoldSpec::coordinate_subtorus(2), 12.0},
      {ManifoldSpec::sphere(2), SubmanifoldSpec::great_subsphere(1), 60.0},
      {ManifoldSpec::sphere(3), SubmanifoldSpec::great_subsphere(2), 30.0},
  };
  for (const auto& cs : cases) {
    auto sp = make_spectrum(cs.m, cs.h, cs.lambda);
    const double ratio = hausdorff_volume(cs.h, cs.m) / ambient_volume(cs.m);
    for (const auto& level : sp->levels(cs.lambda)) {
      double sum = 0.0;
      sp->for_each_mode_at_level(level, std::nullopt, [&](const JointMode& jm) { sum += jm.weight; });
      const double expect = static_cast<double>(level.multiplicity) * ratio;
      CHECK(sum == doctest::Approx(expect).epsilon(1e-10));
      CHECK(sp->parseval(level) == doctest::Approx(expect).epsilon(1e-10));
    }
  }
}
