#pragma once

// Test-side reference computations. Nothing here calls into kwlab.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <vector>

namespace oracle {

using i128 = __int128;

inline constexpr double pi = std::numbers::pi;

// c^2 = c2n / c2d and eps = en / ed as reduced-or-not positive rationals.
struct RationalLadder {
  std::int64_t c2n, c2d, en, ed;
};

// Closed test ||k| - c sqrt(R)| <= eps with integer arithmetic; k = |tangential part|, R = |j|^2.
inline bool ladder_member_1d(std::int64_t k, std::int64_t R, const RationalLadder& L) {
  // c sqrt(R) <= k + eps  <=>  c2n R ed^2 <= c2d (k ed + en)^2
  const i128 lhs = static_cast<i128>(L.c2n) * R * L.ed * L.ed;
  const i128 up = static_cast<i128>(k) * L.ed + L.en;
  if (lhs > static_cast<i128>(L.c2d) * up * up) return false;
  const i128 lo = static_cast<i128>(k) * L.ed - L.en;
  if (lo <= 0) return true;
  return static_cast<i128>(L.c2d) * lo * lo <= lhs;
}

// Per-shell counts of j in Z^2 with |j|^2 = R <= r_max and ||j_1| - c|j|| <= eps.
inline std::vector<std::uint64_t> torus2_ladder_shell_counts(std::int64_t r_max, const RationalLadder& L) {
  std::vector<std::uint64_t> out(static_cast<std::size_t>(r_max) + 1, 0);
  const auto b = static_cast<std::int64_t>(std::sqrt(static_cast<double>(r_max))) + 1;
  for (std::int64_t x = -b; x <= b; ++x)
    for (std::int64_t y = -b; y <= b; ++y) {
      const std::int64_t R = x * x + y * y;
      if (R > r_max) continue;
      if (ladder_member_1d(x < 0 ? -x : x, R, L)) ++out[static_cast<std::size_t>(R)];
    }
  return out;
}

// #{j in Z^n : |j|^2 = R}.
inline std::uint64_t lattice_shell(int n, std::int64_t R) {
  const auto b = static_cast<std::int64_t>(std::sqrt(static_cast<double>(R))) + 1;
  std::vector<std::int64_t> j(static_cast<std::size_t>(n), -b);
  std::uint64_t count = 0;
  while (true) {
    std::int64_t s = 0;
    for (auto v : j) s += v * v;
    if (s == R) ++count;
    std::size_t i = 0;
    while (i < j.size() && j[i] == b) j[i++] = -b;
    if (i == j.size()) break;
    ++j[i];
  }
  return count;
}

// Dimension of degree-N harmonic polynomials in m variables, as the kernel of the Laplacian P_N -> P_{N-2}.
inline std::int64_t harmonic_dimension(int m, int N) {
  std::vector<std::vector<int>> src, dst;
  auto gen = [&](int deg, std::vector<std::vector<int>>& out) {
    std::vector<int> e(static_cast<std::size_t>(m), 0);
    auto rec = [&](auto&& self, int i, int left) -> void {
      if (i == m - 1) {
        e[static_cast<std::size_t>(i)] = left;
        out.push_back(e);
        return;
      }
      for (int k = 0; k <= left; ++k) {
        e[static_cast<std::size_t>(i)] = k;
        self(self, i + 1, left - k);
      }
    };
    rec(rec, 0, deg);
  };
  gen(N, src);
  if (N < 2) return static_cast<std::int64_t>(src.size());
  gen(N - 2, dst);
  std::map<std::vector<int>, int> row;
  for (std::size_t r = 0; r < dst.size(); ++r) row[dst[r]] = static_cast<int>(r);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dst.size()), static_cast<Eigen::Index>(src.size()));
  for (std::size_t col = 0; col < src.size(); ++col)
    for (int i = 0; i < m; ++i) {
      const int k = src[col][static_cast<std::size_t>(i)];
      if (k < 2) continue;
      auto e = src[col];
      e[static_cast<std::size_t>(i)] -= 2;
      A(row.at(e), static_cast<Eigen::Index>(col)) += k * (k - 1);
    }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  return static_cast<std::int64_t>(src.size()) - lu.rank();
}

// Legendre P_N by the three-term recurrence.
inline double legendre(std::int64_t N, double x) {
  if (N == 0) return 1.0;
  double p0 = 1.0, p1 = x;
  for (std::int64_t k = 1; k < N; ++k) {
    const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

// Eigenspace weight W(N, M) of S^2 along a great circle, both signs of M together.
// W = int_0^{2pi} (2N+1)/(4pi) P_N(cos phi) e^{-iM phi} dphi summed over +-M; trapezoid is exact here.
inline double s2_great_circle_weight(std::int64_t N, std::int64_t M) {
  const std::int64_t q = 2 * N + 2 * M + 4;
  double s = 0.0;
  for (std::int64_t i = 0; i < q; ++i) {
    const double phi = 2.0 * pi * static_cast<double>(i) / static_cast<double>(q);
    s += legendre(N, std::cos(phi)) * std::cos(static_cast<double>(M) * phi);
  }
  s *= 2.0 * pi / static_cast<double>(q) * (2.0 * N + 1.0) / (4.0 * pi);
  return M == 0 ? s : 2.0 * s;
}

// Same on S^3 from Pi_N(u) = (N+1) sin((N+1)u) / (2 pi^2 sin u).
inline double s3_great_circle_weight(std::int64_t N, std::int64_t M) {
  const std::int64_t q = 2 * N + 2 * M + 5;
  double s = 0.0;
  for (std::int64_t i = 0; i < q; ++i) {
    const double u = 2.0 * pi * static_cast<double>(i) / static_cast<double>(q);
    const double su = std::sin(u);
    const double k = std::abs(su) < 1e-14 ? static_cast<double>(N + 1) : std::sin((N + 1.0) * u) / su;
    s += (N + 1.0) * k / (2.0 * pi * pi) * std::cos(static_cast<double>(M) * u);
  }
  s *= 2.0 * pi / static_cast<double>(q);
  return M == 0 ? s : 2.0 * s;
}

// |a_m|^2 for Y_N^0 on a meridian, a_m = int Y(phi) e^{-im phi} / sqrt(2pi).
inline double zonal_meridian_weight(std::int64_t N, std::int64_t m) {
  const std::int64_t q = 2 * N + 2 * (m < 0 ? -m : m) + 4;
  double s = 0.0;
  for (std::int64_t i = 0; i < q; ++i) {
    const double phi = 2.0 * pi * static_cast<double>(i) / static_cast<double>(q);
    s += legendre(N, std::cos(phi)) * std::cos(static_cast<double>(m) * phi);
  }
  s *= 2.0 * pi / static_cast<double>(q);
  const double a = std::sqrt((2.0 * N + 1.0) / (4.0 * pi)) * s / std::sqrt(2.0 * pi);
  return a * a;
}

// |a_m|^2 for m = 0..N in one pass.
inline std::vector<double> zonal_meridian_weights(std::int64_t N) {
  const std::int64_t q = 4 * N + 4;
  std::vector<double> p(static_cast<std::size_t>(q)), phi(static_cast<std::size_t>(q));
  for (std::int64_t i = 0; i < q; ++i) {
    phi[static_cast<std::size_t>(i)] = 2.0 * pi * static_cast<double>(i) / static_cast<double>(q);
    p[static_cast<std::size_t>(i)] = legendre(N, std::cos(phi[static_cast<std::size_t>(i)]));
  }
  std::vector<double> out;
  for (std::int64_t m = 0; m <= N; ++m) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += p[i] * std::cos(static_cast<double>(m) * phi[i]);
    s *= 2.0 * pi / static_cast<double>(q);
    const double a = std::sqrt((2.0 * N + 1.0) / (4.0 * pi)) * s / std::sqrt(2.0 * pi);
    out.push_back(a * a);
  }
  return out;
}

// int_0^{2pi} |Y_N^0(phi)|^2 dphi on a meridian.
inline double zonal_meridian_norm(std::int64_t N) {
  const std::int64_t q = 4 * N + 4;
  double s = 0.0;
  for (std::int64_t i = 0; i < q; ++i) {
    const double p = legendre(N, std::cos(2.0 * pi * static_cast<double>(i) / static_cast<double>(q)));
    s += p * p;
  }
  return s * 2.0 * pi / static_cast<double>(q) * (2.0 * N + 1.0) / (4.0 * pi);
}

struct Line {
  double slope = 0.0;
  double intercept = 0.0;
};

inline Line ols_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  Line l;
  l.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  l.intercept = (sy - l.slope * sx) / n;
  return l;
}

// int f(x) cos(tau x) dx over [-X, X] by composite Simpson.
template <class F>
inline double cosine_transform(F&& f, double tau, double X, int panels) {
  const double h = 2.0 * X / panels;
  double s = f(-X) * std::cos(-tau * X) + f(X) * std::cos(tau * X);
  for (int i = 1; i < panels; ++i) {
    const double x = -X + h * i;
    s += (i % 2 ? 4.0 : 2.0) * f(x) * std::cos(tau * x);
  }
  return s * h / 3.0;
}

}  // namespace oracle
