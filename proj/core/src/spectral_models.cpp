#include "kwlab/spectral_models.hpp"

#include <cmath>
#include <numbers>

#include "kwlab/error.hpp"

namespace kwlab {

ManifoldSpec ManifoldSpec::torus(int n) {
  if (n < 1) throw InvalidParameterError("torus dimension must be >= 1");
  return {ManifoldKind::Torus, n};
}

ManifoldSpec ManifoldSpec::sphere(int n) {
  if (n < 1) throw InvalidParameterError("sphere dimension must be >= 1");
  return {ManifoldKind::Sphere, n};
}

std::string ManifoldSpec::name() const {
  return (kind == ManifoldKind::Torus ? "torus" : "sphere") + std::to_string(n);
}

SubmanifoldSpec SubmanifoldSpec::coordinate_subtorus(int d) {
  if (d < 1) throw InvalidParameterError("subtorus dimension must be >= 1");
  return {SubmanifoldKind::CoordinateSubtorus, d, ExactSquare::from_integer(0)};
}

SubmanifoldSpec SubmanifoldSpec::great_subsphere(int d) {
  if (d < 1) throw InvalidParameterError("subsphere dimension must be >= 1");
  return {SubmanifoldKind::GreatSubsphere, d, ExactSquare::from_integer(0)};
}

SubmanifoldSpec SubmanifoldSpec::latitude_subsphere(int d, ExactSquare a) {
  if (d < 1) throw InvalidParameterError("subsphere dimension must be >= 1");
  if (!(a.value >= 0.0 && a.value < 1.0)) throw InvalidParameterError("latitude height must lie in [0, 1)");
  return {SubmanifoldKind::LatitudeSubsphere, d, a};
}

SubmanifoldSpec SubmanifoldSpec::meridian_circle() {
  return {SubmanifoldKind::MeridianCircle, 1, ExactSquare::from_integer(0)};
}

double SubmanifoldSpec::radius() const {
  if (kind == SubmanifoldKind::CoordinateSubtorus) return 1.0;
  return std::sqrt(1.0 - a.value * a.value);
}

std::string SubmanifoldSpec::name() const {
  switch (kind) {
    case SubmanifoldKind::CoordinateSubtorus: return "subtorus" + std::to_string(d);
    case SubmanifoldKind::GreatSubsphere: return "great" + std::to_string(d);
    case SubmanifoldKind::LatitudeSubsphere: return "latitude" + std::to_string(d);
    case SubmanifoldKind::MeridianCircle: return "meridian";
  }
  return "?";
}

void validate_pair(const ManifoldSpec& m, const SubmanifoldSpec& h) {
  if (h.d < 1 || h.d > m.n - 1) throw InvalidParameterError("submanifold dimension must lie in [1, n-1]");
  const bool torus = m.kind == ManifoldKind::Torus;
  if (torus != (h.kind == SubmanifoldKind::CoordinateSubtorus))
    throw InvalidParameterError("submanifold kind " + h.name() + " does not fit ambient " + m.name());
  if (h.kind == SubmanifoldKind::MeridianCircle && m.n != 2)
    throw InvalidParameterError("meridian circle is defined on the 2-sphere only");
}

std::vector<std::uint64_t> lattice_shell_counts(int n, std::int64_t r_max) {
  if (n < 1) throw InvalidParameterError("lattice dimension must be >= 1");
  if (r_max < 0) return {};
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(r_max) + 1, 0);
  counts[0] = 1;
  // Convolve n times with the one-dimensional square indicator.
  std::vector<std::uint64_t> next(counts.size());
  for (int dim = 0; dim < n; ++dim) {
    std::fill(next.begin(), next.end(), 0);
    for (std::int64_t r = 0; r <= r_max; ++r) {
      std::uint64_t c = counts[static_cast<std::size_t>(r)];
      if (c == 0) continue;
      next[static_cast<std::size_t>(r)] += c;
      for (std::int64_t j = 1; r + j * j <= r_max; ++j) next[static_cast<std::size_t>(r + j * j)] += 2 * c;
    }
    counts.swap(next);
  }
  return counts;
}

std::vector<SpectralLevel> enumerate_torus_levels(int n, double lambda_max) {
  if (n < 1) throw InvalidParameterError("torus dimension must be >= 1");
  if (lambda_max < 0.0) throw InvalidParameterError("lambda_max must be >= 0");
  auto r_max = static_cast<std::int64_t>(std::floor(lambda_max * lambda_max + 1e-9));
  while (r_max > 0 && std::sqrt(static_cast<double>(r_max)) > lambda_max) --r_max;
  auto counts = lattice_shell_counts(n, r_max);
  std::vector<SpectralLevel> out;
  for (std::int64_t r = 0; r <= r_max; ++r) {
    auto c = counts[static_cast<std::size_t>(r)];
    if (c) out.push_back({std::sqrt(static_cast<double>(r)), c, r});
  }
  return out;
}

std::vector<SpectralLevel> enumerate_sphere_levels(int n, std::int64_t degree_max) {
  std::vector<SpectralLevel> out;
  for (std::int64_t N = 0; N <= degree_max; ++N)
    out.push_back({static_cast<double>(N), sphere_multiplicity(n, N), N});
  return out;
}

namespace {

// C(m, k) with overflow detection; zero when m < k.
std::uint64_t binom(std::int64_t m, std::int64_t k) {
  if (k < 0 || m < k) return 0;
  k = std::min(k, m - k);
  u128 r = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    r = r * static_cast<u128>(m - k + i) / static_cast<u128>(i);
    if (r > UINT64_MAX) throw RangeError("binomial overflow");
  }
  return static_cast<std::uint64_t>(r);
}

}  // namespace

std::uint64_t sphere_multiplicity(int n, std::int64_t degree) {
  if (n < 1) throw InvalidParameterError("sphere dimension must be >= 1");
  if (degree < 0) throw InvalidParameterError("degree must be >= 0");
  if (degree == 0) return 1;
  return binom(degree + n, n) - binom(degree + n - 2, n);
}

double unit_sphere_volume(int d) {
  if (d < 0) throw InvalidParameterError("sphere dimension must be >= 0");
  const double h = 0.5 * (d + 1);
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

double hausdorff_volume(const SubmanifoldSpec& h, const ManifoldSpec& ambient) {
  validate_pair(ambient, h);
  if (h.kind == SubmanifoldKind::CoordinateSubtorus) return std::pow(2.0 * std::numbers::pi, h.d);
  return std::pow(h.radius(), h.d) * unit_sphere_volume(h.d);
}

double ambient_volume(const ManifoldSpec& m) {
  if (m.kind == ManifoldKind::Torus) return std::pow(2.0 * std::numbers::pi, m.n);
  return unit_sphere_volume(m.n);
}

}  // namespace kwlab
