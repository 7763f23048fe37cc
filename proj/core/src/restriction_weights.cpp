#include "kwlab/restriction_weights.hpp"

#include <cmath>
#include <numbers>

#include "kwlab/error.hpp"

namespace kwlab {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double torus_unit_weight(int n, int d) {
  if (d < 0 || d > n) throw InvalidParameterError("subtorus dimension out of range");
  return std::pow(kTwoPi, d - n);
}

double torus_mode_weight(std::span<const std::int64_t> j, std::span<const std::int64_t> k) {
  if (k.size() > j.size() || j.empty()) throw InvalidParameterError("lattice vector dimension mismatch");
  for (std::size_t i = 0; i < k.size(); ++i)
    if (j[i] != k[i]) return 0.0;
  return torus_unit_weight(static_cast<int>(j.size()), static_cast<int>(k.size()));
}

std::vector<ZonalCoefficient> zonal_meridian_profile(std::int64_t degree, const LegendreCatalog& catalog) {
  if (degree < 0) throw InvalidParameterError("degree must be >= 0");
  if (catalog.max_index() < degree) throw RangeError("Legendre catalog too small");
  std::vector<ZonalCoefficient> out;
  const double scale = (2.0 * static_cast<double>(degree) + 1.0) / 2.0;
  for (std::int64_t m = -degree; m <= degree; m += 2) {
    const double c = catalog.p((degree - m) / 2) * catalog.p((degree + m) / 2);
    out.push_back({m, scale * c * c});
  }
  return out;
}

std::vector<ZonalCoefficient> zonal_meridian_profile(std::int64_t degree) {
  return zonal_meridian_profile(degree, LegendreCatalog(std::max<std::int64_t>(degree, 0)));
}

double zonal_restricted_norm(std::int64_t degree, const LegendreCatalog& catalog) {
  double s = 0.0;
  for (const auto& z : zonal_meridian_profile(degree, catalog)) s += z.weight;
  return s;
}

double great_circle_jump_s2(std::int64_t degree, std::int64_t tangential_degree, const LegendreCatalog& catalog) {
  if (degree < 0 || tangential_degree < 0) throw InvalidParameterError("degrees must be >= 0");
  if (tangential_degree > degree || (degree - tangential_degree) % 2 != 0) return 0.0;
  const double prod = catalog.p((degree - tangential_degree) / 2) * catalog.p((degree + tangential_degree) / 2);
  const double dim = 2.0 * static_cast<double>(degree) + 1.0;
  return tangential_degree == 0 ? 0.5 * dim * prod : dim * prod;
}

double sphere_projector_kernel(int n, std::int64_t degree, double t) {
  const double alpha = 0.5 * (n - 1);
  return static_cast<double>(sphere_multiplicity(n, degree)) / unit_sphere_volume(n) *
         gegenbauer_normalized(degree, alpha, t);
}

SphereJumpEvaluator::SphereJumpEvaluator(int n, int d, double a, std::int64_t degree, int nodes)
    : n_(n), d_(d), a_(a), r_(std::sqrt(1.0 - a * a)), degree_(degree) {
  if (n < 2 || d < 1 || d > n - 1) throw InvalidParameterError("need 1 <= d <= n-1 and n >= 2");
  if (!(a >= 0.0 && a < 1.0)) throw InvalidParameterError("latitude height must lie in [0, 1)");
  if (degree < 0) throw InvalidParameterError("degree must be >= 0");
  const double alpha = 0.5 * (n - 1);
  const double dim = static_cast<double>(sphere_multiplicity(n, degree)) / unit_sphere_volume(n);
  if (d == 1) {
    const auto min_nodes = static_cast<int>(2 * degree + 2);
    if (nodes == 0) nodes = min_nodes;
    if (nodes < degree + 1) throw InvalidParameterError("trapezoid grid too coarse for the kernel degree");
    nodes_.resize(static_cast<std::size_t>(nodes));
    qweights_.assign(nodes_.size(), kTwoPi / nodes);
    for (int i = 0; i < nodes; ++i) nodes_[static_cast<std::size_t>(i)] = kTwoPi * i / nodes;
  } else {
    const auto min_nodes = static_cast<int>(degree + 1);
    if (nodes == 0) nodes = min_nodes;
    if (nodes < (degree + 2) / 2) throw InvalidParameterError("Gauss grid too coarse for the kernel degree");
    const double jac = 0.5 * (d - 2);
    auto rule = gauss_jacobi(nodes, jac, jac);
    nodes_ = std::move(rule.nodes);
    qweights_ = std::move(rule.weights);
  }
  kernel_.resize(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const double t = d == 1 ? std::cos(nodes_[i]) : nodes_[i];
    kernel_[i] = dim * gegenbauer_normalized(degree, alpha, r_ * r_ * t + a_ * a_);
  }
}

double SphereJumpEvaluator::weight(std::int64_t tangential_degree) const {
  if (tangential_degree < 0) throw InvalidParameterError("tangential degree must be >= 0");
  if (tangential_degree > degree_) return 0.0;
  const auto M = tangential_degree;
  // Antipodal parity: on a great subsphere the kernel profile has parity (-1)^N.
  if (a_ == 0.0 && (degree_ - M) % 2 != 0) return 0.0;
  if (d_ == 1) {
    const auto q = static_cast<std::int64_t>(nodes_.size());
    if (q < degree_ + M + 1) throw InvalidParameterError("trapezoid grid too coarse for (N, M)");
    double s = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const double basis = M == 0 ? 1.0 : 2.0 * std::cos(static_cast<double>(M) * nodes_[i]);
      s += qweights_[i] * kernel_[i] * basis;
    }
    return r_ * s;
  }
  const auto q = static_cast<std::int64_t>(nodes_.size());
  if (2 * q - 1 < degree_ + M) throw InvalidParameterError("Gauss grid too coarse for (N, M)");
  const double beta = 0.5 * (d_ - 1);
  double s = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    s += qweights_[i] * kernel_[i] * gegenbauer_normalized(M, beta, nodes_[i]);
  return static_cast<double>(sphere_multiplicity(d_, M)) * std::pow(r_, d_) * unit_sphere_volume(d_ - 1) * s;
}

double sphere_eigenspace_jump(int n, int d, std::int64_t degree, std::int64_t tangential_degree, double a,
                              int nodes) {
  if (tangential_degree > degree) return 0.0;
  return SphereJumpEvaluator(n, d, a, degree, nodes).weight(tangential_degree);
}

double parseval_diag(const ManifoldSpec& m, const SubmanifoldSpec& h, const SpectralLevel& level) {
  validate_pair(m, h);
  const double mult = static_cast<double>(level.multiplicity);
  if (m.kind == ManifoldKind::Torus) return mult * torus_unit_weight(m.n, h.d);
  return hausdorff_volume(h, m) * mult / unit_sphere_volume(m.n);
}

}  // namespace kwlab
