#include "kwlab/joint_spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "kwlab/error.hpp"
#include "kwlab/restriction_weights.hpp"

namespace kwlab {

namespace {

constexpr double kStripMargin = 1e-9;

std::int64_t floor_square(double x) {
  if (x <= 0.0) return 0;
  auto r = static_cast<std::int64_t>(std::floor(x * x));
  while (r > 0 && std::sqrt(static_cast<double>(r)) > x) --r;
  while (std::sqrt(static_cast<double>(r + 1)) <= x) ++r;
  return r;
}

void compress(const std::vector<std::uint64_t>& dense, std::vector<std::int64_t>& support,
              std::vector<std::uint64_t>& counts) {
  support.clear();
  counts.clear();
  for (std::size_t r = 0; r < dense.size(); ++r)
    if (dense[r]) {
      support.push_back(static_cast<std::int64_t>(r));
      counts.push_back(dense[r]);
    }
}

// Sparse r_dim(R) for R <= r_max.
void shell_support(int dim, std::int64_t r_max, std::vector<std::int64_t>& support,
                   std::vector<std::uint64_t>& counts) {
  if (dim == 1) {
    support.clear();
    counts.clear();
    for (std::int64_t j = 0; j * j <= r_max; ++j) {
      support.push_back(j * j);
      counts.push_back(j == 0 ? 1 : 2);
    }
    return;
  }
  compress(lattice_shell_counts(dim, r_max), support, counts);
}

std::uint64_t lookup(const std::vector<std::int64_t>& support, const std::vector<std::uint64_t>& counts,
                     std::int64_t r) {
  auto it = std::lower_bound(support.begin(), support.end(), r);
  if (it == support.end() || *it != r) return 0;
  return counts[static_cast<std::size_t>(it - support.begin())];
}

}  // namespace

void JointSpectrum::check_capacity(double lambda_max) const {
  if (lambda_max > lambda_capacity() * (1.0 + 1e-12) + 1e-12)
    throw RangeError("lambda " + std::to_string(lambda_max) + " exceeds the enumerated spectral range " +
                     std::to_string(lambda_capacity()));
}

double JointSpectrum::parseval(const SpectralLevel& level) const {
  return parseval_diag(ambient(), submanifold(), level);
}

double JointSpectrum::parseval_mass(double lambda_max) const {
  double s = 0.0;
  for (const auto& l : levels(lambda_max)) s += parseval(l);
  return s;
}

TorusSpectrum::TorusSpectrum(int n, int d, double lambda_capacity)
    : m_(ManifoldSpec::torus(n)),
      h_(SubmanifoldSpec::coordinate_subtorus(d)),
      capacity_(lambda_capacity),
      r_max_(floor_square(lambda_capacity)),
      unit_(torus_unit_weight(n, d)) {
  validate_pair(m_, h_);
  if (lambda_capacity < 0.0) throw InvalidParameterError("lambda capacity must be >= 0");
  shell_support(d, r_max_, tangential_support_, tangential_counts_);
  shell_support(n - d, r_max_, normal_support_, normal_counts_);
}

std::vector<SpectralLevel> TorusSpectrum::levels(double lambda_max) const {
  check_capacity(lambda_max);
  return enumerate_torus_levels(m_.n, lambda_max);
}

ExactSquare TorusSpectrum::level_value(const SpectralLevel& level) const {
  return ExactSquare::from_rational_square(Rational(level.index));
}

std::optional<SpectralLevel> TorusSpectrum::find_level(double lambda) const {
  if (lambda < 0.0) return std::nullopt;
  check_capacity(lambda);
  auto r = static_cast<std::int64_t>(std::llround(lambda * lambda));
  if (std::fabs(std::sqrt(static_cast<double>(r)) - lambda) > 1e-9 * std::max(1.0, lambda)) return std::nullopt;
  std::uint64_t mult = 0;
  for (std::size_t i = 0; i < tangential_support_.size() && tangential_support_[i] <= r; ++i)
    mult += tangential_counts_[i] * lookup(normal_support_, normal_counts_, r - tangential_support_[i]);
  if (mult == 0) return std::nullopt;
  return SpectralLevel{std::sqrt(static_cast<double>(r)), mult, r};
}

void TorusSpectrum::for_each_mode(double lambda_max, const std::optional<StripFilter>& strip,
                                  const ModeVisitor& visit) const {
  check_capacity(lambda_max);
  const std::int64_t r_top = floor_square(lambda_max);
  for (std::size_t i = 0; i < tangential_support_.size(); ++i) {
    const std::int64_t k2 = tangential_support_[i];
    if (k2 > r_top) break;
    std::int64_t q_lo = 0, q_hi = r_top - k2;
    if (strip) {
      const double k = std::sqrt(static_cast<double>(k2));
      const double w = strip->half_width * (1.0 + kStripMargin) + kStripMargin;
      const double lo = std::max(0.0, (k - w) / strip->c);
      const double hi = (k + w) / strip->c;
      if (lo * lo - 1.0 > static_cast<double>(r_top)) continue;
      q_lo = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(lo * lo)) - 1 - k2);
      if (hi * hi < static_cast<double>(r_top)) q_hi = std::min(q_hi, static_cast<std::int64_t>(std::ceil(hi * hi)) + 1 - k2);
      if (q_hi < q_lo) continue;
    }
    const ExactSquare mu = ExactSquare::from_rational_square(Rational(k2));
    auto it = std::lower_bound(normal_support_.begin(), normal_support_.end(), q_lo);
    for (; it != normal_support_.end() && *it <= q_hi; ++it) {
      const std::int64_t r = k2 + *it;
      const auto cnt = tangential_counts_[i] * normal_counts_[static_cast<std::size_t>(it - normal_support_.begin())];
      visit(JointMode{r, ExactSquare::from_rational_square(Rational(r)), mu, unit_ * static_cast<double>(cnt), cnt});
    }
  }
}

void TorusSpectrum::for_each_mode_at_level(const SpectralLevel& level, const std::optional<StripFilter>& strip,
                                           const ModeVisitor& visit) const {
  const std::int64_t r = level.index;
  check_capacity(std::sqrt(static_cast<double>(r)));
  const ExactSquare lam = ExactSquare::from_rational_square(Rational(r));
  for (std::size_t i = 0; i < tangential_support_.size() && tangential_support_[i] <= r; ++i) {
    const std::int64_t k2 = tangential_support_[i];
    if (strip) {
      const double w = strip->half_width * (1.0 + kStripMargin) + kStripMargin;
      if (std::fabs(std::sqrt(static_cast<double>(k2)) - strip->c * lam.value) > w) continue;
    }
    const auto nc = lookup(normal_support_, normal_counts_, r - k2);
    if (nc == 0) continue;
    const auto cnt = tangential_counts_[i] * nc;
    visit(JointMode{r, lam, ExactSquare::from_rational_square(Rational(k2)), unit_ * static_cast<double>(cnt), cnt});
  }
}

SphereSpectrum::SphereSpectrum(int n, SubmanifoldSpec h, std::int64_t degree_capacity, SphereWeightMethod method)
    : m_(ManifoldSpec::sphere(n)), h_(std::move(h)), degree_capacity_(degree_capacity), method_(method) {
  validate_pair(m_, h_);
  if (degree_capacity < 0) throw InvalidParameterError("degree capacity must be >= 0");
  r_ = h_.radius();
  if (h_.a.exact()) {
    Rational r2 = Rational(1) - *h_.a.square;
    inv_r2_ = Rational(1) / r2;
  }
  if (method_ == SphereWeightMethod::ClosedForm) {
    if (n != 2 || h_.d != 1 || h_.a.value != 0.0)
      throw InvalidParameterError("closed-form weights exist only for great circles on the 2-sphere");
    catalog_ = std::make_shared<LegendreCatalog>(degree_capacity);
  }
}

std::vector<SpectralLevel> SphereSpectrum::levels(double lambda_max) const {
  check_capacity(lambda_max);
  if (lambda_max < 0.0) return {};
  return enumerate_sphere_levels(m_.n, static_cast<std::int64_t>(std::floor(lambda_max + 1e-12)));
}

ExactSquare SphereSpectrum::level_value(const SpectralLevel& level) const {
  return ExactSquare::from_integer(level.index);
}

ExactSquare SphereSpectrum::tangential_value(std::int64_t M) const {
  if (inv_r2_) return ExactSquare::from_rational_square(Rational(M) * Rational(M) * *inv_r2_);
  return ExactSquare::from_double(static_cast<double>(M) / r_);
}

std::optional<SpectralLevel> SphereSpectrum::find_level(double lambda) const {
  if (lambda < 0.0) return std::nullopt;
  check_capacity(lambda);
  auto N = static_cast<std::int64_t>(std::llround(lambda));
  if (std::fabs(static_cast<double>(N) - lambda) > 1e-9 * std::max(1.0, lambda)) return std::nullopt;
  return SpectralLevel{static_cast<double>(N), sphere_multiplicity(m_.n, N), N};
}

double SphereSpectrum::weight(std::int64_t N, std::int64_t M) const {
  if (M > N) return 0.0;
  if (method_ == SphereWeightMethod::ClosedForm) return great_circle_jump_s2(N, M, *catalog_);
  return sphere_eigenspace_jump(m_.n, h_.d, N, M, h_.a.value);
}

void SphereSpectrum::for_each_mode_at_level(const SpectralLevel& level, const std::optional<StripFilter>& strip,
                                            const ModeVisitor& visit) const {
  const std::int64_t N = level.index;
  check_capacity(static_cast<double>(N));
  std::int64_t m_lo = 0, m_hi = N;
  if (strip) {
    const double w = strip->half_width * (1.0 + kStripMargin) + kStripMargin;
    const double center = strip->c * static_cast<double>(N);
    m_lo = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(r_ * (center - w))));
    m_hi = std::min<std::int64_t>(N, static_cast<std::int64_t>(std::ceil(r_ * (center + w))));
    if (m_hi < m_lo) return;
  }
  const ExactSquare lam = ExactSquare::from_integer(N);
  std::optional<SphereJumpEvaluator> eval;
  if (method_ == SphereWeightMethod::Quadrature) eval.emplace(m_.n, h_.d, h_.a.value, N);
  for (std::int64_t M = m_lo; M <= m_hi; ++M) {
    const double w = eval ? eval->weight(M) : great_circle_jump_s2(N, M, *catalog_);
    visit(JointMode{N, lam, tangential_value(M), w});
  }
}

void SphereSpectrum::for_each_mode(double lambda_max, const std::optional<StripFilter>& strip,
                                   const ModeVisitor& visit) const {
  for (const auto& l : levels(lambda_max)) for_each_mode_at_level(l, strip, visit);
}

std::unique_ptr<JointSpectrum> make_spectrum(const ManifoldSpec& m, const SubmanifoldSpec& h,
                                             double lambda_capacity) {
  validate_pair(m, h);
  if (m.kind == ManifoldKind::Torus) return std::make_unique<TorusSpectrum>(m.n, h.d, lambda_capacity);
  return std::make_unique<SphereSpectrum>(m.n, h, static_cast<std::int64_t>(std::floor(lambda_capacity)));
}

}  // namespace kwlab
