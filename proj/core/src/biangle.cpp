#include "kwlab/biangle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "kwlab/error.hpp"

namespace kwlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap(double x) { return x - kTwoPi * std::round(x / kTwoPi); }

void check_slope(double c) {
  if (!(c > 0.0 && c < 1.0)) throw InvalidParameterError("bi-angle slope must lie in (0, 1)");
}

Eigen::VectorXd gaussian(int k, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::VectorXd v(k);
  for (int i = 0; i < k; ++i) v(i) = nd(rng);
  return v;
}

Eigen::VectorXd unit_gaussian(int k, std::mt19937_64& rng) {
  for (;;) {
    Eigen::VectorXd v = gaussian(k, rng);
    if (v.norm() > 1e-3) return v / v.norm();
  }
}

// Orthonormal completion of span(fixed) within span(e_lo .. e_hi-1) of R^dim.
std::vector<Eigen::VectorXd> complement_basis(const std::vector<Eigen::VectorXd>& fixed, int dim, int lo, int hi) {
  std::vector<Eigen::VectorXd> basis;
  std::vector<Eigen::VectorXd> all;
  for (const auto& f : fixed) all.push_back(f.normalized());
  for (int i = lo; i < hi; ++i) {
    Eigen::VectorXd v = Eigen::VectorXd::Unit(dim, i);
    for (const auto& b : all) v -= v.dot(b) * b;
    if (v.norm() < 1e-6) continue;
    v.normalize();
    all.push_back(v);
    basis.push_back(v);
  }
  return basis;
}

// Rotation by angle h in the oriented plane (a, b), a and b orthonormal.
Eigen::VectorXd rotate(const Eigen::VectorXd& v, const Eigen::VectorXd& a, const Eigen::VectorXd& b, double h) {
  const double va = v.dot(a), vb = v.dot(b);
  return v + (std::cos(h) - 1.0) * (va * a + vb * b) + std::sin(h) * (va * b - vb * a);
}

}  // namespace

Eigen::VectorXd BiangleModel::embed(const ConePoint& p) const {
  Eigen::VectorXd e(p.q.size() + p.eta_hat.size() + p.nu.size());
  e << p.q, p.eta_hat, p.nu;
  return e;
}

TorusBiangleModel::TorusBiangleModel(int n, int d) : n_(n), d_(d) {
  if (n < 2 || d < 1 || d > n - 1) throw InvalidParameterError("torus bi-angles need 1 <= d <= n-1");
}

std::string TorusBiangleModel::name() const { return fmt::format("torus{}/subtorus{}", n_, d_); }

ConePoint TorusBiangleModel::make_point(Eigen::VectorXd q, Eigen::VectorXd eta, Eigen::VectorXd nu, double c) const {
  check_slope(c);
  if (q.size() != n_ || eta.size() != n_ || nu.size() != n_) throw InvalidParameterError("torus cone point size");
  q.tail(n_ - d_).setZero();
  eta.tail(n_ - d_).setZero();
  nu.head(d_).setZero();
  if (eta.norm() == 0.0 || nu.norm() == 0.0) throw InvalidParameterError("degenerate cone point");
  eta /= eta.norm();
  nu *= std::sqrt(1.0 - c * c) / nu.norm();
  return {q, eta, nu, c};
}

ConePoint TorusBiangleModel::random_point(double c, std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> ud(0.0, kTwoPi);
  Eigen::VectorXd q = Eigen::VectorXd::Zero(n_), eta = Eigen::VectorXd::Zero(n_), nu = Eigen::VectorXd::Zero(n_);
  for (int i = 0; i < d_; ++i) q(i) = ud(rng);
  eta.head(d_) = unit_gaussian(d_, rng);
  nu.tail(n_ - d_) = unit_gaussian(n_ - d_, rng);
  return make_point(q, eta, nu, c);
}

ConePoint TorusBiangleModel::perturb(const ConePoint& p, int direction, double h) const {
  if (direction < 0 || direction >= cone_dimension()) throw InvalidParameterError("perturbation direction");
  ConePoint out = p;
  if (direction < d_) {
    out.q(direction) += h;
    return out;
  }
  direction -= d_;
  if (direction < d_ - 1) {
    auto basis = complement_basis({p.eta_hat}, n_, 0, d_);
    out.eta_hat = rotate(p.eta_hat, p.eta_hat.normalized(), basis[static_cast<std::size_t>(direction)], h);
    return out;
  }
  direction -= d_ - 1;
  auto basis = complement_basis({p.nu}, n_, d_, n_);
  out.nu = rotate(p.nu, p.nu.normalized(), basis[static_cast<std::size_t>(direction)], h);
  return out;
}

Eigen::VectorXd TorusBiangleModel::residual(const ConePoint& p, double s, double t) const {
  const double L = p.c * s + t;
  const Eigen::VectorXd xi = p.c * p.eta_hat + p.nu;
  const Eigen::VectorXd x = p.q + L * xi;
  Eigen::VectorXd r = Eigen::VectorXd::Zero(n_ + d_);
  for (int i = 0; i < n_ - d_; ++i) r(i) = wrap(x(d_ + i));
  for (int i = 0; i < d_; ++i) r(n_ - d_ + i) = wrap(x(i) - s * p.eta_hat(i) - p.q(i));
  // Straight lines keep the projected covector, so the last d entries vanish identically.
  return r;
}

SphereBiangleModel::SphereBiangleModel(int n, int d) : n_(n), d_(d) {
  if (n < 2 || d < 1 || d > n - 1) throw InvalidParameterError("sphere bi-angles need 1 <= d <= n-1");
}

std::string SphereBiangleModel::name() const { return fmt::format("sphere{}/great{}", n_, d_); }

ConePoint SphereBiangleModel::make_point(Eigen::VectorXd q, Eigen::VectorXd eta, Eigen::VectorXd nu, double c) const {
  check_slope(c);
  const int N = n_ + 1;
  if (q.size() != N || eta.size() != N || nu.size() != N) throw InvalidParameterError("sphere cone point size");
  q.tail(N - d_ - 1).setZero();
  eta.tail(N - d_ - 1).setZero();
  nu.head(d_ + 1).setZero();
  if (q.norm() == 0.0) throw InvalidParameterError("degenerate cone point");
  q.normalize();
  eta -= eta.dot(q) * q;
  if (eta.norm() < 1e-12 || nu.norm() == 0.0) throw InvalidParameterError("degenerate cone point");
  eta.normalize();
  nu *= std::sqrt(1.0 - c * c) / nu.norm();
  return {q, eta, nu, c};
}

ConePoint SphereBiangleModel::random_point(double c, std::mt19937_64& rng) const {
  const int N = n_ + 1;
  Eigen::VectorXd q = Eigen::VectorXd::Zero(N), eta = Eigen::VectorXd::Zero(N), nu = Eigen::VectorXd::Zero(N);
  q.head(d_ + 1) = unit_gaussian(d_ + 1, rng);
  eta.head(d_ + 1) = gaussian(d_ + 1, rng);
  nu.tail(n_ - d_) = unit_gaussian(n_ - d_, rng);
  return make_point(q, eta, nu, c);
}

ConePoint SphereBiangleModel::perturb(const ConePoint& p, int direction, double h) const {
  if (direction < 0 || direction >= cone_dimension()) throw InvalidParameterError("perturbation direction");
  const int N = n_ + 1;
  ConePoint out = p;
  if (direction < d_) {
    auto basis = complement_basis({p.q}, N, 0, d_ + 1);
    const auto& f = basis[static_cast<std::size_t>(direction)];
    out.q = rotate(p.q, p.q, f, h);
    out.eta_hat = rotate(p.eta_hat, p.q, f, h);
    return out;
  }
  direction -= d_;
  if (direction < d_ - 1) {
    auto basis = complement_basis({p.q, p.eta_hat}, N, 0, d_ + 1);
    out.eta_hat = rotate(p.eta_hat, p.eta_hat, basis[static_cast<std::size_t>(direction)], h);
    return out;
  }
  direction -= d_ - 1;
  auto basis = complement_basis({p.nu}, N, d_ + 1, N);
  out.nu = rotate(p.nu, p.nu.normalized(), basis[static_cast<std::size_t>(direction)], h);
  return out;
}

Eigen::VectorXd SphereBiangleModel::residual(const ConePoint& p, double s, double t) const {
  const int N = n_ + 1;
  const double L = p.c * s + t;
  const double cl = std::cos(L), sl = std::sin(L);
  // M-geodesic of length L, then the H-components of position and velocity.
  const Eigen::VectorXd xh = (p.q * cl + p.c * p.eta_hat * sl).head(d_ + 1);
  const Eigen::VectorXd vh = (-p.q * sl + p.c * p.eta_hat * cl).head(d_ + 1);
  const Eigen::VectorXd xhat = xh / xh.norm();
  Eigen::VectorXd eta_end = vh - vh.dot(xhat) * xhat;
  const Eigen::VectorXd u = eta_end / eta_end.norm();
  // Unit-speed H-geodesic traced backwards for arc length s.
  const double cs = std::cos(s), ss = std::sin(s);
  const Eigen::VectorXd y = xhat * cs - u * ss;
  const Eigen::VectorXd yd = xhat * ss + u * cs;
  Eigen::VectorXd r(n_ - d_ + 2 * (d_ + 1));
  r.head(n_ - d_) = p.nu.tail(N - d_ - 1) * sl;
  r.segment(n_ - d_, d_ + 1) = y - p.q.head(d_ + 1);
  r.tail(d_ + 1) = p.c * (yd - p.eta_hat.head(d_ + 1));
  return r;
}

std::unique_ptr<BiangleModel> make_biangle_model(const std::string& kind, int n, int d) {
  if (kind == "torus") return std::make_unique<TorusBiangleModel>(n, d);
  if (kind == "sphere") return std::make_unique<SphereBiangleModel>(n, d);
  throw InvalidParameterError("unknown bi-angle model '" + kind + "'");
}

double biangle_residual(const BiangleModel& model, const ConePoint& point, double s, double t) {
  return model.residual(point, s, t).norm();
}

NewtonResult newton_biangle(const BiangleModel& model, const ConePoint& point, double s0, double t0, double tol,
                            int max_iter) {
  NewtonResult res;
  double s = s0, t = t0;
  Eigen::VectorXd r = model.residual(point, s, t);
  double norm = r.norm();
  double mu = 1e-6;
  for (int it = 0; it < max_iter && norm > tol; ++it) {
    res.iterations = it + 1;
    const double hs = 1e-7 * std::max(1.0, std::fabs(s)), ht = 1e-7 * std::max(1.0, std::fabs(t));
    Eigen::MatrixXd J(r.size(), 2);
    J.col(0) = (model.residual(point, s + hs, t) - model.residual(point, s - hs, t)) / (2.0 * hs);
    J.col(1) = (model.residual(point, s, t + ht) - model.residual(point, s, t - ht)) / (2.0 * ht);
    const Eigen::Matrix2d JtJ = J.transpose() * J;
    const Eigen::Vector2d g = J.transpose() * r;
    bool improved = false;
    for (int damp = 0; damp < 30; ++damp) {
      Eigen::Matrix2d A = JtJ + mu * Eigen::Matrix2d::Identity() * std::max(1.0, JtJ.trace());
      Eigen::Vector2d step = A.ldlt().solve(-g);
      const double ns = s + step(0), nt = t + step(1);
      Eigen::VectorXd nr = model.residual(point, ns, nt);
      if (nr.norm() < norm) {
        s = ns;
        t = nt;
        r = nr;
        norm = nr.norm();
        mu = std::max(mu * 0.1, 1e-15);
        improved = true;
        break;
      }
      mu *= 10.0;
    }
    if (!improved) break;
  }
  res.s = s;
  res.t = t;
  res.residual_norm = norm;
  res.converged = norm <= tol;
  return res;
}

namespace {

int numerical_rank(const Eigen::VectorXd& sv, double rel_tol, double abs_floor) {
  if (sv.size() == 0 || sv(0) <= abs_floor) return 0;
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > rel_tol * sv(0) && sv(i) > abs_floor) ++r;
  return r;
}

}  // namespace

DimensionProbe component_dimension_probe(const BiangleModel& model, double c, double s, double t,
                                         const ProbeOptions& options) {
  DimensionProbe probe;
  std::mt19937_64 rng(options.seed);
  const int k = model.cone_dimension();
  ConePoint base;
  bool found = false;
  double s0 = s, t0 = t;
  for (int attempt = 0; attempt < 20 && !found; ++attempt) {
    base = model.random_point(c, rng);
    auto nr = newton_biangle(model, base, s, t);
    if (nr.converged && std::fabs(nr.s - s) < 1e-6 && std::fabs(nr.t - t) < 1e-6) {
      found = true;
      s0 = nr.s;
      t0 = nr.t;
    }
  }
  if (!found) return probe;

  // Linearized return map on (cone coordinates, s, t) with Richardson-refined central differences.
  auto column = [&](auto&& eval) {
    const double h = options.fd_step;
    Eigen::VectorXd d1 = (eval(h) - eval(-h)) / (2.0 * h);
    Eigen::VectorXd d2 = (eval(0.5 * h) - eval(-0.5 * h)) / h;
    return Eigen::VectorXd((4.0 * d2 - d1) / 3.0);
  };
  const Eigen::VectorXd r0 = model.residual(base, s0, t0);
  Eigen::MatrixXd J(r0.size(), k + 2);
  for (int i = 0; i < k; ++i)
    J.col(i) = column([&](double h) { return model.residual(model.perturb(base, i, h), s0, t0); });
  J.col(k) = column([&](double h) { return model.residual(base, s0 + h, t0); });
  J.col(k + 1) = column([&](double h) { return model.residual(base, s0, t0 + h); });
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
  const Eigen::VectorXd sv = svd.singularValues();
  probe.singular_values.assign(sv.data(), sv.data() + sv.size());
  probe.fixed_subspace_dimension = (k + 2) - numerical_rank(sv, options.rank_tol, 1e-9);

  std::uniform_real_distribution<double> ud(-options.spread, options.spread);
  std::vector<Eigen::VectorXd> rows;
  for (int sample = 0; sample < options.samples * 3 && static_cast<int>(rows.size()) < options.samples; ++sample) {
    ConePoint p = base;
    for (int i = 0; i < k; ++i) p = model.perturb(p, i, ud(rng));
    auto nr = newton_biangle(model, p, s0, t0);
    if (!nr.converged || std::fabs(nr.s - s0) > 1e-6 || std::fabs(nr.t - t0) > 1e-6) continue;
    Eigen::VectorXd e = model.embed(p);
    Eigen::VectorXd row(e.size() + 2);
    row << e, nr.s, nr.t;
    rows.push_back(row);
  }
  probe.samples = static_cast<int>(rows.size());
  if (probe.samples < 20) return probe;
  Eigen::MatrixXd X(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) X.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  X.rowwise() -= X.colwise().mean();
  Eigen::JacobiSVD<Eigen::MatrixXd> pca(X);
  probe.estimated_dimension = numerical_rank(pca.singularValues(), options.pca_tol, 0.0);
  probe.clean = probe.estimated_dimension == probe.fixed_subspace_dimension;
  probe.status = DimensionProbe::Status::Ok;
  return probe;
}

SolveReport solve_biangles(const BiangleModel& model, double c, const SolveOptions& options) {
  check_slope(c);
  if (options.s_seeds < 1 || options.t_seeds < 1) throw InvalidParameterError("seed grid must be nonempty");
  SolveReport rep;
  std::mt19937_64 rng(options.seed);
  struct Hit {
    double s, t;
  };
  std::vector<Hit> hits;
  auto lin = [](double lo, double hi, int n, int i) {
    return n == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (n - 1);
  };
  for (int i = 0; i < options.s_seeds; ++i)
    for (int j = 0; j < options.t_seeds; ++j)
      for (int p = 0; p < options.points_per_seed; ++p) {
        ++rep.seeds_tried;
        ConePoint pt = model.random_point(c, rng);
        auto nr = newton_biangle(model, pt, lin(options.s_min, options.s_max, options.s_seeds, i),
                                 lin(options.t_min, options.t_max, options.t_seeds, j));
        if (!nr.converged) {
          ++rep.seeds_failed;
          continue;
        }
        if (nr.s < options.s_min - 1e-9 || nr.s > options.s_max + 1e-9 || nr.t < options.t_min - 1e-9 ||
            nr.t > options.t_max + 1e-9)
          continue;
        hits.push_back({nr.s, nr.t});
      }
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.s < b.s || (a.s == b.s && a.t < b.t); });
  std::vector<std::vector<Hit>> groups;
  for (const auto& h : hits) {
    bool placed = false;
    for (auto& g : groups) {
      if (std::fabs(g.front().s - h.s) <= options.group_tol && std::fabs(g.front().t - h.t) <= options.group_tol) {
        g.push_back(h);
        placed = true;
        break;
      }
    }
    if (!placed) groups.push_back({h});
  }
  for (const auto& g : groups) {
    BiAngleComponent comp;
    for (const auto& h : g) {
      comp.s += h.s;
      comp.t += h.t;
    }
    comp.s /= static_cast<double>(g.size());
    comp.t /= static_cast<double>(g.size());
    comp.converged_seeds = static_cast<int>(g.size());
    int ok = 0;
    for (int v = 0; v < options.verification_points; ++v) {
      ConePoint pt = model.random_point(c, rng);
      auto nr = newton_biangle(model, pt, comp.s, comp.t);
      if (nr.converged && std::fabs(nr.s - comp.s) <= options.group_tol && std::fabs(nr.t - comp.t) <= options.group_tol)
        ++ok;
    }
    comp.generic_fraction = options.verification_points ? static_cast<double>(ok) / options.verification_points : 0.0;
    comp.maximal = comp.generic_fraction == 1.0;
    if (comp.maximal && std::fabs(comp.s) < 1e-9) comp.s = 0.0;
    if (comp.maximal && std::fabs(comp.t) < 1e-9) comp.t = 0.0;
    if (options.probe_dimensions && comp.maximal) {
      ProbeOptions po;
      po.seed = options.seed + rep.components.size() + 1;
      comp.probe = component_dimension_probe(model, c, comp.s, comp.t, po);
    }
    rep.components.push_back(comp);
  }
  std::sort(rep.components.begin(), rep.components.end(), [](const BiAngleComponent& a, const BiAngleComponent& b) {
    return a.t < b.t || (a.t == b.t && a.s < b.s);
  });
  return rep;
}

std::vector<double> SojournSet::times(double tol) const {
  std::vector<double> ts;
  for (const auto& e : entries) ts.push_back(e.t);
  std::sort(ts.begin(), ts.end());
  std::vector<double> out;
  for (double t : ts)
    if (out.empty() || t - out.back() > tol) out.push_back(t);
  return out;
}

std::vector<double> SojournSet::nonzero_s_at_t0(double tol) const {
  std::vector<double> out;
  for (const auto& e : entries)
    if (e.maximal && std::fabs(e.t) <= tol && std::fabs(e.s) > tol) out.push_back(e.s);
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<double> SojournSet::min_abs_s_at(double t, double tol) const {
  std::optional<double> best;
  for (const auto& e : entries)
    if (e.maximal && std::fabs(e.t - t) <= tol && (!best || std::fabs(e.s) < *best)) best = std::fabs(e.s);
  return best;
}

SojournSet torus_sojourn_set(int n, int d, double c, double s_max, double t_max) {
  check_slope(c);
  if (n < 2 || d < 1 || d > n - 1) throw InvalidParameterError("torus sojourn set needs 1 <= d <= n-1");
  SojournSet set;
  set.c = c;
  set.model = fmt::format("torus{}/subtorus{}", n, d);
  const double sigma = std::sqrt(1.0 - c * c);
  // Winding m along the normal direction, k along H (k only for d = 1, where eta_hat = +-1).
  const auto m_max = static_cast<std::int64_t>(std::floor(sigma * (t_max + c * s_max) / kTwoPi)) + 1;
  const auto k_max = d == 1 ? static_cast<std::int64_t>(std::ceil(m_max * c / sigma + s_max / kTwoPi)) + 1 : 0;
  const bool generic_normal = d == n - 1;
  const int full_dim = n + d - 2;
  for (std::int64_t m = -m_max; m <= m_max; ++m)
    for (std::int64_t k = -k_max; k <= k_max; ++k) {
      const double s = kTwoPi * (static_cast<double>(m) * c / sigma - static_cast<double>(k));
      const double t = kTwoPi * (static_cast<double>(m) * sigma + static_cast<double>(k) * c);
      if (std::fabs(s) > s_max + 1e-12 || std::fabs(t) > t_max + 1e-12) continue;
      SojournEntry e;
      e.s = s;
      e.t = t;
      e.i = m;
      e.j = k;
      if (m == 0 && k == 0) {
        e.family = "principal";
        e.predicted_dimension = full_dim;
      } else {
        e.family = std::fabs(t) < 1e-9 ? fmt::format("t0({},{})", m, k) : fmt::format("winding({},{})", m, k);
        // With codimension > 1 the normal direction must be a lattice direction: a lower-dimensional family.
        e.maximal = generic_normal;
        e.predicted_dimension = generic_normal ? full_dim : 2 * d - 1;
      }
      set.entries.push_back(e);
    }
  std::sort(set.entries.begin(), set.entries.end(),
            [](const SojournEntry& a, const SojournEntry& b) { return a.t < b.t || (a.t == b.t && a.s < b.s); });
  return set;
}

SojournSet sphere_sojourn_set(int n, int d, double c, double s_max, double t_max) {
  check_slope(c);
  if (n < 2 || d < 1 || d > n - 1) throw InvalidParameterError("sphere sojourn set needs 1 <= d <= n-1");
  SojournSet set;
  set.c = c;
  set.model = fmt::format("sphere{}/great{}", n, d);
  const double pi = std::numbers::pi;
  const auto r_max = static_cast<std::int64_t>(std::floor(s_max / pi + 1e-12));
  const auto p_max = static_cast<std::int64_t>(std::ceil((t_max + c * s_max) / pi)) + 1;
  for (std::int64_t r = -r_max; r <= r_max; ++r)
    for (std::int64_t p = -p_max; p <= p_max; ++p) {
      if (((p - r) % 2 + 2) % 2 != 0) continue;
      const double s = pi * static_cast<double>(r);
      const double t = pi * (static_cast<double>(p) - c * static_cast<double>(r));
      if (std::fabs(t) > t_max + 1e-12) continue;
      SojournEntry e;
      e.s = s;
      e.t = t;
      e.i = p;
      e.j = r;
      e.family = (p == 0 && r == 0) ? "principal" : (p % 2 == 0 ? fmt::format("closed({},{})", p, r)
                                                               : fmt::format("antipodal({},{})", p, r));
      e.predicted_dimension = n + d - 2;
      set.entries.push_back(e);
    }
  std::sort(set.entries.begin(), set.entries.end(),
            [](const SojournEntry& a, const SojournEntry& b) { return a.t < b.t || (a.t == b.t && a.s < b.s); });
  return set;
}

double min_residual_on_segment(const BiangleModel& model, const ConePoint& point, double s_lo, double s_hi, double t,
                               int samples) {
  if (samples < 2) throw InvalidParameterError("segment scan needs >= 2 samples");
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double s = s_lo + (s_hi - s_lo) * i / (samples - 1);
    best = std::min(best, model.residual(point, s, t).norm());
  }
  return best;
}

}  // namespace kwlab
