#include "kwlab/window_functions.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include <fmt/format.h>

#include "kwlab/error.hpp"

namespace kwlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kBumpNodes = 2048;        // nodes on [0, 1] for the bump quadrature
constexpr double kPhiExtent = 256.0;    // phi_1 tabulated on [0, kPhiExtent]
constexpr double kInterpBudget = 1e-9;  // relative to psi(0)

struct Hermite {
  double h = 0.0;
  std::vector<double> f, df;

  double eval(double x) const {
    if (x < 0.0) x = 0.0;
    const double pos = x / h;
    auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= f.size()) return f.back();
    const double t = pos - static_cast<double>(i);
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * f[i] + (t3 - 2 * t2 + t) * h * df[i] + (-2 * t3 + 3 * t2) * f[i + 1] +
           (t3 - t2) * h * df[i + 1];
  }

  // int_{x_i}^{x} of the interpolant, x in cell i.
  double partial(std::size_t i, double t) const {
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
    return h * (f[i] * (t - t3 + 0.5 * t4) + h * df[i] * (0.5 * t2 - 2.0 * t3 / 3.0 + 0.25 * t4) +
                f[i + 1] * (t3 - 0.5 * t4) + h * df[i + 1] * (-t3 / 3.0 + 0.25 * t4));
  }
};

class Tables final : public detail::WindowTables {
 public:
  Tables() {
    beta_.resize(kBumpNodes + 1);
    for (int k = 0; k <= kBumpNodes; ++k) beta_[k] = standard_bump(static_cast<double>(k) / kBumpNodes);
    build_phi();
    build_g();
    build_theta();
  }

  double phi_direct(double x, double* deriv) const {
    // Trapezoid on the even extension; the bump vanishes to all orders at u = 1.
    const double h = 1.0 / kBumpNodes;
    const std::complex<double> step = std::polar(1.0, h * x);
    std::complex<double> e(1.0, 0.0);
    double c = 0.5 * beta_[0], s = 0.0;
    for (int k = 1; k < kBumpNodes; ++k) {
      if ((k & 255) == 0) e = std::polar(1.0, k * h * x);
      else e *= step;
      c += beta_[k] * e.real();
      s += beta_[k] * (k * h) * e.imag();
    }
    if (deriv) *deriv = -s * h / kPi;
    return c * h / kPi;
  }

  double phi1(double x) const override { return phi_.eval(std::fabs(x)); }
  double phi1_prime(double x) const override {
    double ax = std::fabs(x);
    // Derivative of the Hermite interpolant is accurate enough for the theta derivative table.
    const double pos = ax / phi_.h;
    auto i = static_cast<std::size_t>(pos);
    double v;
    if (i + 1 >= phi_.f.size()) {
      v = phi_.df.back();
    } else {
      const double t = pos - static_cast<double>(i), t2 = t * t;
      v = ((6 * t2 - 6 * t) * phi_.f[i] + (3 * t2 - 4 * t + 1) * phi_.h * phi_.df[i] + (-6 * t2 + 6 * t) * phi_.f[i + 1] +
           (3 * t2 - 2 * t) * phi_.h * phi_.df[i + 1]) /
          phi_.h;
    }
    return x < 0 ? -v : v;
  }
  double phi1_tail(double x) const override { return suffix_lookup(phi_sq_suffix_, phi_.h, std::fabs(x)); }

  double g(double s) const override {
    s = std::fabs(s);
    if (s >= 2.0) return 0.0;
    const double h = 1.0 / kBumpNodes;
    const double pos = s / h;
    auto i = static_cast<std::ptrdiff_t>(pos);
    // 4-point Lagrange interpolation on a stencil clamped to the table; g is even so mirror at 0.
    std::ptrdiff_t i0 = std::clamp<std::ptrdiff_t>(i - 1, -1, static_cast<std::ptrdiff_t>(g_.size()) - 4);
    const double t = pos - static_cast<double>(i0);
    double v = 0.0;
    for (int a = 0; a < 4; ++a) {
      double l = 1.0;
      for (int b = 0; b < 4; ++b)
        if (b != a) l *= (t - b) / static_cast<double>(a - b);
      std::ptrdiff_t idx = i0 + a;
      v += l * g_[static_cast<std::size_t>(std::abs(idx))];
    }
    return std::max(v, 0.0);
  }

  double theta1(double x) const override { return theta_.eval(std::fabs(x)); }

  double theta1_tail_mass(double y) const override {
    if (y < 0.0) return 1.0 - theta1_tail_mass(-y);
    const double pos = y / theta_.h;
    auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= theta_.f.size()) return 0.0;
    return tail_[i] - theta_.partial(i, pos - static_cast<double>(i));
  }

  double theta1_tail_sup(double y) const override { return suffix_lookup(theta_suffix_, theta_.h, std::fabs(y)); }

  double theta1_tail_integral(double y) const override {
    y = std::max(0.0, y);
    const double pos = y / theta_.h;
    auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= tail_cum_.size()) return tail_cum_.back();
    Hermite tail_h{theta_.h, tail_, neg_theta_};
    return tail_cum_[i] + tail_h.partial(i, pos - static_cast<double>(i));
  }

  double phi_extent() const override { return kPhiExtent; }
  double theta1_discarded_mass() const override { return discarded_; }

 private:
  static double suffix_lookup(const std::vector<double>& suffix, double h, double x) {
    auto i = static_cast<std::size_t>(std::floor(x / h));
    if (i >= suffix.size()) return suffix.back();
    return suffix[i];
  }

  void build_phi() {
    double h = 1.0 / 32.0;
    for (int attempt = 0; attempt < 6; ++attempt, h *= 0.5) {
      const auto n = static_cast<std::size_t>(std::llround(kPhiExtent / h)) + 1;
      phi_.h = h;
      phi_.f.assign(n, 0.0);
      phi_.df.assign(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) phi_.f[i] = phi_direct(static_cast<double>(i) * h, &phi_.df[i]);
      // Midpoint check of psi = phi^2 against direct quadrature, sampled every 7th cell.
      const double psi0 = phi_.f[0] * phi_.f[0];
      double worst = 0.0;
      for (std::size_t i = 0; i + 1 < n; i += 7) {
        const double x = (static_cast<double>(i) + 0.5) * h;
        const double exact = phi_direct(x, nullptr);
        const double approx = phi_.eval(x);
        worst = std::max(worst, std::fabs(exact * exact - approx * approx) / psi0);
      }
      interp_error_ = worst;
      if (worst <= kInterpBudget) break;
    }
    if (interp_error_ > kInterpBudget) throw ToleranceError("bump window interpolation budget not met");
    phi_sq_suffix_.resize(phi_.f.size());
    double m = 0.0;
    for (std::size_t i = phi_.f.size(); i-- > 0;) {
      m = std::max(m, phi_.f[i] * phi_.f[i]);
      phi_sq_suffix_[i] = m;
    }
  }

  void build_g() {
    // Discrete convolution of the bump on [-1, 1] with step 1/kBumpNodes.
    const double h = 1.0 / kBumpNodes;
    const int n = kBumpNodes;
    auto beta_at = [&](int k) { return std::abs(k) > n ? 0.0 : beta_[static_cast<std::size_t>(std::abs(k))]; };
    g_.assign(2 * static_cast<std::size_t>(n) + 1, 0.0);
    for (int i = 0; i <= 2 * n; ++i) {
      double s = 0.0;
      for (int k = i - n; k <= n; ++k) s += beta_at(k) * beta_at(i - k);
      g_[static_cast<std::size_t>(i)] = s * h;
    }
  }

  void build_theta() {
    // theta_1(x) = pi phi_1(x/2)^2 / g(0).
    const double g0 = g_[0];
    const std::size_t n = phi_.f.size();
    theta_.h = 2.0 * phi_.h;
    theta_.f.resize(n);
    theta_.df.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      theta_.f[i] = kPi * phi_.f[i] * phi_.f[i] / g0;
      theta_.df[i] = kPi * phi_.f[i] * phi_.df[i] / g0;
    }
    neg_theta_.resize(n);
    for (std::size_t i = 0; i < n; ++i) neg_theta_[i] = -theta_.f[i];
    tail_.assign(n, 0.0);
    for (std::size_t i = n - 1; i-- > 0;) tail_[i] = tail_[i + 1] + theta_.partial(i, 1.0);
    // Mass beyond the table is estimated by the last eighth and folded into the normalization.
    discarded_ = tail_[n - n / 8];
    const double norm = 0.5 / tail_[0];
    for (auto& t : tail_) t *= norm;
    for (auto& t : theta_.f) t *= norm;
    for (auto& t : theta_.df) t *= norm;
    for (auto& t : neg_theta_) t *= norm;
    Hermite tail_h{theta_.h, tail_, neg_theta_};
    tail_cum_.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) tail_cum_[i + 1] = tail_cum_[i] + tail_h.partial(i, 1.0);
    theta_suffix_.resize(n);
    double m = 0.0;
    for (std::size_t i = n; i-- > 0;) {
      m = std::max(m, std::fabs(theta_.f[i]));
      theta_suffix_[i] = m;
    }
  }

  std::vector<double> beta_;
  Hermite phi_;
  std::vector<double> phi_sq_suffix_;
  std::vector<double> g_;
  Hermite theta_;
  std::vector<double> neg_theta_;
  std::vector<double> tail_;
  std::vector<double> tail_cum_;
  std::vector<double> theta_suffix_;
  double interp_error_ = 0.0;
  double discarded_ = 0.0;
};

double rho1(double sigma) {
  const auto& t = detail::window_tables();
  if (std::fabs(sigma) >= 1.0) return 0.0;
  return t.g(2.0 * sigma) / t.g(0.0);
}

double sinc_transform(double eps, double tau) {
  if (std::fabs(eps * tau) < 1e-8) return 2.0 * eps * (1.0 - (eps * tau) * (eps * tau) / 6.0);
  return 2.0 * std::sin(eps * tau) / tau;
}

}  // namespace

double standard_bump(double u) {
  const double v = 1.0 - u * u;
  if (v <= 0.0) return 0.0;
  return std::exp(-1.0 / v);
}

std::string to_string(WindowKind kind) {
  switch (kind) {
    case WindowKind::SharpIndicator: return "sharp";
    case WindowKind::SmoothBumpSquare: return "bump";
    case WindowKind::MollifiedIndicator: return "mollified";
    case WindowKind::Mollifier: return "mollifier";
  }
  return "?";
}

const detail::WindowTables& detail::window_tables() {
  static const Tables tables;
  return tables;
}

WindowFunction WindowFunction::sharp(ExactSquare eps) {
  if (!(eps.value > 0.0)) throw InvalidParameterError("sharp window needs eps > 0");
  WindowFunction w;
  w.kind_ = WindowKind::SharpIndicator;
  w.eps_ = eps;
  return w;
}

WindowFunction WindowFunction::bump_square(double a, double scale) {
  if (!(a > 0.0)) throw InvalidParameterError("bump window needs a > 0");
  if (!(scale > 0.0)) throw InvalidParameterError("bump window needs scale > 0");
  WindowFunction w;
  w.kind_ = WindowKind::SmoothBumpSquare;
  w.a_ = a;
  w.scale_ = scale;
  return w;
}

WindowFunction WindowFunction::mollified_indicator(double T, double eps) {
  if (!(T > 0.0)) throw InvalidParameterError("mollified indicator needs T > 0");
  if (!(eps > 0.0)) throw InvalidParameterError("mollified indicator needs eps > 0");
  WindowFunction w;
  w.kind_ = WindowKind::MollifiedIndicator;
  w.T_ = T;
  w.eps_ = recognize_exact(eps);
  return w;
}

WindowFunction WindowFunction::mollifier(double T) {
  if (!(T > 0.0)) throw InvalidParameterError("mollifier needs T > 0");
  WindowFunction w;
  w.kind_ = WindowKind::Mollifier;
  w.T_ = T;
  return w;
}

WindowFunction WindowFunction::scaled(double alpha) const {
  if (!(alpha > 0.0)) throw InvalidParameterError("window scale must be > 0");
  WindowFunction w = *this;
  w.scale_ *= alpha;
  return w;
}

double WindowFunction::operator()(double x) const {
  const auto& t = detail::window_tables();
  switch (kind_) {
    case WindowKind::SharpIndicator: return std::fabs(x) <= eps_.value ? scale_ : 0.0;
    case WindowKind::SmoothBumpSquare: {
      const double p = t.phi1(a_ * x);
      return scale_ * a_ * a_ * p * p;
    }
    case WindowKind::MollifiedIndicator: {
      const double e = eps_.value, ax = std::fabs(x);
      double v;
      if (ax <= e) v = 1.0 - t.theta1_tail_mass(T_ * (ax + e)) - t.theta1_tail_mass(T_ * (e - ax));
      else v = t.theta1_tail_mass(T_ * (ax - e)) - t.theta1_tail_mass(T_ * (ax + e));
      return scale_ * v;
    }
    case WindowKind::Mollifier: return scale_ * T_ * t.theta1(T_ * x);
  }
  return 0.0;
}

double WindowFunction::ft(double tau) const {
  const auto& t = detail::window_tables();
  switch (kind_) {
    case WindowKind::SharpIndicator: return scale_ * sinc_transform(eps_.value, tau);
    case WindowKind::SmoothBumpSquare:
      if (std::fabs(tau) >= 2.0 * a_) return 0.0;
      return scale_ * a_ / (2.0 * kPi) * t.g(tau / a_);
    case WindowKind::MollifiedIndicator: return scale_ * rho1(tau / T_) * sinc_transform(eps_.value, tau);
    case WindowKind::Mollifier: return scale_ * rho1(tau / T_);
  }
  return 0.0;
}

double WindowFunction::ft_support_radius() const {
  switch (kind_) {
    case WindowKind::SharpIndicator: return std::numeric_limits<double>::infinity();
    case WindowKind::SmoothBumpSquare: return 2.0 * a_;
    case WindowKind::MollifiedIndicator:
    case WindowKind::Mollifier: return T_;
  }
  return 0.0;
}

double WindowFunction::tail_bound(double X) const {
  const auto& t = detail::window_tables();
  X = std::fabs(X);
  switch (kind_) {
    case WindowKind::SharpIndicator: return X > eps_.value ? 0.0 : scale_;
    case WindowKind::SmoothBumpSquare: return scale_ * a_ * a_ * t.phi1_tail(a_ * X);
    case WindowKind::MollifiedIndicator:
      return X <= eps_.value ? scale_ : scale_ * t.theta1_tail_mass(T_ * (X - eps_.value));
    case WindowKind::Mollifier: return scale_ * T_ * t.theta1_tail_sup(T_ * X);
  }
  return 0.0;
}

double WindowFunction::table_extent() const {
  const auto& t = detail::window_tables();
  switch (kind_) {
    case WindowKind::SharpIndicator: return eps_.value;
    case WindowKind::SmoothBumpSquare: return t.phi_extent() / a_;
    case WindowKind::MollifiedIndicator: return eps_.value + t.theta_extent() / T_;
    case WindowKind::Mollifier: return t.theta_extent() / T_;
  }
  return 0.0;
}

double WindowFunction::tail_radius(double tol) const {
  if (kind_ == WindowKind::SharpIndicator) return eps_.value;
  double lo = 0.0, hi = table_extent();
  if (tail_bound(hi) > tol) return hi;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (tail_bound(mid) <= tol) hi = mid;
    else lo = mid;
  }
  return hi;
}

double WindowFunction::l1_distance_to_indicator() const {
  if (kind_ != WindowKind::MollifiedIndicator) throw InvalidParameterError("L1 distance defined for mollified indicators");
  return 4.0 / T_ * detail::window_tables().theta1_tail_integral(2.0 * eps_.value * T_);
}

double WindowFunction::eps0() const { return 1.0; }

double WindowFunction::delta0() const {
  const auto& t = detail::window_tables();
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 1000; ++i) m = std::min(m, t.theta1(eps0() * i / 1000.0));
  return m;
}

std::string WindowFunction::describe() const {
  switch (kind_) {
    case WindowKind::SharpIndicator: return fmt::format("sharp:{:.17g}", eps_.value);
    case WindowKind::SmoothBumpSquare: return fmt::format("bump:{:.17g},{:.17g}", a_, scale_);
    case WindowKind::MollifiedIndicator: return fmt::format("mollified:{:.17g},{:.17g}", T_, eps_.value);
    case WindowKind::Mollifier: return fmt::format("mollifier:{:.17g}", T_);
  }
  return "?";
}

std::map<std::string, double> WindowFunction::parameters() const {
  std::map<std::string, double> p{{"scale", scale_}};
  if (kind_ == WindowKind::SharpIndicator || kind_ == WindowKind::MollifiedIndicator) p["epsilon"] = eps_.value;
  if (kind_ == WindowKind::SmoothBumpSquare) p["a"] = a_;
  if (kind_ == WindowKind::MollifiedIndicator || kind_ == WindowKind::Mollifier) p["T"] = T_;
  return p;
}

bool support_is_sufficiently_small(const WindowFunction& w, std::span<const double> nonzero_s_values) {
  const double r = w.ft_support_radius();
  for (double s : nonzero_s_values)
    if (s != 0.0 && std::fabs(s) < r) return false;
  return true;
}

}  // namespace kwlab
