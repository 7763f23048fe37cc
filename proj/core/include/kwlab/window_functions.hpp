#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>

#include "kwlab/exact.hpp"

namespace kwlab {

enum class WindowKind { SharpIndicator, SmoothBumpSquare, MollifiedIndicator, Mollifier };

std::string to_string(WindowKind kind);

// Base bump exp(-1/(1-u^2)) on (-1, 1).
double standard_bump(double u);

// Fourier convention: w_hat(tau) = int w(x) e^{-i tau x} dx.
class WindowFunction {
 public:
  static WindowFunction sharp(ExactSquare eps);
  static WindowFunction sharp(double eps) { return sharp(recognize_exact(eps)); }
  // psi = scale * phi^2, phi the inverse transform of the bump scaled to [-a, a].
  static WindowFunction bump_square(double a, double scale = 1.0);
  // theta_T * 1_[-eps, eps].
  static WindowFunction mollified_indicator(double T, double eps);
  // theta_T(x) = T rho_1_hat(T x) / (2 pi).
  static WindowFunction mollifier(double T);

  WindowKind kind() const { return kind_; }
  bool is_sharp() const { return kind_ == WindowKind::SharpIndicator; }

  double operator()(double x) const;
  double ft(double tau) const;
  // Infinite for the sharp indicator.
  double ft_support_radius() const;
  double integral() const { return ft(0.0); }

  // sup_{|x| >= X} |w(x)|.
  double tail_bound(double X) const;
  // Smallest tabulated X with tail_bound(X) <= tol.
  double tail_radius(double tol) const;
  // Largest |x| at which the tabulation is valid; beyond it tail_bound is an envelope estimate.
  double table_extent() const;

  const ExactSquare& epsilon() const { return eps_; }
  double a() const { return a_; }
  double scale() const { return scale_; }
  double T() const { return T_; }

  // Mollified indicator: L1 distance to the indicator of [-eps, eps].
  double l1_distance_to_indicator() const;
  // Mollifier constants: theta_1 >= delta0 on |x| < eps0.
  double delta0() const;
  double eps0() const;

  WindowFunction scaled(double alpha) const;
  std::string describe() const;
  std::map<std::string, double> parameters() const;

 private:
  WindowKind kind_ = WindowKind::SharpIndicator;
  ExactSquare eps_;
  double a_ = 0.0;
  double scale_ = 1.0;
  double T_ = 0.0;
};

// True when the transform support excludes every supplied nonzero maximal-component s value.
bool support_is_sufficiently_small(const WindowFunction& w, std::span<const double> nonzero_s_values);

namespace detail {

// Shared tabulations behind the windows.
struct WindowTables {
  virtual ~WindowTables() = default;
  virtual double phi1(double x) const = 0;          // (1/2pi) int beta(u) e^{iux} du
  virtual double phi1_prime(double x) const = 0;
  virtual double phi1_tail(double x) const = 0;     // sup_{|y| >= |x|} phi1(y)^2
  virtual double g(double s) const = 0;             // (beta * beta)(s), support [-2, 2]
  virtual double theta1(double x) const = 0;
  virtual double theta1_tail_mass(double y) const = 0;  // int_y^inf theta1, y >= 0
  virtual double theta1_tail_sup(double y) const = 0;   // sup_{|x| >= y} theta1
  virtual double theta1_tail_integral(double y) const = 0;  // int_0^y tail_mass
  virtual double phi_extent() const = 0;
  double theta_extent() const { return 2.0 * phi_extent(); }
  virtual double theta1_discarded_mass() const = 0;
};

const WindowTables& window_tables();

}  // namespace detail

}  // namespace kwlab
