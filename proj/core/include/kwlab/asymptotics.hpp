#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kwlab/joint_spectrum.hpp"
#include "kwlab/ladder_sums.hpp"
#include "kwlab/window_functions.hpp"

namespace kwlab {

struct MainTermPrediction {
  int n = 0;
  int d = 0;
  double c = 0.0;
  std::string window;
  double vol_h = 0.0;
  // Coefficient of lambda^exponent without the universal constant.
  double base = 0.0;
  int exponent = 0;
  std::vector<double> s_values;
  std::optional<double> universal_constant;

  double predict(double lambda) const;
};

// Sharp windows contribute eps in place of the Fourier sum.
MainTermPrediction leading_coeff(int n, int d, double c, const WindowFunction& window, double vol_h,
                                 const std::vector<double>& s_values);

struct FitReport {
  double slope = 0.0;
  double intercept = 0.0;
  double half_width = 0.0;  // 95% bootstrap half-width of the slope
  double residual_norm = 0.0;
  double x_min = 0.0;
  double x_max = 0.0;
  int points = 0;
};

struct FitOptions {
  int min_points = 8;
  double min_span = 10.0;
  int bootstrap = 400;
  std::uint64_t seed = 3;
};

// Least-squares slope of log y against log x.
FitReport fit_growth_exponent(const std::vector<double>& x, const std::vector<double>& y,
                              const FitOptions& options = {});

struct Calibration {
  double constant = 0.0;
  double drift = 0.0;  // (max - min) / mean of the ratio over the fitted range
  bool unstable = false;
  double x_from = 0.0;
  double x_to = 0.0;
  FitReport fit;
};

// Mean of value / (base * lambda^exponent) over the top decade of the series.
Calibration calibrate_universal_constant(const LadderSeries& series, const MainTermPrediction& prediction,
                                         double drift_limit = 0.2);

struct SmoothingScan {
  LadderSeries series;  // x = T, y = |sharp - mollified|
  double sharp_value = 0.0;
  FitReport fit;
};

SmoothingScan smoothing_error_scan(const JointSpectrum& spectrum, const ExactSquare& c, const ExactSquare& eps,
                                   double lambda, const std::vector<double>& t_grid, double rel_tol = 1e-9);

struct Verdict {
  std::string name;
  std::string anchor;
  double measured = 0.0;
  double predicted = 0.0;
  double tolerance = 0.0;
  std::string comparison;  // "rel", "abs", "le", "range"
  bool pass = false;
  std::string note;
};

Verdict verdict_rel(std::string name, std::string anchor, double measured, double predicted, double tol);
Verdict verdict_abs(std::string name, std::string anchor, double measured, double predicted, double tol);
// Pass when lo <= measured <= hi; predicted and tolerance store the midpoint and half-width.
Verdict verdict_range(std::string name, std::string anchor, double measured, double lo, double hi);
Verdict verdict_flag(std::string name, std::string anchor, bool ok, std::string note = {});

}  // namespace kwlab
