#include "kwlab/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "kwlab/error.hpp"

namespace kwlab {

double MainTermPrediction::predict(double lambda) const {
  return universal_constant.value_or(1.0) * base * std::pow(lambda, exponent);
}

MainTermPrediction leading_coeff(int n, int d, double c, const WindowFunction& window, double vol_h,
                                 const std::vector<double>& s_values) {
  if (!(c > 0.0 && c < 1.0)) throw InvalidParameterError("main term requires 0 < c < 1");
  if (d < 1 || d >= n) throw InvalidParameterError("main term requires 1 <= d < n");
  if (!(vol_h > 0.0)) throw InvalidParameterError("submanifold volume must be positive");
  MainTermPrediction p;
  p.n = n;
  p.d = d;
  p.c = c;
  p.window = window.describe();
  p.vol_h = vol_h;
  p.exponent = n - 1;
  p.s_values = s_values;
  double amplitude = 0.0;
  if (window.is_sharp()) {
    amplitude = window.epsilon().value;
  } else {
    if (s_values.empty()) throw InvalidParameterError("fuzzy main term needs at least one component");
    for (double s : s_values) amplitude += window.ft(s);
  }
  p.base = amplitude * std::pow(c, d - 1) * std::pow(1.0 - c * c, 0.5 * (n - d - 2)) * vol_h;
  return p;
}

FitReport fit_growth_exponent(const std::vector<double>& x, const std::vector<double>& y, const FitOptions& options) {
  if (x.size() != y.size()) throw InvalidParameterError("fit abscissa and values differ in length");
  if (static_cast<int>(x.size()) < options.min_points)
    throw InvalidParameterError(fmt::format("fit needs at least {} points", options.min_points));
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw InvalidParameterError("fit values must be positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
  if (*mx / *mn < options.min_span * (1.0 - 1e-12))
    throw InvalidParameterError("fit range must span at least one decade");

  auto ols = [](const std::vector<std::size_t>& idx, const std::vector<double>& u, const std::vector<double>& v) {
    double su = 0, sv = 0;
    for (auto i : idx) {
      su += u[i];
      sv += v[i];
    }
    const double m = static_cast<double>(idx.size());
    const double mu = su / m, mv = sv / m;
    double suu = 0, suv = 0;
    for (auto i : idx) {
      suu += (u[i] - mu) * (u[i] - mu);
      suv += (u[i] - mu) * (v[i] - mv);
    }
    const double slope = suu > 0 ? suv / suu : 0.0;
    return std::pair{slope, mv - slope * mu};
  };

  std::vector<std::size_t> all(x.size());
  std::iota(all.begin(), all.end(), 0);
  FitReport rep;
  std::tie(rep.slope, rep.intercept) = ols(all, lx, ly);
  double rss = 0.0;
  for (auto i : all) {
    const double r = ly[i] - (rep.intercept + rep.slope * lx[i]);
    rss += r * r;
  }
  rep.residual_norm = std::sqrt(rss);
  rep.x_min = *mn;
  rep.x_max = *mx;
  rep.points = static_cast<int>(x.size());

  if (options.bootstrap > 0) {
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<std::size_t> pick(0, x.size() - 1);
    std::vector<double> slopes;
    std::vector<std::size_t> idx(x.size());
    for (int b = 0; b < options.bootstrap; ++b) {
      for (auto& i : idx) i = pick(rng);
      slopes.push_back(ols(idx, lx, ly).first);
    }
    std::sort(slopes.begin(), slopes.end());
    const auto q = [&](double f) { return slopes[static_cast<std::size_t>(f * (slopes.size() - 1))]; };
    rep.half_width = 0.5 * (q(0.975) - q(0.025));
  }
  return rep;
}

Calibration calibrate_universal_constant(const LadderSeries& series, const MainTermPrediction& prediction,
                                         double drift_limit) {
  if (series.x.empty() || series.x.size() != series.y.size()) throw InvalidParameterError("empty calibration series");
  const double top = *std::max_element(series.x.begin(), series.x.end());
  Calibration cal;
  cal.x_to = top;
  cal.x_from = top / 10.0;
  std::vector<double> ratios, fx, fy;
  for (std::size_t i = 0; i < series.x.size(); ++i) {
    if (series.x[i] < cal.x_from || series.x[i] <= 0.0) continue;
    ratios.push_back(series.y[i] / (prediction.base * std::pow(series.x[i], prediction.exponent)));
    if (series.y[i] > 0.0) {
      fx.push_back(series.x[i]);
      fy.push_back(series.y[i]);
    }
  }
  const auto lowest = *std::min_element(series.x.begin(), series.x.end());
  if (ratios.size() < 2 || top < 10.0 * lowest * (1.0 - 1e-12))
    throw InvalidParameterError("calibration series must span a decade");
  cal.constant = std::accumulate(ratios.begin(), ratios.end(), 0.0) / static_cast<double>(ratios.size());
  const auto [mn, mx] = std::minmax_element(ratios.begin(), ratios.end());
  cal.drift = (*mx - *mn) / std::fabs(cal.constant);
  cal.unstable = cal.drift > drift_limit;
  FitOptions fo;
  fo.min_points = 2;
  fo.min_span = 1.0;
  if (fx.size() >= 2) cal.fit = fit_growth_exponent(fx, fy, fo);
  return cal;
}

SmoothingScan smoothing_error_scan(const JointSpectrum& spectrum, const ExactSquare& c, const ExactSquare& eps,
                                   double lambda, const std::vector<double>& t_grid, double rel_tol) {
  if (t_grid.empty()) throw InvalidParameterError("empty T grid");
  SmoothingScan scan;
  scan.series.abscissa = "T";
  scan.sharp_value = sharp_ladder_sum(spectrum, LadderWindow::make(c, WindowFunction::sharp(eps)), lambda);
  for (double T : t_grid) {
    auto ladder = LadderWindow::make(c, WindowFunction::mollified_indicator(T, eps.value));
    const double smooth = fuzzy_ladder_sum(spectrum, ladder, lambda, nullptr, rel_tol);
    scan.series.x.push_back(T);
    scan.series.y.push_back(std::fabs(scan.sharp_value - smooth));
  }
  scan.series.metadata["lambda"] = fmt::format("{:.17g}", lambda);
  scan.series.metadata["epsilon"] = eps.str();
  scan.series.metadata["c"] = c.str();
  FitOptions fo;
  fo.min_points = 3;
  fo.min_span = 4.0;
  bool positive = std::all_of(scan.series.y.begin(), scan.series.y.end(), [](double v) { return v > 0.0; });
  if (positive && static_cast<int>(t_grid.size()) >= fo.min_points) scan.fit = fit_growth_exponent(t_grid, scan.series.y, fo);
  return scan;
}

Verdict verdict_rel(std::string name, std::string anchor, double measured, double predicted, double tol) {
  Verdict v{std::move(name), std::move(anchor), measured, predicted, tol, "rel", false, {}};
  v.pass = std::isfinite(measured) && std::fabs(measured - predicted) <= tol * std::fabs(predicted);
  return v;
}

Verdict verdict_abs(std::string name, std::string anchor, double measured, double predicted, double tol) {
  Verdict v{std::move(name), std::move(anchor), measured, predicted, tol, "abs", false, {}};
  v.pass = std::isfinite(measured) && std::fabs(measured - predicted) <= tol;
  return v;
}

Verdict verdict_range(std::string name, std::string anchor, double measured, double lo, double hi) {
  Verdict v{std::move(name), std::move(anchor), measured, 0.5 * (lo + hi), 0.5 * (hi - lo), "range", false, {}};
  v.pass = measured >= lo && measured <= hi;
  return v;
}

Verdict verdict_flag(std::string name, std::string anchor, bool ok, std::string note) {
  Verdict v{std::move(name), std::move(anchor), ok ? 1.0 : 0.0, 1.0, 0.0, "abs", ok, std::move(note)};
  return v;
}

}  // namespace kwlab
