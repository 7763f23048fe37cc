#include "kwlab/ladder_sums.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "kwlab/error.hpp"

namespace kwlab {

namespace {

// Neumaier compensated accumulator; order-dependent, so callers fix the order.
struct Accumulator {
  double sum = 0.0, comp = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v)) comp += (sum - t) + v;
    else comp += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

struct ModeEvaluator {
  const LadderWindow& ladder;
  SumDiagnostics* diag;

  double factor(const JointMode& m) const {
    const auto& w = ladder.window;
    if (w.is_sharp()) {
      auto res = ladder_member(m.mu, ladder.c, m.lambda, w.epsilon());
      if (diag) {
        if (res.exact) ++diag->exact_tests;
        else ++diag->float_tests;
        if (res.guard_band_hit) ++diag->guard_band_hits;
      }
      return res.inside ? w.scale() : 0.0;
    }
    return w(m.mu.value - ladder.c.value * m.lambda.value);
  }
};

std::vector<LevelContribution> collect(const JointSpectrum& spectrum, const LadderWindow& ladder, double lambda_max,
                                       const StripFilter& strip, SumDiagnostics* diag) {
  ModeEvaluator eval{ladder, diag};
  const bool sharp = ladder.window.is_sharp();
  std::vector<LevelContribution> raw;
  spectrum.for_each_mode(lambda_max, strip, [&](const JointMode& m) {
    if (diag) ++diag->modes_visited;
    const double f = eval.factor(m);
    if (f == 0.0 || m.weight == 0.0) return;
    raw.push_back({m.level_index, m.lambda.value, f * m.weight, sharp ? m.count : 0});
  });
  std::stable_sort(raw.begin(), raw.end(),
                   [](const LevelContribution& a, const LevelContribution& b) { return a.level_index < b.level_index; });
  std::vector<LevelContribution> out;
  for (std::size_t i = 0; i < raw.size();) {
    std::size_t j = i;
    Accumulator acc;
    std::uint64_t cnt = 0;
    while (j < raw.size() && raw[j].level_index == raw[i].level_index) {
      acc.add(raw[j].value);
      cnt += raw[j].count;
      ++j;
    }
    out.push_back({raw[i].level_index, raw[i].lambda, acc.value(), cnt});
    i = j;
  }
  return out;
}

double total(const std::vector<LevelContribution>& levels) {
  Accumulator acc;
  for (const auto& l : levels) acc.add(l.value);
  return acc.value();
}

}  // namespace

LadderWindow LadderWindow::make(ExactSquare c, WindowFunction window) {
  if (!(c.value > 0.0 && c.value < 1.0)) throw InvalidParameterError("ladder slope must lie in (0, 1)");
  return LadderWindow{c, std::move(window)};
}

LadderWindow LadderWindow::forbidden(ExactSquare c, WindowFunction window) {
  if (!(c.value > 1.0)) throw InvalidParameterError("forbidden-region ladders need c > 1");
  return LadderWindow{c, std::move(window)};
}

std::vector<LevelContribution> ladder_level_contributions(const JointSpectrum& spectrum, const LadderWindow& ladder,
                                                          double lambda_max, SumDiagnostics* diag, double rel_tol) {
  if (lambda_max < 0.0) return {};
  const auto& w = ladder.window;
  if (w.is_sharp()) {
    if (diag) diag->truncation_radius = w.epsilon().value;
    return collect(spectrum, ladder, lambda_max, StripFilter{ladder.c.value, w.epsilon().value}, diag);
  }
  // Fuzzy windows: pilot pass, then widen the strip until tail * Parseval mass meets the budget.
  const double mass = spectrum.parseval_mass(lambda_max);
  double X = w.tail_radius(1e-8 * w(0.0));
  auto levels = collect(spectrum, ladder, lambda_max, StripFilter{ladder.c.value, X}, diag);
  double budget = rel_tol * std::fabs(total(levels));
  if (w.tail_bound(X) * mass > budget) {
    const double X2 = w.tail_radius(0.5 * budget / std::max(mass, 1e-300));
    if (w.tail_bound(X2) * mass > budget)
      throw ToleranceError(fmt::format("window tail {:.3g} at radius {:.6g} cannot certify relative error {:.1g}",
                                       w.tail_bound(X2), X2, rel_tol));
    X = X2;
    if (diag) *diag = SumDiagnostics{};
    levels = collect(spectrum, ladder, lambda_max, StripFilter{ladder.c.value, X}, diag);
  }
  if (diag) {
    diag->truncation_radius = X;
    diag->truncation_bound = w.tail_bound(X) * mass;
  }
  return levels;
}

double sharp_ladder_sum(const JointSpectrum& spectrum, const LadderWindow& ladder, double lambda,
                        SumDiagnostics* diag) {
  if (!ladder.window.is_sharp()) throw InvalidParameterError("sharp_ladder_sum needs a sharp window");
  SumDiagnostics local;
  SumDiagnostics* d = diag ? diag : &local;
  auto levels = ladder_level_contributions(spectrum, ladder, lambda, d);
  Accumulator acc;
  std::uint64_t count = 0;
  for (const auto& l : levels) {
    acc.add(l.value);
    count += l.count;
  }
  auto unit = spectrum.unit_weight();
  if (unit && ladder.window.scale() == 1.0) {
    d->count = count;
    return *unit * static_cast<double>(count);
  }
  return acc.value();
}

double fuzzy_ladder_sum(const JointSpectrum& spectrum, const LadderWindow& ladder, double lambda,
                        SumDiagnostics* diag, double rel_tol) {
  if (ladder.window.is_sharp()) throw InvalidParameterError("fuzzy_ladder_sum needs a smooth window");
  SumDiagnostics local;
  SumDiagnostics* d = diag ? diag : &local;
  const double v = total(ladder_level_contributions(spectrum, ladder, lambda, d, rel_tol));
  if (d->truncation_bound > rel_tol * std::fabs(v) && d->truncation_bound > 0.0)
    throw ToleranceError(fmt::format("truncation bound {:.3g} exceeds {:.1g} relative to the sum {:.6g}",
                                     d->truncation_bound, rel_tol, v));
  return v;
}

LadderSeries ladder_series(const JointSpectrum& spectrum, const LadderWindow& ladder,
                           const std::vector<double>& lambda_grid, SumDiagnostics* diag) {
  LadderSeries s;
  s.abscissa = "lambda";
  s.metadata["model"] = spectrum.describe();
  s.metadata["window"] = ladder.window.describe();
  s.metadata["c"] = fmt::format("{:.17g}", ladder.c.value);
  if (lambda_grid.empty()) return s;
  if (!std::is_sorted(lambda_grid.begin(), lambda_grid.end()))
    throw InvalidParameterError("lambda grid must be ascending");
  const double top = lambda_grid.back();
  s.metadata["cutoff"] = fmt::format("{:.17g}", top);
  auto levels = ladder_level_contributions(spectrum, ladder, top, diag);
  auto unit = spectrum.unit_weight();
  const bool counting = unit && ladder.window.is_sharp() && ladder.window.scale() == 1.0;
  Accumulator acc;
  std::uint64_t count = 0;
  std::size_t li = 0;
  for (double lam : lambda_grid) {
    while (li < levels.size() && levels[li].lambda <= lam) {
      acc.add(levels[li].value);
      count += levels[li].count;
      ++li;
    }
    s.x.push_back(lam);
    s.y.push_back(counting ? *unit * static_cast<double>(count) : acc.value());
  }
  return s;
}

std::vector<double> midpoint_grid(const JointSpectrum& spectrum, double lambda_max, std::size_t max_points) {
  return midpoint_grid(spectrum.levels(lambda_max), max_points);
}

std::vector<double> midpoint_grid(const std::vector<SpectralLevel>& levels, std::size_t max_points) {
  std::vector<double> mids;
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) mids.push_back(0.5 * (levels[i].value + levels[i + 1].value));
  if (levels.size() == 1) mids.push_back(levels[0].value + 0.5);
  if (mids.empty()) return mids;
  if (max_points == 0 || mids.size() <= max_points) return mids;
  // Geometric thinning keeps resolution at small lambda and always retains the last midpoint.
  std::vector<double> out;
  const double lo = std::max(mids.front(), 1.0), hi = mids.back();
  std::size_t idx = 0;
  for (std::size_t k = 0; k < max_points; ++k) {
    const double target = lo * std::pow(hi / lo, static_cast<double>(k) / static_cast<double>(max_points - 1));
    while (idx + 1 < mids.size() && mids[idx] < target) ++idx;
    if (out.empty() || mids[idx] > out.back()) out.push_back(mids[idx]);
  }
  if (out.back() != hi) out.push_back(hi);
  return out;
}

double jump_at(const JointSpectrum& spectrum, const LadderWindow& ladder, double lambda_j, SumDiagnostics* diag) {
  auto level = spectrum.find_level(lambda_j);
  if (!level) throw InvalidParameterError(fmt::format("{:.17g} is not an eigenvalue of {}", lambda_j, spectrum.describe()));
  SumDiagnostics local;
  SumDiagnostics* d = diag ? diag : &local;
  std::optional<StripFilter> strip;
  if (ladder.window.is_sharp()) strip = StripFilter{ladder.c.value, ladder.window.epsilon().value};
  else strip = StripFilter{ladder.c.value, ladder.window.tail_radius(1e-16 * ladder.window(0.0))};
  ModeEvaluator eval{ladder, d};
  Accumulator acc;
  std::uint64_t count = 0;
  spectrum.for_each_mode_at_level(*level, strip, [&](const JointMode& m) {
    ++d->modes_visited;
    const double f = eval.factor(m);
    if (f == 0.0) return;
    acc.add(f * m.weight);
    if (ladder.window.is_sharp()) count += m.count;
  });
  auto unit = spectrum.unit_weight();
  if (unit && ladder.window.is_sharp() && ladder.window.scale() == 1.0) {
    d->count = count;
    return *unit * static_cast<double>(count);
  }
  return acc.value();
}

Staircase epsilon_staircase(const JointSpectrum& spectrum, const ExactSquare& c, double lambda_j,
                            const std::vector<double>& eps_grid) {
  auto level = spectrum.find_level(lambda_j);
  if (!level) throw InvalidParameterError(fmt::format("{:.17g} is not an eigenvalue", lambda_j));
  struct Item {
    JointMode mode;
    double dist;
  };
  std::vector<Item> items;
  spectrum.for_each_mode_at_level(*level, std::nullopt, [&](const JointMode& m) {
    items.push_back({m, std::fabs(m.mu.value - c.value * m.lambda.value)});
  });
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.dist < b.dist; });

  Staircase st;
  st.series.abscissa = "epsilon";
  st.series.metadata["model"] = spectrum.describe();
  st.series.metadata["level"] = fmt::format("{:.17g}", level->value);
  st.series.metadata["c"] = fmt::format("{:.17g}", c.value);
  constexpr double kSame = 1e-12;
  for (std::size_t i = 0; i < items.size();) {
    std::size_t j = i;
    Accumulator acc;
    while (j < items.size() && items[j].dist - items[i].dist <= kSame * std::max(1.0, items[i].dist)) {
      acc.add(items[j].mode.weight);
      ++j;
    }
    st.membership_breakpoints.push_back(items[i].dist);
    if (acc.value() != 0.0) {
      st.value_breakpoints.push_back(items[i].dist);
      st.value_increments.push_back(acc.value());
    }
    i = j;
  }
  for (double eps : eps_grid) {
    if (!(eps > 0.0)) throw InvalidParameterError("staircase epsilon must be > 0");
    for (double b : st.membership_breakpoints)
      if (std::fabs(b - eps) <= kSame * std::max(1.0, b))
        throw InvalidParameterError(fmt::format("epsilon {:.17g} sits on a jump candidate", eps));
    const ExactSquare e = recognize_exact(eps);
    Accumulator acc;
    for (const auto& it : items)
      if (ladder_member(it.mode.mu, c, it.mode.lambda, e).inside) acc.add(it.mode.weight);
    st.series.x.push_back(eps);
    st.series.y.push_back(acc.value());
  }
  return st;
}

std::vector<double> offset_eps_grid(double eps_max, std::size_t count) {
  // Irrational offsets keep samples away from rational jump candidates.
  std::vector<double> g;
  const double golden = 0.6180339887498949;
  for (std::size_t k = 0; k < count; ++k) {
    double frac = std::fmod((static_cast<double>(k) + 0.5) / static_cast<double>(count) + 1e-3 * golden, 1.0);
    g.push_back(eps_max * frac);
  }
  std::sort(g.begin(), g.end());
  return g;
}

}  // namespace kwlab
