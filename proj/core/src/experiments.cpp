#include "kwlab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "json.hpp"
#include "kwlab/biangle.hpp"
#include "kwlab/clairaut.hpp"
#include "kwlab/error.hpp"
#include "kwlab/io.hpp"
#include "kwlab/joint_spectrum.hpp"
#include "kwlab/ladder_sums.hpp"
#include "kwlab/legendre.hpp"
#include "kwlab/restriction_weights.hpp"
#include "kwlab/trace.hpp"
#include "kwlab/window_functions.hpp"

namespace kwlab {

using nlohmann::ordered_json;

namespace {

constexpr double kPi = std::numbers::pi;

const std::vector<ExperimentInfo> kRegistry = {
    {"torus-weyl", "Sharp ladder sums on the flat torus against the lattice main term; calibrates C_{2,1}",
     "flat tori: 8 eps (1 - c^2)^{-1/2} lambda", 60, "default", {"weyl_sum.csv", "calibration.csv", "verdicts.json"}},
    {"torus-fuzzy-components", "Wide versus narrow bump windows on T^2 at slope 3/5: multi-component main term",
     "Theorem main 5: sum_j psi_hat(s_j^m)", 120, "default", {"weyl_sum.csv", "verdicts.json"}},
    {"sphere-jump-scaling", "Eigenspace jumps on S^2 and S^3 along a great circle, with the zonal coefficient exponent",
     "Lemma JUMPSPHERE", 300, "default", {"fit_series.csv", "verdicts.json"}},
    {"zonal-meridian", "Zonal harmonic restricted to a meridian: p-product coefficients and log growth of the norm",
     "S^2 zonal-meridian computation: log N + gamma", 120, "default", {"fit_series.csv", "verdicts.json"}},
    {"sojourn-detect", "Tapered trace S^c(t, psi) and its peaks against the analytic sojourn catalog",
     "Definition SOJOURNDEF, Eq. SpsiDEF", 300, "default", {"trace.csv", "sojourn.csv", "verdicts.json"}},
    {"epsilon-staircase", "Jump value as a function of epsilon at a fixed level", "S^2 sparse ladders: gaps >= 1/q", 60,
     "default", {"staircase.csv", "verdicts.json"}},
    {"tauberian-smoothing", "Sharp minus mollified ladder sum as T grows", "Prop. TLEMa: gamma(c, eps) / T", 300,
     "default", {"fit_series.csv", "verdicts.json"}},
    {"forbidden-decay", "Slopes c > 1: restricted weights vanish for mu > lambda", "Lemma FORBIDDEN", 60, "default",
     {"weyl_sum.csv", "verdicts.json"}},
    {"biangle-solve", "Multistart Newton on the bi-angle equation with dimension probes", "Definition BIANGLEDEF, CLEAN",
     300, "default", {"components.json", "sojourn.csv", "verdicts.json"}},
    {"clairaut-return", "First return times to a latitude circle on surfaces of revolution",
     "surfaces of revolution: T^c_H constant on latitude circles", 60, "default",
     {"clairaut.csv", "verdicts.json"}},
};

struct ModelChoice {
  ManifoldSpec m;
  SubmanifoldSpec h;
};

ModelChoice parse_model(const std::string& name) {
  if (name == "torus2") return {ManifoldSpec::torus(2), SubmanifoldSpec::coordinate_subtorus(1)};
  if (name == "torus3") return {ManifoldSpec::torus(3), SubmanifoldSpec::coordinate_subtorus(1)};
  if (name == "sphere2") return {ManifoldSpec::sphere(2), SubmanifoldSpec::great_subsphere(1)};
  if (name == "sphere3") return {ManifoldSpec::sphere(3), SubmanifoldSpec::great_subsphere(1)};
  throw InvalidParameterError("unknown model '" + name + "' (expected torus2|torus3|sphere2|sphere3)");
}

double parse_real(const std::string& text, const char* what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !std::isfinite(v)) throw InvalidParameterError(fmt::format("invalid {} '{}'", what, text));
  return v;
}

WindowFunction parse_window(const std::string& spec, const ExactSquare& eps) {
  if (spec == "sharp") return WindowFunction::sharp(eps);
  if (spec.rfind("bump:", 0) == 0) return WindowFunction::bump_square(parse_real(spec.substr(5), "bump width"));
  if (spec.rfind("mollified:", 0) == 0) {
    const auto body = spec.substr(10);
    const auto comma = body.find(',');
    if (comma == std::string::npos) throw InvalidParameterError("mollified window needs <T>,<eps>");
    return WindowFunction::mollified_indicator(parse_real(body.substr(0, comma), "T"),
                                               parse_real(body.substr(comma + 1), "epsilon"));
  }
  throw InvalidParameterError("unknown window '" + spec + "' (expected sharp|bump:<a>|mollified:<T>,<eps>)");
}

ordered_json verdict_json(const Verdict& v) {
  ordered_json j;
  j["name"] = v.name;
  j["anchor"] = v.anchor;
  j["measured"] = v.measured;
  j["predicted"] = v.predicted;
  j["tolerance"] = v.tolerance;
  j["comparison"] = v.comparison;
  j["pass"] = v.pass;
  j["note"] = v.note;
  return j;
}

class Context {
 public:
  explicit Context(const ExperimentConfig& cfg) : cfg(cfg) {}

  const ExperimentConfig& cfg;
  std::vector<Verdict> verdicts;
  std::vector<std::string> files;

  void csv(const std::string& name, const CsvTable& table) {
    write_csv(cfg.out / name, table);
    files.push_back(name);
  }
  void json(const std::string& name, const ordered_json& doc) {
    write_text(cfg.out / name, doc.dump(2) + "\n");
    files.push_back(name);
  }
  void add(Verdict v) { verdicts.push_back(std::move(v)); }

  unsigned jobs() const { return cfg.deterministic ? 1u : std::max(1u, cfg.jobs); }
  std::vector<std::string> models(std::vector<std::string> fallback) const {
    if (cfg.model.empty()) return fallback;
    return {cfg.model};
  }
};

CsvTable weyl_table(const std::string& model) {
  CsvTable t;
  t.kind = "weyl_sum";
  t.columns = {"lambda", "value", "main_term_pred", "residual", "rel_err"};
  t.tags["model"] = model;
  return t;
}

void weyl_row(CsvTable& t, double lambda, double value, double pred) {
  const double res = value - pred;
  t.rows.push_back({lambda, value, pred, res, pred != 0.0 ? res / pred : 0.0});
}

CsvTable fit_table() {
  CsvTable t;
  t.kind = "fit_series";
  t.columns = {"series", "x", "y"};
  return t;
}

std::vector<double> geometric_grid(double lo, double hi, int count) {
  std::vector<double> g;
  for (int i = 0; i < count; ++i) g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1)));
  return g;
}

// Distinct multiples of `step` nearest a geometric grid.
std::vector<std::int64_t> geometric_degrees(std::int64_t lo, std::int64_t hi, int count, std::int64_t step) {
  std::vector<std::int64_t> out;
  for (double x : geometric_grid(static_cast<double>(lo), static_cast<double>(hi), count)) {
    auto v = static_cast<std::int64_t>(std::llround(x / static_cast<double>(step))) * step;
    if (out.empty() || v > out.back()) out.push_back(v);
  }
  return out;
}

// ---------------------------------------------------------------------------

void run_torus_weyl(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto model = cfg.model.empty() ? std::string("torus2") : cfg.model;
  const auto choice = parse_model(model);
  if (choice.m.kind != ManifoldKind::Torus) throw InvalidParameterError("torus-weyl needs a torus model");
  const int n = choice.m.n;
  const ExactSquare c = parse_exact(cfg.c), eps = parse_exact(cfg.epsilon);
  const double lmax = cfg.lambda_max;
  TorusSpectrum spec(n, 1, std::max(lmax, 1.0));
  const auto ladder = LadderWindow::make(c, parse_window(cfg.window, eps));
  if (!ladder.window.is_sharp()) throw InvalidParameterError("torus-weyl uses the sharp window");

  auto table = weyl_table(model);
  table.tags["c"] = c.str();
  table.tags["epsilon"] = eps.str();
  const double unit = *spec.unit_weight();
  table.tags["zero_mode"] = format_double(unit);
  auto pred = leading_coeff(n, 1, c.value, ladder.window, hausdorff_volume(choice.h, choice.m), {0.0});
  const double c_ref = 2.0 / (kPi * kPi);
  if (lmax <= 0.0) {
    // Only the constant mode survives.
    weyl_row(table, 0.0, sharp_ladder_sum(spec, ladder, 0.0), 0.0);
    ctx.csv("weyl_sum.csv", table);
    ctx.add(verdict_abs("zero-mode-only sum", "flat tori", table.rows[0].size() ? std::get<double>(table.rows[0][1]) : 0.0,
                        unit, 0.0));
    return;
  }
  auto levels = cached_levels(spec, lmax);
  auto grid = midpoint_grid(levels, 400);
  auto series = ladder_series(spec, ladder, grid);
  const double at_max = sharp_ladder_sum(spec, ladder, lmax);
  std::optional<Calibration> cal;
  if (grid.size() >= 2 && grid.back() >= 10.0 * grid.front()) cal = calibrate_universal_constant(series, pred);
  if (n == 2) pred.universal_constant = c_ref;
  else if (cal) pred.universal_constant = cal->constant;
  for (std::size_t i = 0; i < series.x.size(); ++i) weyl_row(table, series.x[i], series.y[i], pred.predict(series.x[i]));
  weyl_row(table, lmax, at_max, pred.predict(lmax));
  ctx.csv("weyl_sum.csv", table);

  if (n == 2) {
    ctx.add(verdict_rel("main-term ratio at lambda_max", "flat tori: (2pi)^{-1} 8 eps (1-c^2)^{-1/2} lambda",
                        at_max / pred.predict(lmax), 1.0, 0.03));
    if (cal) {
      auto v = verdict_rel("calibrated C_{2,1}", "Theorem main 2: universal constants C_{n,d}", cal->constant, c_ref, 0.05);
      v.note = fmt::format("top-decade drift {:.4f}", cal->drift);
      ctx.add(v);
    }
    // Invariance sweeps: epsilon at an irrational slope, slope at the configured epsilon.
    CsvTable ct;
    ct.kind = "calibration";
    ct.columns = {"c", "epsilon", "constant", "drift"};
    auto sweep_grid = midpoint_grid(levels, 80);
    auto calibrate = [&](const ExactSquare& cc, const ExactSquare& ee) {
      auto lw = LadderWindow::make(cc, WindowFunction::sharp(ee));
      auto p = leading_coeff(2, 1, cc.value, lw.window, 2.0 * kPi, {0.0});
      auto cl = calibrate_universal_constant(ladder_series(spec, lw, sweep_grid), p);
      ct.rows.push_back({cc.str(), ee.str(), cl.constant, cl.drift});
      return cl.constant;
    };
    auto spread = [](const std::vector<double>& v) {
      const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
      double mean = 0.0;
      for (double x : v) mean += x;
      mean /= static_cast<double>(v.size());
      return (*mx - *mn) / mean;
    };
    std::vector<double> by_eps, by_c;
    for (const char* e : {"1/10", "1/5", "3/10"}) by_eps.push_back(calibrate(parse_exact("1/2"), parse_exact(e)));
    for (const char* cc : {"1/2", "sqrt(1/2)", "4/5"}) by_c.push_back(calibrate(parse_exact(cc), eps));
    ctx.csv("calibration.csv", ct);
    auto ve = verdict_abs("C_{2,1} spread over eps in {0.1,0.2,0.3} (c=1/2)", "Theorem main 2", spread(by_eps), 0.0, 0.05);
    ve.note = fmt::format("constants {:.6f} {:.6f} {:.6f}", by_eps[0], by_eps[1], by_eps[2]);
    ctx.add(ve);
    auto vc = verdict_abs(fmt::format("C_{{2,1}} spread over c in {{0.5,1/sqrt2,0.8}} (eps={})", eps.str()),
                          "Theorem main 2", spread(by_c), 0.0, 0.05);
    vc.note = fmt::format("constants {:.6f} {:.6f} {:.6f}", by_c[0], by_c[1], by_c[2]);
    ctx.add(vc);
  } else if (cal) {
    auto v = verdict_flag(fmt::format("C_{{{},1}} calibration stable over the top decade", n), "Theorem main 2",
                          !cal->unstable, fmt::format("C = {:.8g}, drift {:.4f}", cal->constant, cal->drift));
    v.measured = cal->drift;
    ctx.add(v);
  }
}

// ---------------------------------------------------------------------------

void run_torus_fuzzy(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto model = cfg.model.empty() ? std::string("torus2") : cfg.model;
  const auto choice = parse_model(model);
  if (choice.m.kind != ManifoldKind::Torus || choice.m.n != 2)
    throw InvalidParameterError("torus-fuzzy-components runs on torus2");
  const ExactSquare c = parse_exact(cfg.c);
  const auto wide = parse_window(cfg.window, parse_exact(cfg.epsilon));
  if (wide.is_sharp()) throw InvalidParameterError("torus-fuzzy-components needs a smooth window");
  const auto narrow = WindowFunction::bump_square(1.0);
  TorusSpectrum spec(2, 1, cfg.lambda_max);
  auto grid = midpoint_grid(cached_levels(spec, cfg.lambda_max), 60);
  const auto lw = LadderWindow::make(c, wide), ln = LadderWindow::make(c, narrow);
  auto sw = ladder_series(spec, lw, grid);
  auto sn = ladder_series(spec, ln, grid);

  const double s_max = std::max(wide.ft_support_radius(), narrow.ft_support_radius());
  auto catalog = torus_sojourn_set(2, 1, c.value, s_max, 1e-9);
  std::vector<double> s_vals;
  for (const auto& e : catalog.entries)
    if (e.maximal && std::fabs(e.t) < 1e-9 && std::fabs(e.s) <= wide.ft_support_radius()) s_vals.push_back(e.s);
  std::vector<double> s_narrow;
  for (double s : s_vals)
    if (std::fabs(s) <= narrow.ft_support_radius()) s_narrow.push_back(s);
  auto pw = leading_coeff(2, 1, c.value, wide, 2.0 * kPi, s_vals);
  auto pn = leading_coeff(2, 1, c.value, narrow, 2.0 * kPi, s_narrow);
  pw.universal_constant = 1.0 / (kPi * kPi);

  auto table = weyl_table(model);
  table.tags["window"] = wide.describe();
  table.tags["c"] = c.str();
  for (std::size_t i = 0; i < sw.x.size(); ++i) weyl_row(table, sw.x[i], sw.y[i], pw.predict(sw.x[i]));
  ctx.csv("weyl_sum.csv", table);

  // Main-coefficient ratio: mean of wide / narrow over the top decade.
  double sum = 0.0;
  int cnt = 0;
  for (std::size_t i = 0; i < sw.x.size(); ++i)
    if (sw.x[i] >= sw.x.back() / 10.0 && sn.y[i] > 0.0) {
      sum += sw.y[i] / sn.y[i];
      ++cnt;
    }
  const double measured = cnt ? sum / cnt : std::nan("");
  const double predicted = pw.base / pn.base;
  auto v = verdict_rel("wide/narrow main-coefficient ratio", "Theorem main 5: sum_j psi_hat(s_j^m)", measured, predicted,
                       0.10);
  v.note = fmt::format("{} component(s) inside the wide window", s_vals.size());
  ctx.add(v);
  // Weight carried by each nonprincipal component relative to the principal one.
  double side = 0.0;
  for (double s : s_vals)
    if (s != 0.0) side += wide.ft(s);
  if (side > 0.0) {
    const double per_component = (measured * narrow.ft(0.0) - wide.ft(0.0)) / side;
    auto vq = verdict_rel("nonprincipal per-component weight / principal", "Theorem main 5 remark: alpha_{j,0} equal",
                          per_component, 1.0, 0.10);
    vq.note = "measured, not assumed";
    ctx.add(vq);
  }
}

// ---------------------------------------------------------------------------

void run_sphere_jump(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const ExactSquare c = parse_exact(cfg.c), eps = parse_exact(cfg.epsilon);
  const auto ladder = LadderWindow::make(c, WindowFunction::sharp(eps));
  auto table = fit_table();
  for (const auto& model : ctx.models({"sphere2", "sphere3"})) {
    const auto choice = parse_model(model);
    if (choice.m.kind != ManifoldKind::Sphere) throw InvalidParameterError("sphere-jump-scaling needs a sphere model");
    const int n = choice.m.n;
    if (n == 2) {
      SphereSpectrum spec(2, choice.h, 2048, SphereWeightMethod::ClosedForm);
      bool odd_zero = true;
      for (std::int64_t N = 1; N <= 2047 && odd_zero; N += 2) odd_zero = jump_at(spec, ladder, static_cast<double>(N)) == 0.0;
      ctx.add(verdict_flag("S^2 jumps vanish at odd N (N <= 2047)", "Lemma JUMPSPHERE", odd_zero));
      bool parity_zero = true;
      for (std::int64_t N = 0; N <= 200 && parity_zero; ++N)
        for (std::int64_t M = 0; M <= N; ++M)
          if ((N - M) % 2 != 0 && spec.weight(N, M) != 0.0) parity_zero = false;
      ctx.add(verdict_flag("S^2 weights vanish for N - M odd (N <= 200)", "Lemma JUMPSPHERE", parity_zero));
      const double j1 = jump_at(spec, ladder, 1024.0), j2 = jump_at(spec, ladder, 2048.0);
      ctx.add(verdict_abs("S^2 |J(2048)/J(1024) - 1|", "Lemma JUMPSPHERE: exponent n-2 = 0", std::fabs(j2 / j1 - 1.0),
                          0.0, 0.05));
      std::vector<double> xs, ys, zs;
      LegendreCatalog cat(2048);
      for (auto N : geometric_degrees(64, 2048, 16, 4)) {
        xs.push_back(static_cast<double>(N));
        ys.push_back(jump_at(spec, ladder, static_cast<double>(N)));
        table.rows.push_back({std::string("s2_jump"), xs.back(), ys.back()});
        // Single zonal coefficient at the ladder frequency M = c N.
        const auto M = static_cast<std::int64_t>(std::llround(c.value * static_cast<double>(N)));
        double w = 0.0;
        for (const auto& zc : zonal_meridian_profile(N, cat))
          if (zc.m == M) w = zc.weight;
        zs.push_back(w);
        table.rows.push_back({std::string("zonal_coefficient"), xs.back(), w});
      }
      const auto fj = fit_growth_exponent(xs, ys);
      auto vj = verdict_abs("S^2 eigenspace jump exponent", "Lemma JUMPSPHERE", fj.slope, 0.0, 0.15);
      vj.note = fmt::format("bootstrap half-width {:.3g}", fj.half_width);
      ctx.add(vj);
      const auto fz = fit_growth_exponent(xs, zs);
      auto vz = verdict_abs("S^2 single zonal coefficient exponent", "S^2 zonal-meridian computation", fz.slope, -1.0, 0.15);
      vz.note = fmt::format("eigenspace jump exponent {:.4f} vs single coefficient {:.4f}: the constant-order claim "
                            "holds for the eigenspace sum, the single coefficient decays like 1/N",
                            fj.slope, fz.slope);
      ctx.add(vz);
    } else {
      const std::int64_t top = 1024;
      SphereSpectrum spec(n, choice.h, top);
      std::vector<double> xs, ys;
      for (auto N : geometric_degrees(64, top, 17, 4)) {
        xs.push_back(static_cast<double>(N));
        ys.push_back(jump_at(spec, ladder, static_cast<double>(N)));
        table.rows.push_back({fmt::format("s{}_jump", n), xs.back(), ys.back()});
      }
      const auto fj = fit_growth_exponent(xs, ys);
      auto v = verdict_abs(fmt::format("S^{} jump exponent over N in [64, 1024]", n), "Lemma JUMPSPHERE / Cor. JUMPCOR",
                           fj.slope, n - 2.0, 0.15);
      v.note = fmt::format("bootstrap half-width {:.3g}", fj.half_width);
      ctx.add(v);
    }
  }
  ctx.csv("fit_series.csv", table);
}

// ---------------------------------------------------------------------------

void run_zonal_meridian(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const std::int64_t nmax = cfg.level;
  LegendreCatalog cat(std::max<std::int64_t>(nmax, 2000) + 2);
  double worst = 0.0;
  for (std::int64_t N = 0; N <= nmax; ++N) {
    const auto prof = zonal_meridian_profile(N, cat);
    const int K = static_cast<int>(4 * N + 8);
    const double norm = std::sqrt((2.0 * N + 1.0) / (4.0 * kPi)) / std::sqrt(2.0 * kPi) * (2.0 * kPi / K);
    double scale = 0.0;
    for (const auto& zc : prof) scale = std::max(scale, zc.weight);
    for (const auto& zc : prof) {
      double acc = 0.0;
      for (int k = 0; k < K; ++k) {
        const double phi = 2.0 * kPi * k / K;
        acc += legendre_p(N, std::cos(phi)) * std::cos(static_cast<double>(zc.m) * phi);
      }
      const double quad = norm * norm * acc * acc;
      const double err = zc.weight > 1e-300 ? std::fabs(quad - zc.weight) / zc.weight : std::fabs(quad) / scale;
      worst = std::max(worst, err);
    }
  }
  ctx.add(verdict_abs(fmt::format("p-product vs quadrature, N <= {}", nmax), "Eq. ZONALMER (half-index reading)", worst,
                      0.0, 1e-8));
  const bool exact2 = cat.p(1) * cat.p(1) == 0.25 && 2.0 * cat.p(0) * cat.p(2) == 0.75;
  ctx.add(verdict_flag("P_2(cos phi) = 1/4 + (3/4) cos 2phi", "Eq. ZONALMER", exact2));

  auto table = fit_table();
  std::vector<double> ratios;
  for (auto N : geometric_degrees(500, 2000, 12, 2)) {
    const double v = zonal_restricted_norm(N, cat);
    table.rows.push_back({std::string("restricted_norm"), static_cast<double>(N), v});
    ratios.push_back(v / std::log(static_cast<double>(N)));
  }
  const auto [mn, mx] = std::minmax_element(ratios.begin(), ratios.end());
  auto v = verdict_abs("restricted norm / log N variation over [500, 2000]", "S^2 zonal-meridian: log N + gamma",
                       (*mx - *mn) / *mn, 0.0, 0.15);
  v.note = fmt::format("norm / log N from {:.6f} to {:.6f}", *mn, *mx);
  ctx.add(v);
  ctx.csv("fit_series.csv", table);
}

// ---------------------------------------------------------------------------

std::unique_ptr<JointSpectrum> build_spectrum(const ModelChoice& choice, double lambda_max) {
  return make_spectrum(choice.m, choice.h, lambda_max);
}

SojournSet catalog_for(const ModelChoice& choice, double c, double s_max, double t_max) {
  if (choice.m.kind == ManifoldKind::Torus) return torus_sojourn_set(choice.m.n, choice.h.d, c, s_max, t_max);
  return sphere_sojourn_set(choice.m.n, choice.h.d, c, s_max, t_max);
}

double catalog_max_residual(const ModelChoice& choice, const SojournSet& set, double c, std::uint64_t seed, int points) {
  auto model = make_biangle_model(choice.m.kind == ManifoldKind::Torus ? "torus" : "sphere", choice.m.n, choice.h.d);
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (const auto& e : set.entries) {
    if (!e.maximal) continue;
    for (int k = 0; k < points; ++k) {
      const auto p = model->random_point(c, rng);
      worst = std::max(worst, biangle_residual(*model, p, e.s, e.t));
    }
  }
  return worst;
}

void run_sojourn_detect(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto model = cfg.model.empty() ? std::string("torus2") : cfg.model;
  const auto choice = parse_model(model);
  const ExactSquare c = parse_exact(cfg.c);
  const auto window = parse_window(cfg.window, parse_exact(cfg.epsilon));
  const auto ladder = LadderWindow::make(c, window);
  const double lmax = cfg.lambda_max;
  const double dt = cfg.dt > 0.0 ? cfg.dt : 0.5 * kPi / lmax;
  auto spec = build_spectrum(choice, lmax);
  const auto grid = uniform_grid(cfg.t_min, cfg.t_max, dt);
  TraceOptions opts;
  opts.jobs = ctx.jobs();
  const auto levels = ladder_level_contributions(*spec, ladder, lmax);
  const auto prof = trace_from_levels(levels, lmax, grid, opts);
  const auto report = detect_singular_support(prof);

  CsvTable tt;
  tt.kind = "trace";
  tt.columns = {"t", "re", "im", "abs"};
  tt.tags["model"] = model;
  tt.tags["window"] = window.describe();
  tt.tags["lambda_max"] = format_double(lmax);
  tt.tags["taper"] = to_string(opts.taper);
  for (std::size_t i = 0; i < prof.t.size(); ++i)
    tt.rows.push_back({prof.t[i], prof.value[i].real(), prof.value[i].imag(), std::abs(prof.value[i])});
  ctx.csv("trace.csv", tt);

  const double t_span = std::max(std::fabs(cfg.t_min), std::fabs(cfg.t_max));
  const double s_support = window.is_sharp() ? 1e6 : window.ft_support_radius();
  const auto full = catalog_for(choice, c.value, std::min(s_support, 1e3), t_span + dt);
  CsvTable st;
  st.kind = "sojourn";
  st.columns = {"t", "kind", "family", "prominence"};
  st.tags["model"] = model;
  st.tags["c"] = c.str();
  std::vector<double> literal, allowed;
  for (const auto& e : full.entries) {
    if (!e.maximal || e.t < cfg.t_min - dt || e.t > cfg.t_max + dt) continue;
    allowed.push_back(e.t);
    // Torus k = 0 winding family, or every sphere family.
    const bool lit = choice.m.kind == ManifoldKind::Sphere || e.j == 0;
    if (lit) {
      literal.push_back(e.t);
      st.rows.push_back({e.t, std::string("predicted"), e.family, std::string()});
    }
  }
  for (const auto& p : report.peaks) st.rows.push_back({p.t_refined, std::string("detected"), std::string(), p.prominence});
  ctx.csv("sojourn.csv", st);

  auto near = [&](double t, const std::vector<double>& set) {
    return std::any_of(set.begin(), set.end(), [&](double u) { return std::fabs(u - t) <= dt * (1 + 1e-9); });
  };
  std::vector<double> detected;
  for (const auto& p : report.peaks) detected.push_back(p.t_refined);
  std::string missing, spurious;
  std::sort(literal.begin(), literal.end());
  literal.erase(std::unique(literal.begin(), literal.end(), [&](double a, double b) { return std::fabs(a - b) < 1e-9; }),
                literal.end());
  int found = 0;
  for (double t : literal) {
    if (near(t, detected)) ++found;
    else missing += fmt::format(" {:.6f}", t);
  }
  int extra = 0;
  for (const auto& p : report.peaks) {
    const double t = p.t_refined;
    // Weak peaks are located to within their own half-width.
    const double tol = std::max(dt, p.half_width) * (1 + 1e-9);
    if (!std::any_of(allowed.begin(), allowed.end(), [&](double u) { return std::fabs(u - t) <= tol; })) {
      ++extra;
      spurious += fmt::format(" {:.6f}", t);
    }
  }
  if (choice.m.kind == ManifoldKind::Torus) {
    auto v = verdict_abs("predicted k=0 sojourn times detected", "Definition SOJOURNDEF", static_cast<double>(found),
                         static_cast<double>(literal.size()), 0.0);
    v.note = missing.empty() ? "all detected" : "missing:" + missing;
    ctx.add(v);
  } else {
    ctx.add(verdict_flag("t = 0 detected", "Definition SOJOURNDEF", near(0.0, detected)));
  }
  auto vs = verdict_abs("detected peaks off the sojourn catalog", "Definition SOJOURNDEF", extra, 0.0, 0.0);
  vs.note = spurious.empty() ? fmt::format("{} peaks above threshold {:.4g}", detected.size(), report.threshold)
                             : "off-catalog:" + spurious;
  ctx.add(vs);

  // Stability of the literal detections at half the cutoff.
  const double half = 0.5 * lmax;
  std::vector<LevelContribution> lower;
  for (const auto& l : levels)
    if (l.lambda <= half) lower.push_back(l);
  const auto rep_half = detect_singular_support(trace_from_levels(lower, half, grid, opts));
  std::vector<double> det_half;
  for (const auto& p : rep_half.peaks) det_half.push_back(p.t_refined);
  int found_half = 0;
  for (double t : literal)
    if (near(t, det_half)) ++found_half;
  auto vh = verdict_flag("literal detections stable at lambda_max / 2", "Definition SOJOURNDEF",
                         found_half == found, fmt::format("{} of {} at half cutoff", found_half, literal.size()));
  ctx.add(vh);

  const double worst = catalog_max_residual(choice, full, c.value, cfg.seed, 100);
  ctx.add(verdict_abs("analytic catalog residual at 100 random cone points", "Eq. EQ", worst, 0.0, 1e-10));
}

// ---------------------------------------------------------------------------

void run_staircase(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto model = cfg.model.empty() ? std::string("sphere2") : cfg.model;
  const auto choice = parse_model(model);
  const ExactSquare c = parse_exact(cfg.c);
  std::vector<double> grid;
  for (int k = 0; k < static_cast<int>(std::ceil(cfg.eps_max)); ++k)
    for (double e : offset_eps_grid(1.0, static_cast<std::size_t>(cfg.eps_points))) grid.push_back(k + e);

  double lambda = static_cast<double>(cfg.level);
  std::unique_ptr<JointSpectrum> spec;
  if (choice.m.kind == ManifoldKind::Torus) {
    // level holds |j|^2 on tori.
    lambda = std::sqrt(static_cast<double>(cfg.level));
    spec = build_spectrum(choice, lambda + 1.0);
  } else {
    spec = build_spectrum(choice, lambda);
  }
  const auto st = epsilon_staircase(*spec, c, lambda, grid);
  CsvTable tab;
  tab.kind = "staircase";
  tab.columns = {"epsilon", "jump_value"};
  tab.tags["model"] = model;
  tab.tags["c"] = c.str();
  tab.tags["level"] = std::to_string(cfg.level);
  for (std::size_t i = 0; i < st.series.x.size(); ++i) tab.rows.push_back({st.series.x[i], st.series.y[i]});
  ctx.csv("staircase.csv", tab);

  std::vector<double> below;
  for (std::size_t i = 0; i < st.series.x.size(); ++i)
    if (st.series.x[i] < 1.0) below.push_back(st.series.y[i]);
  const bool constant =
      !below.empty() && std::all_of(below.begin(), below.end(), [&](double v) { return v == below.front(); });
  ctx.add(verdict_flag(fmt::format("jump constant on (0,1) at {} offset points", below.size()),
                       "S^2 sparse ladders: gaps >= 1/q", constant));
  double first_change = std::nan("");
  for (double b : st.membership_breakpoints)
    if (b > 1e-12) {
      first_change = b;
      break;
    }
  ctx.add(verdict_abs("first ladder breakpoint", "S^2 sparse ladders: gaps >= 1/q", first_change, 1.0, 1e-12));
  double first_value = std::nan("");
  for (double b : st.value_breakpoints)
    if (b > 1e-12) {
      first_value = b;
      break;
    }
  if (choice.m.kind == ManifoldKind::Sphere && choice.h.kind == SubmanifoldKind::GreatSubsphere) {
    auto v = verdict_abs("first value increment", "Lemma JUMPSPHERE parity", first_value, 2.0, 1e-12);
    v.note = "breakpoints at odd distance carry N - M odd and zero weight";
    ctx.add(v);
  }

  // Independent cross-check on a torus shell at a rational slope.
  const std::int64_t R = 625;
  const ExactSquare ct = parse_exact("3/5");
  TorusSpectrum torus(2, 1, 26.0);
  std::vector<double> tgrid;
  for (int k = 0; k < 12; ++k)
    for (double e : offset_eps_grid(1.0, 5)) tgrid.push_back(k + e);
  const auto ts = epsilon_staircase(torus, ct, 25.0, tgrid);
  bool agree = true;
  const double unit = *torus.unit_weight();
  for (std::size_t i = 0; i < tgrid.size(); ++i) {
    std::int64_t count = 0;
    for (std::int64_t a = -25; a <= 25; ++a)
      for (std::int64_t b = -25; b <= 25; ++b)
        if (a * a + b * b == R && std::fabs(std::fabs(static_cast<double>(a)) - 15.0) <= tgrid[i]) ++count;
    if (ts.series.y[i] != unit * static_cast<double>(count)) agree = false;
  }
  ctx.add(verdict_flag("torus |j|^2 = 625, c = 3/5 staircase matches shell enumeration", "flat tori lattice count", agree));
}

// ---------------------------------------------------------------------------

void run_tauberian(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto model = cfg.model.empty() ? std::string("torus2") : cfg.model;
  const auto choice = parse_model(model);
  const ExactSquare c = parse_exact(cfg.c), eps = parse_exact(cfg.epsilon);
  auto spec = build_spectrum(choice, cfg.lambda_max);
  auto scan = smoothing_error_scan(*spec, c, eps, cfg.lambda_max, cfg.T_grid);
  auto table = fit_table();
  table.tags["model"] = model;
  table.tags["lambda"] = format_double(cfg.lambda_max);
  table.tags["sharp_value"] = format_double(scan.sharp_value);
  for (std::size_t i = 0; i < scan.series.x.size(); ++i)
    table.rows.push_back({std::string("smoothing_error"), scan.series.x[i], scan.series.y[i]});
  ctx.csv("fit_series.csv", table);
  auto v = verdict_range("log-log slope of |N_eps - N_{psi_T,eps}| in T", "Prop. TLEMa: gamma(c, eps) / T",
                         scan.fit.slope, -1.3, -0.7);
  v.note = fmt::format("bootstrap half-width {:.3g}", scan.fit.half_width);
  ctx.add(v);
  const auto& x = scan.series.x;
  auto i4 = std::find(x.begin(), x.end(), 4.0), i8 = std::find(x.begin(), x.end(), 8.0);
  if (i4 != x.end() && i8 != x.end()) {
    const double r = scan.series.y[static_cast<std::size_t>(i8 - x.begin())] /
                     scan.series.y[static_cast<std::size_t>(i4 - x.begin())];
    ctx.add(verdict_range("error(T=8) / error(T=4)", "Prop. TLEMa", r, 0.35, 0.65));
  }
}

// ---------------------------------------------------------------------------

void run_forbidden(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const ExactSquare c = parse_exact(cfg.c), eps = parse_exact(cfg.epsilon);
  if (!(c.value > 1.0)) throw InvalidParameterError("forbidden-decay probes slopes c > 1");
  const auto ladder = LadderWindow::forbidden(c, WindowFunction::sharp(eps));
  const double lmax = cfg.lambda_max;
  bool table_written = false;
  for (const auto& model : ctx.models({"torus2", "sphere2"})) {
    const auto choice = parse_model(model);
    auto spec = build_spectrum(choice, lmax);
    // Every enumerated pair with mu > lambda has weight exactly zero.
    std::uint64_t forbidden_pairs = 0, nonzero = 0;
    if (choice.m.kind == ManifoldKind::Torus) {
      const int n = choice.m.n;
      const std::int64_t R = 12;
      std::vector<std::int64_t> j(static_cast<std::size_t>(n)), k(1);
      std::function<void(int)> rec = [&](int i) {
        if (i == n) {
          std::int64_t jj = 0;
          for (auto v : j) jj += v * v;
          for (std::int64_t kk = -2 * R; kk <= 2 * R; ++kk) {
            if (kk * kk <= jj) continue;
            k[0] = kk;
            ++forbidden_pairs;
            if (torus_mode_weight(j, k) != 0.0) ++nonzero;
          }
          return;
        }
        for (std::int64_t v = -R; v <= R; ++v) {
          j[static_cast<std::size_t>(i)] = v;
          rec(i + 1);
        }
      };
      rec(0);
    } else {
      auto& sph = static_cast<SphereSpectrum&>(*spec);
      const auto top = static_cast<std::int64_t>(lmax);
      for (std::int64_t N = 0; N <= top; ++N)
        for (std::int64_t M = N + 1; M <= 2 * N + 2; ++M) {
          ++forbidden_pairs;
          if (sph.weight(N, M) != 0.0) ++nonzero;
        }
      // Quadrature shadow: the unshortcut integral is zero to rounding.
      double worst = 0.0;
      for (std::int64_t N = 0; N <= std::min<std::int64_t>(top, 120); ++N) {
        for (std::int64_t M = N + 1; M <= N + 6; ++M) {
          const int Q = static_cast<int>(2 * (N + M) + 2);
          double acc = 0.0;
          for (int q = 0; q < Q; ++q) {
            const double u = 2.0 * kPi * q / Q;
            acc += sphere_projector_kernel(2, N, std::cos(u)) * 2.0 * std::cos(static_cast<double>(M) * u);
          }
          worst = std::max(worst, std::fabs(acc * 2.0 * kPi / Q) / (sphere_projector_kernel(2, N, 1.0) * 2.0 * kPi));
        }
      }
      ctx.add(verdict_abs("S^2 quadrature of forbidden weights (relative)", "Lemma FORBIDDEN", worst, 0.0, 1e-12));
    }
    auto v = verdict_abs(fmt::format("{}: nonzero weights with mu > lambda", model), "Lemma FORBIDDEN",
                         static_cast<double>(nonzero), 0.0, 0.0);
    v.note = fmt::format("{} forbidden pairs enumerated", forbidden_pairs);
    ctx.add(v);

    // Sums at c > 1 reduce to the constant mode.
    auto grid = midpoint_grid(cached_levels(*spec, lmax), 200);
    grid.push_back(lmax);
    const double zero_mode = sharp_ladder_sum(*spec, ladder, 0.0);
    auto table = weyl_table(model);
    table.tags["c"] = c.str();
    bool only_zero = true;
    for (double lam : grid) {
      const double val = sharp_ladder_sum(*spec, ladder, lam);
      weyl_row(table, lam, val, zero_mode);
      if (val != zero_mode) only_zero = false;
    }
    ctx.add(verdict_flag(fmt::format("{}: c = {} sums equal the constant-mode contribution", model, c.str()),
                         "Lemma FORBIDDEN", only_zero));
    if (!table_written) {
      ctx.csv("weyl_sum.csv", table);
      table_written = true;
    }
  }
}

// ---------------------------------------------------------------------------

void run_biangle(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto model_name = cfg.model.empty() ? std::string("torus2") : cfg.model;
  const auto choice = parse_model(model_name);
  const double c = parse_exact(cfg.c).value;
  const std::string kind = choice.m.kind == ManifoldKind::Torus ? "torus" : "sphere";
  auto model = make_biangle_model(kind, choice.m.n, choice.h.d);
  SolveOptions so;
  so.s_min = cfg.t_min;
  so.s_max = cfg.t_max;
  so.t_min = cfg.t_min;
  so.t_max = cfg.t_max;
  so.seed = cfg.seed;
  so.probe_dimensions = true;
  const auto rep = solve_biangles(*model, c, so);
  const double span = std::max(std::fabs(cfg.t_min), std::fabs(cfg.t_max));
  const auto catalog = catalog_for(choice, c, span, span);

  ordered_json comps = ordered_json::array();
  CsvTable st;
  st.kind = "sojourn";
  st.columns = {"t", "kind", "family", "prominence"};
  st.tags["model"] = model_name;
  for (const auto& e : catalog.entries)
    if (e.maximal && e.s >= so.s_min && e.s <= so.s_max && e.t >= so.t_min && e.t <= so.t_max)
      st.rows.push_back({e.t, std::string("predicted"), e.family, std::string()});
  int extra = 0;
  std::string extras;
  for (const auto& comp : rep.components) {
    ordered_json j;
    j["s"] = comp.s;
    j["t"] = comp.t;
    j["maximal"] = comp.maximal;
    j["generic_fraction"] = comp.generic_fraction;
    j["converged_seeds"] = comp.converged_seeds;
    j["dimension"] = comp.probe.estimated_dimension;
    j["fixed_subspace_dimension"] = comp.probe.fixed_subspace_dimension;
    j["clean"] = comp.probe.clean;
    j["sample_count"] = comp.probe.samples;
    j["probe_status"] = comp.probe.status == DimensionProbe::Status::Ok ? "ok" : "inconclusive";
    comps.push_back(j);
    st.rows.push_back({comp.t, std::string("detected"), std::string(), comp.generic_fraction});
    if (!comp.maximal) continue;
    const bool known = std::any_of(catalog.entries.begin(), catalog.entries.end(), [&](const SojournEntry& e) {
      return std::fabs(e.s - comp.s) <= 1e-6 && std::fabs(e.t - comp.t) <= 1e-6;
    });
    if (!known) {
      ++extra;
      extras += fmt::format(" ({:.6f},{:.6f})", comp.s, comp.t);
    }
  }
  ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["model"] = model->name();
  doc["c"] = c;
  doc["components"] = comps;
  ctx.json("components.json", doc);
  ctx.csv("sojourn.csv", st);

  int missing = 0;
  std::string missed;
  for (const auto& e : catalog.entries) {
    if (!e.maximal || e.s < so.s_min || e.s > so.s_max || e.t < so.t_min || e.t > so.t_max) continue;
    const bool hit = std::any_of(rep.components.begin(), rep.components.end(), [&](const BiAngleComponent& comp) {
      return std::fabs(e.s - comp.s) <= 1e-6 && std::fabs(e.t - comp.t) <= 1e-6;
    });
    if (!hit) {
      ++missing;
      missed += fmt::format(" {}", e.family);
    }
  }
  auto vm = verdict_abs("catalog components missed by the solver", "Definition BIANGLEDEF", missing, 0.0, 0.0);
  vm.note = missed;
  ctx.add(vm);
  auto ve = verdict_abs("solver components outside the catalog", "Definition MAXDEF", extra, 0.0, 0.0);
  ve.note = extras;
  ctx.add(ve);

  // Principal component dimension over the configured pairs.
  for (const auto& [k, n, d] : std::vector<std::tuple<std::string, int, int>>{
           {"torus", 2, 1}, {"torus", 3, 1}, {"torus", 3, 2}, {"sphere", 2, 1}, {"sphere", 3, 1}, {"sphere", 3, 2}}) {
    auto m = make_biangle_model(k, n, d);
    ProbeOptions po;
    po.seed = cfg.seed;
    const auto probe = component_dimension_probe(*m, c, 0.0, 0.0, po);
    auto v = verdict_abs(fmt::format("{} principal component dimension", m->name()), "Definition CLEAN",
                         probe.estimated_dimension, n + d - 2, 0.0);
    v.note = fmt::format("fixed-subspace {} clean {} samples {}", probe.fixed_subspace_dimension, probe.clean,
                         probe.samples);
    v.pass = v.pass && probe.clean && probe.status == DimensionProbe::Status::Ok;
    ctx.add(v);
  }

  // Isolation of the principal component along t = 0.
  const auto far = catalog_for(choice, c, 100.0, 1e-6).nonzero_s_at_t0();
  std::optional<double> s_min;
  for (double s : far) s_min = std::min(s_min.value_or(1e300), std::fabs(s));
  if (s_min) {
    std::mt19937_64 rng(cfg.seed + 99);
    double worst = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 20; ++k) {
      const auto p = model->random_point(c, rng);
      worst = std::min(worst, min_residual_on_segment(*model, p, 0.05, *s_min - 0.05, 0.0, 4000));
    }
    auto v = verdict_flag("no t = 0 solutions with 0 < |s| < s_min", "Lemma ISOLATED", worst > 1e-3,
                          fmt::format("min residual {:.4g} on (0.05, {:.6f})", worst, *s_min - 0.05));
    v.measured = worst;
    ctx.add(v);
  }
}

// ---------------------------------------------------------------------------

void run_clairaut(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const double c = parse_exact(cfg.c).value;
  ClairautOptions opts;
  opts.samples = 50;
  opts.seed = cfg.seed;
  CsvTable tab;
  tab.kind = "clairaut";
  tab.columns = {"profile", "u0", "heading", "orientation", "theta0", "time", "theta_advance", "clairaut_drift"};
  auto emit = [&](const ReturnReport& r) {
    for (const auto& s : r.samples)
      tab.rows.push_back({r.profile, r.u0, to_string(s.heading), static_cast<std::int64_t>(s.orientation), s.theta0,
                          s.time, s.theta_advance, s.clairaut_drift});
  };
  const auto sphere = clairaut_return_time(MeridianProfile::round_sphere(), 0.0, c, opts);
  emit(sphere);
  ctx.add(verdict_abs("round sphere equator: return-time spread", "surfaces of revolution", sphere.max_deviation, 0.0, 1e-6));
  double mean = 0.0;
  for (const auto& s : sphere.samples) mean += s.time;
  mean /= std::max<std::size_t>(1, sphere.samples.size());
  ctx.add(verdict_abs("round sphere equator: return time", "great circles", mean, kPi, 1e-6));
  const auto ell = clairaut_return_time(MeridianProfile::ellipsoid(1.0, 0.6), kPi / 4, c, opts);
  emit(ell);
  auto v = verdict_abs("ellipsoid mid-latitude: return-time spread within a heading class",
                       "surfaces of revolution: T^c_H constant", ell.max_deviation, 0.0, 1e-6);
  v.note = fmt::format("north/south class means differ by {:.6g}", ell.class_spread);
  ctx.add(v);
  ctx.add(verdict_abs("max |p_theta| / |xi| drift", "Clairaut integral", std::max(sphere.max_clairaut_drift,
                                                                                ell.max_clairaut_drift),
                      0.0, 1e-9));
  ctx.add(verdict_abs("aborted samples", "Clairaut integral", sphere.aborted + ell.aborted, 0.0, 0.0));
  ctx.csv("clairaut.csv", tab);
}

using Runner = std::function<void(Context&)>;

const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> r = {
      {"torus-weyl", run_torus_weyl},         {"torus-fuzzy-components", run_torus_fuzzy},
      {"sphere-jump-scaling", run_sphere_jump}, {"zonal-meridian", run_zonal_meridian},
      {"sojourn-detect", run_sojourn_detect}, {"epsilon-staircase", run_staircase},
      {"tauberian-smoothing", run_tauberian}, {"forbidden-decay", run_forbidden},
      {"biangle-solve", run_biangle},         {"clairaut-return", run_clairaut},
  };
  return r;
}

template <typename T>
void overlay(const YAML::Node& node, const char* key, T& field) {
  if (node && node[key]) field = node[key].as<T>();
}

}  // namespace

const std::vector<ExperimentInfo>& list_experiments() { return kRegistry; }

const ExperimentInfo& find_experiment(const std::string& name) {
  for (const auto& e : kRegistry)
    if (e.name == name) return e;
  throw UnknownExperimentError("unknown experiment '" + name + "'");
}

ExperimentConfig ExperimentConfig::defaults_for(const std::string& experiment, const std::string& model) {
  find_experiment(experiment);
  ExperimentConfig c;
  c.experiment = experiment;
  const bool sphere = model.rfind("sphere", 0) == 0;
  if (experiment == "torus-weyl") {
    c.c = "sqrt(1/2)";
    c.lambda_max = 3000;
  } else if (experiment == "torus-fuzzy-components") {
    c.c = "3/5";
    c.window = "bump:30";
    c.lambda_max = 2000;
  } else if (experiment == "sphere-jump-scaling") {
    c.lambda_max = 2048;
  } else if (experiment == "zonal-meridian") {
    c.level = 200;
  } else if (experiment == "sojourn-detect" && sphere) {
    c.window = "bump:4";
    c.lambda_max = 400;
    c.t_min = -7;
    c.t_max = 7;
  } else if (experiment == "sojourn-detect") {
    c.c = "3/5";
    c.window = "bump:6";
    c.lambda_max = 800;
    c.t_min = -12;
    c.t_max = 12;
  } else if (experiment == "epsilon-staircase") {
    c.level = 200;
  } else if (experiment == "tauberian-smoothing") {
    c.lambda_max = 1500;
  } else if (experiment == "forbidden-decay") {
    c.c = "13/10";
    c.lambda_max = 200;
  } else if (experiment == "biangle-solve" && !sphere) {
    c.c = "3/5";
  }
  if (!model.empty()) c.model = model;
  return c;
}

ExperimentConfig ExperimentConfig::from_yaml(const std::string& text, const std::string& experiment) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw InvalidParameterError(std::string("config parse error: ") + e.what());
  }
  std::string name = experiment;
  if (root["experiment"]) {
    const auto in_file = root["experiment"].as<std::string>();
    if (!name.empty() && name != in_file)
      throw InvalidParameterError("config is for '" + in_file + "', not '" + name + "'");
    name = in_file;
  }
  if (name.empty()) throw InvalidParameterError("config names no experiment");
  auto cfg = defaults_for(name, root["model"] ? root["model"].as<std::string>() : std::string());
  try {
    overlay(root, "model", cfg.model);
    const auto ladder = root["ladder"];
    overlay(ladder, "c", cfg.c);
    overlay(ladder, "epsilon", cfg.epsilon);
    overlay(ladder, "window", cfg.window);
    overlay(root["spectrum"], "lambda_max", cfg.lambda_max);
    const auto grids = root["grids"];
    if (grids && grids["t"]) {
      auto t = grids["t"].as<std::vector<double>>();
      if (t.size() != 3) throw InvalidParameterError("grids.t must be [t_min, t_max, dt]");
      cfg.t_min = t[0];
      cfg.t_max = t[1];
      cfg.dt = t[2];
    }
    overlay(grids, "T", cfg.T_grid);
    overlay(grids, "eps_max", cfg.eps_max);
    overlay(grids, "eps_points", cfg.eps_points);
    overlay(grids, "level", cfg.level);
    const auto run = root["run"];
    overlay(run, "seed", cfg.seed);
    overlay(run, "jobs", cfg.jobs);
    overlay(run, "deterministic", cfg.deterministic);
    overlay(run, "strict", cfg.strict);
    if (run && run["out"]) cfg.out = run["out"].as<std::string>();
  } catch (const YAML::Exception& e) {
    throw InvalidParameterError(std::string("config value error: ") + e.what());
  }
  return cfg;
}

std::string ExperimentConfig::to_yaml() const {
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << YAML::BeginMap;
  e << YAML::Key << "schema_version" << YAML::Value << kSchemaVersion;
  e << YAML::Key << "experiment" << YAML::Value << experiment;
  e << YAML::Key << "model" << YAML::Value << model;
  e << YAML::Key << "ladder" << YAML::Value << YAML::BeginMap << YAML::Key << "c" << YAML::Value << c << YAML::Key
    << "epsilon" << YAML::Value << epsilon << YAML::Key << "window" << YAML::Value << window << YAML::EndMap;
  e << YAML::Key << "spectrum" << YAML::Value << YAML::BeginMap << YAML::Key << "lambda_max" << YAML::Value
    << lambda_max << YAML::EndMap;
  e << YAML::Key << "grids" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "t" << YAML::Value << YAML::Flow << std::vector<double>{t_min, t_max, dt};
  e << YAML::Key << "T" << YAML::Value << YAML::Flow << T_grid;
  e << YAML::Key << "eps_max" << YAML::Value << eps_max;
  e << YAML::Key << "eps_points" << YAML::Value << eps_points;
  e << YAML::Key << "level" << YAML::Value << level;
  e << YAML::EndMap;
  e << YAML::Key << "run" << YAML::Value << YAML::BeginMap << YAML::Key << "seed" << YAML::Value << seed << YAML::Key
    << "jobs" << YAML::Value << jobs << YAML::Key << "deterministic" << YAML::Value << deterministic << YAML::Key
    << "strict" << YAML::Value << strict << YAML::EndMap;
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

void ExperimentConfig::validate() const {
  find_experiment(experiment);
  if (!model.empty()) parse_model(model);
  parse_exact(c);
  parse_exact(epsilon);
  parse_window(window, parse_exact(epsilon));
  if (!(lambda_max >= 0.0) || !std::isfinite(lambda_max)) throw InvalidParameterError("lambda_max must be >= 0");
  if (!(t_max > t_min)) throw InvalidParameterError("t grid needs t_min < t_max");
  if (dt < 0.0) throw InvalidParameterError("dt must be >= 0");
  if (T_grid.empty() || std::any_of(T_grid.begin(), T_grid.end(), [](double t) { return !(t > 0.0); }))
    throw InvalidParameterError("T grid must be nonempty and positive");
  if (!(eps_max > 0.0) || eps_points < 1) throw InvalidParameterError("epsilon grid must be nonempty");
  if (level < 0) throw InvalidParameterError("level must be >= 0");
}

bool ExperimentResult::all_pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

std::vector<SpectralLevel> cached_levels(const JointSpectrum& spectrum, double lambda_max) {
  const char* dir = std::getenv("KWLAB_CACHE_DIR");
  if (!dir || !*dir) return spectrum.levels(lambda_max);
  const std::string key = sha256_hex(fmt::format("levels|v{}|{}|{}", kSchemaVersion, spectrum.describe(),
                                                 format_double(lambda_max)));
  const auto path = std::filesystem::path(dir) / (key + ".levels.csv");
  if (std::filesystem::exists(path)) {
    std::istringstream is(read_text(path));
    std::string line;
    std::vector<SpectralLevel> out;
    std::getline(is, line);
    std::getline(is, line);
    bool ok = true;
    while (std::getline(is, line)) {
      SpectralLevel l;
      char c1 = 0, c2 = 0;
      std::istringstream ls(line);
      if (!(ls >> l.value >> c1 >> l.multiplicity >> c2 >> l.index) || c1 != ',' || c2 != ',') {
        ok = false;
        break;
      }
      out.push_back(l);
    }
    if (ok) return out;
  }
  auto levels = spectrum.levels(lambda_max);
  CsvTable t;
  t.kind = "levels";
  t.columns = {"value", "multiplicity", "index"};
  t.tags["model"] = spectrum.describe();
  t.tags["lambda_max"] = format_double(lambda_max);
  for (const auto& l : levels) t.rows.push_back({l.value, static_cast<std::int64_t>(l.multiplicity), l.index});
  write_csv(path, t);
  return levels;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  std::filesystem::create_directories(config.out);
  Context ctx(config);
  runners().at(config.experiment)(ctx);

  ordered_json vj;
  vj["schema_version"] = kSchemaVersion;
  vj["experiment"] = config.experiment;
  vj["verdicts"] = ordered_json::array();
  for (const auto& v : ctx.verdicts) vj["verdicts"].push_back(verdict_json(v));
  ctx.json("verdicts.json", vj);
  write_text(config.out / "config.yaml", config.to_yaml());
  ctx.files.push_back("config.yaml");

  ExperimentResult res;
  res.out = config.out;
  res.verdicts = ctx.verdicts;
  for (const auto& f : ctx.files)
    res.files.push_back({f, sha256_file(config.out / f), std::filesystem::file_size(config.out / f)});
  res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  ordered_json man;
  man["schema_version"] = kSchemaVersion;
  man["experiment"] = config.experiment;
  man["files"] = ordered_json::array();
  for (const auto& f : res.files) man["files"].push_back({{"name", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  const auto passed = std::count_if(res.verdicts.begin(), res.verdicts.end(), [](const Verdict& v) { return v.pass; });
  man["verdict_summary"] = {{"total", res.verdicts.size()}, {"passed", passed},
                            {"failed", static_cast<long>(res.verdicts.size()) - passed}};
  man["wall_clock_seconds"] = res.wall_seconds;
  man["budget_seconds"] = find_experiment(config.experiment).budget_seconds;
  write_text(config.out / "manifest.json", man.dump(2) + "\n");
  return res;
}

}  // namespace kwlab
