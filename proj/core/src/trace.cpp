#include "kwlab/trace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include <fmt/format.h>

#include "kwlab/error.hpp"

namespace kwlab {

std::string to_string(TaperKind kind) { return kind == TaperKind::Bump ? "bump" : "lowpass"; }

TaperKind parse_taper(const std::string& name) {
  if (name == "bump") return TaperKind::Bump;
  if (name == "lowpass") return TaperKind::LowPass;
  throw InvalidParameterError("unknown taper '" + name + "' (expected bump or lowpass)");
}

double taper_value(TaperKind kind, double u) {
  if (u < 0.0 || u >= 1.0) return 0.0;
  if (kind == TaperKind::LowPass) return std::exp(1.0 - 1.0 / (1.0 - u * u));
  const double v = 2.0 * u - 1.0;
  if (std::fabs(v) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - v * v));
}

std::vector<double> uniform_grid(double t_min, double t_max, double dt) {
  if (!(dt > 0.0) || t_max < t_min) throw InvalidParameterError("invalid t grid");
  const auto n = static_cast<std::size_t>(std::llround((t_max - t_min) / dt)) + 1;
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = t_min + dt * static_cast<double>(i);
  return g;
}

TraceProfile trace_from_levels(const std::vector<LevelContribution>& levels, double lambda_max,
                               const std::vector<double>& t_grid, const TraceOptions& options) {
  if (!(lambda_max > 0.0)) throw InvalidParameterError("trace cutoff must be > 0");
  if (t_grid.size() < 2) throw InvalidParameterError("t grid needs at least two points");
  const double dt = t_grid[1] - t_grid[0];
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (std::fabs(t_grid[i] - t_grid[i - 1] - dt) > 1e-9 * std::max(1.0, std::fabs(dt)))
      throw InvalidParameterError("t grid must be uniform");
  if (!(dt > 0.0) || dt >= std::numbers::pi / lambda_max)
    throw InvalidParameterError(fmt::format("t grid step {:.6g} does not resolve pi/lambda_max = {:.6g}", dt,
                                            std::numbers::pi / lambda_max));
  std::vector<double> lam, amp;
  for (const auto& l : levels) {
    const double chi = taper_value(options.taper, l.lambda / lambda_max);
    if (chi == 0.0 || l.value == 0.0) continue;
    lam.push_back(l.lambda);
    amp.push_back(chi * l.value);
  }
  TraceProfile prof;
  prof.t = t_grid;
  prof.value.assign(t_grid.size(), {0.0, 0.0});
  prof.lambda_max = lambda_max;
  prof.metadata["taper"] = to_string(options.taper);
  prof.metadata["cutoff"] = fmt::format("{:.17g}", lambda_max);

  // Each block advances e^{i t lambda} by rotation, reseeding every 512 steps.
  constexpr std::size_t kBlock = 512;
  const std::size_t nblocks = (t_grid.size() + kBlock - 1) / kBlock;
  auto run_block = [&](std::size_t b) {
    const std::size_t begin = b * kBlock, end = std::min(t_grid.size(), begin + kBlock);
    std::vector<std::complex<double>> acc(end - begin);
    for (std::size_t j = 0; j < lam.size(); ++j) {
      std::complex<double> e = std::polar(amp[j], t_grid[begin] * lam[j]);
      const std::complex<double> step = std::polar(1.0, dt * lam[j]);
      for (std::size_t i = 0; i < acc.size(); ++i) {
        acc[i] += e;
        e *= step;
      }
    }
    std::copy(acc.begin(), acc.end(), prof.value.begin() + static_cast<std::ptrdiff_t>(begin));
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(nblocks)));
  if (jobs == 1) {
    for (std::size_t b = 0; b < nblocks; ++b) run_block(b);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t b = w; b < nblocks; b += jobs) run_block(b);
      });
    for (auto& th : pool) th.join();
  }
  return prof;
}

TraceProfile trace_profile(const JointSpectrum& spectrum, const LadderWindow& ladder, double lambda_max,
                           const std::vector<double>& t_grid, const TraceOptions& options) {
  auto levels = ladder_level_contributions(spectrum, ladder, lambda_max, nullptr, 1e-8);
  auto prof = trace_from_levels(levels, lambda_max, t_grid, options);
  prof.metadata["model"] = spectrum.describe();
  prof.metadata["window"] = ladder.window.describe();
  prof.metadata["c"] = fmt::format("{:.17g}", ladder.c.value);
  return prof;
}

namespace {

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    m = 0.5 * (m + lo);
  }
  return m;
}

}  // namespace

PeakReport detect_singular_support(const TraceProfile& profile, const PeakPolicy& policy) {
  PeakReport rep;
  const std::size_t n = profile.value.size();
  if (n < 3) return rep;
  std::vector<double> mag(n);
  for (std::size_t i = 0; i < n; ++i) mag[i] = std::abs(profile.value[i]);
  rep.median = median_of(mag);
  std::vector<double> dev(n);
  for (std::size_t i = 0; i < n; ++i) dev[i] = std::fabs(mag[i] - rep.median);
  rep.mad = median_of(dev);
  rep.threshold = std::max(rep.median + policy.k_mad * rep.mad, policy.floor_factor * rep.median);

  std::vector<std::size_t> cand;
  for (std::size_t i = 0; i < n; ++i) {
    const bool left = i == 0 || mag[i] > mag[i - 1];
    const bool right = i + 1 == n || mag[i] >= mag[i + 1];
    if (left && right && mag[i] > rep.threshold) cand.push_back(i);
  }
  std::sort(cand.begin(), cand.end(), [&](std::size_t a, std::size_t b) { return mag[a] > mag[b]; });
  std::vector<std::size_t> kept;
  for (auto i : cand) {
    bool suppressed = false;
    for (auto k : kept) {
      const double gap = std::fabs(profile.t[i] - profile.t[k]);
      if (gap < policy.suppression_radius) suppressed = true;
      if (gap < policy.skirt_radius && mag[i] < policy.skirt_ratio * mag[k]) suppressed = true;
    }
    if (!suppressed) kept.push_back(i);
  }
  std::sort(kept.begin(), kept.end());
  const double dt = profile.t[1] - profile.t[0];
  for (auto i : kept) {
    DetectedPeak p;
    p.t = profile.t[i];
    p.height = mag[i];
    p.prominence = rep.mad > 0.0 ? (mag[i] - rep.median) / rep.mad : std::numeric_limits<double>::infinity();
    p.t_refined = p.t;
    if (i > 0 && i + 1 < n) {
      const double den = mag[i - 1] - 2.0 * mag[i] + mag[i + 1];
      if (den < 0.0) p.t_refined = p.t + 0.5 * dt * (mag[i - 1] - mag[i + 1]) / den;
    }
    std::size_t lo = i, hi = i;
    while (lo > 0 && mag[lo] > 0.5 * mag[i]) --lo;
    while (hi + 1 < n && mag[hi] > 0.5 * mag[i]) ++hi;
    p.half_width = 0.5 * (profile.t[hi] - profile.t[lo]);
    rep.peaks.push_back(p);
  }
  return rep;
}

}  // namespace kwlab
