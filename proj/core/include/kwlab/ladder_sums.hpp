#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kwlab/exact.hpp"
#include "kwlab/joint_spectrum.hpp"
#include "kwlab/window_functions.hpp"

namespace kwlab {

struct LadderWindow {
  ExactSquare c;
  WindowFunction window;

  // Requires 0 < c < 1.
  static LadderWindow make(ExactSquare c, WindowFunction window);
  static LadderWindow make(double c, WindowFunction window) { return make(recognize_exact(c), std::move(window)); }
  // Slopes c > 1, used only to probe the forbidden region.
  static LadderWindow forbidden(ExactSquare c, WindowFunction window);
};

struct LadderSeries {
  std::string abscissa;
  std::vector<double> x;
  std::vector<double> y;
  std::map<std::string, std::string> metadata;
};

struct SumDiagnostics {
  std::uint64_t exact_tests = 0;
  std::uint64_t float_tests = 0;
  std::uint64_t guard_band_hits = 0;
  std::uint64_t modes_visited = 0;
  // Lattice pairs admitted on counting models.
  std::optional<std::uint64_t> count;
  double truncation_radius = 0.0;
  double truncation_bound = 0.0;
};

struct LevelContribution {
  std::int64_t level_index = 0;
  double lambda = 0.0;
  double value = 0.0;
  std::uint64_t count = 0;
};

// Per-level window-weighted sums for levels <= lambda_max, ascending, zero levels omitted.
std::vector<LevelContribution> ladder_level_contributions(const JointSpectrum& spectrum, const LadderWindow& ladder,
                                                          double lambda_max, SumDiagnostics* diag = nullptr,
                                                          double rel_tol = 1e-6);

double sharp_ladder_sum(const JointSpectrum& spectrum, const LadderWindow& ladder, double lambda,
                        SumDiagnostics* diag = nullptr);
double fuzzy_ladder_sum(const JointSpectrum& spectrum, const LadderWindow& ladder, double lambda,
                        SumDiagnostics* diag = nullptr, double rel_tol = 1e-6);

// Cumulative sums sampled at the supplied abscissae (ascending).
LadderSeries ladder_series(const JointSpectrum& spectrum, const LadderWindow& ladder,
                           const std::vector<double>& lambda_grid, SumDiagnostics* diag = nullptr);

// Midpoints between consecutive distinct levels up to lambda_max, thinned to at most max_points.
std::vector<double> midpoint_grid(const JointSpectrum& spectrum, double lambda_max, std::size_t max_points);
std::vector<double> midpoint_grid(const std::vector<SpectralLevel>& levels, std::size_t max_points);

// Inner double sum over the full eigenspace at an exact level.
double jump_at(const JointSpectrum& spectrum, const LadderWindow& ladder, double lambda_j,
               SumDiagnostics* diag = nullptr);

struct Staircase {
  LadderSeries series;
  // Distances |mu - c lambda| of every mode on the level (where membership changes).
  std::vector<double> membership_breakpoints;
  // Breakpoints carrying nonzero weight (where the value changes).
  std::vector<double> value_breakpoints;
  std::vector<double> value_increments;
};

Staircase epsilon_staircase(const JointSpectrum& spectrum, const ExactSquare& c, double lambda_j,
                            const std::vector<double>& eps_grid);

// Grid of count points strictly between consecutive breakpoints on (0, eps_max), offset from the candidates.
std::vector<double> offset_eps_grid(double eps_max, std::size_t count);

}  // namespace kwlab
