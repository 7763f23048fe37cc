#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "kwlab/joint_spectrum.hpp"
#include "kwlab/ladder_sums.hpp"

namespace kwlab {

// Frequency taper chi(lambda / lambda_max).
enum class TaperKind {
  Bump,     // exp(1 - 1/(1 - (2u-1)^2)) on (0, 1): smooth at both ends of the band
  LowPass,  // exp(1 - 1/(1 - u^2)) on [0, 1)
};

std::string to_string(TaperKind kind);
TaperKind parse_taper(const std::string& name);
double taper_value(TaperKind kind, double u);

struct TraceProfile {
  std::vector<double> t;
  std::vector<std::complex<double>> value;
  double lambda_max = 0.0;
  std::map<std::string, std::string> metadata;
};

struct TraceOptions {
  TaperKind taper = TaperKind::Bump;
  unsigned jobs = 1;
};

// Uniform grid [t_min, t_max] with step dt.
std::vector<double> uniform_grid(double t_min, double t_max, double dt);

// Tapered partial sum of sum_{j,k} e^{i t lambda_j} psi(mu_k - c lambda_j) on a uniform t grid.
TraceProfile trace_profile(const JointSpectrum& spectrum, const LadderWindow& ladder, double lambda_max,
                           const std::vector<double>& t_grid, const TraceOptions& options = {});

// Same sum from explicit (lambda, weight) pairs; the taper is applied here.
TraceProfile trace_from_levels(const std::vector<LevelContribution>& levels, double lambda_max,
                               const std::vector<double>& t_grid, const TraceOptions& options = {});

struct PeakPolicy {
  double k_mad = 6.0;
  // Peaks must also exceed floor_factor * median; 0 disables.
  double floor_factor = 5.0;
  // Local maxima closer than this to a higher one are suppressed.
  double suppression_radius = 0.05;
  // Taper sidelobes: maxima within skirt_radius of a kept peak and below skirt_ratio of its height.
  double skirt_radius = 0.75;
  double skirt_ratio = 0.1;
};

struct DetectedPeak {
  double t = 0.0;          // grid location of the maximum
  double t_refined = 0.0;  // parabolic refinement
  double height = 0.0;     // |S|
  double prominence = 0.0; // (|S| - median) / MAD
  double half_width = 0.0;
};

struct PeakReport {
  std::vector<DetectedPeak> peaks;
  double median = 0.0;
  double mad = 0.0;
  double threshold = 0.0;
};

PeakReport detect_singular_support(const TraceProfile& profile, const PeakPolicy& policy = {});

}  // namespace kwlab
