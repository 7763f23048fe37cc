#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "kwlab/asymptotics.hpp"

namespace kwlab {

struct ExperimentInfo {
  std::string name;
  std::string description;
  std::string anchor;
  double budget_seconds = 300.0;
  std::string tier = "default";
  std::vector<std::string> outputs;
};

// Stable order.
const std::vector<ExperimentInfo>& list_experiments();
const ExperimentInfo& find_experiment(const std::string& name);

struct ExperimentConfig {
  std::string experiment;
  // torus2 | torus3 | sphere2 | sphere3, or "" for the experiment's own model set.
  std::string model;
  std::string c = "1/2";
  std::string epsilon = "1/4";
  std::string window = "sharp";  // sharp | bump:<a> | mollified:<T>,<eps>
  double lambda_max = 100.0;
  double t_min = -10.0;
  double t_max = 10.0;
  double dt = 0.0;  // 0 picks half the Nyquist step
  std::vector<double> T_grid{2, 4, 8, 16, 32};
  double eps_max = 3.0;
  int eps_points = 20;  // samples per unit interval of epsilon
  std::int64_t level = 200;
  std::uint64_t seed = 7;
  unsigned jobs = 1;
  bool deterministic = false;
  bool strict = false;
  std::filesystem::path out = "kwlab-out";

  // Every field populated with the experiment's defaults for the given model ("" = the experiment's own).
  static ExperimentConfig defaults_for(const std::string& experiment, const std::string& model = {});
  // Overlays the keys present in a YAML document; the experiment key (if present) must match or seed the defaults.
  static ExperimentConfig from_yaml(const std::string& text, const std::string& experiment = {});
  // Effective configuration; the output directory is omitted so reruns elsewhere hash identically.
  std::string to_yaml() const;
  void validate() const;
};

struct OutputFile {
  std::string name;
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct ExperimentResult {
  std::filesystem::path out;
  std::vector<OutputFile> files;
  std::vector<Verdict> verdicts;
  double wall_seconds = 0.0;
  bool all_pass() const;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

// Level list for (model, lambda_max), read from and written to $KWLAB_CACHE_DIR when set.
std::vector<SpectralLevel> cached_levels(const JointSpectrum& spectrum, double lambda_max);

}  // namespace kwlab
