#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "kwlab/error.hpp"
#include "kwlab/experiments.hpp"
#include "kwlab/io.hpp"

namespace {

enum Exit { kPass = 0, kVerdictFailure = 1, kUsage = 2, kNumeric = 3 };

struct RunFlags {
  std::string experiment;
  std::optional<std::string> model, c, epsilon, window, config, out;
  std::optional<double> lambda_max;
  std::optional<unsigned> jobs;
  std::optional<std::uint64_t> seed;
  bool deterministic = false;
  bool strict = false;
  bool quiet = false;
};

int run(const RunFlags& f) {
  kwlab::ExperimentConfig cfg;
  if (f.config) {
    cfg = kwlab::ExperimentConfig::from_yaml(kwlab::read_text(*f.config), f.experiment);
  } else {
    if (f.experiment.empty()) throw kwlab::InvalidParameterError("--experiment or --config is required");
    cfg = kwlab::ExperimentConfig::defaults_for(f.experiment, f.model.value_or(""));
  }
  if (f.model) cfg.model = *f.model;
  if (f.c) cfg.c = *f.c;
  if (f.epsilon) cfg.epsilon = *f.epsilon;
  if (f.window) cfg.window = *f.window;
  if (f.lambda_max) cfg.lambda_max = *f.lambda_max;
  if (f.out) cfg.out = *f.out;
  if (f.jobs) cfg.jobs = *f.jobs;
  if (f.seed) cfg.seed = *f.seed;
  if (f.deterministic) cfg.deterministic = true;
  if (f.strict) cfg.strict = true;

  const auto res = kwlab::run_experiment(cfg);
  if (!f.quiet) {
    for (const auto& v : res.verdicts)
      fmt::print("{} {:<60} measured={:.10g} predicted={:.10g} tol={:.3g}{}\n", v.pass ? "PASS" : "FAIL", v.name,
                 v.measured, v.predicted, v.tolerance, v.note.empty() ? "" : "  [" + v.note + "]");
    fmt::print("wrote {} files to {} in {:.2f} s\n", res.files.size() + 1, res.out.string(), res.wall_seconds);
  }
  if (cfg.strict && !res.all_pass()) return kVerdictFailure;
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kwlab: ladder sums of restricted eigenfunctions"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "List registered experiments");
  RunFlags flags;
  auto* runc = app.add_subcommand("run", "Run an experiment");
  runc->add_option("--experiment,-e", flags.experiment, "Experiment name");
  runc->add_option("--config", flags.config, "YAML config file; flags override it")->check(CLI::ExistingFile);
  runc->add_option("--model", flags.model, "torus2|torus3|sphere2|sphere3");
  runc->add_option("--c", flags.c, "Ladder slope, e.g. 3/5 or sqrt(1/2)");
  runc->add_option("--epsilon", flags.epsilon, "Sharp half-width");
  runc->add_option("--lambda-max", flags.lambda_max, "Spectral cutoff");
  runc->add_option("--window", flags.window, "sharp | bump:<a> | mollified:<T>,<eps>");
  runc->add_option("--out", flags.out, "Output directory");
  runc->add_option("--jobs", flags.jobs, "Worker cap");
  runc->add_option("--seed", flags.seed, "Seed for multistart solvers");
  runc->add_flag("--deterministic", flags.deterministic, "Sequential reductions, bit-identical reruns");
  runc->add_flag("--strict", flags.strict, "Exit 1 when any verdict fails");
  runc->add_flag("--quiet,-q", flags.quiet, "Suppress the verdict table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kUsage;
  }

  try {
    if (*list) {
      for (const auto& e : kwlab::list_experiments())
        fmt::print("{:<24} {}  [{}; budget {:.0f} s]\n", e.name, e.description, e.anchor, e.budget_seconds);
      return kPass;
    }
    return run(flags);
  } catch (const kwlab::UnknownExperimentError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kUsage;
  } catch (const kwlab::InvalidParameterError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kUsage;
  } catch (const kwlab::Error& e) {
    fmt::print(stderr, "numeric failure: {}\n", e.what());
    return kNumeric;
  } catch (const std::exception& e) {
    fmt::print(stderr, "numeric failure: {}\n", e.what());
    return kNumeric;
  }
}
