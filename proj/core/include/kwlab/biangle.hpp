#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace kwlab {

// Point of S^c_H M in ambient coordinates: covector xi = c * eta_hat + nu.
struct ConePoint {
  Eigen::VectorXd q;
  Eigen::VectorXd eta_hat;
  Eigen::VectorXd nu;
  double c = 0.0;
};

class BiangleModel {
 public:
  virtual ~BiangleModel() = default;
  virtual int n() const = 0;
  virtual int d() const = 0;
  virtual std::string name() const = 0;
  int cone_dimension() const { return n() + d() - 2; }

  // Renormalizes eta_hat and nu so that |pi_H xi| = c and |xi| = 1.
  virtual ConePoint make_point(Eigen::VectorXd q, Eigen::VectorXd eta, Eigen::VectorXd nu, double c) const = 0;
  virtual ConePoint random_point(double c, std::mt19937_64& rng) const = 0;
  // Moves along the i-th coordinate curve of S^c_H M, 0 <= i < cone_dimension().
  virtual ConePoint perturb(const ConePoint& p, int direction, double h) const = 0;
  // Base mismatch on H (normal and tangential) and projected-covector mismatch.
  virtual Eigen::VectorXd residual(const ConePoint& p, double s, double t) const = 0;

  Eigen::VectorXd embed(const ConePoint& p) const;
};

// (R/2piZ)^n with the coordinate subtorus on the first d coordinates.
class TorusBiangleModel final : public BiangleModel {
 public:
  TorusBiangleModel(int n, int d);
  int n() const override { return n_; }
  int d() const override { return d_; }
  std::string name() const override;
  ConePoint make_point(Eigen::VectorXd q, Eigen::VectorXd eta, Eigen::VectorXd nu, double c) const override;
  ConePoint random_point(double c, std::mt19937_64& rng) const override;
  ConePoint perturb(const ConePoint& p, int direction, double h) const override;
  Eigen::VectorXd residual(const ConePoint& p, double s, double t) const override;

 private:
  int n_, d_;
};

// Unit S^n in R^{n+1} with the great subsphere spanned by the first d+1 axes.
class SphereBiangleModel final : public BiangleModel {
 public:
  SphereBiangleModel(int n, int d);
  int n() const override { return n_; }
  int d() const override { return d_; }
  std::string name() const override;
  ConePoint make_point(Eigen::VectorXd q, Eigen::VectorXd eta, Eigen::VectorXd nu, double c) const override;
  ConePoint random_point(double c, std::mt19937_64& rng) const override;
  ConePoint perturb(const ConePoint& p, int direction, double h) const override;
  Eigen::VectorXd residual(const ConePoint& p, double s, double t) const override;

 private:
  int n_, d_;
};

std::unique_ptr<BiangleModel> make_biangle_model(const std::string& kind, int n, int d);

double biangle_residual(const BiangleModel& model, const ConePoint& point, double s, double t);

struct BiAngleSolution {
  ConePoint base;
  double s = 0.0;
  double t = 0.0;
  double residual_norm = 0.0;
};

struct NewtonResult {
  bool converged = false;
  double s = 0.0, t = 0.0;
  double residual_norm = 0.0;
  int iterations = 0;
};

// Damped Gauss-Newton in (s, t) at a fixed cone point.
NewtonResult newton_biangle(const BiangleModel& model, const ConePoint& point, double s0, double t0,
                            double tol = 1e-11, int max_iter = 60);

struct DimensionProbe {
  enum class Status { Ok, Inconclusive };
  Status status = Status::Inconclusive;
  int estimated_dimension = -1;
  int fixed_subspace_dimension = -1;
  bool clean = false;
  int samples = 0;
  std::vector<double> singular_values;  // of the cone-point Jacobian of the residual
};

struct ProbeOptions {
  int samples = 40;
  double spread = 1e-3;
  double fd_step = 1e-5;
  double rank_tol = 1e-6;
  double pca_tol = 1e-2;
  std::uint64_t seed = 7;
};

DimensionProbe component_dimension_probe(const BiangleModel& model, double c, double s, double t,
                                         const ProbeOptions& options = {});

struct BiAngleComponent {
  double s = 0.0;
  double t = 0.0;
  int converged_seeds = 0;
  // Fraction of fresh random cone points solving at (s, t) after polishing.
  double generic_fraction = 0.0;
  bool maximal = false;
  DimensionProbe probe;
};

struct SolveOptions {
  double s_min = -10.0, s_max = 10.0;
  double t_min = -10.0, t_max = 10.0;
  int s_seeds = 41, t_seeds = 41;
  int points_per_seed = 2;
  int verification_points = 12;
  double group_tol = 1e-6;
  bool probe_dimensions = true;
  std::uint64_t seed = 1;
};

struct SolveReport {
  std::vector<BiAngleComponent> components;
  int seeds_tried = 0;
  int seeds_failed = 0;
};

SolveReport solve_biangles(const BiangleModel& model, double c, const SolveOptions& options = {});

struct SojournEntry {
  double t = 0.0;
  double s = 0.0;
  std::string family;
  int predicted_dimension = 0;
  bool maximal = true;
  std::int64_t i = 0, j = 0;  // winding indices
};

struct SojournSet {
  std::vector<SojournEntry> entries;
  double c = 0.0;
  std::string model;

  // Distinct t values, ascending, merged within tol.
  std::vector<double> times(double tol = 1e-9) const;
  // Nonzero s of maximal components with t = 0.
  std::vector<double> nonzero_s_at_t0(double tol = 1e-9) const;
  // Smallest |s| among maximal entries at the given t.
  std::optional<double> min_abs_s_at(double t, double tol = 1e-9) const;
};

SojournSet torus_sojourn_set(int n, int d, double c, double s_max, double t_max);
SojournSet sphere_sojourn_set(int n, int d, double c, double s_max, double t_max);

// Minimum residual over a uniform s sweep at fixed t and cone point.
double min_residual_on_segment(const BiangleModel& model, const ConePoint& point, double s_lo, double s_hi,
                               double t, int samples);

}  // namespace kwlab
