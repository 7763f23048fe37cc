#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kwlab/legendre.hpp"
#include "kwlab/spectral_models.hpp"

namespace kwlab {

struct ModeWeight {
  double lambda = 0.0;
  double mu = 0.0;
  double weight = 0.0;
};

// (2pi)^{d-n} when the first d entries of j equal k, else 0.
double torus_mode_weight(std::span<const std::int64_t> j, std::span<const std::int64_t> k);
double torus_unit_weight(int n, int d);

struct ZonalCoefficient {
  std::int64_t m = 0;
  double weight = 0.0;  // |a_m|^2
};

// Degree-N zonal harmonic on S^2 restricted to a meridian, expanded in e^{im phi}/sqrt(2pi).
std::vector<ZonalCoefficient> zonal_meridian_profile(std::int64_t degree, const LegendreCatalog& catalog);
std::vector<ZonalCoefficient> zonal_meridian_profile(std::int64_t degree);
double zonal_restricted_norm(std::int64_t degree, const LegendreCatalog& catalog);

// Eigenspace jump on S^2 along a great circle from the p-product expansion.
double great_circle_jump_s2(std::int64_t degree, std::int64_t tangential_degree, const LegendreCatalog& catalog);

// Projector kernel Pi_N(x, y) of S^n as a function of t = <x, y>.
double sphere_projector_kernel(int n, std::int64_t degree, double t);

// Quadrature of the restricted projector kernel for fixed ambient degree N.
// d = 1 uses a uniform trapezoid grid, d >= 2 a Gauss-Jacobi rule in the polar variable.
class SphereJumpEvaluator {
 public:
  SphereJumpEvaluator(int n, int d, double a, std::int64_t degree, int nodes = 0);

  std::int64_t degree() const { return degree_; }
  int nodes() const { return static_cast<int>(nodes_.size()); }
  // W(N, M); exactly zero for M > N.
  double weight(std::int64_t tangential_degree) const;

 private:
  int n_, d_;
  double a_, r_;
  std::int64_t degree_;
  std::vector<double> nodes_;
  std::vector<double> qweights_;
  std::vector<double> kernel_;
};

double sphere_eigenspace_jump(int n, int d, std::int64_t degree, std::int64_t tangential_degree, double a = 0.0,
                              int nodes = 0);

double parseval_diag(const ManifoldSpec& m, const SubmanifoldSpec& h, const SpectralLevel& level);

}  // namespace kwlab
