#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kwlab/exact.hpp"

namespace kwlab {

enum class ManifoldKind { Torus, Sphere };

struct ManifoldSpec {
  ManifoldKind kind = ManifoldKind::Torus;
  int n = 2;

  static ManifoldSpec torus(int n);
  static ManifoldSpec sphere(int n);
  std::string name() const;
};

enum class SubmanifoldKind { CoordinateSubtorus, GreatSubsphere, LatitudeSubsphere, MeridianCircle };

struct SubmanifoldSpec {
  SubmanifoldKind kind = SubmanifoldKind::CoordinateSubtorus;
  int d = 1;
  // Latitude height; the subsphere has radius sqrt(1 - a^2).
  ExactSquare a;

  static SubmanifoldSpec coordinate_subtorus(int d);
  static SubmanifoldSpec great_subsphere(int d);
  static SubmanifoldSpec latitude_subsphere(int d, ExactSquare a);
  static SubmanifoldSpec meridian_circle();

  bool is_sphere_type() const { return kind != SubmanifoldKind::CoordinateSubtorus; }
  double radius() const;
  std::string name() const;
};

// Throws InvalidParameterError when H does not fit inside M.
void validate_pair(const ManifoldSpec& m, const SubmanifoldSpec& h);

struct SpectralLevel {
  double value = 0.0;
  std::uint64_t multiplicity = 0;
  // |j|^2 for tori, degree N for spheres.
  std::int64_t index = 0;
};

// r_n(R) = #{j in Z^n : |j|^2 = R} for R <= r_max.
std::vector<std::uint64_t> lattice_shell_counts(int n, std::int64_t r_max);

std::vector<SpectralLevel> enumerate_torus_levels(int n, double lambda_max);
std::vector<SpectralLevel> enumerate_sphere_levels(int n, std::int64_t degree_max);

std::uint64_t sphere_multiplicity(int n, std::int64_t degree);

double unit_sphere_volume(int d);
double hausdorff_volume(const SubmanifoldSpec& h, const ManifoldSpec& ambient);
double ambient_volume(const ManifoldSpec& m);

}  // namespace kwlab
