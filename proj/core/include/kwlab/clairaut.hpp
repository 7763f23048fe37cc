#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace kwlab {

// Meridian (rho(u), z(u)) of a surface of revolution; u is the meridian parameter.
struct MeridianProfile {
  std::string name;
  std::function<double(double)> rho;
  std::function<double(double)> drho;
  std::function<double(double)> metric;   // rho'^2 + z'^2
  std::function<double(double)> dmetric;  // derivative of the above
  double u_min = 0.0;
  double u_max = 0.0;

  static MeridianProfile round_sphere();
  // Spheroid rho = a cos u, z = b sin u.
  static MeridianProfile ellipsoid(double a, double b);
};

enum class Heading { North, South };

struct ReturnSample {
  double theta0 = 0.0;
  Heading heading = Heading::North;
  int orientation = 1;  // sign of p_theta
  double time = 0.0;
  double theta_advance = 0.0;
  double clairaut_drift = 0.0;  // max change of |p_theta| / |xi| along the orbit
  double energy_drift = 0.0;
};

struct ReturnClass {
  Heading heading = Heading::North;
  int samples = 0;
  double mean_time = 0.0;
  double max_deviation = 0.0;
};

struct ReturnReport {
  std::string profile;
  double u0 = 0.0;
  double c = 0.0;
  std::vector<ReturnSample> samples;
  std::vector<ReturnClass> classes;
  double max_deviation = 0.0;  // largest spread within a heading class
  double class_spread = 0.0;   // spread between class means
  double max_clairaut_drift = 0.0;
  int aborted = 0;
};

struct ClairautOptions {
  int samples = 50;
  double step = 2e-3;
  double max_time = 200.0;
  double drift_limit = 1e-9;
  std::uint64_t seed = 11;
};

// First return of unit-speed geodesics leaving the latitude circle u = u0 with |p_theta| / |xi| = c.
ReturnReport clairaut_return_time(const MeridianProfile& profile, double u0, double c,
                                  const ClairautOptions& options = {});

std::string to_string(Heading h);

}  // namespace kwlab
