#include "kwlab/clairaut.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "kwlab/error.hpp"

namespace kwlab {

MeridianProfile MeridianProfile::round_sphere() { return ellipsoid(1.0, 1.0); }

MeridianProfile MeridianProfile::ellipsoid(double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw InvalidParameterError("ellipsoid semi-axes must be positive");
  MeridianProfile p;
  p.name = a == b ? (a == 1.0 ? "round-sphere" : "sphere") : "ellipsoid";
  p.rho = [a](double u) { return a * std::cos(u); };
  p.drho = [a](double u) { return -a * std::sin(u); };
  p.metric = [a, b](double u) {
    const double s = std::sin(u), c = std::cos(u);
    return a * a * s * s + b * b * c * c;
  };
  p.dmetric = [a, b](double u) { return 2.0 * (a * a - b * b) * std::sin(u) * std::cos(u); };
  p.u_min = -std::numbers::pi / 2;
  p.u_max = std::numbers::pi / 2;
  return p;
}

std::string to_string(Heading h) { return h == Heading::North ? "north" : "south"; }

namespace {

struct State {
  double u, theta, pu;
};

class Integrator {
 public:
  Integrator(const MeridianProfile& prof, double ptheta) : prof_(prof), pt_(ptheta) {}

  double hamiltonian(const State& s) const {
    const double r = prof_.rho(s.u);
    return 0.5 * (s.pu * s.pu / prof_.metric(s.u) + pt_ * pt_ / (r * r));
  }

  // Composition of implicit Stormer-Verlet steps (Yoshida triple jump).
  State step(State s, double h) const {
    static const double w1 = 1.0 / (2.0 - std::cbrt(2.0));
    static const double w0 = -std::cbrt(2.0) / (2.0 - std::cbrt(2.0));
    s = verlet(s, w1 * h);
    s = verlet(s, w0 * h);
    return verlet(s, w1 * h);
  }

 private:
  double dHdu(double u, double pu) const {
    const double g = prof_.metric(u), r = prof_.rho(u);
    return -0.5 * pu * pu * prof_.dmetric(u) / (g * g) - pt_ * pt_ * prof_.drho(u) / (r * r * r);
  }
  double dHdp(double u, double pu) const { return pu / prof_.metric(u); }

  State verlet(const State& s, double h) const {
    double p = s.pu;
    for (int it = 0; it < 100; ++it) {
      const double next = s.pu - 0.5 * h * dHdu(s.u, p);
      const bool done = std::fabs(next - p) <= 1e-16 * std::max(1.0, std::fabs(p));
      p = next;
      if (done) break;
    }
    double u = s.u;
    const double v0 = dHdp(s.u, p);
    for (int it = 0; it < 100; ++it) {
      const double next = s.u + 0.5 * h * (v0 + dHdp(u, p));
      const bool done = std::fabs(next - u) <= 1e-16 * std::max(1.0, std::fabs(u));
      u = next;
      if (done) break;
    }
    const double r0 = prof_.rho(s.u), r1 = prof_.rho(u);
    const double theta = s.theta + 0.5 * h * (pt_ / (r0 * r0) + pt_ / (r1 * r1));
    return {u, theta, p - 0.5 * h * dHdu(u, p)};
  }

  const MeridianProfile& prof_;
  double pt_;
};

}  // namespace

ReturnReport clairaut_return_time(const MeridianProfile& profile, double u0, double c, const ClairautOptions& options) {
  if (!(c > 0.0 && c < 1.0)) throw InvalidParameterError("Clairaut slope must lie in (0, 1)");
  if (!(u0 > profile.u_min && u0 < profile.u_max)) throw InvalidParameterError("latitude outside the profile");
  if (options.samples < 1 || !(options.step > 0.0)) throw InvalidParameterError("invalid Clairaut options");
  ReturnReport rep;
  rep.profile = profile.name;
  rep.u0 = u0;
  rep.c = c;
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::bernoulli_distribution coin(0.5);

  const double rho0 = profile.rho(u0);
  for (int k = 0; k < options.samples; ++k) {
    ReturnSample smp;
    smp.theta0 = angle(rng);
    smp.heading = coin(rng) ? Heading::North : Heading::South;
    smp.orientation = coin(rng) ? 1 : -1;
    const double pt = smp.orientation * c * rho0;
    const double pu0 = std::sqrt(profile.metric(u0) * (1.0 - c * c));
    State st{u0, smp.theta0, smp.heading == Heading::North ? pu0 : -pu0};
    const Integrator integ(profile, pt);
    const double h0 = integ.hamiltonian(st);
    const double side = smp.heading == Heading::North ? 1.0 : -1.0;
    const double ratio0 = std::fabs(pt) / std::sqrt(2.0 * h0);
    auto monitor = [&](const State& s) {
      const double e = integ.hamiltonian(s);
      smp.energy_drift = std::max(smp.energy_drift, std::fabs(e - h0));
      smp.clairaut_drift = std::max(smp.clairaut_drift, std::fabs(std::fabs(pt) / std::sqrt(2.0 * e) - ratio0));
    };
    double time = 0.0;
    bool found = false;
    while (time < options.max_time) {
      State next = integ.step(st, options.step);
      monitor(next);
      if (time > 0.0 && side * (next.u - u0) <= 0.0) {
        double lo = 0.0, hi = options.step;
        for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (side * (integ.step(st, mid).u - u0) > 0.0) lo = mid;
          else hi = mid;
        }
        const State end = integ.step(st, 0.5 * (lo + hi));
        monitor(end);
        smp.time = time + 0.5 * (lo + hi);
        smp.theta_advance = end.theta - smp.theta0;
        found = true;
        break;
      }
      st = next;
      time += options.step;
    }
    if (!found || smp.clairaut_drift > options.drift_limit) {
      ++rep.aborted;
      continue;
    }
    rep.max_clairaut_drift = std::max(rep.max_clairaut_drift, smp.clairaut_drift);
    rep.samples.push_back(smp);
  }

  std::map<Heading, std::vector<double>> by_class;
  for (const auto& s : rep.samples) by_class[s.heading].push_back(s.time);
  std::vector<double> means;
  for (const auto& [heading, times] : by_class) {
    ReturnClass cls;
    cls.heading = heading;
    cls.samples = static_cast<int>(times.size());
    for (double t : times) cls.mean_time += t;
    cls.mean_time /= static_cast<double>(times.size());
    const auto [mn, mx] = std::minmax_element(times.begin(), times.end());
    cls.max_deviation = *mx - *mn;
    rep.max_deviation = std::max(rep.max_deviation, cls.max_deviation);
    means.push_back(cls.mean_time);
    rep.classes.push_back(cls);
  }
  if (!means.empty()) {
    const auto [mn, mx] = std::minmax_element(means.begin(), means.end());
    rep.class_spread = *mx - *mn;
  }
  return rep;
}

}  // namespace kwlab
