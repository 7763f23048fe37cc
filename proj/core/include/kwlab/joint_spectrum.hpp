#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kwlab/exact.hpp"
#include "kwlab/legendre.hpp"
#include "kwlab/spectral_models.hpp"

namespace kwlab {

// One joint eigenvalue pair (lambda, mu) with its aggregated weight.
struct JointMode {
  std::int64_t level_index = 0;  // |j|^2 or N
  ExactSquare lambda;
  ExactSquare mu;
  double weight = 0.0;
  // Number of lattice pairs behind the weight on counting models, else 0.
  std::uint64_t count = 0;
};

// Restricts enumeration to |mu - c lambda| <= half_width (with a safety margin).
struct StripFilter {
  double c = 0.0;
  double half_width = 0.0;
};

using ModeVisitor = std::function<void(const JointMode&)>;

class JointSpectrum {
 public:
  virtual ~JointSpectrum() = default;

  virtual const ManifoldSpec& ambient() const = 0;
  virtual const SubmanifoldSpec& submanifold() const = 0;
  // Largest lambda the model has been prepared for.
  virtual double lambda_capacity() const = 0;

  virtual std::vector<SpectralLevel> levels(double lambda_max) const = 0;
  virtual ExactSquare level_value(const SpectralLevel& level) const = 0;

  // Visits modes with lambda <= lambda_max in ascending level order.
  virtual void for_each_mode(double lambda_max, const std::optional<StripFilter>& strip,
                             const ModeVisitor& visit) const = 0;
  virtual void for_each_mode_at_level(const SpectralLevel& level, const std::optional<StripFilter>& strip,
                                      const ModeVisitor& visit) const = 0;

  // Weight of a single lattice pair on counting models (tori).
  virtual std::optional<double> unit_weight() const { return std::nullopt; }

  // Exact-level lookup; nullopt when lambda is not an eigenvalue.
  virtual std::optional<SpectralLevel> find_level(double lambda) const = 0;

  double parseval(const SpectralLevel& level) const;
  // Sum of parseval_diag over levels <= lambda_max.
  double parseval_mass(double lambda_max) const;
  std::string describe() const { return ambient().name() + "/" + submanifold().name(); }

 protected:
  void check_capacity(double lambda_max) const;
};

// Flat torus (R/2piZ)^n with the coordinate subtorus on the first d coordinates.
class TorusSpectrum final : public JointSpectrum {
 public:
  TorusSpectrum(int n, int d, double lambda_capacity);

  const ManifoldSpec& ambient() const override { return m_; }
  const SubmanifoldSpec& submanifold() const override { return h_; }
  double lambda_capacity() const override { return capacity_; }
  std::vector<SpectralLevel> levels(double lambda_max) const override;
  ExactSquare level_value(const SpectralLevel& level) const override;
  void for_each_mode(double lambda_max, const std::optional<StripFilter>& strip,
                     const ModeVisitor& visit) const override;
  void for_each_mode_at_level(const SpectralLevel& level, const std::optional<StripFilter>& strip,
                              const ModeVisitor& visit) const override;
  std::optional<SpectralLevel> find_level(double lambda) const override;

  std::optional<double> unit_weight() const override { return unit_; }

 private:
  ManifoldSpec m_;
  SubmanifoldSpec h_;
  double capacity_;
  std::int64_t r_max_;
  double unit_;
  std::vector<std::uint64_t> tangential_counts_;  // r_d
  std::vector<std::uint64_t> normal_counts_;      // r_{n-d}
  std::vector<std::int64_t> tangential_support_;
  std::vector<std::int64_t> normal_support_;
  std::vector<std::uint64_t> shell_counts_;       // r_n
};

enum class SphereWeightMethod { Quadrature, ClosedForm };

// Round S^n with a great or latitude subsphere (or the meridian circle on S^2).
class SphereSpectrum final : public JointSpectrum {
 public:
  SphereSpectrum(int n, SubmanifoldSpec h, std::int64_t degree_capacity,
                 SphereWeightMethod method = SphereWeightMethod::Quadrature);

  const ManifoldSpec& ambient() const override { return m_; }
  const SubmanifoldSpec& submanifold() const override { return h_; }
  double lambda_capacity() const override { return static_cast<double>(degree_capacity_); }
  std::vector<SpectralLevel> levels(double lambda_max) const override;
  ExactSquare level_value(const SpectralLevel& level) const override;
  void for_each_mode(double lambda_max, const std::optional<StripFilter>& strip,
                     const ModeVisitor& visit) const override;
  void for_each_mode_at_level(const SpectralLevel& level, const std::optional<StripFilter>& strip,
                              const ModeVisitor& visit) const override;
  std::optional<SpectralLevel> find_level(double lambda) const override;

  ExactSquare tangential_value(std::int64_t tangential_degree) const;
  double weight(std::int64_t degree, std::int64_t tangential_degree) const;

 private:
  ManifoldSpec m_;
  SubmanifoldSpec h_;
  std::int64_t degree_capacity_;
  SphereWeightMethod method_;
  std::optional<Rational> inv_r2_;  // 1/r^2 when exact
  double r_;
  std::shared_ptr<LegendreCatalog> catalog_;
};

std::unique_ptr<JointSpectrum> make_spectrum(const ManifoldSpec& m, const SubmanifoldSpec& h, double lambda_capacity);

}  // namespace kwlab
