#include "kwlab/legendre.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "kwlab/error.hpp"

namespace kwlab {

LegendreCatalog::LegendreCatalog(std::int64_t max_index) {
  if (max_index < 0) throw InvalidParameterError("catalog size must be >= 0");
  p_.resize(static_cast<std::size_t>(max_index) + 1);
  log_p_.resize(p_.size());
  const double log4 = std::log(4.0);
  for (std::int64_t j = 0; j <= max_index; ++j) {
    const double jd = static_cast<double>(j);
    double lp = std::lgamma(2.0 * jd + 1.0) - 2.0 * std::lgamma(jd + 1.0) - jd * log4;
    log_p_[static_cast<std::size_t>(j)] = lp;
    p_[static_cast<std::size_t>(j)] = std::exp(lp);
  }
  p_[0] = 1.0;
  log_p_[0] = 0.0;
  if (max_index >= 1) p_[1] = 0.5;
  if (max_index >= 2) p_[2] = 0.375;
}

double LegendreCatalog::p(std::int64_t j) const {
  if (j < 0 || j > max_index()) throw RangeError("p_j index out of catalog range");
  return p_[static_cast<std::size_t>(j)];
}

double LegendreCatalog::log_p(std::int64_t j) const {
  if (j < 0 || j > max_index()) throw RangeError("p_j index out of catalog range");
  return log_p_[static_cast<std::size_t>(j)];
}

double legendre_p(std::int64_t degree, double x) { return gegenbauer_normalized(degree, 0.5, x); }

double gegenbauer_normalized(std::int64_t degree, double alpha, double x) {
  if (degree < 0) throw InvalidParameterError("degree must be >= 0");
  if (degree == 0) return 1.0;
  double g0 = 1.0, g1 = x;
  for (std::int64_t k = 1; k < degree; ++k) {
    const double kd = static_cast<double>(k);
    double g2;
    if (alpha == 0.0) {
      g2 = 2.0 * x * g1 - g0;
    } else {
      g2 = (2.0 * (kd + alpha) * x * g1 - kd * g0) / (kd + 2.0 * alpha);
    }
    g0 = g1;
    g1 = g2;
  }
  return g1;
}

void gegenbauer_normalized_all(std::int64_t max_degree, double alpha, double x, std::vector<double>& out) {
  out.resize(static_cast<std::size_t>(max_degree) + 1);
  out[0] = 1.0;
  if (max_degree == 0) return;
  out[1] = x;
  for (std::int64_t k = 1; k < max_degree; ++k) {
    const double kd = static_cast<double>(k);
    const auto i = static_cast<std::size_t>(k);
    out[i + 1] = alpha == 0.0 ? 2.0 * x * out[i] - out[i - 1]
                              : (2.0 * (kd + alpha) * x * out[i] - kd * out[i - 1]) / (kd + 2.0 * alpha);
  }
}

QuadratureRule gauss_jacobi(int n, double alpha, double beta) {
  if (n < 1) throw InvalidParameterError("quadrature order must be >= 1");
  if (alpha <= -1.0 || beta <= -1.0) throw InvalidParameterError("Jacobi exponents must exceed -1");
  Eigen::VectorXd diag(n), sub(std::max(n - 1, 1));
  const double ab = alpha + beta;
  for (int k = 0; k < n; ++k) {
    const double kd = k;
    const double den = (2.0 * kd + ab) * (2.0 * kd + ab + 2.0);
    diag(k) = (k == 0 && std::fabs(ab + 2.0) > 0.0) ? (beta - alpha) / (ab + 2.0)
              : den == 0.0                         ? 0.0
                                                   : (beta * beta - alpha * alpha) / den;
  }
  for (int k = 1; k < n; ++k) {
    const double kd = k;
    const double t = 2.0 * kd + ab;
    const double b2 = k == 1 ? 4.0 * (1.0 + alpha) * (1.0 + beta) / (t * t * (t + 1.0))
                             : 4.0 * kd * (kd + alpha) * (kd + beta) * (kd + ab) / (t * t * (t + 1.0) * (t - 1.0));
    sub(k - 1) = std::sqrt(b2);
  }
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0) -
                              std::lgamma(ab + 2.0));
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  if (n == 1) {
    rule.nodes[0] = diag(0);
    rule.weights[0] = mu0;
    return rule;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw ToleranceError("Golub-Welsch eigensolver failed");
  for (int k = 0; k < n; ++k) {
    rule.nodes[static_cast<std::size_t>(k)] = es.eigenvalues()(k);
    const double v = es.eigenvectors()(0, k);
    rule.weights[static_cast<std::size_t>(k)] = mu0 * v * v;
  }
  return rule;
}

}  // namespace kwlab
