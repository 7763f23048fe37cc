#pragma once

#include <cstdint>
#include <vector>

namespace kwlab {

// p_j = 4^{-j} C(2j, j) tabulated through log-gamma.
class LegendreCatalog {
 public:
  explicit LegendreCatalog(std::int64_t max_index);

  std::int64_t max_index() const { return static_cast<std::int64_t>(p_.size()) - 1; }
  double p(std::int64_t j) const;
  double log_p(std::int64_t j) const;

 private:
  std::vector<double> p_;
  std::vector<double> log_p_;
};

double legendre_p(std::int64_t degree, double x);

// C_N^alpha(x) / C_N^alpha(1); alpha = 0 gives the Chebyshev limit T_N(x).
double gegenbauer_normalized(std::int64_t degree, double alpha, double x);

// Normalized Gegenbauer values for degrees 0..max_degree at x.
void gegenbauer_normalized_all(std::int64_t max_degree, double alpha, double x, std::vector<double>& out);

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Jacobi rule for weight (1-x)^alpha (1+x)^beta on [-1, 1] (Golub-Welsch).
QuadratureRule gauss_jacobi(int n, double alpha, double beta);
inline QuadratureRule gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }

}  // namespace kwlab
