#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace kwlab {

__extension__ typedef __int128 i128;
__extension__ typedef unsigned __int128 u128;

// Reduced fraction with positive denominator.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

  // Best approximation with denominator <= max_den; nullopt unless it reproduces x to a few ulp.
  static std::optional<Rational> recognize(double x, std::int64_t max_den = 1000);

  friend bool operator==(const Rational&, const Rational&) = default;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

Rational operator*(const Rational& a, const Rational& b);
Rational operator+(const Rational& a, const Rational& b);
Rational operator-(const Rational& a, const Rational& b);
Rational operator/(const Rational& a, const Rational& b);
bool operator<(const Rational& a, const Rational& b);
inline bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }

// A nonnegative real known through its square: value = sqrt(square).
// Exact when the square is rational, otherwise only the double is carried.
struct ExactSquare {
  double value = 0.0;
  std::optional<Rational> square;

  static ExactSquare from_rational_square(const Rational& sq);
  static ExactSquare from_integer(std::int64_t v);
  static ExactSquare from_double(double v);
  bool exact() const { return square.has_value(); }
  // Round-trips through parse_exact.
  std::string str() const;
};

// Parses "p/q", "sqrt(p/q)", "1/sqrt(q)" or a decimal; decimals are promoted to exact
// when they (or their squares) are recognizable small-denominator rationals.
ExactSquare parse_exact(std::string_view text);
ExactSquare recognize_exact(double v);

struct MembershipResult {
  bool inside = false;
  bool exact = false;
  bool guard_band_hit = false;
};

// Closed test |mu - c*lambda| <= eps.
MembershipResult ladder_member(const ExactSquare& mu, const ExactSquare& c, const ExactSquare& lambda,
                               const ExactSquare& eps);

inline constexpr double kGuardBand = 1e-12;

}  // namespace kwlab
