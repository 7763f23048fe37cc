#include "kwlab/exact.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <string>

#include "kwlab/error.hpp"

namespace kwlab {
namespace {

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    i128 r = a % b;
    a = b;
    b = r;
  }
  return a;
}

Rational make_reduced(i128 num, i128 den) {
  if (den == 0) throw InvalidParameterError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  constexpr i128 lim = static_cast<i128>(INT64_MAX);
  if (num > lim || num < -lim || den > lim) throw RangeError("rational overflow");
  return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

bool mul_ok(i128 a, i128 b, i128& out) { return !__builtin_mul_overflow(a, b, &out); }

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::int64_t parse_int(const std::string& s) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    throw InvalidParameterError("cannot parse integer '" + s + "'");
  }
  if (pos != s.size()) throw InvalidParameterError("cannot parse integer '" + s + "'");
  return v;
}

Rational parse_fraction(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(parse_int(trim(s)));
  return Rational(parse_int(trim(s.substr(0, slash))), parse_int(trim(s.substr(slash + 1))));
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw InvalidParameterError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t g = std::gcd(num, den);
  num_ = g > 1 ? num / g : num;
  den_ = g > 1 ? den / g : den;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::optional<Rational> Rational::recognize(double x, std::int64_t max_den) {
  if (!std::isfinite(x) || std::fabs(x) > 1e12) return std::nullopt;
  const double ax = std::fabs(x);
  // Continued-fraction convergents.
  std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double r = ax;
  for (int it = 0; it < 64; ++it) {
    double a = std::floor(r);
    if (a > 1e12) break;
    auto ai = static_cast<std::int64_t>(a);
    std::int64_t h2 = ai * h1 + h0;
    std::int64_t k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    double approx = static_cast<double>(h1) / static_cast<double>(k1);
    if (std::fabs(approx - ax) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, ax)) {
      return Rational(x < 0 ? -h1 : h1, k1);
    }
    double frac = r - a;
    if (frac <= 0.0) break;
    r = 1.0 / frac;
  }
  return std::nullopt;
}

Rational operator*(const Rational& a, const Rational& b) {
  return make_reduced(static_cast<i128>(a.num()) * b.num(), static_cast<i128>(a.den()) * b.den());
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num() == 0) throw InvalidParameterError("division by zero rational");
  return make_reduced(static_cast<i128>(a.num()) * b.den(), static_cast<i128>(a.den()) * b.num());
}

Rational operator+(const Rational& a, const Rational& b) {
  return make_reduced(static_cast<i128>(a.num()) * b.den() + static_cast<i128>(b.num()) * a.den(),
                      static_cast<i128>(a.den()) * b.den());
}

Rational operator-(const Rational& a, const Rational& b) {
  return make_reduced(static_cast<i128>(a.num()) * b.den() - static_cast<i128>(b.num()) * a.den(),
                      static_cast<i128>(a.den()) * b.den());
}

bool operator<(const Rational& a, const Rational& b) {
  return static_cast<i128>(a.num()) * b.den() < static_cast<i128>(b.num()) * a.den();
}

ExactSquare ExactSquare::from_rational_square(const Rational& sq) {
  if (sq.num() < 0) throw InvalidParameterError("negative square");
  return ExactSquare{std::sqrt(sq.to_double()), sq};
}

ExactSquare ExactSquare::from_integer(std::int64_t v) {
  if (v < 0) throw InvalidParameterError("negative value");
  return ExactSquare{static_cast<double>(v), Rational(v) * Rational(v)};
}

ExactSquare ExactSquare::from_double(double v) {
  if (!(v >= 0.0)) throw InvalidParameterError("negative or NaN value");
  return ExactSquare{v, std::nullopt};
}

namespace {

std::optional<std::int64_t> exact_isqrt(std::int64_t v) {
  if (v < 0) return std::nullopt;
  auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(v))));
  for (std::int64_t k = std::max<std::int64_t>(0, r - 1); k <= r + 1; ++k)
    if (k * k == v) return k;
  return std::nullopt;
}

}  // namespace

std::string ExactSquare::str() const {
  if (!square) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
  }
  auto p = exact_isqrt(square->num()), q = exact_isqrt(square->den());
  if (p && q) return Rational(*p, *q).str();
  return "sqrt(" + square->str() + ")";
}

ExactSquare recognize_exact(double v) {
  if (!(v >= 0.0)) throw InvalidParameterError("negative or NaN value");
  if (auto r = Rational::recognize(v)) return ExactSquare{v, *r * *r};
  if (auto r2 = Rational::recognize(v * v)) return ExactSquare{v, *r2};
  return ExactSquare::from_double(v);
}

ExactSquare parse_exact(std::string_view text) {
  std::string s = trim(text);
  if (s.empty()) throw InvalidParameterError("empty numeric value");
  auto open = s.find("sqrt(");
  if (open != std::string::npos) {
    auto close = s.find(')', open);
    if (close == std::string::npos) throw InvalidParameterError("unbalanced sqrt( in '" + s + "'");
    Rational inner = parse_fraction(trim(s.substr(open + 5, close - open - 5)));
    std::string prefix = trim(s.substr(0, open));
    if (close + 1 != s.size()) throw InvalidParameterError("trailing text after sqrt(...) in '" + s + "'");
    Rational sq = inner;
    if (!prefix.empty()) {
      if (prefix.back() != '/') throw InvalidParameterError("expected 'p/sqrt(q)' form in '" + s + "'");
      Rational p = parse_fraction(trim(prefix.substr(0, prefix.size() - 1)));
      sq = (p * p) / inner;
    }
    return ExactSquare::from_rational_square(sq);
  }
  if (s.find('/') != std::string::npos) {
    Rational r = parse_fraction(s);
    if (r.num() < 0) throw InvalidParameterError("negative value '" + s + "'");
    return ExactSquare{r.to_double(), r * r};
  }
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw InvalidParameterError("cannot parse number '" + s + "'");
  }
  if (pos != s.size()) throw InvalidParameterError("cannot parse number '" + s + "'");
  return recognize_exact(v);
}

MembershipResult ladder_member(const ExactSquare& mu, const ExactSquare& c, const ExactSquare& lambda,
                               const ExactSquare& eps) {
  MembershipResult res;
  if (mu.exact() && c.exact() && lambda.exact() && eps.exact()) {
    // |sqrt(A) - sqrt(CR)| <= E  <=>  L <= 0  or  L^2 <= 4 CR A,  L = CR + A - E^2.
    try {
      Rational cr = *c.square * *lambda.square;
      const Rational& a = *mu.square;
      Rational l = cr + a - *eps.square;
      res.exact = true;
      if (l.num() <= 0) {
        res.inside = true;
        return res;
      }
      i128 lhs, rhs, t1, t2, t3;
      bool ok = mul_ok(l.num(), l.num(), t1) && mul_ok(t1, static_cast<i128>(cr.den()) * a.den(), lhs) &&
                mul_ok(static_cast<i128>(4) * cr.num(), a.num(), t2) &&
                mul_ok(static_cast<i128>(l.den()), l.den(), t3) && mul_ok(t2, t3, rhs);
      if (ok) {
        res.inside = lhs <= rhs;
        return res;
      }
      res.exact = false;
    } catch (const RangeError&) {
      res.exact = false;
    }
  }
  const double center = c.value * lambda.value;
  const double d = std::fabs(mu.value - center) - eps.value;
  res.inside = d <= 0.0;
  res.guard_band_hit = std::fabs(d) <= kGuardBand * std::max(1.0, center);
  return res;
}

}  // namespace kwlab
