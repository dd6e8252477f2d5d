#pragma once

#include <gmpxx.h>

#include <compare>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "slopekit/interval.hpp"

namespace slopekit {

using Integer = mpz_class;
using Rational = mpq_class;

std::string to_string(const Rational& q);

/// Canonicalized n/d.
inline Rational frac(long n, long d) {
  Rational q(n, d);
  q.canonicalize();
  return q;
}
Rational parse_rational(std::string_view text);

// Prime factorization of |n| for n != 0, primes ascending.
std::map<Integer, unsigned long> factor_integer(const Integer& n);

/// Exact real number c + sum_p q_p * log(p) over primes p with rational c, q_p.
///
/// Kept in canonical form (prime bases, no zero coefficients), so structural
/// equality coincides with equality of the real numbers.
class LogRational {
 public:
  LogRational() = default;
  LogRational(const Rational& constant);  // NOLINT(google-explicit-constructor)
  LogRational(long constant) : LogRational(Rational(constant)) {}  // NOLINT

  /// log q for q > 0; throws std::domain_error otherwise.
  static LogRational log_of(const Rational& q);
  static LogRational parse(std::string_view text);

  const Rational& constant() const { return constant_; }
  const std::map<Integer, Rational>& terms() const { return terms_; }
  bool is_zero() const { return sgn(constant_) == 0 && terms_.empty(); }
  bool is_rational() const { return terms_.empty(); }

  LogRational operator-() const;
  LogRational& operator+=(const LogRational& other);
  LogRational& operator-=(const LogRational& other);
  LogRational& operator*=(const Rational& factor);
  LogRational& operator/=(const Rational& divisor);

  friend LogRational operator+(LogRational a, const LogRational& b) { return a += b; }
  friend LogRational operator-(LogRational a, const LogRational& b) { return a -= b; }
  friend LogRational operator*(LogRational a, const Rational& q) { return a *= q; }
  friend LogRational operator*(const Rational& q, LogRational a) { return a *= q; }
  friend LogRational operator/(LogRational a, const Rational& q) { return a /= q; }

  friend bool operator==(const LogRational& a, const LogRational& b);
  friend std::strong_ordering operator<=>(const LogRational& a, const LogRational& b);

  /// Rigorous enclosure of width at most 2^(1-bits) * max(1, |value|).
  /// Endpoints are rounded outward to `bits` bits.
  Interval enclose(int bits) const;
  double approx() const;

  std::string to_string() const;

 private:
  void add_log_integer(const Integer& n, const Rational& coeff);

  Rational constant_{0};
  std::map<Integer, Rational> terms_;
};

std::strong_ordering compare(const LogRational& a, const LogRational& b);
inline Interval to_float(const LogRational& a, int precision_bits) { return a.enclose(precision_bits); }
inline LogRational log_of_rational(const Rational& q) { return LogRational::log_of(q); }

inline std::ostream& operator<<(std::ostream& os, const LogRational& v) { return os << v.to_string(); }

LogRational max(const LogRational& a, const LogRational& b);
LogRational min(const LogRational& a, const LogRational& b);

}  // namespace slopekit
