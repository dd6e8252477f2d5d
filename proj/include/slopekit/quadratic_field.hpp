#pragma once

#include <string>

#include "slopekit/exactval.hpp"
#include "slopekit/interval.hpp"
#include "slopekit/matrix.hpp"

namespace slopekit {

/// Q(sqrt(-d)) for squarefree d > 0 with integral basis {1, w}.
class ImagQuadField {
 public:
  explicit ImagQuadField(long d);

  long d() const { return d_; }
  /// w^2 = trace_w * w - norm_w
  long trace_w() const { return t_; }
  long norm_w() const { return n_; }
  /// Field discriminant: -d or -4d.
  long discriminant() const { return t_ == 1 ? -d_ : -4 * d_; }
  bool w_is_half_integral() const { return t_ == 1; }

  friend bool operator==(const ImagQuadField& a, const ImagQuadField& b) { return a.d_ == b.d_; }

 private:
  long d_;
  long t_;
  long n_;
};

/// a + b*w. Elements built from plain rationals carry no field and adapt to the other operand.
class QuadElem {
 public:
  QuadElem() = default;
  QuadElem(long a) : a_(a) {}  // NOLINT(google-explicit-constructor)
  QuadElem(const Rational& a) : a_(a) {}  // NOLINT(google-explicit-constructor)
  QuadElem(const ImagQuadField& k, const Rational& a, const Rational& b = 0);

  static QuadElem w(const ImagQuadField& k) { return QuadElem(k, 0, 1); }

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  long field_d() const { return d_; }
  bool has_field() const { return d_ != 0; }
  ImagQuadField field() const;

  bool is_rational() const { return sgn(b_) == 0; }
  /// Coordinates are integers, i.e. the element lies in the ring of integers.
  bool is_integral() const;
  Rational norm() const;
  Rational trace() const;
  QuadElem conj() const;
  Rational real_part() const;
  /// Enclosure of the complex value: real and imaginary parts.
  std::pair<Interval, Interval> enclose(mpfr_prec_t prec) const;

  QuadElem operator-() const;
  QuadElem& operator+=(const QuadElem& o);
  QuadElem& operator-=(const QuadElem& o);
  QuadElem& operator*=(const QuadElem& o);
  QuadElem& operator/=(const QuadElem& o);
  friend QuadElem operator+(QuadElem x, const QuadElem& y) { return x += y; }
  friend QuadElem operator-(QuadElem x, const QuadElem& y) { return x -= y; }
  friend QuadElem operator*(QuadElem x, const QuadElem& y) { return x *= y; }
  friend QuadElem operator/(QuadElem x, const QuadElem& y) { return x /= y; }
  friend bool operator==(const QuadElem& x, const QuadElem& y) { return x.a_ == y.a_ && x.b_ == y.b_; }

  std::string to_string() const;

 private:
  void adopt(const QuadElem& o);
  long t() const;
  long n() const;

  Rational a_ = 0;
  Rational b_ = 0;
  long d_ = 0;
};

inline QuadElem conjugate(const QuadElem& x) { return x.conj(); }
inline bool is_positive_real(const QuadElem& x) { return x.is_rational() && sgn(x.a()) > 0; }
inline bool is_zero(const QuadElem& x) { return sgn(x.a()) == 0 && sgn(x.b()) == 0; }
inline std::string to_string(const QuadElem& x) { return x.to_string(); }

using KMatrix = Matrix<QuadElem>;
using KVector = std::vector<QuadElem>;

KMatrix to_field(const QMatrix& m, const ImagQuadField& k);

/// Norm of the o_K-ideal generated by the given integral elements.
Integer ideal_norm(const ImagQuadField& k, const KVector& generators);

/// Least positive integer m with m*x integral for every x.
Integer integral_denominator(const KVector& xs);

/// x + y*alpha over an imaginary quadratic field, alpha^2 = t rational and not a square in K.
/// alpha is real when t > 0 and purely imaginary when t < 0; complex conjugation acts accordingly.
class RelQuad {
 public:
  RelQuad(const ImagQuadField& k, const Rational& t, const QuadElem& x = 0, const QuadElem& y = 0);

  static RelQuad alpha(const ImagQuadField& k, const Rational& t) { return RelQuad(k, t, 0, 1); }

  const QuadElem& x() const { return x_; }
  const QuadElem& y() const { return y_; }
  const Rational& t() const { return t_; }
  const ImagQuadField& base() const { return k_; }

  /// Complex conjugation.
  RelQuad conj() const;
  /// The nontrivial automorphism over K: alpha -> -alpha.
  RelQuad sigma() const;
  /// Relative trace to K.
  QuadElem trace() const { return x_ * QuadElem(2); }
  /// Relative norm to K.
  QuadElem rel_norm() const { return x_ * x_ - y_ * y_ * QuadElem(t_); }
  bool in_base() const { return is_zero(y_); }
  /// Real number that lies in Q(alpha): x, y rational and alpha real, or y = 0 and x rational.
  bool is_real() const;
  /// Enclosure of a real element; throws std::domain_error otherwise.
  Interval enclose_real(mpfr_prec_t prec) const;

  RelQuad operator-() const;
  RelQuad& operator+=(const RelQuad& o);
  RelQuad& operator-=(const RelQuad& o);
  RelQuad& operator*=(const RelQuad& o);
  RelQuad& operator/=(const RelQuad& o);
  friend RelQuad operator+(RelQuad a, const RelQuad& b) { return a += b; }
  friend RelQuad operator-(RelQuad a, const RelQuad& b) { return a -= b; }
  friend RelQuad operator*(RelQuad a, const RelQuad& b) { return a *= b; }
  friend RelQuad operator/(RelQuad a, const RelQuad& b) { return a /= b; }
  friend bool operator==(const RelQuad& a, const RelQuad& b) { return a.x_ == b.x_ && a.y_ == b.y_; }

  std::string to_string(const std::string& alpha_name = "a") const;

 private:
  void check(const RelQuad& o) const;

  ImagQuadField k_;
  Rational t_;
  QuadElem x_;
  QuadElem y_;
};

}  // namespace slopekit
