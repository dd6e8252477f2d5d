#pragma once

#include <cstdarg>
#include <cstdio>

#include <gmpxx.h>
#include <mpfr.h>

#include <string>

namespace slopekit {

// Closed real interval [lo, hi] with MPFR endpoints rounded outward.
class Interval {
 public:
  explicit Interval(mpfr_prec_t prec = 64);
  Interval(const mpq_class& q, mpfr_prec_t prec);
  Interval(const Interval& other);
  Interval(Interval&& other) noexcept;
  Interval& operator=(Interval other) noexcept;
  ~Interval();

  static Interval log_of(const mpz_class& n, mpfr_prec_t prec);
  static Interval sqrt_of(const mpq_class& q, mpfr_prec_t prec);

  mpfr_prec_t precision() const { return prec_; }
  const __mpfr_struct* lo() const { return lo_; }
  const __mpfr_struct* hi() const { return hi_; }

  double lo_double() const;  // rounded down
  double hi_double() const;  // rounded up
  double mid_double() const;

  bool contains(double x) const;
  bool contains(const mpq_class& q) const;
  bool positive() const;  // lo > 0
  bool negative() const;  // hi < 0
  bool contains_zero() const { return !positive() && !negative(); }

  // hi - lo, rounded up
  double width() const;
  // max(|lo|, |hi|), rounded up
  double magnitude() const;

  Interval operator-() const;
  friend Interval operator+(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a, const Interval& b);
  friend Interval operator*(const Interval& a, const Interval& b);
  Interval scaled(const mpq_class& q) const;
  Interval rounded(mpfr_prec_t prec) const;

  std::string to_string(int digits = 20) const;

 private:
  mpfr_prec_t prec_;
  mpfr_t lo_;
  mpfr_t hi_;
};

}  // namespace slopekit
