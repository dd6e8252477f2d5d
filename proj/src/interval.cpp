#include "slopekit/interval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <utility>

namespace slopekit {

Interval::Interval(mpfr_prec_t prec) : prec_(prec) {
  mpfr_init2(lo_, prec_);
  mpfr_init2(hi_, prec_);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Interval::Interval(const mpq_class& q, mpfr_prec_t prec) : prec_(prec) {
  mpfr_init2(lo_, prec_);
  mpfr_init2(hi_, prec_);
  mpfr_set_q(lo_, q.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi_, q.get_mpq_t(), MPFR_RNDU);
}

Interval::Interval(const Interval& other) : prec_(other.prec_) {
  mpfr_init2(lo_, prec_);
  mpfr_init2(hi_, prec_);
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& other) noexcept : Interval(other.prec_) {
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
}

Interval& Interval::operator=(Interval other) noexcept {
  if (prec_ != other.prec_) {
    mpfr_set_prec(lo_, other.prec_);
    mpfr_set_prec(hi_, other.prec_);
    prec_ = other.prec_;
  }
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
  return *this;
}

Interval::~Interval() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

Interval Interval::log_of(const mpz_class& n, mpfr_prec_t prec) {
  thread_local std::map<std::pair<mpz_class, mpfr_prec_t>, Interval> cache;
  auto key = std::make_pair(n, prec);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  Interval r(prec);
  mpfr_set_z(r.lo_, n.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(r.hi_, n.get_mpz_t(), MPFR_RNDU);
  mpfr_log(r.lo_, r.lo_, MPFR_RNDD);
  mpfr_log(r.hi_, r.hi_, MPFR_RNDU);
  if (cache.size() < 4096) cache.emplace(key, r);
  return r;
}

Interval Interval::sqrt_of(const mpq_class& q, mpfr_prec_t prec) {
  Interval r(q, prec);
  mpfr_sqrt(r.lo_, r.lo_, MPFR_RNDD);
  mpfr_sqrt(r.hi_, r.hi_, MPFR_RNDU);
  return r;
}

double Interval::lo_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double Interval::hi_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }

double Interval::mid_double() const {
  return 0.5 * (mpfr_get_d(lo_, MPFR_RNDN) + mpfr_get_d(hi_, MPFR_RNDN));
}

bool Interval::contains(double x) const {
  return mpfr_cmp_d(lo_, x) <= 0 && mpfr_cmp_d(hi_, x) >= 0;
}

bool Interval::contains(const mpq_class& q) const {
  return mpfr_cmp_q(lo_, q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, q.get_mpq_t()) >= 0;
}

bool Interval::positive() const { return mpfr_sgn(lo_) > 0; }
bool Interval::negative() const { return mpfr_sgn(hi_) < 0; }

double Interval::width() const {
  mpfr_t w;
  mpfr_init2(w, prec_);
  mpfr_sub(w, hi_, lo_, MPFR_RNDU);
  double d = mpfr_get_d(w, MPFR_RNDU);
  mpfr_clear(w);
  return d;
}

double Interval::magnitude() const {
  double a = std::abs(mpfr_get_d(lo_, MPFR_RNDA));
  double b = std::abs(mpfr_get_d(hi_, MPFR_RNDA));
  return std::max(a, b);
}

Interval Interval::operator-() const {
  Interval r(prec_);
  mpfr_neg(r.lo_, hi_, MPFR_RNDD);
  mpfr_neg(r.hi_, lo_, MPFR_RNDU);
  return r;
}

Interval operator+(const Interval& a, const Interval& b) {
  Interval r(std::max(a.prec_, b.prec_));
  mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

Interval operator-(const Interval& a, const Interval& b) { return a + (-b); }

Interval operator*(const Interval& a, const Interval& b) {
  mpfr_prec_t prec = std::max(a.prec_, b.prec_);
  Interval r(prec);
  mpfr_t t;
  mpfr_init2(t, prec);
  const __mpfr_struct* xs[2] = {a.lo_, a.hi_};
  const __mpfr_struct* ys[2] = {b.lo_, b.hi_};
  bool first = true;
  for (auto* x : xs) {
    for (auto* y : ys) {
      mpfr_mul(t, x, y, MPFR_RNDD);
      if (first || mpfr_cmp(t, r.lo_) < 0) mpfr_set(r.lo_, t, MPFR_RNDD);
      mpfr_mul(t, x, y, MPFR_RNDU);
      if (first || mpfr_cmp(t, r.hi_) > 0) mpfr_set(r.hi_, t, MPFR_RNDU);
      first = false;
    }
  }
  mpfr_clear(t);
  return r;
}

Interval Interval::scaled(const mpq_class& q) const {
  Interval r(prec_);
  if (sgn(q) >= 0) {
    mpfr_mul_q(r.lo_, lo_, q.get_mpq_t(), MPFR_RNDD);
    mpfr_mul_q(r.hi_, hi_, q.get_mpq_t(), MPFR_RNDU);
  } else {
    mpfr_mul_q(r.lo_, hi_, q.get_mpq_t(), MPFR_RNDD);
    mpfr_mul_q(r.hi_, lo_, q.get_mpq_t(), MPFR_RNDU);
  }
  return r;
}

Interval Interval::rounded(mpfr_prec_t prec) const {
  Interval r(prec);
  mpfr_set(r.lo_, lo_, MPFR_RNDD);
  mpfr_set(r.hi_, hi_, MPFR_RNDU);
  return r;
}

std::string Interval::to_string(int digits) const {
  char* a = nullptr;
  char* b = nullptr;
  mpfr_asprintf(&a, "%.*RDg", digits, lo_);
  mpfr_asprintf(&b, "%.*RUg", digits, hi_);
  std::string s = std::string("[") + a + ", " + b + "]";
  mpfr_free_str(a);
  mpfr_free_str(b);
  return s;
}

}  // namespace slopekit
