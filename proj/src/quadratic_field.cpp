#include "slopekit/quadratic_field.hpp"

#include <stdexcept>

namespace slopekit {

ImagQuadField::ImagQuadField(long d) : d_(d) {
  if (d <= 0) throw std::invalid_argument("imaginary quadratic field needs d > 0");
  for (const auto& [p, e] : factor_integer(Integer(d)))
    if (e > 1) throw std::invalid_argument("d must be squarefree: " + std::to_string(d));
  if (d % 4 == 3) {
    t_ = 1;
    n_ = (1 + d) / 4;
  } else {
    t_ = 0;
    n_ = d;
  }
}

QuadElem::QuadElem(const ImagQuadField& k, const Rational& a, const Rational& b) : a_(a), b_(b), d_(k.d()) {
  a_.canonicalize();
  b_.canonicalize();
}

ImagQuadField QuadElem::field() const {
  if (!has_field()) throw std::logic_error("rational element carries no field");
  return ImagQuadField(d_);
}

long QuadElem::t() const { return d_ % 4 == 3 ? 1 : 0; }
long QuadElem::n() const { return d_ % 4 == 3 ? (1 + d_) / 4 : d_; }

void QuadElem::adopt(const QuadElem& o) {
  if (o.d_ == 0) return;
  if (d_ == 0) {
    d_ = o.d_;
  } else if (d_ != o.d_) {
    throw std::invalid_argument("mixing elements of different quadratic fields");
  }
}

bool QuadElem::is_integral() const { return a_.get_den() == 1 && b_.get_den() == 1; }

Rational QuadElem::norm() const { return a_ * a_ + a_ * b_ * t() + b_ * b_ * n(); }

Rational QuadElem::trace() const { return 2 * a_ + b_ * t(); }

QuadElem QuadElem::conj() const {
  QuadElem r(*this);
  r.a_ = a_ + b_ * t();
  r.b_ = -b_;
  return r;
}

Rational QuadElem::real_part() const { return a_ + b_ * t() / 2; }

std::pair<Interval, Interval> QuadElem::enclose(mpfr_prec_t prec) const {
  Interval re(real_part(), prec);
  if (is_rational()) return {re, Interval(Rational(0), prec)};
  Rational coeff = t() == 1 ? Rational(b_ / 2) : b_;
  return {re, Interval::sqrt_of(Rational(d_), prec).scaled(coeff)};
}

QuadElem QuadElem::operator-() const {
  QuadElem r(*this);
  r.a_ = -a_;
  r.b_ = -b_;
  return r;
}

QuadElem& QuadElem::operator+=(const QuadElem& o) {
  adopt(o);
  a_ += o.a_;
  b_ += o.b_;
  return *this;
}

QuadElem& QuadElem::operator-=(const QuadElem& o) {
  adopt(o);
  a_ -= o.a_;
  b_ -= o.b_;
  return *this;
}

QuadElem& QuadElem::operator*=(const QuadElem& o) {
  adopt(o);
  Rational bd = b_ * o.b_;
  Rational a = a_ * o.a_ - bd * n();
  Rational b = a_ * o.b_ + b_ * o.a_ + bd * t();
  a_ = std::move(a);
  b_ = std::move(b);
  return *this;
}

QuadElem& QuadElem::operator/=(const QuadElem& o) {
  adopt(o);
  Rational nm = o.norm();
  if (sgn(nm) == 0) throw std::domain_error("division by zero");
  QuadElem inv = o.conj();
  inv.d_ = d_;
  inv.a_ /= nm;
  inv.b_ /= nm;
  return *this *= inv;
}

std::string QuadElem::to_string() const {
  if (sgn(b_) == 0) return slopekit::to_string(a_);
  std::string w = b_ == 1 ? "w" : b_ == -1 ? "-w" : slopekit::to_string(b_) + "*w";
  if (sgn(a_) == 0) return w;
  if (w[0] == '-') return slopekit::to_string(a_) + " - " + w.substr(1);
  return slopekit::to_string(a_) + " + " + w;
}

KMatrix to_field(const QMatrix& m, const ImagQuadField& k) {
  KMatrix out(m.rows(), m.cols());
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) out(i, j) = QuadElem(k, m(i, j));
  return out;
}

Integer ideal_norm(const ImagQuadField& k, const KVector& generators) {
  ZMatrix rows(2 * generators.size(), 2);
  for (size_t i = 0; i < generators.size(); ++i) {
    const QuadElem& x = generators[i];
    if (!x.is_integral()) throw std::invalid_argument("ideal generator is not integral");
    Integer a = x.a().get_num(), b = x.b().get_num();
    rows(2 * i, 0) = a;
    rows(2 * i, 1) = b;
    // x*w = -b*n + (a + b*t) w
    rows(2 * i + 1, 0) = -b * k.norm_w();
    rows(2 * i + 1, 1) = a + b * k.trace_w();
  }
  ZMatrix h = hermite_normal_form(rows);
  if (h.rows() != 2) throw std::invalid_argument("zero ideal");
  return h(0, 0) * h(1, 1);
}

Integer integral_denominator(const KVector& xs) {
  Integer m = 1;
  for (const auto& x : xs) {
    m = lcm(m, x.a().get_den());
    m = lcm(m, x.b().get_den());
  }
  return m;
}

RelQuad::RelQuad(const ImagQuadField& k, const Rational& t, const QuadElem& x, const QuadElem& y)
    : k_(k), t_(t), x_(QuadElem(k, 0) + x), y_(QuadElem(k, 0) + y) {
  t_.canonicalize();
  if (sgn(t_) == 0) throw std::invalid_argument("relative quadratic generator squares to zero");
}

void RelQuad::check(const RelQuad& o) const {
  if (!(k_ == o.k_) || t_ != o.t_) throw std::invalid_argument("mixing different relative quadratic fields");
}

RelQuad RelQuad::conj() const {
  QuadElem y = y_.conj();
  return RelQuad(k_, t_, x_.conj(), sgn(t_) > 0 ? y : -y);
}

RelQuad RelQuad::sigma() const { return RelQuad(k_, t_, x_, -y_); }

bool RelQuad::is_real() const {
  if (!x_.is_rational() || !y_.is_rational()) return false;
  return is_zero(y_) || sgn(t_) > 0;
}

Interval RelQuad::enclose_real(mpfr_prec_t prec) const {
  if (!is_real()) throw std::domain_error("element is not real: " + to_string());
  Interval v(x_.a(), prec);
  if (is_zero(y_)) return v;
  return v + Interval::sqrt_of(t_, prec).scaled(y_.a());
}

RelQuad RelQuad::operator-() const { return RelQuad(k_, t_, -x_, -y_); }

RelQuad& RelQuad::operator+=(const RelQuad& o) {
  check(o);
  x_ += o.x_;
  y_ += o.y_;
  return *this;
}

RelQuad& RelQuad::operator-=(const RelQuad& o) {
  check(o);
  x_ -= o.x_;
  y_ -= o.y_;
  return *this;
}

RelQuad& RelQuad::operator*=(const RelQuad& o) {
  check(o);
  QuadElem x = x_ * o.x_ + y_ * o.y_ * QuadElem(t_);
  QuadElem y = x_ * o.y_ + y_ * o.x_;
  x_ = std::move(x);
  y_ = std::move(y);
  return *this;
}

RelQuad& RelQuad::operator/=(const RelQuad& o) {
  check(o);
  QuadElem nm = o.rel_norm();
  if (is_zero(nm)) throw std::domain_error("division by zero");
  *this *= o.sigma();
  x_ /= nm;
  y_ /= nm;
  return *this;
}

std::string RelQuad::to_string(const std::string& alpha_name) const {
  if (is_zero(y_)) return x_.to_string();
  std::string ys = "(" + y_.to_string() + ")*" + alpha_name;
  if (is_zero(x_)) return ys;
  return "(" + x_.to_string() + ") + " + ys;
}

}  // namespace slopekit
