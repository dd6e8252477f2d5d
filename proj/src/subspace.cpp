#include "slopekit/subspace.hpp"

#include <stdexcept>

namespace slopekit {

void Subspace::reduce() {
  basis_ = rref(std::move(basis_));
  pivots_.clear();
  for (size_t i = 0; i < basis_.rows(); ++i) {
    size_t j = 0;
    while (sgn(basis_(i, j)) == 0) ++j;
    pivots_.push_back(j);
  }
}

Subspace Subspace::whole(size_t ambient) {
  Subspace s(ambient);
  s.basis_ = QMatrix::identity(ambient);
  for (size_t i = 0; i < ambient; ++i) s.pivots_.push_back(i);
  return s;
}

Subspace Subspace::span(const QMatrix& rows) {
  Subspace s(rows.cols());
  s.basis_ = rows;
  s.reduce();
  return s;
}

Subspace Subspace::span(size_t ambient, const std::vector<QVector>& vectors) {
  QMatrix m(vectors.size(), ambient);
  for (size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != ambient) throw std::invalid_argument("vector length does not match ambient dimension");
    m.set_row(i, vectors[i]);
  }
  return span(m);
}

Subspace Subspace::line(const QVector& v) {
  Subspace s = span(v.size(), {v});
  if (s.is_zero()) throw std::invalid_argument("line spanned by the zero vector");
  return s;
}

bool Subspace::contains(const QVector& v) const {
  if (v.size() != ambient_) throw std::invalid_argument("vector length does not match ambient dimension");
  QVector r = v;
  for (size_t i = 0; i < basis_.rows(); ++i) {
    const Rational c = r[pivots_[i]];
    if (sgn(c) == 0) continue;
    for (size_t j = pivots_[i]; j < ambient_; ++j) r[j] -= c * basis_(i, j);
  }
  for (const auto& x : r)
    if (sgn(x) != 0) return false;
  return true;
}

bool Subspace::contains(const Subspace& s) const {
  if (s.ambient_ != ambient_) throw std::invalid_argument("ambient dimension mismatch");
  if (s.dim() > dim()) return false;
  for (size_t i = 0; i < s.dim(); ++i)
    if (!contains(s.vector(i))) return false;
  return true;
}

Subspace Subspace::operator+(const Subspace& o) const {
  if (o.ambient_ != ambient_) throw std::invalid_argument("ambient dimension mismatch");
  if (o.dim() == 0 || is_whole()) return *this;
  if (dim() == 0 || o.is_whole()) return o;
  QMatrix m(dim() + o.dim(), ambient_);
  for (size_t i = 0; i < dim(); ++i) m.set_row(i, basis_.row(i));
  for (size_t i = 0; i < o.dim(); ++i) m.set_row(dim() + i, o.basis_.row(i));
  return span(m);
}

Subspace Subspace::intersect(const Subspace& o) const {
  if (o.ambient_ != ambient_) throw std::invalid_argument("ambient dimension mismatch");
  if (is_whole() || o.dim() == 0) return o;
  if (o.is_whole() || dim() == 0) return *this;
  return (annihilator() + o.annihilator()).annihilator();
}

Subspace Subspace::annihilator() const {
  if (dim() == 0) return whole(ambient_);
  if (is_whole()) return Subspace(ambient_);
  return span(nullspace(basis_));
}

QVector Subspace::coordinates(const QVector& v) const {
  if (!contains(v)) throw std::invalid_argument("vector is not in the subspace");
  QVector c(dim());
  for (size_t i = 0; i < dim(); ++i) c[i] = v[pivots_[i]];
  return c;
}

QVector Subspace::from_coordinates(const QVector& c) const {
  if (c.size() != dim()) throw std::invalid_argument("coordinate length mismatch");
  QVector v(ambient_, Rational(0));
  for (size_t i = 0; i < dim(); ++i) {
    if (sgn(c[i]) == 0) continue;
    for (size_t j = 0; j < ambient_; ++j) v[j] += c[i] * basis_(i, j);
  }
  return v;
}

Subspace Subspace::image(const QMatrix& map) const {
  if (map.cols() != ambient_) throw std::invalid_argument("map width does not match ambient dimension");
  if (dim() == 0) return Subspace(map.rows());
  return span(basis_ * map.transpose());
}

bool operator<(const Subspace& a, const Subspace& b) {
  if (a.ambient_ != b.ambient_) return a.ambient_ < b.ambient_;
  if (a.dim() != b.dim()) return a.dim() < b.dim();
  const auto& x = a.basis_.data();
  const auto& y = b.basis_.data();
  for (size_t k = 0; k < x.size(); ++k) {
    int c = cmp(x[k], y[k]);
    if (c != 0) return c < 0;
  }
  return false;
}

std::string Subspace::to_string() const {
  std::string s = "<";
  for (size_t i = 0; i < dim(); ++i) {
    if (i) s += ", ";
    s += "(";
    for (size_t j = 0; j < ambient_; ++j) {
      if (j) s += ",";
      s += slopekit::to_string(basis_(i, j));
    }
    s += ")";
  }
  return s + ">";
}

size_t intersection_dim(const Subspace& a, const Subspace& b) {
  return a.dim() + b.dim() - (a + b).dim();
}

QMatrix quotient_map(const Subspace& s) { return s.annihilator().basis(); }

}  // namespace slopekit
