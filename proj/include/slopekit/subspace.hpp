#pragma once

#include <string>
#include <vector>

#include "slopekit/matrix.hpp"

namespace slopekit {

/// Subspace of Q^n stored by its reduced row echelon basis, so equal subspaces compare equal.
class Subspace {
 public:
  explicit Subspace(size_t ambient = 0) : ambient_(ambient), basis_(0, ambient) {}

  static Subspace whole(size_t ambient);
  /// Span of the rows of `rows`.
  static Subspace span(const QMatrix& rows);
  static Subspace span(size_t ambient, const std::vector<QVector>& vectors);
  static Subspace line(const QVector& v);

  size_t ambient_dim() const { return ambient_; }
  size_t dim() const { return basis_.rows(); }
  bool is_zero() const { return dim() == 0; }
  bool is_whole() const { return dim() == ambient_; }
  const QMatrix& basis() const { return basis_; }
  QVector vector(size_t i) const { return basis_.row(i); }

  bool contains(const QVector& v) const;
  bool contains(const Subspace& s) const;

  Subspace operator+(const Subspace& o) const;
  Subspace intersect(const Subspace& o) const;
  /// Linear forms vanishing on the subspace, in dual coordinates.
  Subspace annihilator() const;

  /// Coordinates of a contained vector with respect to basis().
  QVector coordinates(const QVector& v) const;
  /// Coordinates with respect to basis() back to ambient vectors.
  QVector from_coordinates(const QVector& c) const;
  /// Image under v -> map * v.
  Subspace image(const QMatrix& map) const;

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }
  friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }
  /// Total order (dimension first) for use as a map key.
  friend bool operator<(const Subspace& a, const Subspace& b);

  std::string to_string() const;

 private:
  size_t ambient_;
  QMatrix basis_;
  std::vector<size_t> pivots_;

  void reduce();
};

/// dim(a intersect b) without building the intersection.
size_t intersection_dim(const Subspace& a, const Subspace& b);

/// Rows: the matrix of the quotient map Q^n -> Q^n / s (kernel exactly s).
QMatrix quotient_map(const Subspace& s);

}  // namespace slopekit
