#pragma once

#include "slopekit/lattice.hpp"
#include "slopekit/quadratic_field.hpp"

namespace slopekit {

/// Free o_K-module with a positive definite hermitian Gram matrix, left antilinear:
/// <x, y> = sum conj(x_i) G_ij y_j.
class HermitianLattice {
 public:
  /// Throws std::invalid_argument unless `gram` is square, conjugate-symmetric and positive definite.
  HermitianLattice(ImagQuadField field, KMatrix gram);

  static HermitianLattice unit(const ImagQuadField& field, size_t rank);
  static HermitianLattice from_rational(const ImagQuadField& field, const QMatrix& gram);

  const ImagQuadField& field() const { return field_; }
  size_t rank() const { return gram_.rows(); }
  const KMatrix& gram() const { return gram_; }
  const Rational& gram_determinant() const { return det_; }

  QuadElem inner(const KVector& x, const KVector& y) const;
  Rational norm_sq(const KVector& x) const;

  friend bool operator==(const HermitianLattice& a, const HermitianLattice& b) {
    return a.field_ == b.field_ && a.gram_ == b.gram_;
  }

 private:
  ImagQuadField field_;
  KMatrix gram_;
  Rational det_;
};

/// -log det G: the single complex place has weight 2.
LogRational degree(const HermitianLattice& lattice);
LogRational slope(const HermitianLattice& lattice);

/// Gram multiplied by c > 0; the twist parameter is lambda = -log c.
HermitianLattice twist(const HermitianLattice& lattice, const Rational& c);
LogRational twist_parameter(const Rational& c);

/// Gram of the dual basis: conj(G^-1).
HermitianLattice dual(const HermitianLattice& lattice);
HermitianLattice tensor(const HermitianLattice& a, const HermitianLattice& b);
HermitianLattice orthogonal_sum(const HermitianLattice& a, const HermitianLattice& b);
HermitianLattice exterior_power(const HermitianLattice& lattice, size_t p);

bool is_integral(const HermitianLattice& lattice);
bool is_unimodular(const HermitianLattice& lattice);

/// Free submodule spanned by the rows of `basis` (coordinates in K).
HermitianLattice sublattice(const HermitianLattice& lattice, const KMatrix& basis);
/// Index of the submodule spanned by the rows of a square integral matrix: |N(det)|.
Integer sublattice_index(const KMatrix& basis);

/// Degree of the saturated rank-one sublattice K v intersected with the lattice:
/// log N(a) - log |v|^2 where a is the ideal generated by the coordinates of v.
LogRational rank_one_degree(const HermitianLattice& lattice, const KVector& v);
/// Euclidean version: log content(v) - 1/2 log |v|^2.
LogRational rank_one_degree(const EuclideanLattice& lattice, const ZVector& v);

/// deg + ([K:Q] r / 2) * sum_{m=2}^{r} 1/m.
LogRational faltings_height_sq(const LogRational& degree, size_t rank, int field_degree);
LogRational faltings_height_sq(const HermitianLattice& lattice);
/// -([K:Q]/2) r log r
LogRational nef_degree_lower_bound(size_t rank, int field_degree);

/// Z-module of rank 2r with basis e_1, w e_1, e_2, w e_2, ... and form Re <x, y>.
EuclideanLattice restrict_scalars(const HermitianLattice& lattice);
/// deg(restrict_scalars(E)) - deg(E) = -(r/2) log(|disc K| / 4)
LogRational restriction_degree_shift(const ImagQuadField& field, size_t rank);

KVector to_field(const QVector& v, const ImagQuadField& k);
KVector to_field(const ZVector& v, const ImagQuadField& k);

}  // namespace slopekit
