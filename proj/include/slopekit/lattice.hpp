#pragma once

#include <memory>

#include "slopekit/exactval.hpp"
#include "slopekit/matrix.hpp"

namespace slopekit {

/// Free abelian group of finite rank with a positive definite rational Gram matrix.
class EuclideanLattice {
 public:
  /// Throws std::invalid_argument unless `gram` is square, symmetric and positive definite.
  explicit EuclideanLattice(QMatrix gram);

  static EuclideanLattice unit(size_t rank);

  size_t rank() const { return gram_.rows(); }
  const QMatrix& gram() const { return gram_; }
  const Rational& gram_determinant() const { return det_; }

  Rational norm_sq(const ZVector& v) const;
  Rational inner(const QVector& a, const QVector& b) const;

  friend bool operator==(const EuclideanLattice& a, const EuclideanLattice& b) { return a.gram_ == b.gram_; }

 private:
  QMatrix gram_;
  Rational det_;
};

LogRational degree(const EuclideanLattice& lattice);
LogRational slope(const EuclideanLattice& lattice);

EuclideanLattice dual(const EuclideanLattice& lattice);
EuclideanLattice tensor(const EuclideanLattice& a, const EuclideanLattice& b);
EuclideanLattice orthogonal_sum(const EuclideanLattice& a, const EuclideanLattice& b);
/// Gram multiplied by c > 0, i.e. the twist by -1/2 log c.
EuclideanLattice scale(const EuclideanLattice& lattice, const Rational& c);
EuclideanLattice exterior_power(const EuclideanLattice& lattice, size_t p);

/// Increasing p-subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<size_t>> subsets(size_t n, size_t p);

bool is_integral(const EuclideanLattice& lattice);
bool is_unimodular(const EuclideanLattice& lattice);

/// Rank-k sublattice spanned by the rows of an integer k x r matrix.
class Sublattice {
 public:
  Sublattice(std::shared_ptr<const EuclideanLattice> ambient, ZMatrix basis);

  const EuclideanLattice& ambient() const { return *ambient_; }
  const std::shared_ptr<const EuclideanLattice>& ambient_ptr() const { return ambient_; }
  const ZMatrix& basis() const { return basis_; }
  size_t rank() const { return basis_.rows(); }
  const QMatrix& induced_gram() const { return gram_; }
  const Rational& determinant() const { return det_; }
  EuclideanLattice as_lattice() const { return EuclideanLattice(gram_); }

  ZMatrix hnf() const { return hermite_normal_form(basis_); }
  /// Same subgroup of the ambient lattice.
  bool same_subgroup(const Sublattice& other) const;
  /// Rational span of this sublattice contains that of `other`.
  bool span_contains(const Sublattice& other) const;

 private:
  std::shared_ptr<const EuclideanLattice> ambient_;
  ZMatrix basis_;
  QMatrix gram_;
  Rational det_;
};

LogRational degree(const Sublattice& s);
LogRational mu_of_sublattice(const Sublattice& s);

Sublattice saturation(const Sublattice& s);
/// [saturation(S) : S]
Integer saturation_index(const Sublattice& s);

/// Linear map between lattices given on coordinates: target = matrix * source.
struct LatticeMorphism {
  EuclideanLattice source;
  EuclideanLattice target;
  QMatrix matrix;
  bool rational = false;  // entries not all integral

  LatticeMorphism(EuclideanLattice source, EuclideanLattice target, QMatrix matrix);
};

/// Operator norm at most one.
bool morphism_norm_le_one(const LatticeMorphism& f);
Rational hilbert_schmidt_sq(const LatticeMorphism& f);
/// Squared operator norm at most `bound`.
bool morphism_norm_sq_le(const LatticeMorphism& f, const Rational& bound);
/// g after f
LatticeMorphism compose(const LatticeMorphism& g, const LatticeMorphism& f);

/// w in L1 (x) L2, with coordinate index i * rank(L2) + k, as the map dual(L2) -> L1.
LatticeMorphism tensor_vector_to_hom(const EuclideanLattice& l1, const EuclideanLattice& l2, const QVector& w);

/// Coordinates of sum_i e_i (x) e_i^dual in L (x) dual(L).
QVector evaluation_vector(size_t rank);

/// Matrix of E^{(x)p} -> Alt^p E, e_{i1} (x) ... (x) e_{ip} -> e_{i1} ^ ... ^ e_{ip}.
QMatrix alternating_map(size_t rank, size_t p);
/// Gram of the p-fold tensor power.
QMatrix tensor_power_gram(const QMatrix& gram, size_t p);

}  // namespace slopekit
