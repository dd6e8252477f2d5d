#include "slopekit/lattice.hpp"

namespace slopekit {

EuclideanLattice::EuclideanLattice(QMatrix gram) : gram_(std::move(gram)) {
  if (!gram_.square() || gram_.rows() == 0) throw std::invalid_argument("Gram matrix must be square and nonempty");
  for (size_t i = 0; i < gram_.rows(); ++i)
    for (size_t j = 0; j < gram_.cols(); ++j) gram_(i, j).canonicalize();
  if (!is_positive_definite(gram_)) throw std::invalid_argument("Gram matrix is not symmetric positive definite");
  det_ = determinant(gram_);
}

EuclideanLattice EuclideanLattice::unit(size_t rank) { return EuclideanLattice(QMatrix::identity(rank)); }

Rational EuclideanLattice::norm_sq(const ZVector& v) const {
  Rational s = 0;
  for (size_t i = 0; i < rank(); ++i) {
    if (v[i] == 0) continue;
    Rational row = 0;
    for (size_t j = 0; j < rank(); ++j) row += gram_(i, j) * v[j];
    s += row * v[i];
  }
  return s;
}

Rational EuclideanLattice::inner(const QVector& a, const QVector& b) const {
  Rational s = 0;
  for (size_t i = 0; i < rank(); ++i) {
    if (sgn(a[i]) == 0) continue;
    Rational row = 0;
    for (size_t j = 0; j < rank(); ++j) row += gram_(i, j) * b[j];
    s += a[i] * row;
  }
  return s;
}

LogRational degree(const EuclideanLattice& lattice) {
  return LogRational::log_of(lattice.gram_determinant()) * Rational(-1, 2);
}

LogRational slope(const EuclideanLattice& lattice) {
  return degree(lattice) / Rational(static_cast<long>(lattice.rank()));
}

EuclideanLattice dual(const EuclideanLattice& lattice) { return EuclideanLattice(inverse(lattice.gram())); }

EuclideanLattice tensor(const EuclideanLattice& a, const EuclideanLattice& b) {
  return EuclideanLattice(kronecker(a.gram(), b.gram()));
}

EuclideanLattice orthogonal_sum(const EuclideanLattice& a, const EuclideanLattice& b) {
  return EuclideanLattice(block_diagonal(a.gram(), b.gram()));
}

EuclideanLattice scale(const EuclideanLattice& lattice, const Rational& c) {
  if (sgn(c) <= 0) throw std::invalid_argument("scale factor must be positive");
  return EuclideanLattice(lattice.gram() * c);
}

std::vector<std::vector<size_t>> subsets(size_t n, size_t p) {
  std::vector<std::vector<size_t>> out;
  if (p > n) return out;
  std::vector<size_t> cur(p);
  for (size_t i = 0; i < p; ++i) cur[i] = i;
  for (;;) {
    out.push_back(cur);
    size_t i = p;
    while (i > 0 && cur[i - 1] == n - p + i - 1) --i;
    if (i == 0) break;
    ++cur[i - 1];
    for (size_t j = i; j < p; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

EuclideanLattice exterior_power(const EuclideanLattice& lattice, size_t p) {
  if (p < 1 || p > lattice.rank()) throw std::out_of_range("exterior power degree out of range");
  auto idx = subsets(lattice.rank(), p);
  QMatrix g(idx.size(), idx.size());
  for (size_t a = 0; a < idx.size(); ++a)
    for (size_t b = a; b < idx.size(); ++b) {
      g(a, b) = determinant(lattice.gram().submatrix(idx[a], idx[b]));
      g(b, a) = g(a, b);
    }
  return EuclideanLattice(std::move(g));
}

bool is_integral(const EuclideanLattice& lattice) {
  for (const auto& x : lattice.gram().data())
    if (x.get_den() != 1) return false;
  return true;
}

bool is_unimodular(const EuclideanLattice& lattice) {
  return is_integral(lattice) && lattice.gram_determinant() == 1;
}

Sublattice::Sublattice(std::shared_ptr<const EuclideanLattice> ambient, ZMatrix basis)
    : ambient_(std::move(ambient)), basis_(std::move(basis)) {
  if (!ambient_) throw std::invalid_argument("sublattice needs an ambient lattice");
  if (basis_.cols() != ambient_->rank()) throw std::invalid_argument("sublattice basis has wrong width");
  if (basis_.rows() == 0) throw std::invalid_argument("zero sublattice");
  QMatrix b = to_rational(basis_);
  gram_ = b * ambient_->gram() * b.transpose();
  det_ = slopekit::determinant(gram_);
  if (sgn(det_) == 0) throw std::invalid_argument("sublattice basis is not linearly independent");
}

bool Sublattice::same_subgroup(const Sublattice& other) const {
  return basis_.cols() == other.basis_.cols() && hnf() == other.hnf();
}

bool Sublattice::span_contains(const Sublattice& other) const {
  QMatrix both(basis_.rows() + other.basis_.rows(), basis_.cols());
  for (size_t i = 0; i < basis_.rows(); ++i)
    for (size_t j = 0; j < basis_.cols(); ++j) both(i, j) = basis_(i, j);
  for (size_t i = 0; i < other.basis_.rows(); ++i)
    for (size_t j = 0; j < basis_.cols(); ++j) both(basis_.rows() + i, j) = other.basis_(i, j);
  return slopekit::rank(both) == basis_.rows();
}

LogRational degree(const Sublattice& s) { return LogRational::log_of(s.determinant()) * Rational(-1, 2); }

LogRational mu_of_sublattice(const Sublattice& s) {
  return degree(s) / Rational(static_cast<long>(s.rank()));
}

Sublattice saturation(const Sublattice& s) {
  ColumnEchelon e = column_echelon(s.basis());
  return Sublattice(s.ambient_ptr(), e.inverse.block(0, 0, s.rank(), s.ambient().rank()));
}

Integer saturation_index(const Sublattice& s) {
  ColumnEchelon e = column_echelon(s.basis());
  Integer index = 1;
  for (size_t i = 0; i < s.rank(); ++i) index *= e.reduced(i, i);
  return abs(index);
}

LatticeMorphism::LatticeMorphism(EuclideanLattice src, EuclideanLattice tgt, QMatrix m)
    : source(std::move(src)), target(std::move(tgt)), matrix(std::move(m)) {
  if (matrix.rows() != target.rank() || matrix.cols() != source.rank())
    throw std::invalid_argument("morphism matrix shape does not match source and target ranks");
  for (const auto& x : matrix.data())
    if (x.get_den() != 1) rational = true;
}

namespace {

QMatrix pulled_back_gram(const LatticeMorphism& f) {
  return f.matrix.transpose() * f.target.gram() * f.matrix;
}

}  // namespace

bool morphism_norm_sq_le(const LatticeMorphism& f, const Rational& bound) {
  return is_positive_semidefinite(f.source.gram() * bound - pulled_back_gram(f));
}

bool morphism_norm_le_one(const LatticeMorphism& f) { return morphism_norm_sq_le(f, Rational(1)); }

Rational hilbert_schmidt_sq(const LatticeMorphism& f) {
  return trace(inverse(f.source.gram()) * pulled_back_gram(f));
}

LatticeMorphism compose(const LatticeMorphism& g, const LatticeMorphism& f) {
  if (!(f.target == g.source)) throw std::invalid_argument("morphisms are not composable");
  return LatticeMorphism(f.source, g.target, g.matrix * f.matrix);
}

LatticeMorphism tensor_vector_to_hom(const EuclideanLattice& l1, const EuclideanLattice& l2, const QVector& w) {
  const size_t r1 = l1.rank(), r2 = l2.rank();
  if (w.size() != r1 * r2) throw std::invalid_argument("tensor vector has wrong length");
  bool nonzero = false;
  QMatrix m(r1, r2);
  for (size_t i = 0; i < r1; ++i)
    for (size_t k = 0; k < r2; ++k) {
      m(i, k) = w[i * r2 + k];
      nonzero = nonzero || sgn(m(i, k)) != 0;
    }
  if (!nonzero) throw std::invalid_argument("zero tensor vector");
  return LatticeMorphism(dual(l2), l1, std::move(m));
}

QVector evaluation_vector(size_t rank) {
  QVector v(rank * rank, Rational(0));
  for (size_t i = 0; i < rank; ++i) v[i * rank + i] = 1;
  return v;
}

QMatrix tensor_power_gram(const QMatrix& gram, size_t p) {
  QMatrix g = gram;
  for (size_t i = 1; i < p; ++i) g = kronecker(g, gram);
  return g;
}

QMatrix alternating_map(size_t rank, size_t p) {
  auto idx = subsets(rank, p);
  size_t total = 1;
  for (size_t i = 0; i < p; ++i) total *= rank;
  QMatrix m(idx.size(), total, Rational(0));
  std::vector<size_t> digits(p);
  for (size_t col = 0; col < total; ++col) {
    size_t c = col;
    for (size_t k = p; k-- > 0;) {
      digits[k] = c % rank;
      c /= rank;
    }
    std::vector<size_t> sorted = digits;
    int sign = 1;
    for (size_t a = 0; a < p; ++a)
      for (size_t b = 0; b + 1 < p - a; ++b)
        if (sorted[b] > sorted[b + 1]) {
          std::swap(sorted[b], sorted[b + 1]);
          sign = -sign;
        }
    bool distinct = true;
    for (size_t a = 0; a + 1 < p; ++a) distinct = distinct && sorted[a] != sorted[a + 1];
    if (!distinct) continue;
    size_t row = static_cast<size_t>(std::lower_bound(idx.begin(), idx.end(), sorted) - idx.begin());
    m(row, col) = sign;
  }
  return m;
}

}  // namespace slopekit
