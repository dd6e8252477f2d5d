#include "slopekit/hermitian.hpp"

#include <stdexcept>

namespace slopekit {

HermitianLattice::HermitianLattice(ImagQuadField field, KMatrix gram) : field_(field), gram_(std::move(gram)) {
  if (!gram_.square() || gram_.rows() == 0) throw std::invalid_argument("hermitian Gram matrix must be square");
  const QuadElem zero(field_, 0);
  for (size_t i = 0; i < gram_.rows(); ++i)
    for (size_t j = 0; j < gram_.cols(); ++j) gram_(i, j) = zero + gram_(i, j);
  if (!is_positive_definite(gram_))
    throw std::invalid_argument("Gram matrix is not hermitian positive definite");
  QuadElem det = field_determinant(gram_);
  if (!det.is_rational()) throw std::logic_error("hermitian determinant is not rational");
  det_ = det.a();
}

HermitianLattice HermitianLattice::unit(const ImagQuadField& field, size_t rank) {
  return HermitianLattice(field, KMatrix::identity(rank));
}

HermitianLattice HermitianLattice::from_rational(const ImagQuadField& field, const QMatrix& gram) {
  return HermitianLattice(field, to_field(gram, field));
}

QuadElem HermitianLattice::inner(const KVector& x, const KVector& y) const {
  if (x.size() != rank() || y.size() != rank()) throw std::invalid_argument("vector length mismatch");
  QuadElem s(field_, 0);
  for (size_t i = 0; i < rank(); ++i) {
    if (is_zero(x[i])) continue;
    QuadElem row(field_, 0);
    for (size_t j = 0; j < rank(); ++j) row += gram_(i, j) * y[j];
    s += x[i].conj() * row;
  }
  return s;
}

Rational HermitianLattice::norm_sq(const KVector& x) const {
  QuadElem n = inner(x, x);
  if (!n.is_rational()) throw std::logic_error("hermitian norm is not real");
  return n.a();
}

LogRational degree(const HermitianLattice& lattice) { return -log_of_rational(lattice.gram_determinant()); }

LogRational slope(const HermitianLattice& lattice) {
  return degree(lattice) / Rational(static_cast<long>(lattice.rank()));
}

HermitianLattice twist(const HermitianLattice& lattice, const Rational& c) {
  if (sgn(c) <= 0) throw std::invalid_argument("twist factor must be positive");
  return HermitianLattice(lattice.field(), lattice.gram() * QuadElem(c));
}

LogRational twist_parameter(const Rational& c) { return -log_of_rational(c); }

HermitianLattice dual(const HermitianLattice& lattice) {
  return HermitianLattice(lattice.field(), inverse(lattice.gram()).conj());
}

HermitianLattice tensor(const HermitianLattice& a, const HermitianLattice& b) {
  if (!(a.field() == b.field())) throw std::invalid_argument("tensor of lattices over different fields");
  return HermitianLattice(a.field(), kronecker(a.gram(), b.gram()));
}

HermitianLattice orthogonal_sum(const HermitianLattice& a, const HermitianLattice& b) {
  if (!(a.field() == b.field())) throw std::invalid_argument("sum of lattices over different fields");
  return HermitianLattice(a.field(), block_diagonal(a.gram(), b.gram()));
}

HermitianLattice exterior_power(const HermitianLattice& lattice, size_t p) {
  if (p < 1 || p > lattice.rank()) throw std::out_of_range("exterior power degree out of range");
  auto idx = subsets(lattice.rank(), p);
  KMatrix g(idx.size(), idx.size());
  for (size_t a = 0; a < idx.size(); ++a)
    for (size_t b = 0; b < idx.size(); ++b) g(a, b) = field_determinant(lattice.gram().submatrix(idx[a], idx[b]));
  return HermitianLattice(lattice.field(), std::move(g));
}

bool is_integral(const HermitianLattice& lattice) {
  for (const auto& x : lattice.gram().data())
    if (!x.is_integral()) return false;
  return true;
}

bool is_unimodular(const HermitianLattice& lattice) {
  return is_integral(lattice) && lattice.gram_determinant() == 1;
}

HermitianLattice sublattice(const HermitianLattice& lattice, const KMatrix& basis) {
  if (basis.cols() != lattice.rank()) throw std::invalid_argument("sublattice basis width mismatch");
  return HermitianLattice(lattice.field(), basis.conj() * lattice.gram() * basis.transpose());
}

Integer sublattice_index(const KMatrix& basis) {
  for (const auto& x : basis.data())
    if (!x.is_integral()) throw std::invalid_argument("sublattice basis is not integral");
  QuadElem det = field_determinant(basis);
  if (is_zero(det)) throw std::invalid_argument("sublattice has lower rank");
  return det.norm().get_num();
}

LogRational rank_one_degree(const HermitianLattice& lattice, const KVector& v) {
  if (v.size() != lattice.rank()) throw std::invalid_argument("vector length mismatch");
  KVector scaled;
  QuadElem m(lattice.field(), Rational(integral_denominator(v)));
  for (const auto& x : v) scaled.push_back(x * m);
  KVector gens;
  for (const auto& x : scaled)
    if (!is_zero(x)) gens.push_back(x);
  if (gens.empty()) throw std::invalid_argument("rank-one degree of the zero vector");
  Integer index = ideal_norm(lattice.field(), gens);
  return log_of_rational(Rational(index)) - log_of_rational(lattice.norm_sq(scaled));
}

LogRational rank_one_degree(const EuclideanLattice& lattice, const ZVector& v) {
  Integer g = 0;
  for (const auto& x : v) g = gcd(g, x);
  if (g == 0) throw std::invalid_argument("rank-one degree of the zero vector");
  return log_of_rational(Rational(g)) - log_of_rational(lattice.norm_sq(v)) / Rational(2);
}

LogRational faltings_height_sq(const LogRational& degree, size_t rank, int field_degree) {
  if (rank < 1) throw std::invalid_argument("rank must be positive");
  Rational h = 0;
  for (size_t m = 2; m <= rank; ++m) h += Rational(1, static_cast<long>(m));
  return degree + LogRational(h * field_degree * static_cast<long>(rank) / 2);
}

LogRational faltings_height_sq(const HermitianLattice& lattice) {
  return faltings_height_sq(degree(lattice), lattice.rank(), 2);
}

LogRational nef_degree_lower_bound(size_t rank, int field_degree) {
  Rational c(field_degree * static_cast<long>(rank), 2);
  c.canonicalize();
  return -(log_of_rational(Rational(static_cast<long>(rank))) * c);
}

EuclideanLattice restrict_scalars(const HermitianLattice& lattice) {
  const size_t r = lattice.rank();
  const QuadElem one(lattice.field(), 1), w = QuadElem::w(lattice.field());
  const QuadElem basis[2] = {one, w};
  QMatrix g(2 * r, 2 * r);
  for (size_t i = 0; i < r; ++i)
    for (size_t a = 0; a < 2; ++a)
      for (size_t j = 0; j < r; ++j)
        for (size_t b = 0; b < 2; ++b)
          g(2 * i + a, 2 * j + b) = (basis[a].conj() * basis[b] * lattice.gram()(i, j)).real_part();
  return EuclideanLattice(std::move(g));
}

LogRational restriction_degree_shift(const ImagQuadField& field, size_t rank) {
  Rational q(-field.discriminant(), 4);
  q.canonicalize();
  return -(log_of_rational(q) * Rational(static_cast<long>(rank), 2));
}

KVector to_field(const QVector& v, const ImagQuadField& k) {
  KVector out;
  for (const auto& x : v) out.emplace_back(k, x);
  return out;
}

KVector to_field(const ZVector& v, const ImagQuadField& k) {
  KVector out;
  for (const auto& x : v) out.emplace_back(k, Rational(x));
  return out;
}

}  // namespace slopekit
