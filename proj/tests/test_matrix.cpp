#include <random>

#include "doctest.h"
#include "slopekit/matrix.hpp"

using namespace slopekit;

namespace {

ZMatrix random_zmatrix(std::mt19937_64& rng, size_t r, size_t c, long bound) {
  std::uniform_int_distribution<long> d(-bound, bound);
  ZMatrix m(r, c);
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

// Leibniz expansion, independent of elimination.
Rational leibniz(const QMatrix& m) {
  const size_t n = m.rows();
  std::vector<size_t> perm(n);
  for (size_t i = 0; i < n; ++i) perm[i] = i;
  Rational total = 0;
  do {
    int inversions = 0;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    Rational p = inversions % 2 ? -1 : 1;
    for (size_t i = 0; i < n; ++i) p *= m(i, perm[i]);
    total += p;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

}  // namespace

TEST_CASE("determinants agree with the Leibniz formula") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 60; ++t) {
    size_t n = 1 + t % 5;
    QMatrix q(n, n);
    std::uniform_int_distribution<long> d(-7, 7);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) {
        q(i, j) = Rational(d(rng), 1 + std::abs(d(rng)));
        q(i, j).canonicalize();
      }
    Rational expected = leibniz(q);
    CHECK(determinant(q) == expected);
    CHECK(field_determinant(q) == expected);
    if (expected != 0) CHECK(inverse(q) * q == QMatrix::identity(n));
  }
  CHECK(bareiss_determinant(ZMatrix{{0, 1}, {1, 0}}) == -1);
  CHECK(bareiss_determinant(ZMatrix{{2, 4}, {1, 2}}) == 0);
}

TEST_CASE("definiteness tests") {
  CHECK(is_positive_definite(QMatrix{{2, 1}, {1, 2}}));
  CHECK_FALSE(is_positive_definite(QMatrix{{1, 2}, {2, 1}}));
  CHECK_FALSE(is_positive_definite(QMatrix{{1, 1}, {0, 1}}));
  CHECK(is_positive_semidefinite(QMatrix{{1, 1}, {1, 1}}));
  CHECK(is_positive_semidefinite(QMatrix{{0, 0}, {0, 3}}));
  CHECK_FALSE(is_positive_semidefinite(QMatrix{{0, 1}, {1, 3}}));
  CHECK_FALSE(is_positive_semidefinite(QMatrix{{1, 0}, {0, -1}}));
}

TEST_CASE("column echelon and kernels") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 100; ++t) {
    size_t k = 1 + t % 3, r = k + t % 4;
    ZMatrix b = random_zmatrix(rng, k, r, 6);
    ColumnEchelon e = column_echelon(b);
    CHECK(b * e.transform == e.reduced);
    CHECK(e.transform * e.inverse == ZMatrix::identity(r));
    CHECK(abs(bareiss_determinant(e.transform)) == 1);
    for (size_t i = 0; i < k; ++i)
      for (size_t j = i + 1; j < r; ++j)
        if (j >= e.rank) CHECK(e.reduced(i, j) == 0);
    ZMatrix ker = integer_kernel(b);
    CHECK(ker.rows() == r - rank(to_rational(b)));
    if (ker.rows()) {
      CHECK(b * ker.transpose() == ZMatrix(k, ker.rows(), Integer(0)));
    }
  }
}

TEST_CASE("Hermite normal form is a canonical basis") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 60; ++t) {
    ZMatrix b = random_zmatrix(rng, 2, 4, 5);
    ZMatrix u{{1, 2}, {1, 3}};  // unimodular change of basis
    CHECK(hermite_normal_form(b) == hermite_normal_form(u * b));
  }
  CHECK(hermite_normal_form(ZMatrix{{2, 0}, {0, 4}, {2, 4}}) == ZMatrix{{2, 0}, {0, 4}});
  CHECK(hermite_normal_form(ZMatrix{{-3, 1}}) == ZMatrix{{3, -1}});
}

TEST_CASE("rational row reduction") {
  QMatrix m{{1, 2, 3}, {2, 4, 6}, {1, 0, 1}};
  CHECK(rank(m) == 2);
  QMatrix ns = nullspace(m);
  CHECK(ns.rows() == 1);
  CHECK(m * ns.transpose() == QMatrix(3, 1, Rational(0)));
}
