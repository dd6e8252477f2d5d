#include <cmath>
#include <functional>

#include "doctest.h"
#include "generators.hpp"
#include "slopekit/enumeration.hpp"

using namespace slopekit;
using namespace slopekit::testing;

namespace {

const LogRational ln2 = LogRational::log_of(2);
const LogRational ln3 = LogRational::log_of(3);

// Visit every integer vector in the box [-b, b]^n.
void for_box(size_t n, long b, const std::function<void(const ZVector&)>& f) {
  ZVector x(n, Integer(-b));
  for (;;) {
    f(x);
    size_t i = 0;
    while (i < n && x[i] == b) x[i++] = -b;
    if (i == n) return;
    ++x[i];
  }
}

size_t brute_count(const EuclideanLattice& l, const Rational& bound, long box) {
  size_t count = 0;
  for_box(l.rank(), box, [&](const ZVector& x) {
    bool zero = std::all_of(x.begin(), x.end(), [](const Integer& v) { return v == 0; });
    if (!zero && l.norm_sq(x) <= bound) ++count;
  });
  return count / 2;
}

// Smallest eigenvalue lower estimate by bisection on det(G - t I) sign changes of the pivots.
double min_eigen_lower(const QMatrix& g) {
  double lo = 0, hi = g(0, 0).get_d();
  for (int it = 0; it < 60; ++it) {
    double mid = 0.5 * (lo + hi);
    QMatrix shifted = g - QMatrix::identity(g.rows()) * Rational(mid);
    if (is_positive_definite(shifted)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo * 0.999;
}

}  // namespace

TEST_CASE("LLL reduction") {
  EuclideanLattice u = EuclideanLattice::unit(3);
  LllResult r = lll_reduce(u);
  CHECK(r.reduced == u);
  CHECK(r.transform == ZMatrix::identity(3));

  QMatrix b{{1, 100}, {0, 1}};
  EuclideanLattice skew(b * b.transpose());
  LllResult s = lll_reduce(skew);
  CHECK(s.reduced.gram() == QMatrix::identity(2));
  CHECK(abs(bareiss_determinant(s.transform)) == 1);

  CHECK(is_lll_reduced(a2_gram()));
  CHECK(lll_reduce(EuclideanLattice(a2_gram())).reduced.gram() == a2_gram());

  std::mt19937_64 rng(2);
  for (int i = 0; i < 40; ++i) {
    EuclideanLattice l = random_rational_lattice(rng, 2 + i % 5, 6);
    LllResult red = lll_reduce(l);
    CHECK(is_lll_reduced(red.reduced.gram()));
    QMatrix t = to_rational(red.transform);
    CHECK(t * l.gram() * t.transpose() == red.reduced.gram());
    CHECK(abs(bareiss_determinant(red.transform)) == 1);
  }
}

TEST_CASE("short vectors: small examples") {
  ShortVectorReport z2 = enumerate_short_vectors(EuclideanLattice::unit(2), 1);
  CHECK(z2.vectors.size() == 2);
  ShortVectorReport a2 = enumerate_short_vectors(EuclideanLattice(a2_gram()), 2);
  CHECK(a2.vectors.size() == 3);
  for (const auto& v : a2.vectors) CHECK(v.norm_sq == 2);
  CHECK_THROWS_AS(enumerate_short_vectors(EuclideanLattice::unit(2), 0), std::invalid_argument);
}

TEST_CASE("short vectors: E8 roots") {
  // oracle: roots of E8 in the even coordinate system
  size_t roots = 0;
  for_box(8, 1, [&](const ZVector& x) {
    long sq = 0, sum = 0;
    for (const auto& v : x) {
      sq += v.get_si() * v.get_si();
      sum += v.get_si();
    }
    if (sq == 2 && sum % 2 == 0) ++roots;
  });
  for (unsigned mask = 0; mask < 256; ++mask)
    if (__builtin_popcount(mask) % 2 == 0) ++roots;  // (+-1/2)^8, even number of minus signs
  CHECK(roots == 240);
  ShortVectorReport rep = enumerate_short_vectors(EuclideanLattice(e8_gram()), 2);
  CHECK(rep.vectors.size() == roots / 2);
}

TEST_CASE("short vectors: theta series of Z^n") {
  for (size_t n = 1; n <= 4; ++n) {
    for (long b = 1; b <= 10; ++b) {
      size_t expected = brute_count(EuclideanLattice::unit(n), b, 3);
      CHECK(enumerate_short_vectors(EuclideanLattice::unit(n), b).vectors.size() == expected);
    }
  }
}

TEST_CASE("short vectors: completeness and monotonicity") {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 25; ++i) {
    EuclideanLattice l = random_integral_lattice(rng, 2 + i % 2, 2);
    long box = static_cast<long>(std::ceil(std::sqrt(12.0 / min_eigen_lower(l.gram()))));
    if (box > 12) continue;
    ShortVectorReport a = enumerate_short_vectors(l, 8), b = enumerate_short_vectors(l, 12);
    CHECK(a.vectors.size() == brute_count(l, 8, box));
    CHECK(b.vectors.size() == brute_count(l, 12, box));
    for (const auto& v : a.vectors) {
      CHECK(l.norm_sq(v.coords) == v.norm_sq);
      bool present = std::any_of(b.vectors.begin(), b.vectors.end(),
                                 [&](const ShortVector& w) { return w.coords == v.coords; });
      CHECK(present);
    }
  }
}

TEST_CASE("node limit is reported distinctly") {
  EnumerationCaps caps;
  caps.node_limit = 10;
  CHECK_THROWS_AS(enumerate_short_vectors(EuclideanLattice::unit(4), 9, caps), ResourceCapExceeded);
}

TEST_CASE("minima and Hermite constants") {
  for (size_t n = 1; n <= 5; ++n) CHECK(minimum_sq(EuclideanLattice::unit(n)) == 1);
  EuclideanLattice a2(a2_gram());
  Rational m = minimum_sq(a2);
  CHECK(m == 2);
  CHECK(m * m / a2.gram_determinant() == hermite_constant_pow(2));
  EuclideanLattice e8(e8_gram());
  Rational m8 = minimum_sq(e8);
  CHECK(m8 == 2);
  Rational p = 1;
  for (int i = 0; i < 8; ++i) p *= m8;
  CHECK(p / e8.gram_determinant() == hermite_constant_pow(8));
  CHECK(hermite_constant_pow(8) == 256);
  CHECK_THROWS_AS(hermite_constant_pow(9), std::out_of_range);
}

TEST_CASE("densest sublattices") {
  auto a2 = std::make_shared<const EuclideanLattice>(a2_gram());
  auto full = densest_sublattice(a2, 2, 10);
  REQUIRE(full);
  CHECK(full->determinant == 3);
  CHECK(!densest_sublattice(a2, 2, 2));

  auto split = std::make_shared<const EuclideanLattice>(
      orthogonal_sum(EuclideanLattice::unit(1), scale(EuclideanLattice::unit(1), 4)));
  auto axis = densest_sublattice(split, 1, 4);
  REQUIRE(axis);
  CHECK(axis->determinant == 1);
  CHECK(axis->witness.basis() == ZMatrix{{1, 0}});

  // A2 (x) A2: the shortest vector equals the product of minima; brute force over the box
  auto aa = std::make_shared<const EuclideanLattice>(tensor(*a2, *a2));
  Rational brute_min = 1000;
  for_box(4, 2, [&](const ZVector& x) {
    bool zero = std::all_of(x.begin(), x.end(), [](const Integer& v) { return v == 0; });
    if (!zero) brute_min = std::min(brute_min, aa->norm_sq(x));
  });
  CHECK(brute_min == 4);
  auto line = densest_sublattice(aa, 1, 100);
  REQUIRE(line);
  CHECK(line->determinant == brute_min);
}

TEST_CASE("mu_max examples") {
  EuclideanLattice e8(e8_gram());
  CertifiedMuMax m = mu_max(e8);
  CHECK(m.value.is_zero());
  CHECK(m.certified);
  CHECK(is_semistable(e8));

  EuclideanLattice twisted = scale(EuclideanLattice(a2_gram()), Rational(2, 3));
  CertifiedMuMax t = mu_max(twisted);
  CHECK(t.certified);
  CHECK(t.value == slope(twisted));
  CHECK(t.witness.rank() == 2);
  SlopePolygon poly = slope_filtration(twisted);
  CHECK(poly.points[1].max_degree == LogRational::log_of(Rational(3, 4)) / Rational(2));
  CHECK(poly.points[1].max_degree < slope(twisted));

  EuclideanLattice split = orthogonal_sum(EuclideanLattice::unit(1), scale(EuclideanLattice::unit(1), Rational(1, 4)));
  CertifiedMuMax s = mu_max(split);
  CHECK(s.value == ln2);
  CHECK(s.value > slope(split));
  CHECK_FALSE(is_semistable(split));
  CHECK(mu_min(split).is_zero());
}

TEST_CASE("slope filtrations") {
  SlopePolygon ss = slope_filtration(EuclideanLattice(a2_gram()));
  CHECK(ss.filtration.size() == 1);
  CHECK(ss.filtration[0].rank() == 2);

  EuclideanLattice two = orthogonal_sum(scale(EuclideanLattice::unit(1), Rational(1, 4)),
                                        scale(EuclideanLattice::unit(1), Rational(4)));
  SlopePolygon p = slope_filtration(two);
  REQUIRE(p.slopes.size() == 2);
  CHECK(p.slopes[0] == ln2);
  CHECK(p.slopes[1] == -ln2);
  CHECK(p.filtration[0].basis() == ZMatrix{{1, 0}});

  // degree-zero sum of a stable negative piece and a positive line
  EuclideanLattice a2t = scale(EuclideanLattice(a2_gram()), Rational(2, 3));
  EuclideanLattice line = scale(EuclideanLattice::unit(1), Rational(3, 4));
  EuclideanLattice sum = orthogonal_sum(a2t, line);
  CHECK(degree(sum).is_zero());
  SlopePolygon q = slope_filtration(sum);
  REQUIRE(q.slopes.size() == 2);
  CHECK(q.slopes[0] > LogRational(0));
  CHECK(q.slopes[1] < LogRational(0));
  CHECK(q.slopes[0] == LogRational::log_of(Rational(4, 3)) / Rational(2));
  CHECK(q.filtration[0].basis() == ZMatrix{{0, 0, 1}});
}

TEST_CASE("property: filtration structure and duality") {
  std::mt19937_64 rng(15);
  for (int i = 0; i < 25; ++i) {
    EuclideanLattice l = random_rational_lattice(rng, 2 + i % 3, 3);
    SlopePolygon p = slope_filtration(l);
    CHECK(p.certified);
    for (size_t j = 0; j + 1 < p.slopes.size(); ++j) CHECK(p.slopes[j] > p.slopes[j + 1]);
    for (size_t j = 0; j < p.filtration.size(); ++j) {
      CHECK(saturation_index(p.filtration[j]) == 1);
      if (j) CHECK(p.filtration[j].rank() > p.filtration[j - 1].rank());
    }
    SlopePolygon d = slope_filtration(dual(l));
    REQUIRE(d.slopes.size() == p.slopes.size());
    for (size_t j = 0; j < p.slopes.size(); ++j) CHECK(d.slopes[j] == -p.slopes[p.slopes.size() - 1 - j]);
  }
}

TEST_CASE("property: rank-one maxima agree with a box oracle") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 20; ++i) {
    EuclideanLattice l = random_integral_lattice(rng, 2 + i % 2, 2);
    SlopePolygon p = slope_filtration(l);
    Rational m = p.points[1].min_determinant;
    long box = static_cast<long>(std::ceil(std::sqrt(m.get_d() / min_eigen_lower(l.gram()))));
    Rational brute = m + 1;
    for_box(l.rank(), box, [&](const ZVector& x) {
      bool zero = std::all_of(x.begin(), x.end(), [](const Integer& v) { return v == 0; });
      if (!zero) brute = std::min(brute, l.norm_sq(x));
    });
    CHECK(brute == m);
  }
}

TEST_CASE("property: tensor bounds on mu_max") {
  std::mt19937_64 rng(33);
  for (int i = 0; i < 12; ++i) {
    EuclideanLattice a = random_rational_lattice(rng, 1 + i % 2, 2), b = random_rational_lattice(rng, 2, 2);
    CertifiedMuMax ma = mu_max(a), mb = mu_max(b), mt = mu_max(tensor(a, b));
    REQUIRE(mt.certified);
    CHECK(mt.value >= ma.value + mb.value);
    LogRational rho = (LogRational::log_of(static_cast<long>(a.rank())) + LogRational::log_of(2)) / Rational(2);
    CHECK(mt.value <= ma.value + mb.value + rho);
  }
}

TEST_CASE("unimodular fast path agrees with the search") {
  std::mt19937_64 rng(44);
  EnumerationCaps slow;
  slow.unimodular_fast_path = false;
  for (int i = 0; i < 6; ++i) {
    size_t r = 2 + i % 3;
    ZMatrix u = ZMatrix::identity(r);
    for (int s = 0; s < 6; ++s) {
      size_t a = static_cast<size_t>(uniform(rng, 0, static_cast<long>(r) - 1));
      size_t b = (a + 1 + static_cast<size_t>(uniform(rng, 0, static_cast<long>(r) - 2))) % r;
      long q = uniform(rng, -2, 2);
      for (size_t c = 0; c < r; ++c) u(a, c) += q * u(b, c);
    }
    QMatrix uq = to_rational(u);
    EuclideanLattice l(uq * uq.transpose());
    REQUIRE(is_unimodular(l));
    CHECK(mu_max(l).value.is_zero());
    CHECK(mu_max(l, slow).value.is_zero());
  }
}

TEST_CASE("Minkowski check") {
  for (size_t r = 1; r <= 4; ++r) {
    MinkowskiReport rep = minkowski_check(EuclideanLattice::unit(r));
    CHECK(rep.holds);
    CHECK(rep.ball_check);
  }
  MinkowskiReport a2 = minkowski_check(EuclideanLattice(a2_gram()));
  CHECK(a2.holds);
  CHECK(a2.gram_determinant == 3);
  CHECK(a2.hypercube_bound == Rational(1, 4));
  CHECK_THROWS_AS(minkowski_check(scale(EuclideanLattice::unit(2), Rational(1, 2))), std::invalid_argument);
}
