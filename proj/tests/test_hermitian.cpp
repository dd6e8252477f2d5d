#include "doctest.h"
#include "generators.hpp"
#include "slopekit/enumeration.hpp"
#include "slopekit/hermitian.hpp"
#include "slopekit/repro.hpp"

using namespace slopekit;
using namespace slopekit::testing;

namespace {

const LogRational ln2 = LogRational::log_of(2);
const LogRational ln3 = LogRational::log_of(3);

QuadElem random_elem(std::mt19937_64& rng, const ImagQuadField& k, long bound) {
  return QuadElem(k, Rational(uniform(rng, -bound, bound)), Rational(uniform(rng, -bound, bound)));
}

QuadElem random_nonzero(std::mt19937_64& rng, const ImagQuadField& k, long bound) {
  for (;;) {
    QuadElem x = random_elem(rng, k, bound);
    if (!is_zero(x)) return x;
  }
}

// G = B^* B for a random invertible B over o_K.
HermitianLattice random_hermitian(std::mt19937_64& rng, const ImagQuadField& k, size_t r, long bound = 2) {
  for (;;) {
    KMatrix b(r, r);
    for (size_t i = 0; i < r; ++i)
      for (size_t j = 0; j < r; ++j) b(i, j) = random_elem(rng, k, bound);
    if (is_zero(field_determinant(b))) continue;
    return HermitianLattice(k, b.adjoint() * b);
  }
}

// Cofactor expansion of a 3x3 determinant.
QuadElem det3(const KMatrix& m) {
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

}  // namespace

TEST_CASE("field arithmetic") {
  ImagQuadField q7(7), q5(5), gauss(1);
  CHECK(q7.w_is_half_integral());
  CHECK(q7.discriminant() == -7);
  CHECK(q5.discriminant() == -20);
  QuadElem w = QuadElem::w(q7);
  CHECK(w * w - w + QuadElem(2) == QuadElem(q7, 0));
  CHECK(w.norm() == 2);
  CHECK(w.trace() == 1);
  QuadElem v = QuadElem::w(q5);
  CHECK(v * v == QuadElem(q5, -5));
  CHECK_THROWS_AS(ImagQuadField(12), std::invalid_argument);
  CHECK_THROWS_AS(ImagQuadField(-3), std::invalid_argument);
  CHECK_THROWS_AS(w + QuadElem::w(gauss), std::invalid_argument);
  auto [re, im] = w.enclose(128);
  CHECK(re.contains(0.5));
  CHECK(im.contains(Rational(1, 2)) == false);
  CHECK(im.mid_double() == doctest::Approx(std::sqrt(7.0) / 2).epsilon(1e-15));
  CHECK(im.width() < 1e-35);
  CHECK(w.to_string() == "w");
  CHECK((QuadElem(q7, 1) - w * QuadElem(2)).to_string() == "1 - 2*w");
}

TEST_CASE("property: norm is multiplicative and inverses are exact") {
  std::mt19937_64 rng(3);
  for (long d : {1L, 2L, 3L, 5L, 7L, 11L, 13L, 37L}) {
    ImagQuadField k(d);
    for (int i = 0; i < 30; ++i) {
      QuadElem a = random_nonzero(rng, k, 9), b = random_nonzero(rng, k, 9);
      CHECK((a * b).norm() == a.norm() * b.norm());
      CHECK(a.conj().conj() == a);
      CHECK((a * b).conj() == a.conj() * b.conj());
      CHECK(a / b * b == a);
      CHECK(a * a.conj() == QuadElem(k, a.norm()));
      CHECK((a + b).trace() == a.trace() + b.trace());
    }
  }
}

TEST_CASE("ideal norms") {
  ImagQuadField gauss(1), q5(5);
  CHECK(ideal_norm(gauss, {QuadElem(gauss, 2)}) == 4);
  CHECK(ideal_norm(gauss, {QuadElem(gauss, 1, 1)}) == 2);
  CHECK(ideal_norm(gauss, {QuadElem(gauss, 2), QuadElem(gauss, 1, 1)}) == 2);
  // the non-principal prime above 2 in Z[sqrt(-5)]
  CHECK(ideal_norm(q5, {QuadElem(q5, 2), QuadElem(q5, 1, 1)}) == 2);
  CHECK(ideal_norm(q5, {QuadElem(q5, 3), QuadElem(q5, 1, 1)}) == 3);
  CHECK_THROWS_AS(ideal_norm(q5, {QuadElem(q5, Rational(1, 2))}), std::invalid_argument);

  std::mt19937_64 rng(4);
  for (long d : {2L, 3L, 5L, 7L, 13L}) {
    ImagQuadField k(d);
    for (int i = 0; i < 25; ++i) {
      QuadElem x = random_nonzero(rng, k, 12), y = random_nonzero(rng, k, 12);
      CHECK(ideal_norm(k, {x}) == abs(x.norm().get_num()));
      // N(a) divides the norms of all its elements
      Integer n = ideal_norm(k, {x, y});
      CHECK(mpz_divisible_p(x.norm().get_num_mpz_t(), n.get_mpz_t()));
      CHECK(mpz_divisible_p(y.norm().get_num_mpz_t(), n.get_mpz_t()));
      CHECK(ideal_norm(k, {x * y}) == ideal_norm(k, {x}) * ideal_norm(k, {y}));
    }
  }
}

TEST_CASE("relative quadratic arithmetic") {
  ImagQuadField k(7);
  RelQuad s2 = RelQuad::alpha(k, 2), i = RelQuad::alpha(ImagQuadField(5), -1);
  CHECK(s2 * s2 == RelQuad(k, 2, QuadElem(k, 2)));
  CHECK(s2.conj() == s2);
  CHECK(i.conj() == -i);
  CHECK(s2.sigma() == -s2);
  RelQuad x(k, 2, QuadElem::w(k), QuadElem(k, 3));
  CHECK(x / x == RelQuad(k, 2, QuadElem(k, 1)));
  CHECK(x.rel_norm() == (x * x.sigma()).x());
  Interval v = RelQuad(k, 2, QuadElem(k, 3), QuadElem(k, -2)).enclose_real(128);
  CHECK(v.mid_double() == doctest::Approx(3 - 2 * std::sqrt(2.0)).epsilon(1e-14));
  CHECK(v.positive());
  CHECK_THROWS_AS(x.enclose_real(64), std::domain_error);
}

TEST_CASE("hermitian lattice construction and degree examples") {
  ImagQuadField k(7);
  QuadElem w = QuadElem::w(k), wb = w.conj();
  KMatrix g{{2, w, 1}, {wb, 2, 1}, {1, 1, 2}};
  HermitianLattice e(k, g);
  QuadElem oracle = det3(g);
  CHECK(oracle == QuadElem(k, 1));
  CHECK(e.gram_determinant() == oracle.a());
  CHECK(degree(e).is_zero());
  CHECK(is_unimodular(e));
  CHECK(degree(dual(e)).is_zero());
  CHECK(degree(HermitianLattice::unit(k, 3)).is_zero());

  CHECK_THROWS_AS(HermitianLattice(k, KMatrix{{1, w}, {w, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(HermitianLattice(k, KMatrix{{1, 2}, {2, 1}}), std::invalid_argument);

  // twist(unit, c) = -r log c = r lambda
  for (size_t r = 1; r <= 3; ++r) {
    HermitianLattice t = twist(HermitianLattice::unit(k, r), Rational(1, 3));
    CHECK(degree(t) == twist_parameter(Rational(1, 3)) * Rational(static_cast<long>(r)));
    CHECK(degree(t) == ln3 * Rational(static_cast<long>(r)));
  }
}

TEST_CASE("the Gaussian trace lattice of degree 2 log 2") {
  // o_K' for K = Q(sqrt -5), K' = K(i), on the basis ((1 + sqrt 5)/2, i)
  ImagQuadField k(5);
  QuadElem w = QuadElem::w(k);
  HermitianLattice ok(k, KMatrix{{QuadElem(k, Rational(3, 2)), w / QuadElem(2)}, {-w / QuadElem(2), 1}});
  CHECK(degree(ok) == ln2 * Rational(2));
  HermitianLattice e = dual(ok);
  CHECK(degree(e) == -ln2 * Rational(2));
  CHECK(faltings_height_sq(e) == LogRational(1) - ln2 * Rational(2));
  CHECK(faltings_height_sq(e) < LogRational(0));
}

TEST_CASE("rank-one degrees") {
  ImagQuadField k(7);
  HermitianLattice u = HermitianLattice::unit(k, 2);
  CHECK(rank_one_degree(u, {QuadElem(k, 1), QuadElem(k, 0)}).is_zero());
  CHECK(rank_one_degree(u, {QuadElem(k, 3), QuadElem(k, 0)}).is_zero());
  CHECK(rank_one_degree(u, {QuadElem(k, 1), QuadElem(k, 1)}) == -ln2);
  CHECK_THROWS_AS(rank_one_degree(u, {QuadElem(k, 0), QuadElem(k, 0)}), std::invalid_argument);

  EuclideanLattice a2t = scale(EuclideanLattice(a2_gram()), Rational(2, 3));
  ShortVectorReport sv = enumerate_short_vectors(a2t, minimum_sq(a2t));
  REQUIRE(!sv.vectors.empty());
  CHECK(rank_one_degree(a2t, sv.vectors[0].coords) == LogRational::log_of(Rational(3, 4)) / Rational(2));
  CHECK(rank_one_degree(a2t, sv.vectors[0].coords) == slope_filtration(a2t).points[1].max_degree);
}

TEST_CASE("property: rank-one degree is independent of the spanning vector") {
  std::mt19937_64 rng(8);
  for (long d : {1L, 5L, 7L, 6L}) {
    ImagQuadField k(d);
    for (int i = 0; i < 15; ++i) {
      HermitianLattice l = random_hermitian(rng, k, 2 + i % 2);
      KVector v;
      for (size_t j = 0; j < l.rank(); ++j) v.push_back(random_elem(rng, k, 4));
      if (std::all_of(v.begin(), v.end(), [](const QuadElem& x) { return is_zero(x); })) continue;
      QuadElem a = random_nonzero(rng, k, 5) / random_nonzero(rng, k, 5);
      KVector av;
      for (const auto& x : v) av.push_back(a * x);
      CHECK(rank_one_degree(l, v) == rank_one_degree(l, av));
    }
  }
}

TEST_CASE("property: euclidean specialization doubles rank-one degrees") {
  std::mt19937_64 rng(9);
  ImagQuadField k(3);
  for (int i = 0; i < 20; ++i) {
    EuclideanLattice l = random_rational_lattice(rng, 2 + i % 2, 3);
    HermitianLattice h = HermitianLattice::from_rational(k, l.gram());
    ZVector v(l.rank());
    for (auto& x : v) x = uniform(rng, -4, 4);
    if (std::all_of(v.begin(), v.end(), [](const Integer& x) { return x == 0; })) continue;
    CHECK(rank_one_degree(h, to_field(v, k)) == rank_one_degree(l, v) * Rational(2));
    CHECK(degree(h) == degree(l) * Rational(2));
  }
}

TEST_CASE("property: degree laws") {
  std::mt19937_64 rng(10);
  for (long d : {1L, 2L, 7L}) {
    ImagQuadField k(d);
    for (int i = 0; i < 8; ++i) {
      HermitianLattice a = random_hermitian(rng, k, 1 + i % 2), b = random_hermitian(rng, k, 2);
      Rational ra(static_cast<long>(a.rank())), rb(static_cast<long>(b.rank()));
      CHECK(degree(orthogonal_sum(a, b)) == degree(a) + degree(b));
      CHECK(degree(dual(a)) == -degree(a));
      CHECK(dual(dual(a)) == a);
      CHECK(degree(tensor(a, b)) == degree(a) * rb + degree(b) * ra);
      CHECK(slope(tensor(a, b)) == slope(a) + slope(b));
      Rational c = random_positive_rational(rng);
      CHECK(degree(twist(a, c)) == degree(a) + twist_parameter(c) * ra);
      HermitianLattice ext = exterior_power(b, 2);
      CHECK(ext.rank() == 1);
      CHECK(degree(ext) == degree(b));
      CHECK(degree(restrict_scalars(a)) == degree(a) + restriction_degree_shift(k, a.rank()));
    }
  }
}

TEST_CASE("dual pairing") {
  // e_i^dual(e_j) = delta: the Riesz image of the dual basis under conj(G^-1)
  std::mt19937_64 rng(11);
  ImagQuadField k(7);
  HermitianLattice l = random_hermitian(rng, k, 3);
  KMatrix ginv = inverse(l.gram());
  for (size_t i = 0; i < 3; ++i) {
    // dual basis vector represented in E (x) K: c_j = conj(G^-1)_{ij}
    KVector c(3);
    for (size_t j = 0; j < 3; ++j) c[j] = conjugate(ginv(i, j));
    for (size_t j = 0; j < 3; ++j) {
      KVector ej(3, QuadElem(k, 0));
      ej[j] = QuadElem(k, 1);
      CHECK(l.inner(c, ej) == QuadElem(k, i == j ? 1 : 0));
    }
    for (size_t j = 0; j < 3; ++j) {
      KVector cj(3);
      for (size_t m = 0; m < 3; ++m) cj[m] = conjugate(ginv(j, m));
      CHECK(l.inner(cj, c) == dual(l).gram()(i, j));
    }
  }
}

TEST_CASE("sublattice index") {
  ImagQuadField k(5);
  QuadElem w = QuadElem::w(k);
  CHECK(sublattice_index(KMatrix{{2, w}, {0, 1}}) == 4);
  CHECK(sublattice_index(KMatrix{{1, 0}, {0, 1}}) == 1);
  CHECK(sublattice_index(KMatrix{{w, 0}, {0, 1}}) == 5);
  CHECK_THROWS_AS(sublattice_index(KMatrix{{1, 1}, {1, 1}}), std::invalid_argument);
}

TEST_CASE("Faltings height identity") {
  ImagQuadField k(2);
  CHECK(faltings_height_sq(HermitianLattice::unit(k, 1)).is_zero());
  CHECK(faltings_height_sq(HermitianLattice::unit(k, 2)) == LogRational(1));
  CHECK(faltings_height_sq(HermitianLattice::unit(k, 3)) == LogRational(Rational(5, 2)));
  // nonnegative height implies the nef degree bound, since H_r - 1 <= log r
  std::mt19937_64 rng(12);
  for (int i = 0; i < 30; ++i) {
    size_t r = 1 + static_cast<size_t>(i % 4);
    HermitianLattice l = twist(random_hermitian(rng, k, r, 1), random_positive_rational(rng, 6));
    LogRational h = faltings_height_sq(l);
    if (h >= LogRational(0)) CHECK(degree(l) >= nef_degree_lower_bound(r, 2));
    CHECK(faltings_height_sq(l) - degree(l) <= -nef_degree_lower_bound(r, 2));
  }
}

TEST_CASE("property: alternating map on orthogonal frames") {
  // antisymmetrized orthogonal pairs reach the bound: v1 (x) v2 - v2 (x) v1 maps to 2 v1 ^ v2
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    EuclideanLattice l = random_integral_lattice(rng, 3, 2);
    std::vector<QVector> frame;
    for (int i = 0; i < 3; ++i) {
      QVector v(3);
      for (auto& x : v) x = uniform(rng, -3, 3);
      for (const auto& u : frame) {
        Rational f = l.inner(u, v) / l.inner(u, u);
        for (size_t j = 0; j < 3; ++j) v[j] -= f * u[j];
      }
      if (std::all_of(v.begin(), v.end(), [](const Rational& x) { return sgn(x) == 0; })) break;
      frame.push_back(v);
    }
    if (frame.size() < 2) continue;
    QMatrix alt = alternating_map(3, 2);
    QMatrix tg = tensor_power_gram(l.gram(), 2), eg = exterior_power(l, 2).gram();
    QVector t(9);
    for (size_t i = 0; i < 3; ++i)
      for (size_t j = 0; j < 3; ++j) t[i * 3 + j] = frame[0][i] * frame[1][j] - frame[1][i] * frame[0][j];
    QVector a(3, Rational(0));
    for (size_t i = 0; i < 3; ++i)
      for (size_t j = 0; j < 9; ++j) a[i] += alt(i, j) * t[j];
    Rational na = 0, nt = 0;
    for (size_t i = 0; i < 3; ++i)
      for (size_t j = 0; j < 3; ++j) na += a[i] * eg(i, j) * a[j];
    for (size_t i = 0; i < 9; ++i)
      for (size_t j = 0; j < 9; ++j) nt += t[i] * tg(i, j) * t[j];
    CHECK(nt == 2 * l.inner(frame[0], frame[0]) * l.inner(frame[1], frame[1]));
    CHECK(na == 2 * nt);
    LatticeMorphism m(EuclideanLattice(tg), EuclideanLattice(eg), alt);
    CHECK(morphism_norm_sq_le(m, 2));
    CHECK_FALSE(morphism_norm_sq_le(m, Rational(199, 100)));
  }
}

TEST_CASE("unimodular integral lattices are semistable of slope zero") {
  ImagQuadField k(7);
  QuadElem w = QuadElem::w(k);
  HermitianLattice e(k, KMatrix{{2, w, 1}, {w.conj(), 2, 1}, {1, 1, 2}});
  EuclideanLattice res = restrict_scalars(e);
  CHECK(degree(res) == restriction_degree_shift(k, 3));
  CHECK(is_integral(e));
  std::mt19937_64 rng(14);
  LogRational best = rank_one_degree(e, {QuadElem(k, 1), QuadElem(k, 0), QuadElem(k, 0)});
  for (int i = 0; i < 200; ++i) {
    KVector v{random_elem(rng, k, 3), random_elem(rng, k, 3), random_elem(rng, k, 3)};
    if (std::all_of(v.begin(), v.end(), [](const QuadElem& x) { return is_zero(x); })) continue;
    best = max(best, rank_one_degree(e, v));
  }
  CHECK(best <= LogRational(0));
}

TEST_CASE("reproduction reports") {
  ReproReport a2 = repro_a2(default_a2_lambda());
  CHECK(a2.passed());
  REQUIRE(a2.find("deg A2<lambda> in [1/2 log 3 - log 2, 0)"));
  CHECK(a2.find("degree-zero sum is not semistable")->detail.find("2/3, 3/4") != std::string::npos);
  ReproReport a2b = repro_a2(LogRational::log_of(Rational(5, 4)));
  CHECK(a2b.passed());
  CHECK_THROWS_AS(repro_a2(ln3 / Rational(4)), ReproFailure);
  try {
    repro_a2(LogRational(0));
  } catch (const ReproFailure& f) {
    CHECK(f.label() == "lambda admissible");
  }

  ReproReport q7 = repro_q7(default_q7_lambda());
  CHECK(q7.passed());
  REQUIRE(q7.find("|f3|^2 = 2"));
  CHECK(q7.find("|theta+|^2 enclosure")->method == CheckMethod::interval128);
  CHECK_THROWS_AS(repro_q7(ln3 / Rational(2)), ReproFailure);
  CHECK(repro_q7(ln2 * Rational(4, 5)).passed());

  for (long p : {5L, 13L, 37L}) {
    ReproReport qp = repro_qp(p);
    CHECK(qp.passed());
    REQUIRE(qp.find("c1^2 = 1 - 2 log 2"));
  }
  CHECK_THROWS_AS(repro_qp(7), std::invalid_argument);
}
