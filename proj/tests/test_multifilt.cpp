#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "generators.hpp"
#include "slopekit/multifilt.hpp"

using namespace slopekit;
using namespace slopekit::testing;

namespace {

QVector vec(std::initializer_list<long> xs) {
  QVector v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

// Instance remembered together with the adapted bases it was built from.
struct Generated {
  MultifilteredSpace space;
  std::vector<QMatrix> bases;
  std::vector<std::vector<Rational>> breaks;
};

Generated random_mf(std::mt19937_64& rng, size_t d, size_t n) {
  Generated g;
  std::vector<Filtration> fs;
  for (size_t v = 0; v < n; ++v) {
    QMatrix p;
    do {
      p = to_rational(random_integer_matrix(rng, d, d, 1));
    } while (determinant(p) == 0);
    std::vector<Rational> b;
    for (size_t i = 0; i < d; ++i) b.push_back(frac(uniform(rng, -4, 4), uniform(rng, 1, 2)));
    fs.push_back(Filtration::from_adapted_basis(p, b));
    g.bases.push_back(p);
    g.breaks.push_back(b);
  }
  g.space = MultifilteredSpace(d, std::move(fs));
  return g;
}

Rational sum_of(const std::vector<Rational>& xs) {
  return std::accumulate(xs.begin(), xs.end(), Rational(0));
}

// Oracle: jump of v = smallest break among basis vectors with a nonzero coefficient.
Rational oracle_line_degree(const Generated& g, const QVector& v) {
  Rational deg = 0;
  for (size_t f = 0; f < g.bases.size(); ++f) {
    QMatrix coeffs = QMatrix(1, v.size());
    coeffs.set_row(0, v);
    coeffs = coeffs * inverse(g.bases[f]);
    bool any = false;
    Rational lo;
    for (size_t i = 0; i < v.size(); ++i)
      if (sgn(coeffs(0, i)) != 0 && (!any || g.breaks[f][i] < lo)) {
        lo = g.breaks[f][i];
        any = true;
      }
    deg += lo;
  }
  return deg;
}

// Oracle: hyperplane ker(phi) has degree deg M - max{b_i : phi(e_i) != 0}.
Rational oracle_hyperplane_degree(const Generated& g, const QVector& phi) {
  Rational deg = 0;
  for (size_t f = 0; f < g.bases.size(); ++f) {
    deg += sum_of(g.breaks[f]);
    bool any = false;
    Rational hi;
    for (size_t i = 0; i < phi.size(); ++i) {
      Rational e = 0;
      for (size_t j = 0; j < phi.size(); ++j) e += phi[j] * g.bases[f](i, j);
      if (sgn(e) != 0 && (!any || g.breaks[f][i] > hi)) {
        hi = g.breaks[f][i];
        any = true;
      }
    }
    deg -= hi;
  }
  return deg;
}

template <class F>
void for_each_primitive(size_t d, long bound, F&& f) {
  std::vector<long> x(d, -bound);
  for (;;) {
    long g = 0;
    size_t first = d;
    for (size_t i = 0; i < d; ++i) {
      g = std::gcd(g, std::labs(x[i]));
      if (first == d && x[i] != 0) first = i;
    }
    if (g == 1 && x[first] > 0) {
      QVector v;
      for (long t : x) v.emplace_back(t);
      f(v);
    }
    size_t i = 0;
    while (i < d && x[i] == bound) x[i++] = -bound;
    if (i == d) break;
    ++x[i];
  }
}

Rational oracle_nu(const Generated& g, long bound) {
  std::optional<Rational> best;
  for_each_primitive(g.space.dim(), bound, [&](const QVector& v) {
    Rational x = oracle_line_degree(g, v);
    if (!best || x > *best) best = x;
  });
  return *best;
}

// Exhaustive for dim <= 3 given the small entries of the generated bases.
Rational oracle_mu_max(const Generated& g) {
  const size_t d = g.space.dim();
  Rational best = Rational(0);
  for (const auto& b : g.breaks) best += sum_of(b);
  best /= static_cast<long>(d);
  if (d >= 2) best = std::max(best, oracle_nu(g, d == 2 ? 2 : 8));
  if (d == 3) {
    for_each_primitive(3, 4, [&](const QVector& phi) {
      best = std::max(best, Rational(oracle_hyperplane_degree(g, phi) / 2));
    });
  }
  return best;
}

MultifilteredSpace crossed() {
  Filtration f1(2, {{0, Subspace::whole(2)}, {1, Subspace::line(vec({1, 0}))}});
  Filtration f2(2, {{0, Subspace::whole(2)}, {1, Subspace::line(vec({0, 1}))}});
  return MultifilteredSpace(2, {f1, f2});
}

MultifilteredSpace three_lines() {
  std::vector<Filtration> fs;
  for (auto v : {vec({1, 0}), vec({0, 1}), vec({1, 1})})
    fs.emplace_back(2, std::vector<FiltrationStep>{{0, Subspace::whole(2)}, {1, Subspace::line(v)}});
  return MultifilteredSpace(2, fs);
}

}  // namespace

TEST_CASE("subspace operations against dimension formulas") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    size_t d = static_cast<size_t>(uniform(rng, 1, 5));
    auto rand_space = [&]() {
      size_t k = static_cast<size_t>(uniform(rng, 0, static_cast<long>(d)));
      return Subspace::span(to_rational(random_integer_matrix(rng, k, d, 2)));
    };
    Subspace a = rand_space(), b = rand_space();
    Subspace s = a + b, i = a.intersect(b);
    CHECK(s.dim() + i.dim() == a.dim() + b.dim());
    CHECK(s.contains(a));
    CHECK(s.contains(b));
    CHECK(a.contains(i));
    CHECK(b.contains(i));
    CHECK(a.annihilator().annihilator() == a);
    CHECK(a.annihilator().dim() + a.dim() == d);
    for (size_t k = 0; k < a.dim(); ++k) CHECK(a.from_coordinates(a.coordinates(a.vector(k))) == a.vector(k));
  }
  Subspace l = Subspace::line(vec({2, 4}));
  CHECK(l == Subspace::line(vec({-1, -2})));
  CHECK(l.contains(vec({3, 6})));
  CHECK_FALSE(l.contains(vec({1, 1})));
  CHECK_THROWS(Subspace::line(vec({0, 0})));
}

TEST_CASE("filtration validation and canonical form") {
  Subspace m = Subspace::whole(2), e1 = Subspace::line(vec({1, 0}));
  CHECK_THROWS(Filtration(2, {{0, e1}}));                    // not exhaustive
  CHECK_THROWS(Filtration(2, {{1, m}, {0, e1}}));            // labels must increase
  CHECK_THROWS(Filtration(2, {{0, m}, {1, e1}, {2, Subspace::line(vec({0, 1}))}}));  // not decreasing
  Filtration f(2, {{-1, m}, {0, m}, {1, e1}, {3, e1}, {5, Subspace(2)}});
  REQUIRE(f.steps().size() == 2);
  CHECK(f.steps()[0].lambda == 0);
  CHECK(f.steps()[1].lambda == 3);
  CHECK(f.at(-7) == m);
  CHECK(f.at(0) == m);
  CHECK(f.at(frac(1, 2)) == e1);
  CHECK(f.at(3) == e1);
  CHECK(f.at(frac(7, 2)).is_zero());
  CHECK(f.above(0) == e1);
  CHECK(f.jump(vec({5, 0})) == 3);
  CHECK(f.jump(vec({1, 1})) == 0);
  auto gd = f.graded_dims();
  REQUIRE(gd.size() == 2);
  CHECK(gd[0] == std::pair<Rational, size_t>(Rational(0), 1));
  CHECK(gd[1] == std::pair<Rational, size_t>(Rational(3), 1));
}

TEST_CASE("adapted bases reproduce the filtration") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 60; ++trial) {
    Generated g = random_mf(rng, static_cast<size_t>(uniform(rng, 1, 4)), 1);
    const Filtration& f = g.space.filtration(0);
    auto [p, b] = f.adapted_basis();
    CHECK(Filtration::from_adapted_basis(p, b) == f);
    std::vector<Rational> sorted_gen = g.breaks[0], sorted_back = b;
    std::sort(sorted_gen.begin(), sorted_gen.end());
    std::sort(sorted_back.begin(), sorted_back.end());
    CHECK(sorted_gen == sorted_back);
  }
}

TEST_CASE("Faltings slope examples") {
  MultifilteredSpace one(1, {Filtration::trivial(1, 2)});
  CHECK(slope_faltings(one) == 2);
  CHECK(slope_faltings(crossed()) == 1);
  CHECK_THROWS(slope_faltings(MultifilteredSpace(0, {})));
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    size_t d = static_cast<size_t>(uniform(rng, 1, 4)), n = static_cast<size_t>(uniform(rng, 1, 3));
    Generated g = random_mf(rng, d, n);
    Rational expect = 0;
    for (const auto& b : g.breaks) expect += sum_of(b);
    CHECK(slope_faltings(g.space) == expect / static_cast<long>(d));
    Rational c = frac(uniform(rng, -5, 5), 3);
    std::vector<Filtration> fs = g.space.filtrations();
    size_t v = static_cast<size_t>(uniform(rng, 0, static_cast<long>(n) - 1));
    fs[v] = fs[v].shifted(c);
    CHECK(slope_faltings(MultifilteredSpace(d, fs)) == slope_faltings(g.space) + c);
  }
}

TEST_CASE("multigraded dimensions") {
  auto dims = multigraded_dims(crossed());
  std::map<MultiIndex, size_t> expect{{{Rational(1), Rational(0)}, 1}, {{Rational(0), Rational(1)}, 1}};
  CHECK(dims == expect);

  std::mt19937_64 rng(14);
  Generated single = random_mf(rng, 4, 1);
  std::map<MultiIndex, size_t> graded;
  for (const auto& [l, d] : single.space.filtration(0).graded_dims()) graded[{l}] = d;
  CHECK(multigraded_dims(single.space) == graded);

  for (int trial = 0; trial < 80; ++trial) {
    size_t d = static_cast<size_t>(uniform(rng, 1, 6)), n = static_cast<size_t>(uniform(rng, 1, 4));
    Generated g = random_mf(rng, d, n);
    Rational expect_slope = 0;
    for (const auto& b : g.breaks) expect_slope += sum_of(b);
    expect_slope /= static_cast<long>(d);
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    do {
      auto md = multigraded_dims(g.space.permuted(order));
      size_t total = 0;
      for (const auto& [k, x] : md) total += x;
      CHECK(total == d);
      CHECK(multigraded_aggregate(md) == expect_slope);
    } while (std::next_permutation(order.begin(), order.end()));
  }
}

TEST_CASE("degree times dimension is additive on short exact sequences") {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 60; ++trial) {
    size_t d = static_cast<size_t>(uniform(rng, 2, 5)), n = static_cast<size_t>(uniform(rng, 1, 3));
    Generated g = random_mf(rng, d, n);
    size_t k = static_cast<size_t>(uniform(rng, 1, static_cast<long>(d) - 1));
    Subspace sub = Subspace::span(to_rational(random_integer_matrix(rng, k, d, 2)));
    if (sub.is_zero() || sub.is_whole()) continue;
    MultifilteredSpace a = g.space.restrict_to(sub), q = g.space.quotient(sub);
    CHECK(a.dim() + q.dim() == d);
    CHECK(a.degree() == g.space.degree_of(sub));
    CHECK(a.degree() + q.degree() == g.space.degree());
  }
}

TEST_CASE("tensor, dual and exterior constructions") {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 40; ++trial) {
    size_t n = static_cast<size_t>(uniform(rng, 1, 3));
    Generated a = random_mf(rng, static_cast<size_t>(uniform(rng, 1, 3)), n);
    Generated b = random_mf(rng, static_cast<size_t>(uniform(rng, 1, 3)), n);
    MultifilteredSpace t = tensor_mf(a.space, b.space);
    CHECK(t.dim() == a.space.dim() * b.space.dim());
    CHECK(slope_faltings(t) == slope_faltings(a.space) + slope_faltings(b.space));
    CHECK(tensor_mf(a.space, MultifilteredSpace::unit(n)) == a.space);
    MultifilteredSpace du = dual_mf(a.space);
    CHECK(slope_faltings(du) == -slope_faltings(a.space));
    CHECK(dual_mf(du) == a.space);
    // a pure tensor e (x) f has jump jump(e) + jump(f)
    QVector e = a.bases[0].row(0), f = b.bases[0].row(0), ef;
    for (const auto& x : e)
      for (const auto& y : f) ef.push_back(x * y);
    CHECK(t.filtration(0).jump(ef) == a.space.filtration(0).jump(e) + b.space.filtration(0).jump(f));
    const size_t d = a.space.dim();
    for (size_t k = 1; k <= d; ++k) {
      MultifilteredSpace w = exterior_power_mf(a.space, k);
      long c = 1;  // binomial(d - 1, k - 1)
      for (size_t i = 1; i < k; ++i) c = c * static_cast<long>(d - i) / static_cast<long>(i);
      CHECK(w.degree() == a.space.degree() * c);
    }
  }
  CHECK_THROWS(tensor_mf(crossed(), MultifilteredSpace::unit(1)));
}

TEST_CASE("tensor filtration equals the convolution of steps; dual steps are annihilators") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 25; ++trial) {
    size_t n = static_cast<size_t>(uniform(rng, 1, 2));
    Generated a = random_mf(rng, static_cast<size_t>(uniform(rng, 1, 3)), n);
    Generated b = random_mf(rng, static_cast<size_t>(uniform(rng, 1, 3)), n);
    MultifilteredSpace t = tensor_mf(a.space, b.space);
    MultifilteredSpace du = dual_mf(a.space);
    for (size_t v = 0; v < n; ++v) {
      const auto& fa = a.space.filtration(v).steps();
      const auto& fb = b.space.filtration(v).steps();
      std::vector<Rational> probes;
      for (const auto& x : fa)
        for (const auto& y : fb) {
          probes.push_back(x.lambda + y.lambda);
          probes.push_back(x.lambda + y.lambda + Rational(1, 3));
        }
      for (const auto& l : probes) {
        // sum over l1 + l2 >= l of F^{l1} (x) F^{l2}, spanned by Kronecker products of basis rows
        const size_t dim = t.dim();
        Subspace conv(dim);
        for (const auto& x : fa)
          for (const auto& y : fb)
            if (x.lambda + y.lambda >= l) conv = conv + Subspace::span(kronecker(x.space.basis(), y.space.basis()));
        CHECK(t.filtration(v).at(l) == conv);
      }
      for (const auto& x : fa)
        for (const Rational& l : {Rational(-x.lambda), Rational(-x.lambda + Rational(1, 2)), Rational(-x.lambda - Rational(1, 2))})
          CHECK(du.filtration(v).at(l) == a.space.filtration(v).above(-l).annihilator());
    }
  }
}

TEST_CASE("exact nu against brute force over lines") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    size_t d = static_cast<size_t>(uniform(rng, 1, 3)), n = static_cast<size_t>(uniform(rng, 1, 3));
    Generated g = random_mf(rng, d, n);
    NuExact nu = nu_exact(g.space);
    CHECK(nu.value == oracle_nu(g, d <= 2 ? 2 : 8));
    CHECK(g.space.slope_of(nu.line) == nu.value);
    NuWitness w = nu_witness(g.space);
    CHECK(w.value >= slope_faltings(g.space));
    CHECK(w.value >= nu.value);
    CHECK(w.line_slope <= nu.value);
  }
}

TEST_CASE("nu witness on the crossed example") {
  NuWitness w = nu_witness(crossed());
  CHECK(w.value == 1);
  CHECK((w.line == Subspace::line(vec({1, 0})) || w.line == Subspace::line(vec({0, 1}))));
  CHECK(w.lift_attains);
  CHECK(nu_exact(crossed()).value == 1);
  MultifilteredSpace single(3, {Filtration::from_adapted_basis(QMatrix::identity(3), {0, 1, 5})});
  NuWitness s = nu_witness(single);
  CHECK(s.value == 5);
  CHECK(s.line == Subspace::line(vec({0, 0, 1})));
}

TEST_CASE("three lines in the plane: the top multigraded piece does not lift") {
  MultifilteredSpace m = three_lines();
  CHECK(slope_faltings(m) == frac(3, 2));
  NuWitness w = nu_witness(m);
  CHECK(w.value == 2);
  CHECK_FALSE(w.intersection_nonzero);
  CHECK_FALSE(w.lift_attains);
  CHECK(w.line_slope == 1);
  NuExact nu = nu_exact(m);
  CHECK(nu.value == 1);
  // so nu < mu here, while mu_max is the slope of the whole space
  MuMaxMf mm = mu_max_mf(m);
  CHECK(mm.certified);
  CHECK(mm.value == frac(3, 2));
  CHECK(mm.witness.is_whole());
}

TEST_CASE("mu_max on small examples") {
  MuMaxMf c = mu_max_mf(crossed());
  CHECK(c.certified);
  CHECK(c.maximal);
  CHECK(c.value == 1);
  CHECK(c.witness.is_whole());

  MultifilteredSpace single(3, {Filtration::from_adapted_basis(QMatrix::identity(3), {0, 1, 5})});
  MuMaxMf s = mu_max_mf(single);
  CHECK(s.certified);
  CHECK(s.value == 5);
  CHECK(s.witness == Subspace::line(vec({0, 0, 1})));

  MultifilteredSpace cc = tensor_mf(crossed(), crossed());
  CHECK(cc.dim() == 4);
  CHECK(slope_faltings(cc) == 2);
  MuMaxMf t = mu_max_mf(cc);
  CHECK(t.certified);
  CHECK(t.value == 2);
  CHECK(t.witness.is_whole());
}

TEST_CASE("mu_max against an exhaustive oracle in dimension at most three") {
  std::mt19937_64 rng(18);
  for (int trial = 0; trial < 40; ++trial) {
    size_t d = static_cast<size_t>(uniform(rng, 1, 3)), n = static_cast<size_t>(uniform(rng, 1, 3));
    Generated g = random_mf(rng, d, n);
    MuMaxMf r = mu_max_mf(g.space);
    CHECK(r.certified);
    CHECK(r.value == oracle_mu_max(g));
    CHECK(g.space.slope_of(r.witness) == r.value);
    CHECK(r.value >= nu_exact(g.space).value);
  }
}

TEST_CASE("mu_max of tensor products is additive on small certified pairs") {
  std::mt19937_64 rng(19);
  int certified = 0;
  for (int trial = 0; trial < 12; ++trial) {
    size_t n = static_cast<size_t>(uniform(rng, 1, 3));
    Generated a = random_mf(rng, 2, n);
    Generated b = random_mf(rng, static_cast<size_t>(uniform(rng, 1, 3)), n);
    MuMaxMf ma = mu_max_mf(a.space), mb = mu_max_mf(b.space);
    REQUIRE(ma.certified);
    REQUIRE(mb.certified);
    MuMaxOptions opt;
    opt.hints.push_back(Subspace::span(kronecker(ma.witness.basis(), mb.witness.basis())));
    MuMaxMf mt = mu_max_mf(tensor_mf(a.space, b.space), opt);
    if (!mt.certified) continue;
    ++certified;
    CHECK(mt.value == ma.value + mb.value);
  }
  CHECK(certified == 12);
}

TEST_CASE("slope filtration") {
  MfSlopeFiltration s = slope_filtration_mf(crossed());
  REQUIRE(s.certified);
  REQUIRE(s.chain.size() == 1);
  CHECK(s.chain[0].is_whole());

  MultifilteredSpace u0(1, {Filtration::trivial(1, 0)}), u3(1, {Filtration::trivial(1, 3)});
  MfSlopeFiltration split = slope_filtration_mf(direct_sum_mf(u0, u3));
  REQUIRE(split.certified);
  REQUIRE(split.chain.size() == 2);
  CHECK(split.slopes == std::vector<Rational>{3, 0});
  CHECK(split.chain[0] == Subspace::line(vec({0, 1})));

  // polygon oracle in dimension <= 3: max degree per rank from exhaustive lines and planes
  std::mt19937_64 rng(20);
  for (int trial = 0; trial < 25; ++trial) {
    size_t d = static_cast<size_t>(uniform(rng, 2, 3)), n = static_cast<size_t>(uniform(rng, 1, 3));
    Generated g = random_mf(rng, d, n);
    std::vector<Rational> best(d + 1);
    best[0] = 0;
    best[d] = g.space.degree();
    best[1] = oracle_nu(g, d == 2 ? 2 : 8);
    if (d == 3) {
      std::optional<Rational> h;
      for_each_primitive(3, 4, [&](const QVector& phi) {
        Rational x = oracle_hyperplane_degree(g, phi);
        if (!h || x > *h) h = x;
      });
      best[2] = *h;
    }
    MfSlopeFiltration f = slope_filtration_mf(g.space);
    REQUIRE(f.certified);
    // the chain endpoints must be the vertices of the upper concave hull of (k, best[k])
    size_t prev = 0;
    for (size_t i = 0; i < f.chain.size(); ++i) {
      size_t k = f.chain[i].dim();
      CHECK(g.space.degree_of(f.chain[i]) == best[k]);
      Rational slope = (best[k] - best[prev]) / static_cast<long>(k - prev);
      CHECK(slope == f.slopes[i]);
      for (size_t j = prev + 1; j <= d; ++j) {
        Rational line = best[prev] + slope * static_cast<long>(j - prev);
        CHECK(best[j] <= line);
        if (j > k) CHECK(best[j] < line);
      }
      prev = k;
    }
  }
}
