#include <random>

#include "doctest.h"
#include "slopekit/exactval.hpp"

using namespace slopekit;

namespace {

Rational random_positive_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> d(1, 5000);
  Rational q(d(rng), d(rng));
  q.canonicalize();
  return q;
}

LogRational random_logrational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> small(-6, 6);
  auto coeff = [&] {
    Rational q(small(rng), 1 + std::abs(small(rng)));
    q.canonicalize();
    return q;
  };
  LogRational v(coeff());
  for (int k = 0; k < 3; ++k) v += LogRational::log_of(random_positive_rational(rng)) * coeff();
  return v;
}

}  // namespace

TEST_CASE("log of rationals in canonical prime form") {
  CHECK(LogRational::log_of(1).is_zero());
  LogRational l34 = LogRational::log_of(Rational(3, 4));
  CHECK(l34.terms().size() == 2);
  CHECK(l34.terms().at(3) == 1);
  CHECK(l34.terms().at(2) == -2);
  CHECK(LogRational::log_of(81) == LogRational::log_of(3) * Rational(4));
  CHECK_THROWS_AS(LogRational::log_of(0), std::domain_error);
  CHECK_THROWS_AS(LogRational::log_of(-2), std::domain_error);
}

TEST_CASE("factorization beyond trial division") {
  Integer p("1000000007"), q("998244353");
  auto f = factor_integer(p * q * q * 12);
  CHECK(f.size() == 4);
  CHECK(f[Integer(2)] == 2);
  CHECK(f[Integer(3)] == 1);
  CHECK(f[p] == 1);
  CHECK(f[q] == 2);
  Integer a("1000003"), b("1000033"), c("4294967311");
  auto g = factor_integer(a * b * b * c);
  CHECK(g.size() == 3);
  CHECK(g[a] == 1);
  CHECK(g[b] == 2);
  CHECK(g[c] == 1);
}

TEST_CASE("comparison examples") {
  LogRational l3 = LogRational::log_of(3);
  CHECK(l3 / Rational(2) > l3 / Rational(4));
  // degree of the rescaled A2 lattice
  LogRational deg = l3 - LogRational::log_of(2) - l3 / Rational(2);
  CHECK(compare(deg, LogRational(0)) == std::strong_ordering::less);
  CHECK(compare(LogRational::log_of(2) + l3, LogRational::log_of(6)) == std::strong_ordering::equal);
}

TEST_CASE("enclosures") {
  Interval z = LogRational(0).enclose(53);
  CHECK(z.lo_double() == 0.0);
  CHECK(z.hi_double() == 0.0);
  CHECK(LogRational::log_of(2).enclose(53).contains(0.6931471805599453));
  LogRational c = LogRational(1) - LogRational::log_of(2) * Rational(2);
  Interval ci = c.enclose(53);
  CHECK(ci.negative());
  CHECK(ci.contains(-0.38629436111989063));
  CHECK_THROWS(c.enclose(8));
}

TEST_CASE("enclosure width bound") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    LogRational v = random_logrational(rng);
    for (int bits : {16, 53, 100, 200}) {
      Interval iv = v.enclose(bits);
      double mag = std::max(1.0, std::abs(v.approx()));
      CHECK(iv.width() <= std::ldexp(mag, 1 - bits) * (1 + 1e-12));
    }
  }
}

TEST_CASE("property: log is multiplicative") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    Rational p = random_positive_rational(rng), q = random_positive_rational(rng);
    CHECK(LogRational::log_of(p * q) == LogRational::log_of(p) + LogRational::log_of(q));
  }
}

TEST_CASE("property: comparison is a total order consistent with enclosures") {
  std::mt19937_64 rng(9);
  std::vector<LogRational> vals;
  for (int i = 0; i < 24; ++i) vals.push_back(random_logrational(rng));
  vals.push_back(vals[3]);
  for (const auto& a : vals) {
    for (const auto& b : vals) {
      auto ord = compare(a, b);
      CHECK((ord < 0) == (compare(b, a) > 0));
      if (ord == std::strong_ordering::equal) {
        CHECK(a.constant() == b.constant());
        CHECK(a.terms() == b.terms());
      }
      for (int bits : {53, 128}) {
        Interval ia = a.enclose(bits), ib = b.enclose(bits);
        if (ord == std::strong_ordering::less) {
          CHECK(mpfr_cmp(ia.lo(), ib.hi()) < 0);
        }
      }
    }
  }
  for (const auto& a : vals)
    for (const auto& b : vals)
      for (const auto& c : vals)
        if (a <= b && b <= c) CHECK(a <= c);
}

TEST_CASE("rendering") {
  LogRational l3 = LogRational::log_of(3), l2 = LogRational::log_of(2);
  CHECK(LogRational(0).to_string() == "0");
  CHECK((l3 / Rational(2) - l2).to_string() == "1/2*log(3/4)");
  CHECK((LogRational(1) - l2 * Rational(2)).to_string() == "1 - 2*log(2)");
  CHECK((l2 * Rational(2)).to_string() == "2*log(2)");
  CHECK((-l3 / Rational(2)).to_string() == "-1/2*log(3)");
  CHECK(LogRational::log_of(Rational(4, 3)).to_string() == "log(4/3)");
  CHECK(LogRational(Rational(-5, 2)).to_string() == "-5/2");
  CHECK((LogRational(Rational(3, 2)) + LogRational::log_of(6)).to_string() == "3/2 + log(6)");
}

TEST_CASE("parse round trip") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 300; ++i) {
    LogRational v = random_logrational(rng);
    CHECK(LogRational::parse(v.to_string()) == v);
  }
  CHECK(LogRational::parse(" -log(2) + 3/4*log(9) - 1 ") ==
        LogRational(-1) - LogRational::log_of(2) + LogRational::log_of(3) * Rational(3, 2));
  CHECK_THROWS(LogRational::parse("log(2"));
  CHECK_THROWS(LogRational::parse("2*"));
  CHECK_THROWS(LogRational::parse("log(0)"));
  CHECK(parse_rational("-6/4") == Rational(-3, 2));
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational("a"));
}
