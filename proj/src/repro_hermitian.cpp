#include <random>
#include <sstream>

#include "slopekit/enumeration.hpp"
#include "slopekit/hermitian.hpp"
#include "slopekit/repro.hpp"

namespace slopekit {

std::string to_string(CheckMethod m) {
  switch (m) {
    case CheckMethod::exact:
      return "exact";
    case CheckMethod::interval128:
      return "interval-128";
    case CheckMethod::consequence:
      return "consequence";
  }
  return "?";
}

bool ReproReport::passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

const ReproCheck* ReproReport::find(const std::string& label) const {
  for (const auto& c : checks)
    if (c.label == label) return &c;
  return nullptr;
}

const ReproValue* ReproReport::value(const std::string& name) const {
  for (const auto& v : values)
    if (v.name == name) return &v;
  return nullptr;
}

namespace {

constexpr mpfr_prec_t kPrec = 128;

class Recorder {
 public:
  explicit Recorder(ReproReport& report) : report_(report) {}

  void check(const std::string& label, CheckMethod method, bool ok, const std::string& detail) {
    report_.checks.push_back(ReproCheck{label, method, detail, ok});
    if (!ok) throw ReproFailure(label, detail);
  }

 private:
  ReproReport& report_;
};

std::string str(const LogRational& x) { return x.to_string(); }
std::string str(const Rational& x) { return to_string(x); }

bool overlap(const Interval& a, const Interval& b) {
  return mpfr_cmp(a.lo(), b.hi()) <= 0 && mpfr_cmp(b.lo(), a.hi()) <= 0;
}

bool tight(const Interval& a) { return a.width() <= std::ldexp(1.0, -120) * std::max(1.0, a.magnitude()); }

// exp(-2 lambda) when it is rational.
std::optional<Rational> rational_exp_neg(const LogRational& two_lambda) {
  if (sgn(two_lambda.constant()) != 0) return std::nullopt;
  Rational c = 1;
  for (const auto& [p, coeff] : two_lambda.terms()) {
    if (coeff.get_den() != 1) return std::nullopt;
    Integer pw;
    long e = coeff.get_num().get_si();
    mpz_pow_ui(pw.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(std::labs(e)));
    c *= e > 0 ? Rational(1 / Rational(pw)) : Rational(pw);
  }
  return c;
}

QuadElem random_integer(std::mt19937_64& rng, const ImagQuadField& k, long bound) {
  std::uniform_int_distribution<long> dist(-bound, bound);
  for (;;) {
    QuadElem x(k, Rational(dist(rng)), Rational(dist(rng)));
    if (!is_zero(x)) return x;
  }
}

const LogRational kLog2 = log_of_rational(2);
const LogRational kLog3 = log_of_rational(3);

}  // namespace

LogRational default_a2_lambda() { return log_of_rational(Rational(3, 2)) / Rational(2); }

LogRational default_q7_lambda() { return kLog3 - kLog2 * Rational(2, 3); }

ReproReport repro_a2(const LogRational& lambda, const ReproOptions& options) {
  ReproReport report;
  report.name = "a2";
  report.parameters.push_back("lambda = " + str(lambda));
  Recorder rec(report);

  LogRational lo = log_of_rational(Rational(3, 2)) / Rational(2), hi = kLog3 / Rational(4);
  rec.check("lambda admissible", CheckMethod::exact, lo <= lambda && lambda < hi,
            "[" + str(lo) + ", " + str(hi) + ")");

  EuclideanLattice a2(QMatrix{{2, 1}, {1, 2}});
  LogRational deg0 = degree(a2);
  rec.check("deg A2 = -1/2 log 3", CheckMethod::exact, deg0 == -kLog3 / Rational(2), str(deg0));
  LogRational deg = deg0 + lambda * Rational(2);
  rec.check("deg A2<lambda> = 2 lambda - 1/2 log 3", CheckMethod::exact,
            deg == lambda * Rational(2) - kLog3 / Rational(2), str(deg));
  LogRational lower = kLog3 / Rational(2) - kLog2;
  rec.check("deg A2<lambda> in [1/2 log 3 - log 2, 0)", CheckMethod::exact,
            lower <= deg && deg < LogRational(0), str(deg));
  report.values.push_back({"lambda", lambda});
  report.values.push_back({"deg", deg});
  report.values.push_back({"mu", deg / Rational(2)});

  std::optional<Rational> c = rational_exp_neg(lambda * Rational(2));
  if (c) {
    EuclideanLattice twisted = scale(a2, *c);
    rec.check("twist by Gram factor " + str(*c) + " has the same degree", CheckMethod::exact,
              degree(twisted) == deg, str(degree(twisted)));
    CertifiedMuMax mm = mu_max(twisted);
    rec.check("certified mu_max attained at full rank", CheckMethod::exact,
              mm.certified && mm.witness.rank() == 2 && mm.value == deg / Rational(2),
              "mu_max " + str(mm.value) + ", witness rank " + std::to_string(mm.witness.rank()));
  } else {
    report.notes.push_back("exp(-2 lambda) is irrational; the twist is handled symbolically");
  }

  Rational m = minimum_sq(a2);
  rec.check("shortest vectors of A2 have squared length 2", CheckMethod::exact, m == 2, str(m));
  SlopePolygon poly = slope_filtration(a2);
  LogRational sub = poly.points[1].max_degree + lambda;
  rec.check("max rank-one sublattice degree = lambda - 1/2 log 2", CheckMethod::exact,
            sub == lambda - kLog2 / Rational(2), str(sub));
  report.values.push_back({"max rank-one degree", sub});
  LogRational mu = deg / Rational(2);
  rec.check("stable: lambda - 1/2 log 2 < mu", CheckMethod::exact, sub < mu, str(sub) + " < " + str(mu));
  LogRational quotient = deg - sub;
  rec.check("rank-one quotients have nonnegative degree", CheckMethod::consequence, quotient >= LogRational(0),
            "min quotient degree " + str(quotient));

  // |a|^2 + |b|^2 + Re(conj(a) b) >= |ab| and N(ab) >= 1, exact in imaginary quadratic fields
  std::mt19937_64 rng(options.seed);
  for (long d : {1L, 2L, 3L, 7L, 11L, 19L}) {
    ImagQuadField k(d);
    bool ok = true;
    std::string worst;
    Rational slack = -1;
    for (size_t s = 0; s < options.samples; ++s) {
      QuadElem a = random_integer(rng, k, 6), b = random_integer(rng, k, 6);
      Rational q = a.norm() + b.norm() + (a.conj() * b).real_part();
      Rational nab = (a * b).norm();
      bool here = sgn(q) > 0 && q * q >= nab && nab >= 1;
      Rational gap = q * q - nab;
      if (slack < 0 || gap < slack) {
        slack = gap;
        worst = "a=" + a.to_string() + ", b=" + b.to_string();
      }
      ok = ok && here;
    }
    rec.check("product formula spot checks over Q(sqrt(-" + std::to_string(d) + "))", CheckMethod::consequence, ok,
              std::to_string(options.samples) + " samples, tightest " + worst + " gap " + str(slack));
  }

  LogRational lambda2 = kLog3 / Rational(2) - lambda * Rational(2);
  rec.check("complement twist is nonnegative", CheckMethod::exact, lambda2 >= LogRational(0), str(lambda2));
  rec.check("A2<lambda> + Z<1/2 log 3 - 2 lambda> has degree 0", CheckMethod::exact, (deg + lambda2).is_zero(),
            str(deg + lambda2));
  if (c) {
    Rational c2 = 1 / (*c * *c * 3);
    EuclideanLattice sum = orthogonal_sum(scale(a2, *c), scale(EuclideanLattice::unit(1), c2));
    SlopePolygon p = slope_filtration(sum);
    bool split = p.slopes.size() == 2 && p.slopes[0] > LogRational(0) && p.slopes[1] < LogRational(0) &&
                 degree(sum).is_zero() && p.filtration[0].rank() == 1;
    std::ostringstream os;
    os << "Gram factors " << str(*c) << ", " << str(c2) << "; slopes";
    for (const auto& sl : p.slopes) os << " " << str(sl);
    rec.check("degree-zero sum is not semistable", CheckMethod::exact, split, os.str());
  }
  report.notes.push_back("nef is not certified; checks labelled consequence verify finitely many implications");
  return report;
}

namespace {

using RVector = std::vector<RelQuad>;

RelQuad lift(const RelQuad& like, const QuadElem& x) { return RelQuad(like.base(), like.t(), x, 0); }

RelQuad rel_inner(const KMatrix& g, const RVector& x, const RVector& y) {
  RelQuad s = lift(x[0], 0);
  for (size_t i = 0; i < x.size(); ++i)
    for (size_t j = 0; j < y.size(); ++j) s += x[i].conj() * lift(x[0], g(i, j)) * y[j];
  return s;
}

// Z-basis rows x, w x for every row x, in coordinates (a, b) per entry.
ZMatrix z_module(const ImagQuadField& k, const KMatrix& rows) {
  ZMatrix out(2 * rows.rows(), 2 * rows.cols());
  const QuadElem w = QuadElem::w(k);
  for (size_t r = 0; r < rows.rows(); ++r)
    for (size_t c = 0; c < rows.cols(); ++c) {
      QuadElem x = rows(r, c), y = rows(r, c) * w;
      out(2 * r, 2 * c) = x.a().get_num();
      out(2 * r, 2 * c + 1) = x.b().get_num();
      out(2 * r + 1, 2 * c) = y.a().get_num();
      out(2 * r + 1, 2 * c + 1) = y.b().get_num();
    }
  return out;
}

}  // namespace

ReproReport repro_q7(const LogRational& lambda, const ReproOptions& /*options*/) {
  ReproReport report;
  report.name = "q7";
  report.parameters.push_back("lambda = " + str(lambda));
  Recorder rec(report);

  LogRational lo = kLog3 / Rational(2), hi = default_q7_lambda();
  rec.check("lambda admissible", CheckMethod::exact, lo < lambda && lambda <= hi,
            "(" + str(lo) + ", " + str(hi) + "]");

  ImagQuadField k(7);
  QuadElem w = QuadElem::w(k), wb = w.conj(), one(k, 1), zero(k, 0);
  HermitianLattice e(k, KMatrix{{2, w, 1}, {wb, 2, 1}, {1, 1, 2}});
  rec.check("det = 1", CheckMethod::exact, e.gram_determinant() == 1, str(e.gram_determinant()));
  rec.check("integral unimodular", CheckMethod::exact, is_unimodular(e), e.gram().data()[1].to_string());
  rec.check("degree 0", CheckMethod::exact, degree(e).is_zero(), str(degree(e)));
  HermitianLattice ed = dual(e);
  rec.check("dual has degree 0", CheckMethod::exact, degree(ed).is_zero(), str(degree(ed)));

  HermitianLattice hom = tensor(e, ed);
  KVector id = to_field(evaluation_vector(3), k);
  Rational idn = hom.norm_sq(id);
  rec.check("|id|^2 = 3 in E (x) E^dual", CheckMethod::exact, idn == 3, str(idn));
  LogRational line = rank_one_degree(hom, id);
  rec.check("identity spans a saturated line of degree -log 3", CheckMethod::exact, line == -kLog3, str(line));
  LogRational quotient = -(line + lambda * Rational(2));
  rec.check("rank-one quotient of E<-lambda>^(x)2 has degree log 3 - 2 lambda", CheckMethod::exact,
            quotient == kLog3 - lambda * Rational(2), str(quotient));
  rec.check("that quotient degree is negative", CheckMethod::exact, quotient < LogRational(0), str(quotient));
  report.values.push_back({"lambda", lambda});
  report.values.push_back({"id_sq", LogRational(idn)});
  report.values.push_back({"quotient deg", quotient});

  KVector e1{one, zero, zero}, e2{zero, one, zero}, e3{zero, zero, one};
  KVector e2p{-one, wb, zero};
  rec.check("e1 and e2' = -e1 + conj(w) e2 are orthogonal", CheckMethod::exact, is_zero(e.inner(e1, e2p)),
            e.inner(e1, e2p).to_string());
  rec.check("|e1|^2 = |e2'|^2 = 2", CheckMethod::exact, e.norm_sq(e1) == 2 && e.norm_sq(e2p) == 2,
            str(e.norm_sq(e2p)));
  rec.check("lambda < log 2", CheckMethod::consequence, lambda < kLog2, str(lambda));

  KVector f3{w * w, wb * wb, QuadElem(k, 2)};
  rec.check("f3 orthogonal to e1, e2", CheckMethod::exact, is_zero(e.inner(e1, f3)) && is_zero(e.inner(e2, f3)),
            e.inner(e1, f3).to_string() + ", " + e.inner(e2, f3).to_string());
  rec.check("<e3, f3> = 1", CheckMethod::exact, e.inner(e3, f3) == one, e.inner(e3, f3).to_string());
  rec.check("|f3|^2 = 2", CheckMethod::exact, e.norm_sq(f3) == 2, str(e.norm_sq(f3)));

  // K(sqrt 2)
  RelQuad s2 = RelQuad::alpha(k, 2), r1 = lift(s2, one), r0 = lift(s2, zero);
  const Interval sqrt2 = Interval::sqrt_of(Rational(2), kPrec);
  for (int sign : {+1, -1}) {
    std::string pm = sign > 0 ? "+" : "-";
    std::string mp = sign > 0 ? "-" : "+";
    RelQuad theta = lift(s2, wb) * (s2 * lift(s2, QuadElem(k, Rational(sign, 2))) - r1);
    RelQuad t2 = theta * theta.conj();
    RelQuad claim(k, 2, QuadElem(k, 3), QuadElem(k, -2 * sign));
    rec.check("|theta" + pm + "|^2 = 3 " + mp + " 2 sqrt 2", CheckMethod::exact, t2 == claim, t2.to_string("sqrt2"));
    Interval iv = t2.enclose_real(kPrec);
    Interval claim_iv = Interval(Rational(3), kPrec) - sqrt2.scaled(Rational(2 * sign));
    rec.check("|theta" + pm + "|^2 enclosure", CheckMethod::interval128,
              overlap(iv, claim_iv) && tight(iv) && iv.positive(), iv.to_string(30));

    RVector f1{r1, theta, r0}, f2{theta.conj(), r1, r0};
    RVector f3r{lift(s2, f3[0]), lift(s2, f3[1]), lift(s2, f3[2])};
    RelQuad n1 = rel_inner(e.gram(), f1, f1), n2 = rel_inner(e.gram(), f2, f2);
    RelQuad target(k, 2, QuadElem(k, 4), QuadElem(k, -2 * sign));  // 2 sqrt2 (sqrt2 -+ 1)
    rec.check("|f1" + pm + "|^2 = 2 sqrt 2 (sqrt 2 " + mp + " 1)", CheckMethod::exact, n1 == target,
              n1.to_string("sqrt2"));
    rec.check("|f2" + pm + "|^2 = 2 sqrt 2 (sqrt 2 " + mp + " 1)", CheckMethod::exact, n2 == target,
              n2.to_string("sqrt2"));
    Interval niv = n1.enclose_real(kPrec);
    Interval target_iv = (sqrt2 - Interval(Rational(sign), kPrec)) * sqrt2.scaled(Rational(2));
    rec.check("|f1" + pm + "|^2 enclosure", CheckMethod::interval128, overlap(niv, target_iv) && tight(niv),
              niv.to_string(30));
    bool orth = rel_inner(e.gram(), f1, f2) == r0 && rel_inner(e.gram(), f1, f3r) == r0 &&
                rel_inner(e.gram(), f2, f3r) == r0;
    rec.check("f1" + pm + ", f2" + pm + ", f3 pairwise orthogonal", CheckMethod::exact, orth, "");
  }
  report.notes.push_back(
      "the source defines the second vector with the label f1; it is read as f2 = conj(theta) e1 + e2");

  // AM-GM constant: 3 * 2^(-2/3) >= e^lambda
  LogRational amgm = kLog3 - kLog2 * Rational(2, 3);
  rec.check("3 * 2^(-2/3) >= e^lambda", CheckMethod::consequence, amgm >= lambda, str(amgm - lambda));
  LogRational dual_slope = lambda;
  rec.check("(E<-lambda>)^dual is semistable of positive slope", CheckMethod::consequence,
            is_unimodular(e) && dual_slope > LogRational(0), "slope " + str(dual_slope));
  LogRational sum_deg = (-lambda * Rational(3)) + lambda * Rational(3) + degree(e) + degree(ed);
  rec.check("E<-lambda> + dual has degree 0", CheckMethod::exact, sum_deg.is_zero(), str(sum_deg));
  report.notes.push_back("nef is not certified; checks labelled consequence verify finitely many implications");
  return report;
}

ReproReport repro_qp(long p, const ReproOptions& options) {
  if (p != 5 && p != 13 && p != 37) throw std::invalid_argument("p must be 5, 13 or 37");
  ReproReport report;
  report.name = "qp";
  report.parameters.push_back("p = " + std::to_string(p));
  Recorder rec(report);

  ImagQuadField k(p);
  QuadElem w = QuadElem::w(k), one(k, 1), zero(k, 0);
  RelQuad i = RelQuad::alpha(k, -1), r1 = lift(i, one), r0 = lift(i, zero);
  RelQuad sqrtp = -(lift(i, w) * i);
  rec.check("sqrt p = -sqrt(-p) i squares to p", CheckMethod::exact, sqrtp * sqrtp == lift(i, QuadElem(k, p)),
            (sqrtp * sqrtp).to_string("i"));
  rec.check("sqrt p is real", CheckMethod::exact, sqrtp.conj() == sqrtp, sqrtp.to_string("i"));

  RelQuad u1 = (r1 + sqrtp) / lift(i, QuadElem(k, 2)), u2 = i;
  const RelQuad basis[2] = {u1, u2};
  KMatrix g(2, 2);
  for (size_t a = 0; a < 2; ++a)
    for (size_t b = 0; b < 2; ++b) {
      RelQuad v = basis[a].conj() * basis[b];
      QuadElem tr = v.trace() / QuadElem(k, 2);
      g(a, b) = tr;
    }
  HermitianLattice ok(k, g);
  std::ostringstream gs;
  gs << matrix_to_string(g);
  report.parameters.push_back("Gram of o_K' on ((1 + sqrt p)/2, i): " + gs.str());
  report.notes.push_back("K has class number 2; o_K' is free over o_K with the basis above");

  KMatrix sub{{QuadElem(k, 2), w}, {zero, one}};
  RelQuad img0 = lift(i, sub(0, 0)) * u1 + lift(i, sub(0, 1)) * u2;
  rec.check("1 = 2 u1 + w u2", CheckMethod::exact, img0 == r1, img0.to_string("i"));
  KMatrix sub2{{QuadElem(k, 2), zero}, {zero, one}};
  Integer idx = sublattice_index(sub), idx2 = sublattice_index(sub2);
  rec.check("o_K + o_K i has index 4", CheckMethod::exact, idx == 4, idx.get_str());
  rec.check("o_K (1 + sqrt p) + o_K i has index 4 and is the same subgroup", CheckMethod::exact,
            idx2 == 4 && hermite_normal_form(z_module(k, sub)) == hermite_normal_form(z_module(k, sub2)),
            idx2.get_str());
  HermitianLattice subl = sublattice(ok, sub);
  rec.check("o_K + o_K i is the orthogonal sum of two unit lattices", CheckMethod::exact,
            subl.gram() == KMatrix::identity(2), matrix_to_string(subl.gram()));
  LogRational deg = degree(ok);
  rec.check("deg o_K' = 2 log 2", CheckMethod::exact, deg == kLog2 * Rational(2), str(deg));
  rec.check("deg o_K' = deg(sub) + log index", CheckMethod::exact,
            deg == degree(subl) + log_of_rational(Rational(idx)), str(degree(subl)));

  HermitianLattice e = dual(ok);
  rec.check("deg E = -2 log 2", CheckMethod::exact, degree(e) == -kLog2 * Rational(2), str(degree(e)));
  LogRational h = faltings_height_sq(e);
  rec.check("c1^2 = 1 - 2 log 2", CheckMethod::exact, h == LogRational(1) - kLog2 * Rational(2), str(h));
  rec.check("c1^2 < 0", CheckMethod::exact, h < LogRational(0), str(h));
  report.values.push_back({"deg o_K'", deg});
  report.values.push_back({"deg E", degree(e)});
  report.values.push_back({"c1sq", h});
  LogRational bound = nef_degree_lower_bound(2, 2);
  rec.check("deg E meets the nef degree bound with equality", CheckMethod::consequence, degree(e) == bound,
            str(bound));

  // o_K' (x) o_K' = o_K' + o_K', x (x) y -> (xy, x sigma(y))
  RelQuad m00 = u1, m01 = u1.sigma(), m10 = u2, m11 = u2.sigma();
  RelQuad det = m00 * m11 - m01 * m10;
  QuadElem rel = (det * det.sigma()).x();
  rec.check("decomposition matrix has unit determinant", CheckMethod::exact,
            (det * det.sigma()).in_base() && rel.norm() == 1 && rel.is_integral(), det.to_string("i"));
  bool form = true;
  const RelQuad half = lift(i, QuadElem(k, Rational(1, 2)));
  const RelQuad rows[2][2] = {{m00, m01}, {m10, m11}};
  for (size_t a = 0; a < 2; ++a)
    for (size_t b = 0; b < 2; ++b) {
      RelQuad v = half * (rows[a][0].conj() * rows[b][0] + rows[a][1].conj() * rows[b][1]);
      form = form && v == lift(i, g(a, b));
    }
  rec.check("o_K' over o_K' splits as two lines with norm |z|^2 / 2", CheckMethod::exact, form, "");
  LogRational piece = -kLog2 * Rational(2);
  rec.check("pull-back degree 2 deg E = sum of two pieces of degree -2 log 2", CheckMethod::exact,
            degree(e) * Rational(2) == piece * Rational(2), str(piece));
  report.notes.push_back(
      "each piece of E over o_K' has generator norm^2 = 2: the twist <-log 2> in the normalization of K, "
      "<-2 log 2> in that of K'");

  LogRational u1deg = rank_one_degree(ok, KVector{one, zero});
  rec.check("o_K (1 + sqrt p)/2 has degree -log((p + 1)/4)", CheckMethod::exact,
            u1deg == -log_of_rational(Rational(p + 1, 4)), str(u1deg));
  report.values.push_back({"rank-one deg", u1deg});

  std::mt19937_64 rng(options.seed);
  LogRational best = rank_one_degree(ok, KVector{zero, one});
  bool nonpos = true;
  for (size_t s = 0; s < options.samples; ++s) {
    KVector v{random_integer(rng, k, 4), random_integer(rng, k, 4)};
    if (s % 3 == 0) v[s % 2] = zero;
    LogRational dv = rank_one_degree(ok, v);
    nonpos = nonpos && dv <= LogRational(0);
    best = max(best, dv);
  }
  rec.check("sampled rank-one sublattices of o_K' have degree <= 0", CheckMethod::consequence,
            nonpos && best.is_zero(), "max " + str(best));
  rec.check("E is semistable: rank-one degrees of the dual stay below its slope", CheckMethod::consequence,
            best < slope(ok), "slope " + str(slope(ok)));

  bool sixteen = true;
  Rational tightest = -1;
  for (size_t s = 0; s < options.samples; ++s) {
    RelQuad a = lift(i, random_integer(rng, k, 3)) * u1 + lift(i, random_integer(rng, k, 3)) * u2;
    RelQuad b = lift(i, random_integer(rng, k, 3)) * u1 + lift(i, random_integer(rng, k, 3)) * u2;
    if (s % 4 == 0) a = a * sqrtp;
    RelQuad sq = a * a.conj() + b * b.conj();
    RelQuad prod = sq * sq.sigma();
    RelQuad ab = a * b;
    QuadElem nab_rel = (ab * ab.sigma()).x();
    if (!prod.in_base() || !prod.x().is_rational()) {
      sixteen = false;
      break;
    }
    Rational total = prod.x().a() * prod.x().a();
    Rational nab = nab_rel.norm();
    sixteen = sixteen && total >= 16 * nab && nab >= 1;
    if (tightest < 0 || total < tightest) tightest = total;
  }
  rec.check("prod over embeddings of |a|^2 + |b|^2 >= 16 N(ab) >= 16", CheckMethod::consequence, sixteen,
            std::to_string(options.samples) + " samples, smallest product " + str(tightest));
  report.notes.push_back("nef is not certified; checks labelled consequence verify finitely many implications");
  return report;
}

}  // namespace slopekit
