#include "slopekit/enumeration.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace slopekit {

namespace {

// Nearest integer; zero when |q| <= 1/2 so already size-reduced bases are left alone.
Integer round_nearest(const Rational& q) {
  if (abs(q) <= Rational(1, 2)) return 0;
  Rational h = q + Rational(1, 2);
  Integer f;
  mpz_fdiv_q(f.get_mpz_t(), h.get_num_mpz_t(), h.get_den_mpz_t());
  return f;
}

struct Gso {
  QMatrix mu;
  QVector b;  // squared lengths of the orthogonalized vectors
};

Gso gram_schmidt(const QMatrix& g) {
  const size_t n = g.rows();
  Gso out{QMatrix(n, n, Rational(0)), QVector(n)};
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < i; ++j) {
      Rational s = g(i, j);
      for (size_t l = 0; l < j; ++l) s -= out.mu(j, l) * out.mu(i, l) * out.b[l];
      out.mu(i, j) = s / out.b[j];
    }
    Rational s = g(i, i);
    for (size_t l = 0; l < i; ++l) s -= out.mu(i, l) * out.mu(i, l) * out.b[l];
    out.b[i] = s;
    out.mu(i, i) = 1;
  }
  return out;
}

// b_k <- b_k - q b_j on a Gram matrix and the basis transform
void reduce_row(QMatrix& g, ZMatrix& t, size_t k, size_t j, const Integer& q) {
  const size_t n = g.rows();
  Rational qq(q);
  for (size_t c = 0; c < n; ++c) g(k, c) -= qq * g(j, c);
  for (size_t r = 0; r < n; ++r) g(r, k) -= qq * g(r, j);
  for (size_t c = 0; c < t.cols(); ++c) t(k, c) -= q * t(j, c);
}

void swap_basis(QMatrix& g, ZMatrix& t, size_t a, size_t b) {
  g.swap_rows(a, b);
  g.swap_cols(a, b);
  t.swap_rows(a, b);
}

// Canonical sign: first nonzero coordinate positive.
void normalize_sign(ZVector& v) {
  for (const auto& x : v) {
    if (x == 0) continue;
    if (x < 0)
      for (auto& y : v) y = -y;
    return;
  }
}

bool lex_less(const ZMatrix& a, const ZMatrix& b) {
  return std::lexicographical_compare(a.data().begin(), a.data().end(), b.data().begin(), b.data().end());
}

}  // namespace

LllResult lll_reduce(const EuclideanLattice& lattice, const Rational& delta) {
  const size_t n = lattice.rank();
  QMatrix g = lattice.gram();
  ZMatrix t = ZMatrix::identity(n);
  size_t k = 1;
  while (k < n) {
    Gso gso = gram_schmidt(g);
    Integer q = round_nearest(gso.mu(k, k - 1));
    if (q != 0) {
      reduce_row(g, t, k, k - 1, q);
      gso = gram_schmidt(g);
    }
    Rational m = gso.mu(k, k - 1);
    if (gso.b[k] < (delta - m * m) * gso.b[k - 1]) {
      swap_basis(g, t, k, k - 1);
      k = std::max<size_t>(k - 1, 1);
      continue;
    }
    for (size_t j = k - 1; j-- > 0;) {
      Integer qj = round_nearest(gso.mu(k, j));
      if (qj == 0) continue;
      reduce_row(g, t, k, j, qj);
      gso = gram_schmidt(g);
    }
    ++k;
  }
  return LllResult{EuclideanLattice(std::move(g)), std::move(t)};
}

bool is_lll_reduced(const QMatrix& gram, const Rational& delta) {
  Gso gso = gram_schmidt(gram);
  const size_t n = gram.rows();
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < i; ++j)
      if (abs(gso.mu(i, j)) > Rational(1, 2)) return false;
  for (size_t k = 1; k < n; ++k) {
    Rational m = gso.mu(k, k - 1);
    if (gso.b[k] < (delta - m * m) * gso.b[k - 1]) return false;
  }
  return true;
}

namespace {

// Fincke-Pohst traversal of q(x) = sum_i d_i (x_i + sum_{j>i} u_ij x_j)^2 <= bound.
class ShortVectorSearch {
 public:
  ShortVectorSearch(const QMatrix& gram, const Rational& bound, std::uint64_t node_limit)
      : n_(gram.rows()), q_(gram), bound_(bound), node_limit_(node_limit), x_(n_, 0) {
    for (size_t i = 0; i < n_; ++i) {
      for (size_t j = i + 1; j < n_; ++j) {
        q_(j, i) = q_(i, j);
        q_(i, j) /= q_(i, i);
      }
      for (size_t k = i + 1; k < n_; ++k)
        for (size_t l = k; l < n_; ++l) q_(k, l) -= q_(k, i) * q_(i, l);
    }
  }

  std::vector<std::pair<ZVector, Rational>> run() {
    descend(n_ - 1, bound_, true);
    return std::move(found_);
  }

  std::uint64_t nodes() const { return nodes_; }

 private:
  // Integers x with d (x + c)^2 <= remaining.
  bool fits(const Integer& x, const Rational& c, const Rational& r) const {
    Rational y = x + c;
    return y * y <= r;
  }

  void descend(size_t i, const Rational& remaining, bool all_zero_above) {
    Rational c = 0;
    for (size_t j = i + 1; j < n_; ++j)
      if (x_[j] != 0) c += q_(i, j) * x_[j];
    Rational r = remaining / q_(i, i);
    double center = -c.get_d();
    double radius = std::sqrt(std::max(0.0, r.get_d()));
    Integer lo(std::ceil(center - radius)), hi(std::floor(center + radius));
    while (fits(lo - 1, c, r)) --lo;
    while (lo <= hi && !fits(lo, c, r)) ++lo;
    while (fits(hi + 1, c, r)) ++hi;
    while (hi >= lo && !fits(hi, c, r)) --hi;
    if (all_zero_above && lo < 0) lo = 0;
    for (Integer v = lo; v <= hi; ++v) {
      if (++nodes_ > node_limit_) throw ResourceCapExceeded("short vector enumeration exceeded node limit");
      x_[i] = v;
      Rational y = v + c;
      Rational rest = remaining - q_(i, i) * y * y;
      bool zero = all_zero_above && v == 0;
      if (i == 0) {
        if (!zero) found_.emplace_back(x_, bound_ - rest);
      } else {
        descend(i - 1, rest, zero);
      }
    }
    x_[i] = 0;
  }

  size_t n_;
  QMatrix q_;
  Rational bound_;
  std::uint64_t node_limit_;
  std::uint64_t nodes_ = 0;
  ZVector x_;
  std::vector<std::pair<ZVector, Rational>> found_;
};

}  // namespace

ShortVectorReport enumerate_short_vectors(const EuclideanLattice& lattice, const Rational& bound,
                                          const EnumerationCaps& caps) {
  if (sgn(bound) <= 0) throw std::invalid_argument("enumeration bound must be positive");
  LllResult lll = lll_reduce(lattice);
  ShortVectorSearch search(lll.reduced.gram(), bound, caps.node_limit);
  auto raw = search.run();
  ShortVectorReport report;
  report.bound = bound;
  report.nodes = search.nodes();
  const size_t n = lattice.rank();
  report.vectors.reserve(raw.size());
  for (auto& [x, norm] : raw) {
    ZVector v(n, 0);
    for (size_t i = 0; i < n; ++i) {
      if (x[i] == 0) continue;
      for (size_t j = 0; j < n; ++j) v[j] += x[i] * lll.transform(i, j);
    }
    normalize_sign(v);
    report.vectors.push_back({std::move(v), norm});
  }
  std::sort(report.vectors.begin(), report.vectors.end(), [](const ShortVector& a, const ShortVector& b) {
    if (a.norm_sq != b.norm_sq) return a.norm_sq < b.norm_sq;
    return a.coords < b.coords;
  });
  return report;
}

Rational minimum_sq(const EuclideanLattice& lattice, const EnumerationCaps& caps) {
  LllResult lll = lll_reduce(lattice);
  Rational bound = lll.reduced.gram()(0, 0);
  for (size_t i = 1; i < lattice.rank(); ++i) bound = std::min(bound, Rational(lll.reduced.gram()(i, i)));
  ShortVectorReport rep = enumerate_short_vectors(lattice, bound, caps);
  return rep.vectors.front().norm_sq;
}

Rational hermite_constant_pow(int r) {
  static const Rational table[] = {Rational(1), Rational(4, 3), Rational(2), Rational(4),
                                   Rational(8), Rational(64, 3), Rational(64), Rational(256)};
  if (r < 1 || r > 8) throw std::out_of_range("Hermite constant known only for ranks 1..8");
  return table[r - 1];
}

namespace {

// All tied minimal saturated sublattices, keyed by HNF.
struct DenseSearchResult {
  Rational best;
  std::map<std::vector<Integer>, ZMatrix> ties;  // hnf data -> hnf
  Rational bound;
  std::uint64_t candidates = 0;
};

class DenseSearch {
 public:
  DenseSearch(const std::shared_ptr<const EuclideanLattice>& lattice, size_t k, const Rational& budget,
              const EnumerationCaps& caps)
      : lattice_(lattice), k_(k), caps_(caps) {
    result_.best = budget;
    Integer pow2 = 1;
    pow2 <<= static_cast<mp_bitcnt_t>(k * (k - 1) / 2);
    hermite_factor_ = pow2;
    Rational m = minimum_sq(*lattice, caps);
    Rational mpow = 1;
    for (size_t i = 1; i < k; ++i) mpow *= m;
    result_.bound = hermite_factor_ * budget / mpow;
    ShortVectorReport rep = enumerate_short_vectors(*lattice, result_.bound, caps);
    vectors_ = std::move(rep.vectors);
    const QMatrix& g = lattice->gram();
    const size_t r = lattice->rank();
    images_.resize(vectors_.size());
    for (size_t t = 0; t < vectors_.size(); ++t) {
      images_[t].assign(r, Rational(0));
      for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < r; ++j)
          if (vectors_[t].coords[j] != 0) images_[t][i] += g(i, j) * vectors_[t].coords[j];
    }
  }

  DenseSearchResult run() {
    chosen_.clear();
    bstar_.clear();
    mu_.clear();
    extend(0, Rational(1));
    return std::move(result_);
  }

 private:
  Rational inner(size_t a, size_t b) const {
    Rational s = 0;
    const ZVector& v = vectors_[b].coords;
    for (size_t i = 0; i < v.size(); ++i)
      if (v[i] != 0) s += images_[a][i] * v[i];
    return s;
  }

  void extend(size_t start, const Rational& norm_product) {
    const size_t depth = chosen_.size();
    if (depth == k_) {
      leaf();
      return;
    }
    const size_t remaining = k_ - depth;
    for (size_t t = start; t + remaining <= vectors_.size(); ++t) {
      Rational limit = hermite_factor_ * result_.best;
      Rational p = norm_product;
      for (size_t i = 0; i < remaining; ++i) p *= vectors_[t].norm_sq;
      if (p > limit) break;
      if (++result_.candidates > caps_.subset_limit)
        throw ResourceCapExceeded("dense sublattice search exceeded subset limit");
      // Gram-Schmidt against the chosen vectors
      std::vector<Rational> mu(depth);
      Rational b = vectors_[t].norm_sq;
      for (size_t l = 0; l < depth; ++l) {
        Rational s = inner(chosen_[l], t);
        for (size_t m = 0; m < l; ++m) s -= mu_[l][m] * mu[m] * bstar_[m];
        mu[l] = s / bstar_[l];
        b -= mu[l] * mu[l] * bstar_[l];
      }
      if (sgn(b) == 0) continue;
      chosen_.push_back(t);
      bstar_.push_back(b);
      mu_.push_back(std::move(mu));
      extend(t + 1, norm_product * vectors_[t].norm_sq);
      chosen_.pop_back();
      bstar_.pop_back();
      mu_.pop_back();
    }
  }

  void leaf() {
    Rational det = 1;
    for (const auto& b : bstar_) det *= b;
    if (det > result_.best) return;
    ZMatrix basis(k_, lattice_->rank());
    for (size_t i = 0; i < k_; ++i) basis.set_row(i, vectors_[chosen_[i]].coords);
    Sublattice sat = saturation(Sublattice(lattice_, basis));
    const Rational& d = sat.determinant();
    if (d > result_.best) return;
    if (d < result_.best) {
      result_.best = d;
      result_.ties.clear();
    }
    ZMatrix h = sat.hnf();
    result_.ties.emplace(h.data(), h);
  }

  std::shared_ptr<const EuclideanLattice> lattice_;
  size_t k_;
  EnumerationCaps caps_;
  Rational hermite_factor_;
  std::vector<ShortVector> vectors_;
  std::vector<QVector> images_;
  std::vector<size_t> chosen_;
  std::vector<Rational> bstar_;
  std::vector<std::vector<Rational>> mu_;
  DenseSearchResult result_;
};

std::optional<DenseSublattice> pick(const std::shared_ptr<const EuclideanLattice>& lattice,
                                    const DenseSearchResult& res) {
  if (res.ties.empty()) return std::nullopt;
  const ZMatrix& h = res.ties.begin()->second;
  return DenseSublattice{Sublattice(lattice, h), res.best, res.bound, res.candidates};
}

}  // namespace

std::optional<DenseSublattice> densest_sublattice(const std::shared_ptr<const EuclideanLattice>& lattice, size_t k,
                                                  const Rational& det_budget, const EnumerationCaps& caps) {
  const size_t r = lattice->rank();
  if (k < 1 || k > r) throw std::out_of_range("sublattice rank out of range");
  if (sgn(det_budget) <= 0) return std::nullopt;
  if (k == r) {
    if (lattice->gram_determinant() > det_budget) return std::nullopt;
    Sublattice full(lattice, ZMatrix::identity(r));
    return DenseSublattice{full, lattice->gram_determinant(), Rational(0), 0};
  }
  if (2 * k <= r) {
    DenseSearch search(lattice, k, det_budget, caps);
    return pick(lattice, search.run());
  }
  // rank-k sublattices S correspond to saturated rank-(r-k) sublattices S' of the dual, det S = det S' det L
  auto dual_lattice = std::make_shared<const EuclideanLattice>(dual(*lattice));
  DenseSearch search(dual_lattice, r - k, det_budget / lattice->gram_determinant(), caps);
  DenseSearchResult res = search.run();
  if (res.ties.empty()) return std::nullopt;
  std::optional<ZMatrix> best;
  for (const auto& [key, h] : res.ties) {
    ZMatrix primal = hermite_normal_form(integer_kernel(h));
    if (!best || lex_less(primal, *best)) best = primal;
  }
  Sublattice witness(lattice, *best);
  Rational expected = res.best * lattice->gram_determinant();
  if (witness.determinant() != expected) throw std::logic_error("duality of dense sublattices violated");
  return DenseSublattice{witness, expected, res.bound, res.candidates};
}

namespace {

LogRational segment_slope(const PolygonPoint& a, const PolygonPoint& b) {
  return (b.max_degree - a.max_degree) / Rational(static_cast<long>(b.rank - a.rank));
}

SlopePolygon semistable_polygon(const std::shared_ptr<const EuclideanLattice>& lattice, const std::string& why) {
  SlopePolygon poly;
  const size_t r = lattice->rank();
  poly.points.push_back(PolygonPoint{0, Rational(1), LogRational(0), std::nullopt, Rational(0)});
  Sublattice full(lattice, ZMatrix::identity(r));
  poly.points.push_back(PolygonPoint{r, lattice->gram_determinant(), degree(*lattice), full, Rational(0)});
  poly.hull = {0, 1};
  poly.filtration.push_back(full);
  poly.slopes.push_back(slope(*lattice));
  poly.certificate = why;
  return poly;
}

}  // namespace

SlopePolygon slope_filtration(const EuclideanLattice& lattice_in, const EnumerationCaps& caps) {
  auto lattice = std::make_shared<const EuclideanLattice>(lattice_in);
  const size_t r = lattice->rank();
  if (caps.unimodular_fast_path && is_unimodular(*lattice)) {
    return semistable_polygon(lattice, "integral unimodular: every sublattice has integral positive determinant");
  }
  SlopePolygon poly;
  poly.points.push_back(PolygonPoint{0, Rational(1), LogRational(0), std::nullopt, Rational(0)});
  LllResult lll = lll_reduce(*lattice);
  std::string cert = "per-rank minimal determinants by exhaustive search under the reduction bound;";
  for (size_t k = 1; k <= r; ++k) {
    // the LLL prefix is an attainable budget
    Rational budget = determinant(lll.reduced.gram().block(0, 0, k, k));
    std::optional<DenseSublattice> best;
    try {
      best = densest_sublattice(lattice, k, budget, caps);
    } catch (const ResourceCapExceeded& e) {
      poly.certified = false;
      cert += " rank " + std::to_string(k) + ": " + e.what() + ";";
      ZMatrix prefix = lll.transform.block(0, 0, k, r);
      Sublattice s(lattice, prefix);
      Sublattice sat = saturation(s);
      poly.points.push_back(PolygonPoint{k, sat.determinant(), degree(sat), sat, Rational(0)});
      continue;
    }
    if (!best) throw std::logic_error("dense sublattice search missed an attainable budget");
    cert += " rank " + std::to_string(k) + ": det " + to_string(best->determinant) + " bound " +
            to_string(best->search_bound) + ";";
    poly.points.push_back(
        PolygonPoint{k, best->determinant, degree(best->witness), best->witness, best->search_bound});
  }
  if (r > caps.max_certified_rank) {
    poly.certified = false;
    cert += " rank above certification limit;";
  }
  poly.certificate = cert;

  // upper convex hull, collinear points dropped
  std::vector<size_t> hull;
  for (size_t k = 0; k <= r; ++k) {
    while (hull.size() >= 2) {
      const auto& a = poly.points[hull[hull.size() - 2]];
      const auto& b = poly.points[hull.back()];
      const auto& c = poly.points[k];
      if (segment_slope(a, b) <= segment_slope(b, c)) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(k);
  }
  poly.hull = hull;
  for (size_t i = 1; i < hull.size(); ++i) {
    const auto& pt = poly.points[hull[i]];
    if (!poly.filtration.empty() && !pt.witness->span_contains(poly.filtration.back()))
      throw std::logic_error("canonical filtration witnesses are not nested");
    poly.filtration.push_back(*pt.witness);
    poly.slopes.push_back(segment_slope(poly.points[hull[i - 1]], pt));
  }
  return poly;
}

CertifiedMuMax mu_max(const EuclideanLattice& lattice, const EnumerationCaps& caps) {
  auto shared = std::make_shared<const EuclideanLattice>(lattice);
  if (caps.unimodular_fast_path && is_unimodular(lattice)) {
    return CertifiedMuMax{LogRational(0), Sublattice(shared, ZMatrix::identity(lattice.rank())), Rational(0), true,
                          "integral unimodular"};
  }
  SlopePolygon poly = slope_filtration(lattice, caps);
  Rational bound = 0;
  for (const auto& pt : poly.points) bound = std::max(bound, pt.search_bound);
  const Sublattice& w = poly.filtration.front();
  return CertifiedMuMax{poly.slopes.front(), Sublattice(shared, w.basis()), bound, poly.certified, poly.certificate};
}

LogRational mu_min(const EuclideanLattice& lattice, const EnumerationCaps& caps) {
  return -mu_max(dual(lattice), caps).value;
}

bool is_semistable(const EuclideanLattice& lattice, const EnumerationCaps& caps) {
  return mu_max(lattice, caps).value == slope(lattice);
}

MinkowskiReport minkowski_check(const EuclideanLattice& lattice, const EnumerationCaps& caps) {
  if (minimum_sq(lattice, caps) < 1) throw std::invalid_argument("Minkowski check needs minimum at least 1");
  const long r = static_cast<long>(lattice.rank());
  MinkowskiReport rep;
  rep.gram_determinant = lattice.gram_determinant();
  Integer rr;
  mpz_ui_pow_ui(rr.get_mpz_t(), static_cast<unsigned long>(r), static_cast<unsigned long>(r));
  rep.hypercube_bound = Rational(Integer(1), rr);
  rep.holds = rep.gram_determinant >= rep.hypercube_bound;
  double half = static_cast<double>(r) / 2.0;
  double ball_volume = std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
  double bound = std::ldexp(ball_volume, -static_cast<int>(r));
  rep.ball_bound = bound * bound;
  rep.ball_check = rep.gram_determinant.get_d() >= rep.ball_bound;
  return rep;
}

}  // namespace slopekit
