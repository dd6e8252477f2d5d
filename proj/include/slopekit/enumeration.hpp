#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "slopekit/lattice.hpp"

namespace slopekit {

/// Raised when a search exceeds its configured resource limits.
class ResourceCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EnumerationCaps {
  std::uint64_t node_limit = 20'000'000;   // per enumeration call
  std::uint64_t subset_limit = 50'000'000; // per dense-sublattice search
  size_t max_certified_rank = 8;
  bool unimodular_fast_path = true;
};

struct LllResult {
  EuclideanLattice reduced;
  ZMatrix transform;  // rows: reduced basis in input coordinates
};

LllResult lll_reduce(const EuclideanLattice& lattice, const Rational& delta = Rational(3, 4));
bool is_lll_reduced(const QMatrix& gram, const Rational& delta = Rational(3, 4));

struct ShortVector {
  ZVector coords;
  Rational norm_sq;
};

struct ShortVectorReport {
  Rational bound;
  std::vector<ShortVector> vectors;  // up to sign, sorted by norm then coordinates
  std::uint64_t nodes = 0;
};

/// All nonzero vectors of squared length at most `bound`, one per sign pair.
ShortVectorReport enumerate_short_vectors(const EuclideanLattice& lattice, const Rational& bound,
                                          const EnumerationCaps& caps = {});

Rational minimum_sq(const EuclideanLattice& lattice, const EnumerationCaps& caps = {});

/// gamma_r^r for 1 <= r <= 8.
Rational hermite_constant_pow(int r);

struct DenseSublattice {
  Sublattice witness;
  Rational determinant;
  Rational search_bound;  // squared length bound per basis vector
  std::uint64_t candidates = 0;
};

/// Saturated rank-k sublattice of minimal determinant among those with determinant at most `det_budget`.
std::optional<DenseSublattice> densest_sublattice(const std::shared_ptr<const EuclideanLattice>& lattice, size_t k,
                                                  const Rational& det_budget, const EnumerationCaps& caps = {});

struct PolygonPoint {
  size_t rank = 0;
  Rational min_determinant;  // of rank-k sublattices
  LogRational max_degree;
  std::optional<Sublattice> witness;
  Rational search_bound;
};

struct SlopePolygon {
  std::vector<PolygonPoint> points;  // ranks 0..r
  std::vector<size_t> hull;          // indices into points: upper convex hull vertices
  std::vector<Sublattice> filtration;
  std::vector<LogRational> slopes;   // slope of each graded piece, strictly decreasing
  bool certified = true;
  std::string certificate;
};

struct CertifiedMuMax {
  LogRational value;
  Sublattice witness;
  Rational search_bound;
  bool certified = true;
  std::string certificate;
};

/// Maximal degree of rank-k sublattices for every k, with witnesses.
SlopePolygon slope_filtration(const EuclideanLattice& lattice, const EnumerationCaps& caps = {});

CertifiedMuMax mu_max(const EuclideanLattice& lattice, const EnumerationCaps& caps = {});
LogRational mu_min(const EuclideanLattice& lattice, const EnumerationCaps& caps = {});
bool is_semistable(const EuclideanLattice& lattice, const EnumerationCaps& caps = {});

struct MinkowskiReport {
  bool holds = false;              // det >= r^(-r)
  Rational gram_determinant;
  Rational hypercube_bound;        // r^(-r)
  double ball_bound = 0;           // (2^(-r) v_r)^2
  bool ball_check = false;
};

/// Requires minimum_sq >= 1; throws std::invalid_argument otherwise.
MinkowskiReport minkowski_check(const EuclideanLattice& lattice, const EnumerationCaps& caps = {});

}  // namespace slopekit
