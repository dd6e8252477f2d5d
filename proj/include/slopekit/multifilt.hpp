#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "slopekit/subspace.hpp"

namespace slopekit {

struct FiltrationStep {
  Rational lambda;
  Subspace space;  // F^{>= lambda}
};

/// Decreasing, exhaustive, separated, left-continuous filtration with rational breaks.
/// F^{>= l} is the space of the first step whose label is >= l, and 0 past the last label.
/// Stored canonically: labels strictly increasing, spaces strictly decreasing and nonzero,
/// first space the whole ambient space.
class Filtration {
 public:
  Filtration() = default;
  /// Throws unless labels strictly increase, spaces weakly decrease and the first one is everything.
  Filtration(size_t ambient, std::vector<FiltrationStep> steps);

  /// One break at `lambda` for the whole space.
  static Filtration trivial(size_t ambient, const Rational& lambda = 0);
  /// F^{>= l} = span of the rows whose break is >= l; rows must form a basis.
  static Filtration from_adapted_basis(const QMatrix& rows, const std::vector<Rational>& breaks);

  size_t ambient_dim() const { return ambient_; }
  const std::vector<FiltrationStep>& steps() const { return steps_; }

  Subspace at(const Rational& lambda) const;     // F^{>= lambda}
  Subspace above(const Rational& lambda) const;  // F^{> lambda}

  /// (break, dim gr) for every break, increasing.
  std::vector<std::pair<Rational, size_t>> graded_dims() const;
  /// Basis adapted to every step, with the break of each vector.
  std::pair<QMatrix, std::vector<Rational>> adapted_basis() const;
  /// Largest lambda with v in F^{>= lambda}; v nonzero.
  Rational jump(const QVector& v) const;
  /// Sum of lambda * dim gr^lambda of the induced filtration on `n`.
  Rational degree_of(const Subspace& n) const;

  /// Induced filtration, in coordinates of n.basis().
  Filtration restrict_to(const Subspace& n) const;
  /// Quotient filtration, in coordinates given by quotient_map(n).
  Filtration quotient(const Subspace& n) const;
  Filtration shifted(const Rational& c) const;

  friend bool operator==(const Filtration& a, const Filtration& b);

 private:
  size_t ambient_ = 0;
  std::vector<FiltrationStep> steps_;
};

/// Finite-dimensional Q-vector space with an ordered list of filtrations.
class MultifilteredSpace {
 public:
  MultifilteredSpace() = default;
  MultifilteredSpace(size_t dim, std::vector<Filtration> filtrations);

  /// Dimension 1, `n` filtrations with all breaks 0.
  static MultifilteredSpace unit(size_t n);

  size_t dim() const { return dim_; }
  size_t n_filtrations() const { return filtrations_.size(); }
  const Filtration& filtration(size_t v) const { return filtrations_.at(v); }
  const std::vector<Filtration>& filtrations() const { return filtrations_; }

  /// mu * dim = sum over v, lambda of lambda * dim gr.
  Rational degree() const;
  Rational degree_of(const Subspace& n) const;
  /// Slope of `n` with induced filtrations; n nonzero.
  Rational slope_of(const Subspace& n) const;

  MultifilteredSpace restrict_to(const Subspace& n) const;
  MultifilteredSpace quotient(const Subspace& n) const;
  /// Filtrations reordered: result filtration i is filtration order[i].
  MultifilteredSpace permuted(const std::vector<size_t>& order) const;

  friend bool operator==(const MultifilteredSpace& a, const MultifilteredSpace& b) {
    return a.dim_ == b.dim_ && a.filtrations_ == b.filtrations_;
  }

 private:
  size_t dim_ = 0;
  std::vector<Filtration> filtrations_;
};

/// (1/dim) sum_{v, lambda} lambda dim gr_{F_v}^lambda; throws on the zero space.
Rational slope_faltings(const MultifilteredSpace& m);

using MultiIndex = std::vector<Rational>;

/// Iterated graded pieces: grade by the last filtration first, then induce the others on
/// each piece, recursively. Keys are (lambda_1, ..., lambda_n); only nonzero pieces appear.
std::map<MultiIndex, size_t> multigraded_dims(const MultifilteredSpace& m);
/// (1/dim) sum (lambda_1 + ... + lambda_n) dim; equals slope_faltings.
Rational multigraded_aggregate(const std::map<MultiIndex, size_t>& dims);

struct NuWitness {
  Rational value;            // maximal lambda-sum over nonzero multigraded pieces
  MultiIndex index;          // the piece realizing it (first in key order)
  Subspace line;             // line of a lifted representative of that piece
  Rational line_slope;       // actual slope of that line
  bool lift_attains = false; // line_slope == value
  bool intersection_nonzero = false;  // F_1^{>= l_1} ^ ... ^ F_n^{>= l_n} != 0
};

/// Witness line from the top multigraded piece. The lifted line always has slope at most
/// `value`; equality can fail once there are three or more filtrations.
NuWitness nu_witness(const MultifilteredSpace& m);

struct NuExact {
  Rational value;              // sup of slopes of lines
  std::vector<size_t> steps;   // chosen step index per filtration
  Subspace intersection;       // intersection of the chosen steps
  Subspace line;               // a line inside it
};

/// Exact nu: the maximum over step choices with nonzero intersection of the label sum.
NuExact nu_exact(const MultifilteredSpace& m);

struct MuMaxOptions {
  std::uint64_t seed = 1;
  size_t random_candidates = 24;
  size_t closure_limit = 160;
  std::vector<Subspace> hints;  // extra lower-bound candidates
};

struct RankBound {
  size_t rank = 0;
  Rational best;         // best slope among candidates of this rank (if any)
  bool has_candidate = false;
  Rational profile;      // per-filtration profile relaxation
  std::string method;    // how the final bound for this rank was established
  bool below = false;    // no rank-k subspace beats the lower bound
  bool strictly_below = false;  // no rank-k subspace reaches it
};

struct MuMaxMf {
  Rational value;          // best slope found (a lower bound, exact when certified)
  Subspace witness;        // largest candidate attaining `value`
  bool certified = false;  // no subspace has larger slope
  bool maximal = false;    // additionally no larger-dimensional subspace attains `value`
  std::vector<RankBound> ranks;
  size_t candidates = 0;
  std::string certificate;
};

/// Largest slope of a nonzero subspace with induced filtrations.
/// Lower bound: steps, their closure under sum and intersection, hints and seeded random
/// subspaces. Upper bound per rank k: the profile relaxation, then the exact top line degree
/// of the k-th exterior power (of the dual for k > dim/2), since wedge^k N is a line there
/// with the same degree.
MuMaxMf mu_max_mf(const MultifilteredSpace& m, const MuMaxOptions& options = {});

/// Per filtration index: F^{>= l}(M1 (x) M2) = sum_{l1 + l2 >= l} F^{l1} M1 (x) F^{l2} M2.
/// Coordinates: e_i (x) f_j has index i * dim2 + j.
MultifilteredSpace tensor_mf(const MultifilteredSpace& a, const MultifilteredSpace& b);
/// F^{>= l}(M^dual) = annihilator of F^{> -l}(M).
MultifilteredSpace dual_mf(const MultifilteredSpace& m);
/// Coordinates indexed by increasing k-subsets in lexicographic order.
MultifilteredSpace exterior_power_mf(const MultifilteredSpace& m, size_t k);
MultifilteredSpace direct_sum_mf(const MultifilteredSpace& a, const MultifilteredSpace& b);

struct MfSlopeFiltration {
  std::vector<Subspace> chain;  // 0 < N_1 < ... < N_s = M
  std::vector<Rational> slopes; // of N_i / N_{i-1}, strictly decreasing when certified
  bool certified = false;
  std::string detail;
};

/// Iterated maximal destabilizing subspaces; stops with certified = false at the first
/// stage whose mu_max is not certified maximal.
MfSlopeFiltration slope_filtration_mf(const MultifilteredSpace& m, const MuMaxOptions& options = {});

}  // namespace slopekit
