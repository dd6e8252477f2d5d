#pragma once

#include <string>
#include <vector>

#include "slopekit/enumeration.hpp"
#include "slopekit/exactval.hpp"
#include "slopekit/multifilt.hpp"

namespace slopekit {

/// Invariants of one object, as consumed by the inequality suite.
struct SlopeData {
  std::string name;
  size_t rank = 0;
  LogRational mu;
  LogRational nu;      // sup of degrees of rank-one subobjects
  LogRational mu_max;
  LogRational rho;     // correction term
  bool certified = false;
  std::string nu_witness;
  std::string mu_max_witness;
};

struct InequalityCheck {
  std::string label;
  std::string statement;
  LogRational lhs;
  LogRational rhs;
  bool holds = false;  // lhs <= rhs
  bool certified = false;
  std::string witness;
};

struct InequalityReport {
  std::string kind;
  std::vector<InequalityCheck> checks;

  bool all_hold() const;
  std::vector<const InequalityCheck*> violations() const;
};

/// Generic driver for factors a, b and their tensor product t:
///   lemma:     nu(t) <= mu_max(a) + mu_max(b)
///   rhonu:     mu(x) <= nu(x) + rho(x)            for x in a, b, t
///   rhonumax:  mu_max(x) <= nu(x) + rho(x)        for x in a, b, t
///   mumaxrho:  mu_max(t) <= sum of mu_max + rho
///   superadd:  mu_max(a) + mu_max(b) <= mu_max(t)
InequalityReport inequality_suite(const std::string& kind, const SlopeData& a, const SlopeData& b,
                                  const SlopeData& t);

/// rho = 1/2 log rank; nu from the shortest vector.
SlopeData lattice_slope_data(const std::string& name, const EuclideanLattice& l, const EnumerationCaps& caps = {});
InequalityReport lattice_inequality_suite(const EuclideanLattice& a, const EuclideanLattice& b,
                                          const EnumerationCaps& caps = {});

/// rho = 0; nu exact over all step choices.
SlopeData mf_slope_data(const std::string& name, const MultifilteredSpace& m, const MuMaxOptions& options = {});
InequalityReport mf_inequality_suite(const MultifilteredSpace& a, const MultifilteredSpace& b,
                                     const MuMaxOptions& options = {});

}  // namespace slopekit
