#include "slopekit/inequality.hpp"

namespace slopekit {

bool InequalityReport::all_hold() const {
  for (const auto& c : checks)
    if (!c.holds) return false;
  return true;
}

std::vector<const InequalityCheck*> InequalityReport::violations() const {
  std::vector<const InequalityCheck*> out;
  for (const auto& c : checks)
    if (!c.holds) out.push_back(&c);
  return out;
}

namespace {

void add(InequalityReport& r, std::string label, std::string statement, const LogRational& lhs,
         const LogRational& rhs, bool certified, std::string witness) {
  r.checks.push_back(InequalityCheck{std::move(label), std::move(statement), lhs, rhs, lhs <= rhs, certified,
                                     std::move(witness)});
}

}  // namespace

InequalityReport inequality_suite(const std::string& kind, const SlopeData& a, const SlopeData& b,
                                  const SlopeData& t) {
  InequalityReport r;
  r.kind = kind;
  const bool all = a.certified && b.certified && t.certified;
  add(r, "lemma", "nu(" + t.name + ") <= mu_max(" + a.name + ") + mu_max(" + b.name + ")", t.nu,
      a.mu_max + b.mu_max, a.certified && b.certified, t.nu_witness);
  for (const SlopeData* x : {&a, &b, &t}) {
    add(r, "rhonu", "mu(" + x->name + ") <= nu(" + x->name + ") + rho", x->mu, x->nu + x->rho, true,
        x->nu_witness);
    add(r, "rhonumax", "mu_max(" + x->name + ") <= nu(" + x->name + ") + rho", x->mu_max, x->nu + x->rho,
        x->certified, x->mu_max_witness);
  }
  add(r, "mumaxrho", "mu_max(" + t.name + ") <= sum of (mu_max + rho)", t.mu_max,
      a.mu_max + a.rho + b.mu_max + b.rho, all, t.mu_max_witness);
  add(r, "superadd", "mu_max(" + a.name + ") + mu_max(" + b.name + ") <= mu_max(" + t.name + ")",
      a.mu_max + b.mu_max, t.mu_max, all, t.mu_max_witness);
  return r;
}

SlopeData lattice_slope_data(const std::string& name, const EuclideanLattice& l, const EnumerationCaps& caps) {
  SlopeData d;
  d.name = name;
  d.rank = l.rank();
  d.mu = slope(l);
  Rational m = minimum_sq(l, caps);
  d.nu = -log_of_rational(m) / Rational(2);
  d.nu_witness = "minimum " + to_string(m);
  CertifiedMuMax mm = mu_max(l, caps);
  d.mu_max = mm.value;
  d.certified = mm.certified;
  d.mu_max_witness = "rank " + std::to_string(mm.witness.rank()) + " " + matrix_to_string(mm.witness.basis());
  d.rho = log_of_rational(Rational(static_cast<long>(l.rank()))) / Rational(2);
  return d;
}

InequalityReport lattice_inequality_suite(const EuclideanLattice& a, const EuclideanLattice& b,
                                          const EnumerationCaps& caps) {
  return inequality_suite("lattice", lattice_slope_data("E1", a, caps), lattice_slope_data("E2", b, caps),
                          lattice_slope_data("E1 (x) E2", tensor(a, b), caps));
}

SlopeData mf_slope_data(const std::string& name, const MultifilteredSpace& m, const MuMaxOptions& options) {
  SlopeData d;
  d.name = name;
  d.rank = m.dim();
  d.mu = slope_faltings(m);
  NuExact nu = nu_exact(m);
  d.nu = nu.value;
  d.nu_witness = "line " + nu.line.to_string();
  MuMaxMf mm = mu_max_mf(m, options);
  d.mu_max = mm.value;
  d.certified = mm.certified;
  d.mu_max_witness = mm.witness.to_string();
  d.rho = 0;
  return d;
}

InequalityReport mf_inequality_suite(const MultifilteredSpace& a, const MultifilteredSpace& b,
                                     const MuMaxOptions& options) {
  MuMaxMf ma = mu_max_mf(a, options), mb = mu_max_mf(b, options);
  MuMaxOptions topt = options;
  QMatrix hint = kronecker(ma.witness.basis(), mb.witness.basis());
  topt.hints.push_back(Subspace::span(hint));
  return inequality_suite("multifiltered", mf_slope_data("M1", a, options), mf_slope_data("M2", b, options),
                          mf_slope_data("M1 (x) M2", tensor_mf(a, b), topt));
}

}  // namespace slopekit
