#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "slopekit/enumeration.hpp"
#include "slopekit/multifilt.hpp"
#include "slopekit/repro.hpp"

namespace slopekit {

struct ExperimentConfig {
  std::uint64_t seed = 1;
  size_t count = 100;
  size_t max_rank = 3;         // per lattice factor
  size_t max_tensor_rank = 6;  // r1 * r2 cap
  size_t max_dim = 3;          // per multifiltered factor
  size_t max_filtrations = 3;
  long entry_bound = 3;
  std::string family = "random";  // random | unimodular
  size_t threads = 1;
  EnumerationCaps caps;

  /// Throws std::invalid_argument when a cap is zero or the family is unknown.
  void validate() const;
  /// Overrides fields from flat TOML; unknown keys are rejected.
  static ExperimentConfig from_toml(const std::string& text);
};

/// Independent stream per (seed, instance, purpose); results do not depend on thread count.
std::mt19937_64 instance_rng(std::uint64_t seed, std::uint64_t index, std::uint64_t stream = 0);

/// Gram B B^T for a random invertible integer B with entries in [-entry_bound, entry_bound].
EuclideanLattice random_lattice(const ExperimentConfig& config, size_t rank, std::mt19937_64& rng);
/// Seeded from config.seed with rank config.max_rank.
EuclideanLattice random_lattice(const ExperimentConfig& config);
/// Gram B B^T for a random B in GL_r(Z).
EuclideanLattice random_unimodular_lattice(size_t rank, long entry_bound, std::mt19937_64& rng);

/// Each filtration comes from an invertible adapted basis with entries in [-1, 1] and breaks
/// p/q, |p| <= entry_bound, q in {1, 2}.
MultifilteredSpace random_mf(const ExperimentConfig& config, size_t dim, size_t n, std::mt19937_64& rng);

struct GapRecord {
  size_t index = 0;
  EuclideanLattice e1 = EuclideanLattice::unit(1);
  EuclideanLattice e2 = EuclideanLattice::unit(1);
  LogRational mu_max1, mu_max2, mu_max_tensor;
  LogRational rho1, rho2;          // 1/2 log rank
  size_t witness_rank = 0;         // rank s of the tensor's maximal destabilizing sublattice
  LogRational hermite;             // 1/2 log gamma_s
  LogRational gap;                 // sum (mu_max + rho) - mu_max(tensor)
  LogRational gap_hermite;         // sum mu_max + hermite - mu_max(tensor)
  LogRational residual;            // mu_max(tensor) - sum mu_max
  bool certified = false;
  std::string note;
};

struct BostSummary {
  size_t count = 0;
  size_t certified = 0;
  size_t gap_violations = 0;       // certified records with gap < 0
  size_t hermite_violations = 0;
  size_t residual_violations = 0;  // certified records with residual < 0
  size_t zero_residuals = 0;
  std::optional<LogRational> max_gap, min_gap, max_residual;
  std::vector<size_t> uncertified;
};

struct BostReport {
  ExperimentConfig config;
  std::vector<GapRecord> records;
  BostSummary summary;

  bool passed() const;
};

GapRecord bost_instance(const ExperimentConfig& config, size_t index);
BostReport bost_experiment(const ExperimentConfig& config);

/// Aggregate of the multigraded pieces against the Faltings slope, every permutation, on
/// `samples` spaces with dim <= 5 and n <= 3.
ReproReport repro_mf_lemma(const ReproOptions& options = {});

struct Thm07Record {
  size_t index = 0;
  MultifilteredSpace m1, m2;
  Rational mu_max1, mu_max2, mu_max_tensor;
  bool certified = false;
  bool equal = false;
  // per object (m1, m2, tensor)
  Rational mu[3], nu[3], graded[3], mu_max[3];
  bool zeronu[3] = {false, false, false};   // nu >= mu
  bool nu_le_mu_max[3] = {false, false, false};
  std::string detail;
};

Thm07Record thm07_instance(const ExperimentConfig& config, size_t index);
/// mu_max(M1 (x) M2) = mu_max(M1) + mu_max(M2) on `samples` random pairs (dim <= 3, n <= 3).
ReproReport repro_thm07(const ReproOptions& options = {}, std::vector<Thm07Record>* records = nullptr);

struct ReproRequest {
  std::string target;  // a2 | q7 | qp | mf-lemma | thm07
  std::uint64_t seed = 7;
  std::optional<size_t> count;
  long p = 13;
  std::optional<std::string> lambda;
  size_t threads = 1;
};

/// Throws std::invalid_argument for an unknown target; ReproFailure from the hermitian targets.
ReproReport run_repro(const ReproRequest& request);

enum class ReportFormat { text, json, csv, svg };
ReportFormat parse_format(const std::string& s);

std::string emit(const ReproReport& report, ReportFormat format);
std::string emit(const BostReport& report, ReportFormat format);
/// Slope polygon: points (rank, max degree), hull vertices highlighted.
std::string polygon_svg(const SlopePolygon& polygon, const std::string& title);

/// Exact form plus a float rendering, e.g. "1/2*log(3/4) (~ -0.143841)".
std::string render(const LogRational& x);

}  // namespace slopekit
