#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "slopekit/harness.hpp"
#include "slopekit/inequality.hpp"
#include "slopekit/io.hpp"

using namespace slopekit;

namespace {

// exit codes
constexpr int kOk = 0;
constexpr int kFailed = 1;  // an assertion or inequality failed
constexpr int kInput = 2;   // bad input or usage
constexpr int kUncertified = 3;

std::string rstr(const Rational& q) { return to_string(q); }

void write_out(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string sublattice_text(const Sublattice& s) { return matrix_to_string(s.basis()); }

std::string inequality_text(const InequalityReport& r) {
  std::ostringstream o;
  for (const auto& c : r.checks)
    o << "  [" << (c.holds ? "PASS" : "FAIL") << "] " << c.label << ": " << c.statement << "  (" << render(c.lhs)
      << " <= " << render(c.rhs) << ")" << (c.certified ? "" : " [uncertified]")
      << (c.holds ? "" : "  witness: " + c.witness) << "\n";
  return o.str();
}

Json inequality_json(const InequalityReport& r) {
  Json j = Json::array();
  for (const auto& c : r.checks)
    j.push_back({{"label", c.label},
                 {"statement", c.statement},
                 {"lhs", c.lhs.to_string()},
                 {"rhs", c.rhs.to_string()},
                 {"holds", c.holds},
                 {"certified", c.certified},
                 {"witness", c.witness}});
  return j;
}

bool all_certified(const InequalityReport& r) {
  for (const auto& c : r.checks)
    if (!c.certified) return false;
  return true;
}

// lattice commands

int lattice_info(const std::string& file, const EnumerationCaps& caps) {
  EuclideanLattice l = lattice_from_json(read_json_file(file));
  std::cout << "rank = " << l.rank() << "\n";
  std::cout << "gram = " << matrix_to_string(l.gram()) << "\n";
  std::cout << "det = " << rstr(l.gram_determinant()) << "\n";
  std::cout << "degree = " << render(degree(l)) << "\n";
  std::cout << "slope = " << render(slope(l)) << "\n";
  Rational m = minimum_sq(l, caps);
  std::cout << "minimum = " << rstr(m) << "\n";
  std::cout << "integral = " << (is_integral(l) ? "true" : "false") << "\n";
  std::cout << "unimodular = " << (is_unimodular(l) ? "true" : "false") << "\n";
  if (m >= 1) {
    MinkowskiReport mk = minkowski_check(l, caps);
    std::cout << "minkowski det >= r^-r: " << (mk.holds ? "holds" : "FAILS") << "\n";
    if (!mk.holds) return kFailed;
  }
  return kOk;
}

int lattice_mu_max(const std::string& file, const EnumerationCaps& caps, const std::string& format) {
  EuclideanLattice l = lattice_from_json(read_json_file(file));
  CertifiedMuMax mm = mu_max(l, caps);
  if (format == "json") {
    Json j = {{"value", mm.value.to_string()},
              {"approx", mm.value.approx()},
              {"certified", mm.certified},
              {"witness", sublattice_text(mm.witness)},
              {"certificate", mm.certificate}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "mu_max = " << render(mm.value) << "\n";
    std::cout << "witness (rank " << mm.witness.rank() << ") = " << sublattice_text(mm.witness) << "\n";
    std::cout << "certified = " << (mm.certified ? "true" : "false") << "\n";
    std::cout << "certificate: " << mm.certificate << "\n";
  }
  return mm.certified ? kOk : kUncertified;
}

int lattice_filtration(const std::string& file, const EnumerationCaps& caps, const std::string& format,
                       const std::string& output) {
  EuclideanLattice l = lattice_from_json(read_json_file(file));
  SlopePolygon p = slope_filtration(l, caps);
  std::ostringstream o;
  if (format == "svg") {
    o << polygon_svg(p, "slope polygon of " + file);
  } else if (format == "json") {
    Json j;
    j["certified"] = p.certified;
    j["points"] = Json::array();
    for (const auto& pt : p.points)
      j["points"].push_back({{"rank", pt.rank}, {"max_degree", pt.max_degree.to_string()}, {"approx", pt.max_degree.approx()}});
    j["hull"] = p.hull;
    j["filtration"] = Json::array();
    for (const auto& s : p.filtration) j["filtration"].push_back(sublattice_text(s));
    j["slopes"] = Json::array();
    for (const auto& s : p.slopes) j["slopes"].push_back(s.to_string());
    o << j.dump(2) << "\n";
  } else {
    o << "certified = " << (p.certified ? "true" : "false") << "\n";
    for (const auto& pt : p.points) o << "rank " << pt.rank << ": max degree " << render(pt.max_degree) << "\n";
    for (size_t i = 0; i < p.filtration.size(); ++i)
      o << "step " << i + 1 << " (rank " << p.filtration[i].rank() << ", slope " << render(p.slopes[i])
        << "): " << sublattice_text(p.filtration[i]) << "\n";
  }
  write_out(o.str(), output);
  return p.certified ? kOk : kUncertified;
}

int lattice_tensor_check(const std::string& f1, const std::string& f2, const EnumerationCaps& caps,
                         const std::string& format) {
  EuclideanLattice a = lattice_from_json(read_json_file(f1)), b = lattice_from_json(read_json_file(f2));
  InequalityReport r = lattice_inequality_suite(a, b, caps);
  if (format == "json") {
    std::cout << Json{{"kind", r.kind}, {"all_hold", r.all_hold()}, {"checks", inequality_json(r)}}.dump(2) << "\n";
  } else {
    std::cout << "lattice tensor check: " << (r.all_hold() ? "PASS" : "FAIL") << "\n" << inequality_text(r);
  }
  if (!r.all_hold()) return kFailed;
  return all_certified(r) ? kOk : kUncertified;
}

// multifiltered commands

std::string multi_index(const MultiIndex& k) {
  std::string s = "(";
  for (size_t i = 0; i < k.size(); ++i) s += (i ? "," : "") + rstr(k[i]);
  return s + ")";
}

int mf_slope(const std::string& file) {
  MultifilteredSpace m = mf_from_json(read_json_file(file));
  std::cout << "dim = " << m.dim() << ", filtrations = " << m.n_filtrations() << "\n";
  if (m.dim() == 0) return kOk;
  std::cout << "slope = " << rstr(slope_faltings(m)) << "\n";
  auto dims = multigraded_dims(m);
  std::cout << "multigraded pieces:";
  for (const auto& [k, d] : dims) std::cout << " " << multi_index(k) << ":" << d;
  std::cout << "\naggregate = " << rstr(multigraded_aggregate(dims)) << "\n";
  NuWitness w = nu_witness(m);
  std::cout << "top multigraded value = " << rstr(w.value) << " at " << multi_index(w.index) << "; lifted line "
            << w.line.to_string() << " has slope " << rstr(w.line_slope) << "\n";
  NuExact nu = nu_exact(m);
  std::cout << "nu = " << rstr(nu.value) << ", line " << nu.line.to_string() << "\n";
  return kOk;
}

int mf_mu_max(const std::string& file, const MuMaxOptions& opt, const std::string& format) {
  MultifilteredSpace m = mf_from_json(read_json_file(file));
  MuMaxMf r = mu_max_mf(m, opt);
  if (format == "json") {
    Json j = {{"value", rstr(r.value)},
              {"witness", r.witness.to_string()},
              {"certified", r.certified},
              {"maximal", r.maximal},
              {"certificate", r.certificate}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "mu_max = " << rstr(r.value) << "\n";
    std::cout << "witness (dim " << r.witness.dim() << ") = " << r.witness.to_string() << "\n";
    std::cout << "certified = " << (r.certified ? "true" : "false") << ", maximal = " << (r.maximal ? "true" : "false")
              << "\n";
    for (const auto& rb : r.ranks)
      std::cout << "  rank " << rb.rank << ": " << rb.method << (rb.below ? "" : " (bound not met)") << "\n";
  }
  return r.certified ? kOk : kUncertified;
}

int mf_filtration(const std::string& file, const MuMaxOptions& opt) {
  MultifilteredSpace m = mf_from_json(read_json_file(file));
  MfSlopeFiltration f = slope_filtration_mf(m, opt);
  for (size_t i = 0; i < f.chain.size(); ++i)
    std::cout << "step " << i + 1 << " (dim " << f.chain[i].dim() << ", slope " << rstr(f.slopes[i])
              << "): " << f.chain[i].to_string() << "\n";
  std::cout << "certified = " << (f.certified ? "true" : "false") << "\n";
  if (!f.detail.empty()) std::cout << f.detail << "\n";
  return f.certified ? kOk : kUncertified;
}

int mf_tensor_check(const std::string& f1, const std::string& f2, const MuMaxOptions& opt) {
  MultifilteredSpace a = mf_from_json(read_json_file(f1)), b = mf_from_json(read_json_file(f2));
  InequalityReport r = mf_inequality_suite(a, b, opt);
  MuMaxMf ma = mu_max_mf(a, opt), mb = mu_max_mf(b, opt);
  MuMaxOptions topt = opt;
  topt.hints.push_back(Subspace::span(kronecker(ma.witness.basis(), mb.witness.basis())));
  MuMaxMf mt = mu_max_mf(tensor_mf(a, b), topt);
  const bool certified = ma.certified && mb.certified && mt.certified;
  const bool equal = mt.value == ma.value + mb.value;
  std::cout << "mu_max(M1) = " << rstr(ma.value) << ", mu_max(M2) = " << rstr(mb.value)
            << ", mu_max(M1 (x) M2) = " << rstr(mt.value) << (certified ? "" : " [uncertified]") << "\n";
  std::cout << "[" << (equal ? "PASS" : "FAIL") << "] mu_max(M1 (x) M2) = mu_max(M1) + mu_max(M2)\n";
  std::cout << inequality_text(r);
  if (!equal) return kFailed;
  if (!r.all_hold()) return kFailed;
  return certified ? kOk : kUncertified;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"slopekit: degrees, slopes and tensor inequalities for lattices and multifiltered spaces"};
  app.require_subcommand(1);

  EnumerationCaps caps;
  std::string format = "text", output, file1, file2;
  MuMaxOptions mopt;

  auto add_caps = [&](CLI::App* c) {
    c->add_option("--node-limit", caps.node_limit, "enumeration node cap");
    c->add_option("--subset-limit", caps.subset_limit, "dense sublattice search cap");
  };

  auto* lattice = app.add_subcommand("lattice", "euclidean lattices given as JSON {\"gram\": ...} or {\"basis\": ...}");
  lattice->require_subcommand(1);
  auto* l_info = lattice->add_subcommand("info", "rank, determinant, degree, slope, minimum");
  l_info->add_option("file", file1)->required()->check(CLI::ExistingFile);
  add_caps(l_info);
  auto* l_mu = lattice->add_subcommand("mu-max", "certified maximal slope");
  l_mu->add_option("file", file1)->required()->check(CLI::ExistingFile);
  l_mu->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
  add_caps(l_mu);
  auto* l_filt = lattice->add_subcommand("filtration", "canonical slope filtration and polygon");
  l_filt->add_option("file", file1)->required()->check(CLI::ExistingFile);
  l_filt->add_option("--format", format)->check(CLI::IsMember({"text", "json", "svg"}));
  l_filt->add_option("--output,-o", output, "write to a file instead of stdout");
  add_caps(l_filt);
  auto* l_tensor = lattice->add_subcommand("tensor-check", "tensor product inequalities for a pair");
  l_tensor->add_option("file1", file1)->required()->check(CLI::ExistingFile);
  l_tensor->add_option("file2", file2)->required()->check(CLI::ExistingFile);
  l_tensor->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
  add_caps(l_tensor);

  auto* mf = app.add_subcommand("mf", "multifiltered spaces given as JSON");
  mf->require_subcommand(1);
  auto* m_slope = mf->add_subcommand("slope", "slope, multigraded pieces and nu");
  m_slope->add_option("file", file1)->required()->check(CLI::ExistingFile);
  auto* m_mu = mf->add_subcommand("mu-max", "maximal slope with certificate");
  m_mu->add_option("file", file1)->required()->check(CLI::ExistingFile);
  m_mu->add_option("--seed", mopt.seed);
  m_mu->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
  auto* m_filt = mf->add_subcommand("filtration", "canonical slope filtration");
  m_filt->add_option("file", file1)->required()->check(CLI::ExistingFile);
  m_filt->add_option("--seed", mopt.seed);
  auto* m_tensor = mf->add_subcommand("tensor-check", "mu_max additivity and inequalities for a pair");
  m_tensor->add_option("file1", file1)->required()->check(CLI::ExistingFile);
  m_tensor->add_option("file2", file2)->required()->check(CLI::ExistingFile);
  m_tensor->add_option("--seed", mopt.seed);

  ReproRequest req;
  size_t count = 0;
  auto* repro = app.add_subcommand("repro", "reproduce a worked example: a2, q7, qp, mf-lemma, thm07");
  repro->add_option("target", req.target)->required()->check(CLI::IsMember({"a2", "q7", "qp", "mf-lemma", "thm07"}));
  repro->add_option("--seed", req.seed);
  auto* count_opt = repro->add_option("--count", count, "number of random samples");
  repro->add_option("--p", req.p, "prime for qp: 5, 13 or 37");
  repro->add_option("--lambda", req.lambda, "twist parameter, e.g. \"1/2*log(3/2)\"");
  repro->add_option("--threads", req.threads);
  repro->add_option("--format", format)->check(CLI::IsMember({"text", "json", "csv", "svg"}));
  repro->add_option("--output,-o", output);

  ExperimentConfig config;
  std::string config_file;
  auto* bost = app.add_subcommand("bost-experiment", "random tensor pairs against the mu_max upper bound");
  bost->add_option("--config", config_file, "flat TOML experiment config")->check(CLI::ExistingFile);
  auto* b_seed = bost->add_option("--seed", config.seed);
  auto* b_count = bost->add_option("--count", config.count);
  auto* b_family = bost->add_option("--family", config.family)->check(CLI::IsMember({"random", "unimodular"}));
  auto* b_rank = bost->add_option("--max-rank", config.max_rank);
  auto* b_threads = bost->add_option("--threads", config.threads);
  bost->add_option("--format", format)->check(CLI::IsMember({"text", "json", "csv", "svg"}));
  bost->add_option("--output,-o", output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (l_info->parsed()) return lattice_info(file1, caps);
    if (l_mu->parsed()) return lattice_mu_max(file1, caps, format);
    if (l_filt->parsed()) return lattice_filtration(file1, caps, format, output);
    if (l_tensor->parsed()) return lattice_tensor_check(file1, file2, caps, format);
    if (m_slope->parsed()) return mf_slope(file1);
    if (m_mu->parsed()) return mf_mu_max(file1, mopt, format);
    if (m_filt->parsed()) return mf_filtration(file1, mopt);
    if (m_tensor->parsed()) return mf_tensor_check(file1, file2, mopt);
    if (repro->parsed()) {
      if (count_opt->count()) req.count = count;
      ReproReport r;
      try {
        r = run_repro(req);
      } catch (const ReproFailure& e) {
        std::cerr << e.what() << "\n";
        return kFailed;
      }
      write_out(emit(r, parse_format(format)), output);
      return r.passed() ? kOk : kFailed;
    }
    if (bost->parsed()) {
      if (!config_file.empty()) {
        ExperimentConfig from_file = ExperimentConfig::from_toml(read_text_file(config_file));
        // command line flags override the file
        if (!b_seed->count()) config.seed = from_file.seed;
        if (!b_count->count()) config.count = from_file.count;
        if (!b_family->count()) config.family = from_file.family;
        if (!b_rank->count()) config.max_rank = from_file.max_rank;
        if (!b_threads->count()) config.threads = from_file.threads;
        config.max_tensor_rank = from_file.max_tensor_rank;
        config.max_dim = from_file.max_dim;
        config.max_filtrations = from_file.max_filtrations;
        config.entry_bound = from_file.entry_bound;
        config.caps = from_file.caps;
      }
      BostReport r = bost_experiment(config);
      write_out(emit(r, parse_format(format)), output);
      return r.passed() ? kOk : kFailed;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kInput;
}
