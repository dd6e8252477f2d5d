#include "slopekit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "slopekit/io.hpp"

namespace slopekit {

namespace {

// Runs f(0..count-1) on up to `threads` workers; results keep index order.
template <class F>
auto parallel_indexed(size_t count, size_t threads, F f) -> std::vector<decltype(f(size_t{0}))> {
  using R = decltype(f(size_t{0}));
  std::vector<std::optional<R>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < count; i = next++) {
      try {
        slots[i].emplace(f(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  threads = std::max<size_t>(1, std::min(threads, count));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<R> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

long uniform(std::mt19937_64& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

size_t parse_size(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    long long x = std::stoll(v, &pos);
    if (pos != v.size() || x < 0) throw std::invalid_argument(v);
    return static_cast<size_t>(x);
  } catch (const std::exception&) {
    throw std::invalid_argument("config key " + key + ": expected a nonnegative integer, got " + v);
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw std::invalid_argument("config key " + key + ": expected true or false, got " + v);
}

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string str(const Rational& q) { return to_string(q); }

}  // namespace

void ExperimentConfig::validate() const {
  if (count == 0 || max_rank == 0 || max_tensor_rank == 0 || max_dim == 0 || max_filtrations == 0 ||
      entry_bound <= 0 || threads == 0)
    throw std::invalid_argument("experiment caps must be positive");
  if (max_rank > 8) throw std::invalid_argument("max_rank above 8 cannot be certified");
  if (max_tensor_rank > caps.max_certified_rank)
    throw std::invalid_argument("max_tensor_rank exceeds the certified rank limit");
  if (family != "random" && family != "unimodular") throw std::invalid_argument("unknown family " + family);
  if (caps.node_limit == 0 || caps.subset_limit == 0) throw std::invalid_argument("enumeration caps must be positive");
}

ExperimentConfig ExperimentConfig::from_toml(const std::string& text) {
  ExperimentConfig c;
  for (const auto& [key, v] : parse_flat_toml(text)) {
    if (key == "seed") {
      c.seed = parse_size(key, v);
    } else if (key == "count") {
      c.count = parse_size(key, v);
    } else if (key == "max_rank") {
      c.max_rank = parse_size(key, v);
    } else if (key == "max_tensor_rank") {
      c.max_tensor_rank = parse_size(key, v);
    } else if (key == "max_dim") {
      c.max_dim = parse_size(key, v);
    } else if (key == "max_filtrations") {
      c.max_filtrations = parse_size(key, v);
    } else if (key == "entry_bound") {
      c.entry_bound = static_cast<long>(parse_size(key, v));
    } else if (key == "family") {
      c.family = v;
    } else if (key == "threads") {
      c.threads = parse_size(key, v);
    } else if (key == "caps.node_limit") {
      c.caps.node_limit = parse_size(key, v);
    } else if (key == "caps.subset_limit") {
      c.caps.subset_limit = parse_size(key, v);
    } else if (key == "caps.max_certified_rank") {
      c.caps.max_certified_rank = parse_size(key, v);
    } else if (key == "caps.unimodular_fast_path") {
      c.caps.unimodular_fast_path = parse_bool(key, v);
    } else {
      throw std::invalid_argument("unknown config key " + key);
    }
  }
  c.validate();
  return c;
}

std::mt19937_64 instance_rng(std::uint64_t seed, std::uint64_t index, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

EuclideanLattice random_lattice(const ExperimentConfig& config, size_t rank, std::mt19937_64& rng) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    QMatrix b(rank, rank);
    for (size_t i = 0; i < rank; ++i)
      for (size_t j = 0; j < rank; ++j) b(i, j) = uniform(rng, -config.entry_bound, config.entry_bound);
    if (determinant(b) == 0) continue;
    return EuclideanLattice(b * b.transpose());
  }
  throw std::runtime_error("random_lattice: no invertible matrix after 1000 attempts");
}

EuclideanLattice random_lattice(const ExperimentConfig& config) {
  std::mt19937_64 rng = instance_rng(config.seed, 0);
  return random_lattice(config, config.max_rank, rng);
}

EuclideanLattice random_unimodular_lattice(size_t rank, long entry_bound, std::mt19937_64& rng) {
  QMatrix b = QMatrix::identity(rank);
  if (rank > 1) {
    for (size_t step = 0; step < 3 * rank; ++step) {
      size_t i = static_cast<size_t>(uniform(rng, 0, static_cast<long>(rank) - 1));
      size_t j = static_cast<size_t>(uniform(rng, 0, static_cast<long>(rank) - 2));
      if (j >= i) ++j;
      Rational c = uniform(rng, -entry_bound, entry_bound);
      for (size_t k = 0; k < rank; ++k) b(i, k) += c * b(j, k);
    }
  }
  return EuclideanLattice(b * b.transpose());
}

MultifilteredSpace random_mf(const ExperimentConfig& config, size_t dim, size_t n, std::mt19937_64& rng) {
  std::vector<Filtration> fs;
  for (size_t v = 0; v < n; ++v) {
    QMatrix p(dim, dim);
    do {
      for (size_t i = 0; i < dim; ++i)
        for (size_t j = 0; j < dim; ++j) p(i, j) = uniform(rng, -1, 1);
    } while (determinant(p) == 0);
    std::vector<Rational> breaks;
    for (size_t i = 0; i < dim; ++i)
      breaks.push_back(frac(uniform(rng, -config.entry_bound, config.entry_bound), uniform(rng, 1, 2)));
    fs.push_back(Filtration::from_adapted_basis(p, breaks));
  }
  return MultifilteredSpace(dim, std::move(fs));
}

// Bost experiment

bool BostReport::passed() const {
  return summary.uncertified.empty() && summary.gap_violations == 0 && summary.hermite_violations == 0 &&
         summary.residual_violations == 0;
}

GapRecord bost_instance(const ExperimentConfig& config, size_t index) {
  std::mt19937_64 rng = instance_rng(config.seed, index);
  size_t r1, r2;
  do {
    r1 = static_cast<size_t>(uniform(rng, 1, static_cast<long>(config.max_rank)));
    r2 = static_cast<size_t>(uniform(rng, 1, static_cast<long>(config.max_rank)));
  } while (r1 * r2 > config.max_tensor_rank);
  GapRecord g;
  g.index = index;
  if (config.family == "unimodular") {
    g.e1 = random_unimodular_lattice(r1, config.entry_bound, rng);
    g.e2 = random_unimodular_lattice(r2, config.entry_bound, rng);
  } else {
    g.e1 = random_lattice(config, r1, rng);
    g.e2 = random_lattice(config, r2, rng);
  }
  g.rho1 = log_of_rational(Rational(static_cast<long>(r1))) / Rational(2);
  g.rho2 = log_of_rational(Rational(static_cast<long>(r2))) / Rational(2);
  try {
    CertifiedMuMax m1 = mu_max(g.e1, config.caps), m2 = mu_max(g.e2, config.caps);
    CertifiedMuMax mt = mu_max(tensor(g.e1, g.e2), config.caps);
    g.mu_max1 = m1.value;
    g.mu_max2 = m2.value;
    g.mu_max_tensor = mt.value;
    g.certified = m1.certified && m2.certified && mt.certified;
    g.witness_rank = mt.witness.rank();
    const long s = static_cast<long>(g.witness_rank);
    g.hermite = log_of_rational(hermite_constant_pow(static_cast<int>(s))) / Rational(2 * s);
    g.gap = g.mu_max1 + g.rho1 + g.mu_max2 + g.rho2 - g.mu_max_tensor;
    g.gap_hermite = g.mu_max1 + g.mu_max2 + g.hermite - g.mu_max_tensor;
    g.residual = g.mu_max_tensor - g.mu_max1 - g.mu_max2;
    if (!g.certified) g.note = mt.certified ? "factor uncertified" : "tensor uncertified: " + mt.certificate;
  } catch (const ResourceCapExceeded& e) {
    g.certified = false;
    g.note = e.what();
  }
  return g;
}

BostReport bost_experiment(const ExperimentConfig& config) {
  config.validate();
  BostReport r;
  r.config = config;
  r.records = parallel_indexed(config.count, config.threads, [&](size_t i) { return bost_instance(config, i); });
  BostSummary& s = r.summary;
  s.count = r.records.size();
  for (const auto& g : r.records) {
    if (!g.certified) {
      s.uncertified.push_back(g.index);
      continue;
    }
    ++s.certified;
    if (g.gap < LogRational(0)) ++s.gap_violations;
    if (g.gap_hermite < LogRational(0)) ++s.hermite_violations;
    if (g.residual < LogRational(0)) ++s.residual_violations;
    if (g.residual.is_zero()) ++s.zero_residuals;
    s.max_gap = s.max_gap ? max(*s.max_gap, g.gap) : g.gap;
    s.min_gap = s.min_gap ? min(*s.min_gap, g.gap) : g.gap;
    s.max_residual = s.max_residual ? max(*s.max_residual, g.residual) : g.residual;
  }
  return r;
}

// Multifiltered repros

ReproReport repro_mf_lemma(const ReproOptions& options) {
  ReproReport report;
  report.name = "mf-lemma";
  report.parameters.push_back("seed = " + std::to_string(options.seed));
  report.parameters.push_back("samples = " + std::to_string(options.samples));
  report.parameters.push_back("dim <= 5, n <= 3, every order of the filtrations");

  ExperimentConfig config;
  config.entry_bound = 3;
  struct Outcome {
    size_t orders = 0;
    bool ok = true;
    std::string detail;
  };
  auto outcomes = parallel_indexed(options.samples, options.threads, [&](size_t s) {
    std::mt19937_64 rng = instance_rng(options.seed, s);
    size_t dim = static_cast<size_t>(uniform(rng, 1, 5)), n = static_cast<size_t>(uniform(rng, 1, 3));
    MultifilteredSpace m = random_mf(config, dim, n, rng);
    Rational mu = slope_faltings(m);
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Outcome o;
    do {
      ++o.orders;
      MultifilteredSpace pm = m.permuted(order);
      std::map<MultiIndex, size_t> dims;
      try {
        dims = multigraded_dims(pm);
      } catch (const std::logic_error& e) {
        o.ok = false;
        o.detail = "instance " + std::to_string(s) + ": " + e.what();
        break;
      }
      size_t total = 0;
      for (const auto& [k, d] : dims) total += d;
      Rational agg = multigraded_aggregate(dims);
      if (total != dim || agg != mu || slope_faltings(pm) != mu) {
        o.ok = false;
        o.detail = "instance " + std::to_string(s) + ": aggregate " + str(agg) + " vs slope " + str(mu);
        break;
      }
    } while (std::next_permutation(order.begin(), order.end()));
    return o;
  });
  size_t orders = 0, bad = 0;
  std::string first;
  for (const auto& o : outcomes) {
    orders += o.orders;
    if (!o.ok && bad++ == 0) first = o.detail;
  }
  report.checks.push_back({"multigraded aggregate = Faltings slope for every order", CheckMethod::exact,
                           std::to_string(options.samples - bad) + "/" + std::to_string(options.samples) +
                               " spaces, " + std::to_string(orders) + " orders" + (bad ? "; first: " + first : ""),
                           bad == 0});

  // crossed example
  Filtration f1(2, {{0, Subspace::whole(2)}, {1, Subspace::line({1, 0})}});
  Filtration f2(2, {{0, Subspace::whole(2)}, {1, Subspace::line({0, 1})}});
  MultifilteredSpace crossed(2, {f1, f2});
  auto dims = multigraded_dims(crossed);
  std::map<MultiIndex, size_t> expect{{{1, 0}, 1}, {{0, 1}, 1}};
  report.checks.push_back({"crossed lines: pieces (1,0) and (0,1) of dimension 1", CheckMethod::exact,
                           std::to_string(dims.size()) + " pieces", dims == expect});
  report.values.push_back({"crossed slope", LogRational(slope_faltings(crossed))});
  report.values.push_back({"orders checked", LogRational(Rational(static_cast<long>(orders)))});
  return report;
}

Thm07Record thm07_instance(const ExperimentConfig& config, size_t index) {
  std::mt19937_64 rng = instance_rng(config.seed, index);
  Thm07Record r;
  r.index = index;
  size_t d1 = static_cast<size_t>(uniform(rng, 1, static_cast<long>(config.max_dim)));
  size_t d2 = static_cast<size_t>(uniform(rng, 1, static_cast<long>(config.max_dim)));
  size_t n = static_cast<size_t>(uniform(rng, 1, static_cast<long>(config.max_filtrations)));
  r.m1 = random_mf(config, d1, n, rng);
  r.m2 = random_mf(config, d2, n, rng);
  MuMaxOptions opt;
  opt.seed = config.seed ^ (index * 0x9e3779b97f4a7c15ULL);
  MuMaxMf a = mu_max_mf(r.m1, opt), b = mu_max_mf(r.m2, opt);
  MultifilteredSpace t = tensor_mf(r.m1, r.m2);
  MuMaxOptions topt = opt;
  topt.hints.push_back(Subspace::span(kronecker(a.witness.basis(), b.witness.basis())));
  MuMaxMf c = mu_max_mf(t, topt);
  r.mu_max1 = a.value;
  r.mu_max2 = b.value;
  r.mu_max_tensor = c.value;
  r.certified = a.certified && b.certified && c.certified;
  r.equal = r.mu_max_tensor == r.mu_max1 + r.mu_max2;
  const MultifilteredSpace* objs[3] = {&r.m1, &r.m2, &t};
  const MuMaxMf* mm[3] = {&a, &b, &c};
  for (int i = 0; i < 3; ++i) {
    r.mu[i] = slope_faltings(*objs[i]);
    r.nu[i] = nu_exact(*objs[i]).value;
    r.graded[i] = nu_witness(*objs[i]).value;
    r.mu_max[i] = mm[i]->value;
    r.zeronu[i] = r.nu[i] >= r.mu[i];
    r.nu_le_mu_max[i] = r.nu[i] <= r.mu_max[i];
  }
  r.detail = "dims " + std::to_string(d1) + "x" + std::to_string(d2) + ", n = " + std::to_string(n) +
             ", mu_max " + str(r.mu_max1) + " + " + str(r.mu_max2) + " vs " + str(r.mu_max_tensor);
  return r;
}

ReproReport repro_thm07(const ReproOptions& options, std::vector<Thm07Record>* records) {
  ReproReport report;
  report.name = "thm07";
  report.parameters.push_back("seed = " + std::to_string(options.seed));
  report.parameters.push_back("count = " + std::to_string(options.samples));
  report.parameters.push_back("dim <= 3 per factor, n <= 3");
  ExperimentConfig config;
  config.seed = options.seed;
  config.entry_bound = 3;
  auto recs = parallel_indexed(options.samples, options.threads,
                               [&](size_t i) { return thm07_instance(config, i); });

  size_t certified = 0, equal = 0, objects = 0, nu_le = 0, zeronu = 0, graded_ge = 0;
  std::string first_uncert, first_uneq, first_zeronu, first_nu_le;
  for (const auto& r : recs) {
    if (r.certified) {
      ++certified;
      if (r.equal) {
        ++equal;
      } else if (first_uneq.empty()) {
        first_uneq = "instance " + std::to_string(r.index) + ": " + r.detail;
      }
    } else if (first_uncert.empty()) {
      first_uncert = "instance " + std::to_string(r.index);
    }
    for (int i = 0; i < 3; ++i) {
      ++objects;
      if (r.nu_le_mu_max[i]) {
        ++nu_le;
      } else if (first_nu_le.empty()) {
        first_nu_le = "instance " + std::to_string(r.index) + " object " + std::to_string(i);
      }
      if (r.zeronu[i]) {
        ++zeronu;
      } else if (first_zeronu.empty()) {
        first_zeronu = "instance " + std::to_string(r.index) + " object " + std::to_string(i) + ": nu " +
                       str(r.nu[i]) + " < mu " + str(r.mu[i]);
      }
      if (r.graded[i] >= r.mu[i]) ++graded_ge;
    }
  }
  const size_t n = recs.size();
  auto frac_str = [](size_t a, size_t b) { return std::to_string(a) + "/" + std::to_string(b); };
  report.checks.push_back({"every instance certified", CheckMethod::exact,
                           frac_str(certified, n) + (first_uncert.empty() ? "" : "; first: " + first_uncert),
                           certified == n});
  report.checks.push_back({"mu_max(M1 (x) M2) = mu_max(M1) + mu_max(M2)", CheckMethod::exact,
                           frac_str(equal, n) + " equalities" + (first_uneq.empty() ? "" : "; " + first_uneq),
                           equal == n});
  report.checks.push_back({"nu <= mu_max on every object", CheckMethod::exact,
                           frac_str(nu_le, objects) + (first_nu_le.empty() ? "" : "; first: " + first_nu_le),
                           nu_le == objects});
  report.checks.push_back({"top multigraded value >= mu on every object", CheckMethod::exact,
                           frac_str(graded_ge, objects), graded_ge == objects});
  report.checks.push_back({"nu >= mu on every object", CheckMethod::exact,
                           frac_str(zeronu, objects) + (first_zeronu.empty() ? "" : "; first: " + first_zeronu),
                           zeronu == objects});
  report.values.push_back({"equalities", LogRational(Rational(static_cast<long>(equal)))});
  report.values.push_back({"count", LogRational(Rational(static_cast<long>(n)))});

  // three lines in the plane: the top multigraded piece need not lift
  Filtration l1(2, {{0, Subspace::whole(2)}, {1, Subspace::line({1, 0})}});
  Filtration l2(2, {{0, Subspace::whole(2)}, {1, Subspace::line({0, 1})}});
  Filtration l3(2, {{0, Subspace::whole(2)}, {1, Subspace::line({1, 1})}});
  MultifilteredSpace three(2, {l1, l2, l3});
  NuWitness w = nu_witness(three);
  report.values.push_back({"three lines: mu", LogRational(slope_faltings(three))});
  report.values.push_back({"three lines: top multigraded value", LogRational(w.value)});
  report.values.push_back({"three lines: nu", LogRational(nu_exact(three).value)});
  report.values.push_back({"three lines: mu_max", LogRational(mu_max_mf(three).value)});
  report.notes.push_back(
      "with three filtrations the lifted line of the top multigraded piece can have smaller slope than the piece's "
      "label sum: for the lines (1,0), (0,1), (1,1) with break 1 the top value is 2, mu = 3/2, but every line has "
      "slope at most 1, so nu >= mu fails there while mu_max = 3/2 still satisfies the tensor identity");
  if (records) *records = std::move(recs);
  return report;
}

ReproReport run_repro(const ReproRequest& q) {
  ReproOptions o;
  o.seed = q.seed;
  o.threads = q.threads;
  if (q.target == "a2" || q.target == "q7") {
    if (q.count) o.samples = *q.count;
    LogRational lambda = q.lambda ? LogRational::parse(*q.lambda)
                                  : (q.target == "a2" ? default_a2_lambda() : default_q7_lambda());
    return q.target == "a2" ? repro_a2(lambda, o) : repro_q7(lambda, o);
  }
  if (q.target == "qp") {
    if (q.p != 5 && q.p != 13 && q.p != 37) throw std::invalid_argument("qp needs p in {5, 13, 37}");
    if (q.count) o.samples = *q.count;
    return repro_qp(q.p, o);
  }
  if (q.target == "mf-lemma") {
    o.samples = q.count.value_or(200);
    return repro_mf_lemma(o);
  }
  if (q.target == "thm07") {
    o.samples = q.count.value_or(50);
    return repro_thm07(o);
  }
  throw std::invalid_argument("unknown repro target " + q.target + " (a2, q7, qp, mf-lemma, thm07)");
}

// Emission

ReportFormat parse_format(const std::string& s) {
  if (s == "text") return ReportFormat::text;
  if (s == "json") return ReportFormat::json;
  if (s == "csv") return ReportFormat::csv;
  if (s == "svg") return ReportFormat::svg;
  throw std::invalid_argument("unknown format " + s + " (text, json, csv, svg)");
}

std::string render(const LogRational& x) {
  if (x.is_rational() && x.constant().get_den() == 1) return x.to_string();
  return x.to_string() + " (~ " + fmt_double(x.approx()) + ")";
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

Json value_json(const std::string& name, const LogRational& x) {
  return {{"name", name}, {"exact", x.to_string()}, {"approx", x.approx()}};
}

struct Series {
  std::string name;
  std::string color;
  std::vector<std::pair<double, double>> points;
  bool line = false;
  std::vector<std::string> labels;
};

std::string svg_plot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                     const std::vector<Series>& series) {
  const double w = 640, h = 420, left = 70, right = 20, top = 40, bottom = 50;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 0;
  bool first = true;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      if (first) {
        x0 = x1 = x;
        y0 = y1 = y;
        first = false;
      }
      x0 = std::min(x0, x), x1 = std::max(x1, x), y0 = std::min(y0, y), y1 = std::max(y1, y);
    }
  y0 = std::min(y0, 0.0), y1 = std::max(y1, 0.0);
  if (x1 - x0 < 1e-12) x1 = x0 + 1;
  if (y1 - y0 < 1e-12) y1 = y0 + 1;
  double pad = 0.05 * (y1 - y0);
  y0 -= pad, y1 += pad;
  auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * (w - left - right); };
  auto sy = [&](double y) { return h - bottom - (y - y0) / (y1 - y0) * (h - top - bottom); };
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << w / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << xml_escape(title) << "</text>\n";
  o << "<line x1=\"" << left << "\" y1=\"" << sy(0) << "\" x2=\"" << w - right << "\" y2=\"" << sy(0) << "\" stroke=\"#999\"/>\n";
  o << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << h - bottom << "\" stroke=\"#333\"/>\n";
  o << "<line x1=\"" << left << "\" y1=\"" << h - bottom << "\" x2=\"" << w - right << "\" y2=\"" << h - bottom << "\" stroke=\"#333\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    double y = y0 + (y1 - y0) * k / 4;
    o << "<text x=\"" << left - 6 << "\" y=\"" << sy(y) + 4 << "\" text-anchor=\"end\">" << fmt_double(y) << "</text>\n";
    double x = x0 + (x1 - x0) * k / 4;
    o << "<text x=\"" << sx(x) << "\" y=\"" << h - bottom + 16 << "\" text-anchor=\"middle\">" << fmt_double(x) << "</text>\n";
  }
  o << "<text x=\"" << (left + w - right) / 2 << "\" y=\"" << h - 10 << "\" text-anchor=\"middle\">" << xml_escape(xlabel) << "</text>\n";
  o << "<text x=\"16\" y=\"" << (top + h - bottom) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << (top + h - bottom) / 2 << ")\">" << xml_escape(ylabel) << "</text>\n";
  double ly = top + 4;
  for (const auto& s : series) {
    if (s.line && s.points.size() > 1) {
      o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\" points=\"";
      for (const auto& [x, y] : s.points) o << sx(x) << "," << sy(y) << " ";
      o << "\"/>\n";
    }
    for (size_t i = 0; i < s.points.size(); ++i) {
      const auto& [x, y] = s.points[i];
      o << "<circle cx=\"" << sx(x) << "\" cy=\"" << sy(y) << "\" r=\"3.5\" fill=\"" << s.color << "\">";
      if (i < s.labels.size()) o << "<title>" << xml_escape(s.labels[i]) << "</title>";
      o << "</circle>\n";
    }
    o << "<rect x=\"" << w - right - 150 << "\" y=\"" << ly - 9 << "\" width=\"10\" height=\"10\" fill=\"" << s.color << "\"/>";
    o << "<text x=\"" << w - right - 135 << "\" y=\"" << ly << "\">" << xml_escape(s.name) << "</text>\n";
    ly += 16;
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace

std::string emit(const ReproReport& report, ReportFormat format) {
  std::ostringstream o;
  switch (format) {
    case ReportFormat::text: {
      o << "repro " << report.name << ": " << (report.passed() ? "PASS" : "FAIL") << "\n";
      for (const auto& p : report.parameters) o << "  " << p << "\n";
      for (const auto& c : report.checks)
        o << "  [" << (c.passed ? "PASS" : "FAIL") << "] (" << to_string(c.method) << ") " << c.label
          << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
      for (const auto& v : report.values) o << "  " << v.name << " = " << render(v.exact) << "\n";
      for (const auto& n : report.notes) o << "  note: " << n << "\n";
      break;
    }
    case ReportFormat::json: {
      Json j;
      j["name"] = report.name;
      j["passed"] = report.passed();
      j["parameters"] = report.parameters;
      j["checks"] = Json::array();
      for (const auto& c : report.checks)
        j["checks"].push_back(
            {{"label", c.label}, {"method", to_string(c.method)}, {"passed", c.passed}, {"detail", c.detail}});
      j["values"] = Json::array();
      for (const auto& v : report.values) j["values"].push_back(value_json(v.name, v.exact));
      j["notes"] = report.notes;
      o << j.dump(2) << "\n";
      break;
    }
    case ReportFormat::csv: {
      o << "kind,label,method,passed,exact,approx,detail\n";
      for (const auto& c : report.checks)
        o << "check," << csv_field(c.label) << "," << to_string(c.method) << "," << (c.passed ? "true" : "false")
          << ",,," << csv_field(c.detail) << "\n";
      for (const auto& v : report.values)
        o << "value," << csv_field(v.name) << ",exact,," << csv_field(v.exact.to_string()) << ","
          << fmt_double(v.exact.approx()) << ",\n";
      break;
    }
    case ReportFormat::svg: {
      Series s{"values", "#1f77b4", {}, false, {}};
      for (size_t i = 0; i < report.values.size(); ++i) {
        s.points.emplace_back(static_cast<double>(i), report.values[i].exact.approx());
        s.labels.push_back(report.values[i].name + " = " + report.values[i].exact.to_string());
      }
      o << svg_plot("repro " + report.name + (report.passed() ? " (pass)" : " (fail)"), "value index", "value",
                    {s});
      break;
    }
  }
  return o.str();
}

std::string emit(const BostReport& report, ReportFormat format) {
  const BostSummary& s = report.summary;
  std::ostringstream o;
  auto opt = [](const std::optional<LogRational>& x) { return x ? render(*x) : std::string("-"); };
  switch (format) {
    case ReportFormat::text: {
      o << "bost-experiment: " << (report.passed() ? "PASS" : "FAIL") << "\n";
      o << "  seed = " << report.config.seed << ", count = " << s.count << ", family = " << report.config.family
        << ", max_rank = " << report.config.max_rank << ", max_tensor_rank = " << report.config.max_tensor_rank
        << "\n";
      o << "  certified " << s.certified << "/" << s.count << "\n";
      o << "  violations of mu_max(E1 (x) E2) <= sum (mu_max + 1/2 log rk): " << s.gap_violations << "\n";
      o << "  violations of the Hermite-constant bound: " << s.hermite_violations << "\n";
      o << "  violations of mu_max(E1 (x) E2) >= sum mu_max: " << s.residual_violations << "\n";
      o << "  zero residuals: " << s.zero_residuals << "\n";
      o << "  max gap = " << opt(s.max_gap) << "\n  min gap = " << opt(s.min_gap)
        << "\n  max residual = " << opt(s.max_residual) << "\n";
      if (!s.uncertified.empty()) {
        o << "  uncertified:";
        for (size_t i : s.uncertified) o << " " << i;
        o << "\n";
      }
      for (const auto& g : report.records)
        o << "  #" << g.index << " ranks " << g.e1.rank() << "x" << g.e2.rank() << (g.certified ? "" : " UNCERTIFIED")
          << " gap " << g.gap.to_string() << " hermite gap " << g.gap_hermite.to_string() << " residual "
          << g.residual.to_string() << (g.note.empty() ? "" : " (" + g.note + ")") << "\n";
      break;
    }
    case ReportFormat::json: {
      Json j;
      j["passed"] = report.passed();
      j["config"] = {{"seed", report.config.seed},           {"count", report.config.count},
                     {"max_rank", report.config.max_rank},   {"max_tensor_rank", report.config.max_tensor_rank},
                     {"entry_bound", report.config.entry_bound}, {"family", report.config.family}};
      Json sj = {{"count", s.count},
                 {"certified", s.certified},
                 {"gap_violations", s.gap_violations},
                 {"hermite_violations", s.hermite_violations},
                 {"residual_violations", s.residual_violations},
                 {"zero_residuals", s.zero_residuals},
                 {"uncertified", s.uncertified}};
      if (s.max_gap) sj["max_gap"] = value_json("max_gap", *s.max_gap);
      if (s.min_gap) sj["min_gap"] = value_json("min_gap", *s.min_gap);
      if (s.max_residual) sj["max_residual"] = value_json("max_residual", *s.max_residual);
      j["summary"] = sj;
      j["records"] = Json::array();
      for (const auto& g : report.records) {
        Json rj = {{"index", g.index},
                   {"e1", lattice_to_json(g.e1)},
                   {"e2", lattice_to_json(g.e2)},
                   {"certified", g.certified},
                   {"witness_rank", g.witness_rank}};
        {
          rj["mu_max1"] = value_json("mu_max1", g.mu_max1);
          rj["mu_max2"] = value_json("mu_max2", g.mu_max2);
          rj["mu_max_tensor"] = value_json("mu_max_tensor", g.mu_max_tensor);
          rj["rho1"] = value_json("rho1", g.rho1);
          rj["rho2"] = value_json("rho2", g.rho2);
          rj["hermite"] = value_json("hermite", g.hermite);
          rj["gap"] = value_json("gap", g.gap);
          rj["gap_hermite"] = value_json("gap_hermite", g.gap_hermite);
          rj["residual"] = value_json("residual", g.residual);
        }
        if (!g.note.empty()) rj["note"] = g.note;
        j["records"].push_back(rj);
      }
      o << j.dump(2) << "\n";
      break;
    }
    case ReportFormat::csv: {
      o << "index,r1,r2,certified,mu_max1,mu_max2,mu_max_tensor,gap,gap_approx,gap_hermite,residual,residual_approx\n";
      for (const auto& g : report.records)
        o << g.index << "," << g.e1.rank() << "," << g.e2.rank() << "," << (g.certified ? "true" : "false") << ","
          << csv_field(g.mu_max1.to_string()) << "," << csv_field(g.mu_max2.to_string()) << ","
          << csv_field(g.mu_max_tensor.to_string()) << "," << csv_field(g.gap.to_string()) << ","
          << fmt_double(g.gap.approx()) << "," << csv_field(g.gap_hermite.to_string()) << ","
          << csv_field(g.residual.to_string()) << "," << fmt_double(g.residual.approx()) << "\n";
      break;
    }
    case ReportFormat::svg: {
      Series gap{"gap (1/2 log rk)", "#1f77b4", {}, false, {}};
      Series her{"gap (Hermite)", "#2ca02c", {}, false, {}};
      Series res{"residual", "#d62728", {}, false, {}};
      for (const auto& g : report.records) {
        if (!g.certified) continue;
        double x = static_cast<double>(g.index);
        gap.points.emplace_back(x, g.gap.approx());
        gap.labels.push_back(g.gap.to_string());
        her.points.emplace_back(x, g.gap_hermite.approx());
        her.labels.push_back(g.gap_hermite.to_string());
        res.points.emplace_back(x, g.residual.approx());
        res.labels.push_back(g.residual.to_string());
      }
      o << svg_plot("mu_max of tensor products: gaps and residuals", "instance", "value", {gap, her, res});
      break;
    }
  }
  return o.str();
}

std::string polygon_svg(const SlopePolygon& polygon, const std::string& title) {
  Series pts{"max degree by rank", "#7f7f7f", {}, false, {}};
  Series hull{"slope polygon", "#1f77b4", {}, true, {}};
  for (const auto& p : polygon.points) {
    pts.points.emplace_back(static_cast<double>(p.rank), p.max_degree.approx());
    pts.labels.push_back("rank " + std::to_string(p.rank) + ": " + p.max_degree.to_string());
  }
  for (size_t i : polygon.hull) {
    const auto& p = polygon.points[i];
    hull.points.emplace_back(static_cast<double>(p.rank), p.max_degree.approx());
    hull.labels.push_back("rank " + std::to_string(p.rank) + ": " + p.max_degree.to_string());
  }
  return svg_plot(title + (polygon.certified ? "" : " (uncertified)"), "rank", "degree", {pts, hull});
}

}  // namespace slopekit
