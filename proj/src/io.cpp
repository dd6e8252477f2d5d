#include "slopekit/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace slopekit {

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<long long>()));
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw std::invalid_argument("expected an integer or a \"p/q\" string, got " + j.dump());
}

Json rational_to_json(const Rational& q) {
  if (q.get_den() == 1 && q.get_num().fits_slong_p()) return q.get_num().get_si();
  return to_string(q);
}

namespace {

QMatrix matrix_from_json(const Json& j, size_t cols) {
  if (!j.is_array()) throw std::invalid_argument("expected an array of rows");
  QMatrix m(j.size(), cols);
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      throw std::invalid_argument("row " + std::to_string(i) + " does not have " + std::to_string(cols) + " entries");
    for (size_t c = 0; c < cols; ++c) m(i, c) = rational_from_json(j[i][c]);
  }
  return m;
}

Json matrix_to_json(const QMatrix& m) {
  Json rows = Json::array();
  for (size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (size_t c = 0; c < m.cols(); ++c) row.push_back(rational_to_json(m(i, c)));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

MultifilteredSpace mf_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("filtrations"))
    throw std::invalid_argument("multifiltered space needs \"dim\" and \"filtrations\"");
  const long dim = j.at("dim").get<long>();
  if (dim < 0) throw std::invalid_argument("negative dimension");
  const size_t n = static_cast<size_t>(dim);
  std::vector<Filtration> filtrations;
  for (const auto& f : j.at("filtrations")) {
    std::vector<FiltrationStep> steps;
    for (const auto& s : f.at("steps"))
      steps.push_back({rational_from_json(s.at("lambda")), Subspace::span(matrix_from_json(s.at("basis"), n))});
    std::sort(steps.begin(), steps.end(), [](const auto& a, const auto& b) { return a.lambda < b.lambda; });
    filtrations.emplace_back(n, std::move(steps));
  }
  return MultifilteredSpace(n, std::move(filtrations));
}

Json mf_to_json(const MultifilteredSpace& m) {
  Json fs = Json::array();
  for (const auto& f : m.filtrations()) {
    Json steps = Json::array();
    for (const auto& s : f.steps())
      steps.push_back({{"lambda", to_string(s.lambda)}, {"basis", matrix_to_json(s.space.basis())}});
    fs.push_back({{"steps", steps}});
  }
  return {{"dim", m.dim()}, {"filtrations", fs}};
}

EuclideanLattice lattice_from_json(const Json& j) {
  if (j.contains("gram")) {
    const Json& g = j.at("gram");
    return EuclideanLattice(matrix_from_json(g, g.size()));
  }
  if (j.contains("basis")) {
    const Json& b = j.at("basis");
    if (!b.is_array() || b.empty() || !b[0].is_array()) throw std::invalid_argument("basis must be a nonempty matrix");
    QMatrix m = matrix_from_json(b, b[0].size());
    return EuclideanLattice(m * m.transpose());
  }
  throw std::invalid_argument("lattice needs \"gram\" or \"basis\"");
}

Json lattice_to_json(const EuclideanLattice& l) { return {{"gram", matrix_to_json(l.gram())}}; }

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json_file(const std::string& path) {
  try {
    return Json::parse(read_text_file(path));
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

std::map<std::string, std::string> parse_flat_toml(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line, section;
  for (size_t no = 1; std::getline(in, line); ++no) {
    auto fail = [&](const std::string& what) {
      throw std::invalid_argument("config line " + std::to_string(no) + ": " + what);
    };
    // strip comments outside quotes
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) fail("empty key or value");
    if (value.front() == '"') {
      if (value.size() < 2 || value.back() != '"') fail("unterminated string");
      value = value.substr(1, value.size() - 2);
    }
    if (!section.empty()) key = section + "." + key;
    if (!out.emplace(key, value).second) fail("duplicate key " + key);
  }
  return out;
}

}  // namespace slopekit
