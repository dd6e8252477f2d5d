#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "slopekit/lattice.hpp"
#include "slopekit/multifilt.hpp"

namespace slopekit {

using Json = nlohmann::json;

/// Integer or "p/q" string.
Rational rational_from_json(const Json& j);
Json rational_to_json(const Rational& q);

/// {"dim": n, "filtrations": [{"steps": [{"lambda": "p/q", "basis": [[...]]}, ...]}, ...]}
/// Steps may come in any order; empty bases are allowed. Throws std::invalid_argument on malformed input.
MultifilteredSpace mf_from_json(const Json& j);
Json mf_to_json(const MultifilteredSpace& m);

/// {"gram": [[...]]} or {"basis": [[...]]} (gram = B B^T).
EuclideanLattice lattice_from_json(const Json& j);
Json lattice_to_json(const EuclideanLattice& l);

std::string read_text_file(const std::string& path);
Json read_json_file(const std::string& path);

/// Flat TOML subset: `key = value` lines with integer, boolean or quoted string values, `#` comments and
/// optional `[section]` headers (keys become "section.key"). Values are returned unquoted.
std::map<std::string, std::string> parse_flat_toml(const std::string& text);

}  // namespace slopekit
