#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "slopekit/exactval.hpp"

namespace slopekit {

/// How an assertion was established.
enum class CheckMethod { exact, interval128, consequence };

std::string to_string(CheckMethod m);

struct ReproCheck {
  std::string label;
  CheckMethod method = CheckMethod::exact;
  std::string detail;
  bool passed = false;
};

/// Named exact quantity; reports render it next to a float.
struct ReproValue {
  std::string name;
  LogRational exact;
};

struct ReproReport {
  std::string name;
  std::vector<std::string> parameters;
  std::vector<ReproCheck> checks;
  std::vector<ReproValue> values;
  std::vector<std::string> notes;

  bool passed() const;
  const ReproCheck* find(const std::string& label) const;
  const ReproValue* value(const std::string& name) const;
};

/// Thrown at the first violated identity; the message names it.
class ReproFailure : public std::runtime_error {
 public:
  ReproFailure(std::string label, const std::string& detail)
      : std::runtime_error("repro check failed: " + label + " (" + detail + ")"), label_(std::move(label)) {}
  const std::string& label() const { return label_; }

 private:
  std::string label_;
};

struct ReproOptions {
  std::uint64_t seed = 1;
  size_t samples = 200;
  size_t threads = 1;
};

/// lambda in [1/2 log(3/2), 1/4 log 3).
LogRational default_a2_lambda();
/// lambda in (1/2 log 3, log 3 - 2/3 log 2].
LogRational default_q7_lambda();

ReproReport repro_a2(const LogRational& lambda, const ReproOptions& options = {});
ReproReport repro_q7(const LogRational& lambda, const ReproOptions& options = {});
/// p in {5, 13, 37}.
ReproReport repro_qp(long p, const ReproOptions& options = {});

}  // namespace slopekit
