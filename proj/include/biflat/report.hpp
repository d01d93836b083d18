#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace biflat {

/// One named check: measured value against its tolerance. `cmp` documents
/// the direction ("<" by default, ">" for lower bounds, "==" for exactness).
struct check_record {
  std::string name;
  double measured = 0;
  double tolerance = 0;
  std::string cmp = "<";
  bool pass = false;
};

check_record check_lt(const std::string& name, double measured, double tol);
check_record check_gt(const std::string& name, double measured, double tol);
check_record check_true(const std::string& name, bool ok);

struct run_report {
  std::string subcommand;
  std::vector<check_record> checks;
  std::vector<std::string> artifacts;
  double wall_ms = 0;

  bool pass() const;
  void add(check_record rec) { checks.push_back(std::move(rec)); }
  nlohmann::json to_json() const;  // schema "1"
  /// Writes <out_dir>/<subcommand>_report.json; returns the path.
  std::string write(const std::string& out_dir) const;
};

}  // namespace biflat
