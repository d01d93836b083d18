#include "biflat/report.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>

namespace biflat {

check_record check_lt(const std::string& name, double measured, double tol) {
  return {name, measured, tol, "<", measured < tol};
}

check_record check_gt(const std::string& name, double measured, double tol) {
  return {name, measured, tol, ">", measured > tol};
}

check_record check_true(const std::string& name, bool ok) {
  return {name, ok ? 1.0 : 0.0, 1.0, "==", ok};
}

bool run_report::pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

nlohmann::json run_report::to_json() const {
  nlohmann::json recs = nlohmann::json::array();
  for (const auto& c : checks) {
    recs.push_back({{"name", c.name},
                    {"measured", c.measured},
                    {"tolerance", c.tolerance},
                    {"cmp", c.cmp},
                    {"verdict", c.pass ? "pass" : "fail"}});
  }
  return {{"schema", "1"},
          {"subcommand", subcommand},
          {"pass", pass()},
          {"checks", recs},
          {"artifacts", artifacts},
          {"wall_ms", wall_ms}};
}

std::string run_report::write(const std::string& out_dir) const {
  std::filesystem::create_directories(out_dir);
  std::string path = out_dir + "/" + subcommand + "_report.json";
  std::ofstream os(path);
  os << to_json().dump(2) << "\n";
  return path;
}

}  // namespace biflat
