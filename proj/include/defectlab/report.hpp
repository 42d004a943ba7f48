#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace defectlab::report {

/// One verified quantity: pass holds exactly when rel_err <= tol.
struct CheckRecord {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_err = 0.0;
  double tol = 0.0;
  bool pass = false;
};

/// lhs vs rhs compared relatively: rel_err = |lhs-rhs| / max(|rhs|, tiny).
CheckRecord rel_check(std::string name, double lhs, double rhs, double tol);

/// A residual-style quantity bounded by tol: rel_err = |value|.
CheckRecord bound_check(std::string name, double value, double tol);

/// Exact agreement (integers, bit-exact doubles): rel_err = |lhs-rhs|, tol 0.
CheckRecord exact_check(std::string name, double lhs, double rhs);

/// Boolean condition: lhs = observed (0/1), rhs = 1.
CheckRecord require_check(std::string name, bool ok);

/// value must reach at least `floor`: rel_err = max(0, (floor-value)/floor).
CheckRecord floor_check(std::string name, double value, double floor);

struct Report {
  std::string command;
  nlohmann::json params = nlohmann::json::object();
  std::vector<CheckRecord> checks;
  double elapsed_ms = 0.0;

  bool all_pass() const;
  nlohmann::json to_json() const;
  /// Lossy per-check projection: name,lhs,rhs,rel_err,tol,pass rows.
  std::string to_csv() const;
};

}  // namespace defectlab::report
