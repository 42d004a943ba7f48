#include "defectlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace defectlab::report {

namespace {

CheckRecord finish(CheckRecord c) {
  c.pass = c.rel_err <= c.tol;
  return c;
}

}  // namespace

CheckRecord rel_check(std::string name, double lhs, double rhs, double tol) {
  CheckRecord c;
  c.name = std::move(name);
  c.lhs = lhs;
  c.rhs = rhs;
  c.rel_err = std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300);
  c.tol = tol;
  return finish(c);
}

CheckRecord bound_check(std::string name, double value, double tol) {
  CheckRecord c;
  c.name = std::move(name);
  c.lhs = value;
  c.rhs = 0.0;
  c.rel_err = std::abs(value);
  c.tol = tol;
  return finish(c);
}

CheckRecord exact_check(std::string name, double lhs, double rhs) {
  CheckRecord c;
  c.name = std::move(name);
  c.lhs = lhs;
  c.rhs = rhs;
  c.rel_err = std::abs(lhs - rhs);
  c.tol = 0.0;
  return finish(c);
}

CheckRecord require_check(std::string name, bool ok) {
  CheckRecord c;
  c.name = std::move(name);
  c.lhs = ok ? 1.0 : 0.0;
  c.rhs = 1.0;
  c.rel_err = ok ? 0.0 : 1.0;
  c.tol = 0.0;
  return finish(c);
}

CheckRecord floor_check(std::string name, double value, double floor) {
  CheckRecord c;
  c.name = std::move(name);
  c.lhs = value;
  c.rhs = floor;
  c.rel_err = std::max(0.0, (floor - value) / floor);
  c.tol = 0.0;
  return finish(c);
}

bool Report::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckRecord& c) { return c.pass; });
}

nlohmann::json Report::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["params"] = params;
  j["checks"] = nlohmann::json::array();
  for (const CheckRecord& c : checks) {
    j["checks"].push_back({{"name", c.name},
                           {"lhs", c.lhs},
                           {"rhs", c.rhs},
                           {"rel_err", c.rel_err},
                           {"tol", c.tol},
                           {"pass", c.pass}});
  }
  j["elapsed_ms"] = elapsed_ms;
  return j;
}

std::string Report::to_csv() const {
  std::string out = "name,lhs,rhs,rel_err,tol,pass\n";
  char buf[160];
  for (const CheckRecord& c : checks) {
    std::snprintf(buf, sizeof(buf), ",%.17g,%.17g,%.17g,%.17g,%d\n", c.lhs,
                  c.rhs, c.rel_err, c.tol, c.pass ? 1 : 0);
    out += c.name;
    out += buf;
  }
  return out;
}

}  // namespace defectlab::report
