#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "defectlab/flows.hpp"

namespace defectlab::scenario {

/// One program step: a lifted translation {op:"U", axis, t} or a commutator
/// {op:"C", s, t}.
struct Step {
  enum class Kind { Translate, Commutator };
  Kind kind = Kind::Translate;
  int axis = 1;
  double t = 0.0;
  double s = 0.0;
};

struct Scenario {
  cover::CoverSpec cover = cover::CoverSpec::infinite();
  std::vector<flows::Bump> bumps;
  std::vector<Step> program;
};

/// Parses {cover: "infinite"|N, bumps:[{r, theta_lift, radius, weight}],
/// program:[{op:"U", axis, t} | {op:"C", s, t}]}. Weights may be a real
/// number or an [re, im] pair. Throws DomainError on malformed input.
Scenario parse_scenario(const nlohmann::json& j);

flows::StateFn initial_state(const Scenario& s);
flows::StateFn run_program(const Scenario& s);

/// {cover, bumps:[{r, theta_lift, radius, weight:[re,im], sheet}]}.
nlohmann::json state_to_json(const flows::StateFn& f);

}  // namespace defectlab::scenario
