#include "defectlab/scenario.hpp"

#include <complex>

#include "defectlab/errors.hpp"

namespace defectlab::scenario {

namespace {

std::complex<double> parse_weight(const nlohmann::json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw DomainError("scenario: weight must be a number or an [re, im] pair");
}

}  // namespace

Scenario parse_scenario(const nlohmann::json& j) {
  if (!j.is_object()) throw DomainError("scenario: expected a JSON object");
  Scenario s;

  if (!j.contains("cover")) throw DomainError("scenario: missing 'cover'");
  const auto& cov = j.at("cover");
  if (cov.is_string() && cov.get<std::string>() == "infinite") {
    s.cover = cover::CoverSpec::infinite();
  } else if (cov.is_number_integer()) {
    s.cover = cover::CoverSpec::finite(cov.get<int>());
  } else {
    throw DomainError("scenario: 'cover' must be \"infinite\" or an integer");
  }

  if (!j.contains("bumps") || !j.at("bumps").is_array())
    throw DomainError("scenario: missing 'bumps' array");
  for (const auto& b : j.at("bumps")) {
    for (const char* key : {"r", "theta_lift", "radius", "weight"})
      if (!b.contains(key))
        throw DomainError(std::string("scenario: bump missing '") + key + "'");
    s.bumps.push_back(flows::Bump{
        cover::SurfacePoint(b.at("r").get<double>(),
                            b.at("theta_lift").get<double>(), s.cover),
        b.at("radius").get<double>(), parse_weight(b.at("weight"))});
  }

  if (j.contains("program")) {
    if (!j.at("program").is_array())
      throw DomainError("scenario: 'program' must be an array");
    for (const auto& st : j.at("program")) {
      const std::string op = st.value("op", "");
      Step step;
      if (op == "U") {
        step.kind = Step::Kind::Translate;
        if (!st.contains("axis") || !st.contains("t"))
          throw DomainError("scenario: U step needs 'axis' and 't'");
        step.axis = st.at("axis").get<int>();
        step.t = st.at("t").get<double>();
        if (step.axis != 1 && step.axis != 2)
          throw DomainError("scenario: axis must be 1 or 2");
      } else if (op == "C") {
        step.kind = Step::Kind::Commutator;
        if (!st.contains("s") || !st.contains("t"))
          throw DomainError("scenario: C step needs 's' and 't'");
        step.s = st.at("s").get<double>();
        step.t = st.at("t").get<double>();
      } else {
        throw DomainError("scenario: unknown op '" + op + "'");
      }
      s.program.push_back(step);
    }
  }
  return s;
}

flows::StateFn initial_state(const Scenario& s) {
  return flows::StateFn(s.cover, s.bumps);
}

flows::StateFn run_program(const Scenario& s) {
  flows::StateFn state = initial_state(s);
  for (const Step& step : s.program) {
    state = step.kind == Step::Kind::Translate
                ? flows::translate_state(state, step.axis, step.t)
                : flows::commutator_apply(state, step.s, step.t);
  }
  return state;
}

nlohmann::json state_to_json(const flows::StateFn& f) {
  nlohmann::json j;
  j["cover"] = f.cover().is_finite() ? nlohmann::json(f.cover().sheets())
                                     : nlohmann::json("infinite");
  j["bumps"] = nlohmann::json::array();
  for (const flows::Bump& b : f.bumps()) {
    j["bumps"].push_back({{"r", b.center.r()},
                          {"theta_lift", b.center.theta_lift()},
                          {"sheet", b.center.sheet()},
                          {"radius", b.radius},
                          {"weight", {b.weight.real(), b.weight.imag()}}});
  }
  return j;
}

}  // namespace defectlab::scenario
