#pragma once

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

#include "gvna/dynamics.hpp"
#include "gvna/rational.hpp"
#include "gvna/words.hpp"

namespace gvna {

using Json = nlohmann::ordered_json;

inline Json to_json(const DecayReport& r, const std::string& scenario = "") {
  Json steps = Json::array();
  for (const DecayStep& s : r.steps) {
    steps.push_back(Json{{"step", s.step},
                         {"conjugator", format_element(s.conjugator)},
                         {"max_witness", format_element(s.max_witness)},
                         {"value_exact", to_fraction_string(s.value)},
                         {"value_decimal", to_decimal_string(s.value)}});
  }
  Json verdicts{{"strictly_decreasing", r.verdicts.strictly_decreasing},
                {"below_tolerance", r.verdicts.below_tolerance},
                {"tolerance", to_fraction_string(r.verdicts.tolerance)},
                {"first_below_index", r.verdicts.first_below_index
                                          ? Json(*r.verdicts.first_below_index)
                                          : Json(nullptr)},
                {"positive_constant_witness",
                 r.verdicts.positive_constant_witness
                     ? Json{{"element", format_element(r.verdicts.positive_constant_witness->first)},
                            {"value",
                             to_fraction_string(r.verdicts.positive_constant_witness->second)}}
                     : Json(nullptr)},
                {"partial", r.verdicts.partial}};
  return Json{{"scenario", scenario},
              {"descriptor", r.descriptor},
              {"sequence", r.sequence},
              {"radius", r.radius},
              {"steps", std::move(steps)},
              {"verdicts", std::move(verdicts)}};
}

inline std::string to_csv(const DecayReport& r) {
  std::string out = "step,conjugator,value_exact,value_decimal\n";
  for (const DecayStep& s : r.steps) {
    out += std::to_string(s.step) + "," + format_element(s.conjugator) + "," +
           to_fraction_string(s.value) + "," + to_decimal_string(s.value) + "\n";
  }
  return out;
}

inline Json to_json(const PDWindow& w) {
  Json values = Json::array();
  for (const auto& [g, v] : w.values())
    values.push_back(Json{{"element", format_element(g)}, {"value", to_fraction_string(v)}});
  return Json{{"radius", w.radius()}, {"values", std::move(values)}};
}

/// Tagged record naming the descriptor variant and its parameters.
inline Json to_json(const SubalgebraDescriptor& M) {
  Json j{{"name", M.name()}};
  switch (M.kind()) {
    case SubalgebraDescriptor::Kind::Trivial:
      j["variant"] = "trivial";
      break;
    case SubalgebraDescriptor::Kind::SubgroupAlgebra:
      j["variant"] = "subgroup";
      j["subgroup"] = M.predicate().name;
      break;
    case SubalgebraDescriptor::Kind::RadialAlgebra:
      j["variant"] = "radial";
      j["rank"] = M.radial_rank();
      break;
    case SubalgebraDescriptor::Kind::FixedPointAlgebra:
      j["variant"] = "fixed_point";
      j["automorphism"] = M.automorphism().name();
      j["order"] = M.automorphism().order();
      break;
    case SubalgebraDescriptor::Kind::FiniteDimensional: {
      j["variant"] = "finite_dimensional";
      Json sizes = Json::array();
      for (const auto& b : M.blocks()) sizes.push_back(b.size);
      j["block_sizes"] = std::move(sizes);
      break;
    }
    case SubalgebraDescriptor::Kind::RadialTensorFinite:
      j["variant"] = "radial_tensor_finite";
      j["rank"] = M.radial_rank();
      j["order"] = M.context()->twist_order();
      break;
  }
  return j;
}

}  // namespace gvna
