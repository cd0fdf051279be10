#pragma once

#include <string>
#include <vector>

#include "specstab/lab/config.hpp"
#include "specstab/stability/family.hpp"

namespace specstab::lab {

struct ScenarioInfo {
  std::string name;
  std::string exercises;  ///< result the scenario checks
  std::string summary;
  std::string defaults;
  bool family = false;  ///< runs a perturbation family over deltas
};

const std::vector<ScenarioInfo>& scenarios();
const ScenarioInfo* find_scenario(const std::string& name);

/// Domain pairs for the family scenarios. Throws ConfigError for non-family scenarios.
DomainFamily scenario_family(const RunConfig& c);

}  // namespace specstab::lab
