#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "specstab/eigensolve/eigensolve.hpp"
#include "specstab/error.hpp"

namespace specstab::lab {

/// Bad configuration; the message names the line or field at fault.
class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

struct RunConfig {
  std::string scenario = "rectangle_family";
  BoundaryKind kind = BoundaryKind::Dirichlet;
  int n = 5;
  double h = 0.02;
  std::vector<double> deltas{0.01, 0.02, 0.04, 0.08};
  /// Named tolerances; unset keys take scenario defaults.
  std::map<std::string, double> tolerances;
  std::string output_dir = "out";
  std::uint64_t seed = 20240611;
  /// sector_decay opening angle.
  double omega = 4.71238898038469;
  /// covering_demo radius.
  double covering_radius = 0.1;
  /// custom and covering_demo: domain in the JSON layout of domain_to_json (empty = unit square).
  std::string domain;
};

/// Parses a JSON config. Unknown fields are rejected.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
/// Field-level checks (n >= 1, h > 0, deltas positive and increasing, known scenario, ...).
void validate(const RunConfig& c);
std::string config_to_json(const RunConfig& c);

/// Tolerance lookup with a fallback.
double tolerance(const RunConfig& c, const std::string& key, double fallback);

}  // namespace specstab::lab
