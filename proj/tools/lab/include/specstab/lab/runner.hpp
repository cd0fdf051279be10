#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "specstab/lab/config.hpp"

namespace specstab::lab {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericalFailure = 3, kAssertionFailure = 4 };

struct Check {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct RunOutcome {
  int exit_code = kOk;
  std::string message;
  std::vector<Check> checks;
  std::vector<std::string> files;  ///< written into output_dir
};

/// Runs one scenario and writes records.csv, report.json, *.dat and MANIFEST into
/// c.output_dir. Never throws for configuration or numerical problems; see exit_code.
RunOutcome run(const RunConfig& c, std::ostream& log);

/// One line per scenario: name, what it exercises, default parameters.
void list_scenarios(std::ostream& out);

/// Command-line entry: verbs run [config.json], list, validate <config.json>.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace specstab::lab
