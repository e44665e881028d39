#pragma once

// Batch commands over the library, each producing a JSON report.

#include <string>
#include <vector>

#include "charsub/spec_parser.hpp"
#include "json.hpp"

namespace charsub {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kReportSchema = "charsub-report/1";

enum ExitCode : int {
  kExitVerified = 0,
  kExitViolated = 1,  // property violated or NotIn
  kExitUnknown = 2,
  kExitInputError = 3,
};

struct Report {
  nlohmann::ordered_json json;
  int exit_code = kExitVerified;
};

const std::vector<std::string>& command_names();

/// Never throws for library errors; they become report fields and exit codes.
Report run_command(const std::string& name, const SpecFile& spec);

/// Re-verifies the certificates embedded in a report produced by run_command.
Report recheck_report(const nlohmann::ordered_json& report);

}  // namespace charsub
