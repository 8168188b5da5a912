#pragma once

#include <string>
#include <vector>

namespace qcs {

/// Outcome of one CLI invocation, runnable in-process for tests.
/// exit codes: 0 completed analysis (whatever the verdict), 1 usage or IO
/// error, 2 validation error in the input document.
struct CliResult {
  int exit_code = 0;
  std::string out;  // the JSON report (or empty when --out redirected it)
  std::string err;
};

CliResult run_cli(const std::vector<std::string>& args);

/// FNV-1a 64-bit content hash, formatted "fnv1a:<16 hex digits>".
std::string content_digest(const std::string& bytes);

}  // namespace qcs
