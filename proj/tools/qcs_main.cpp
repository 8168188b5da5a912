#include <cstdio>
#include <string>
#include <vector>

#include "qcs/report.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  qcs::CliResult result = qcs::run_cli(args);
  if (!result.out.empty()) std::fputs(result.out.c_str(), stdout);
  if (!result.err.empty()) std::fprintf(stderr, "%s\n", result.err.c_str());
  return result.exit_code;
}
