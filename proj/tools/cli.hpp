#pragma once

#include <string>
#include <vector>

namespace doflab::cli {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

/// Runs one command; args excludes the program name. Exit codes: 0 success, 1 domain
/// failure (infeasible point, failed decode, parse error), 2 usage error.
Outcome run(const std::vector<std::string>& args);

}  // namespace doflab::cli
