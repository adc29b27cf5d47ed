#pragma once

#include <stdexcept>
#include <string>

namespace isomech::tool {

enum ExitCode : int {
  kOk = 0,
  kParseError = 2,
  kConsistencyError = 3,
  kBlowup = 4,
};

// Carries the process exit code for a failure detected at the file/flag boundary.
class ToolError : public std::runtime_error {
 public:
  ToolError(ExitCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

}  // namespace isomech::tool
