#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bayestomo/json_io.hpp"

namespace bayestomo::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitInput = 2,
  kExitInvariant = 3,
  kExitGuard = 4,
};

struct RunManifest {
  std::string command;
  std::vector<std::string> inputs;
  std::optional<std::uint64_t> seed;
  std::map<std::string, std::string> overrides;
  std::string version = kToolVersion;
  // Omitted from the JSON when unset so outputs can be compared byte-for-byte.
  std::optional<double> duration_seconds;

  json_io::Json to_json() const;
};

// Parses argv and runs one subcommand. JSON goes to `out` unless --out is
// given; diagnostics go to `err`. Returns an ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bayestomo::cli
