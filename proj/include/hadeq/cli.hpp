#pragma once

// Command-line front end: `hadeq run|resolvent|check|kkm --config <path>`.
// Exposed as a library so tests can drive it in-process.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace hadeq {

enum ExitCode : int { kExitOk = 0, kExitInvalid = 1, kExitNotConverged = 2, kExitResolventFailure = 3 };

struct CliOptions {
  std::string config;
  /// Output directory; when empty only `run` writes files (into ".").
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  bool quiet = false;
};

int cmd_run(const CliOptions& o, std::ostream& out, std::ostream& err);
int cmd_resolvent(const CliOptions& o, std::ostream& out, std::ostream& err);
int cmd_check(const CliOptions& o, std::ostream& out, std::ostream& err);
int cmd_kkm(const CliOptions& o, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hadeq
