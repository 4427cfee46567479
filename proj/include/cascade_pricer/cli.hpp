#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace cascade_pricer::cli {

/**
 * Parsed invocation: subcommand plus long-form options in the order they
 * appeared. Every output begins with the manifest echoed as "# key=value"
 * lines, so a result file names the invocation that produced it. The
 * thread count is kept out of the manifest: it never changes results.
 */
struct Manifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> options;
  int threads = 1;

  bool has(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback = "") const;
  void echo(std::ostream& out) const;
};

// Flags are "--key value"; a flag followed by another flag (or nothing)
// is a switch and stores "1". --threads falls back to the
// CASCADE_PRICER_THREADS environment variable.
Manifest parse_args(int argc, const char* const* argv);

/** Runs one subcommand; throws the library's error types on bad input. */
void execute(const Manifest& m, std::ostream& out);

// Full entry point: parse, execute, map errors to exit codes
// (0 ok, 2 usage or bad input, 3 resource budget exceeded).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cascade_pricer::cli
