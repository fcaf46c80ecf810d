#pragma once

// The flagkit command line: subcommands roots, flag, equi, triples, ctensor,
// einstein, ke and verify, with table, JSON or CSV output.

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "flagkit/flagspace.hpp"
#include "flagkit/metric.hpp"

namespace flagkit::cli {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode { kOk = 0, kInvalidInput = 1, kNoConvergence = 2, kAcceptanceFailure = 3 };

struct Options {
  std::uint64_t seed = 20240607;
  double tol = 1e-10;
  int starts = 200;
  unsigned threads = 0;
  std::string format = "table";
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Reads key=value lines (seed, tol, starts, threads, format) over `base`.
/// Blank lines and lines starting with '#' are skipped. A repeated key keeps
/// its last value and adds a warning. Throws ConfigError naming the line.
Options load_config(const std::string& path, Options base, std::vector<std::string>& warnings);

/// Runs one command; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// JSON key of module k: the lowest positive root in its fibre.
std::string module_key(const FlagManifold& f, size_t k);

/// Inverse of the "lambda" objects emitted by `ke` and `einstein`.
ExactMetric exact_metric_from_json(const FlagManifold& f, const nlohmann::ordered_json& lambda);
NumericMetric numeric_metric_from_json(const FlagManifold& f, const nlohmann::ordered_json& lambda);

}  // namespace flagkit::cli
