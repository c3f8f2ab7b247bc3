#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace heatlab::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kBadConfig = 2, kNumericFailure = 3 };

/// "min:max:count:log|lin"; min < max, count >= 3.
struct GridSpec {
  double min = 0.0;
  double max = 0.0;
  int count = 0;
  bool log = true;

  std::vector<double> values() const;
  std::string str() const;
};

/// Throws ArgumentError on malformed text or a violated invariant.
GridSpec parseGrid(std::string_view text);

enum class Format { Csv, Json };

struct RunConfig {
  std::string command;
  std::string model;
  std::optional<GridSpec> tGrid;
  std::optional<GridSpec> dGrid;
  double tol = 1e-14;
  std::optional<double> r;
  std::optional<std::string> outPath;
  std::optional<Format> format;
  bool plot = false;
  std::string which = "lyp";
  double t0 = 0.05;
};

/// Runs one invocation; args[0] is the program name. Tables go to files,
/// the one-line JSON summary to `out`, diagnostics and usage to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace heatlab::cli
