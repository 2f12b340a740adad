#pragma once

// Configuration-driven commands behind the `tamecert` executable.

#include "tamecert/errors.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace tamecert {

struct RunConfig {
  std::string phi;
  std::string y0 = "0";
  std::string target = "0";
  int D = 64;
  int M = 257;
  int N = 6;
  int l0 = 2;
  int quad_nodes = 32;
  double epsilon = 0.5;
  double tol = 1e-12;
  int samples = 64;
  int pairs = 64;
  std::uint64_t seed = 0;

  /// Throws ConfigError on any out-of-range field or a missing phi.
  void validate() const;
};

/// JSON object when the first non-blank character is '{', otherwise
/// `key = value` lines with '#' comments. Unknown or repeated keys are errors.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path &path);

struct CommandOptions {
  std::filesystem::path out = ".";
  std::optional<std::filesystem::path> grading;
};

/// 2 for configuration errors, 3 for failed certificates, 4 for numeric
/// failures.
int exit_code_for(const Error &e);

/// `error: code=N kind=TAG message="..."`
std::string error_line(int code, std::string_view kind, std::string_view msg);

/// Each returns the process exit code; `out` receives a short summary.
int cmd_invert(const RunConfig &cfg, const CommandOptions &opts,
               std::ostream &out);
int cmd_certify(const RunConfig &cfg, const CommandOptions &opts,
                std::ostream &out);

struct SelftestOptions {
  bool fault_theta = false; ///< build the member with theta halved
};
int cmd_selftest(const SelftestOptions &opts, std::ostream &out);

/// Writes `contents` to `path` through a temporary file and a rename.
void write_file_atomic(const std::filesystem::path &path,
                       std::string_view contents);

} // namespace tamecert
