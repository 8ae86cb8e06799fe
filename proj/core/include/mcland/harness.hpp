#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mcland/config.hpp"
#include "mcland/error.hpp"

namespace mcland {

/// Command-line values that win over the config file.
struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> out_dir;
};

struct RunOutcome {
  std::vector<std::filesystem::path> files;
  /// One-line human summary for the CLI.
  std::string summary;
};

/// Environment variable that overrides the configured output directory
/// (the --out flag still wins).
inline constexpr const char* kOutDirEnv = "MCLAND_OUT_DIR";

RunOutcome run_config(const std::filesystem::path& path, const std::optional<std::string>& command = {},
                      const RunOverrides& overrides = {});
RunOutcome run_experiment_config(ExperimentConfig cfg, const RunOverrides& overrides = {});

/// Builds the instance a problem spec describes; all randomness from `seed`.
McInstance build_problem(const ProblemSpec& spec, std::uint64_t seed);

/// Writes the table sorted by (S_size, gamma) as CSV.
void emit_plot_data(SuccessRateTable table, const std::filesystem::path& path);

/// Temp file in the target directory, then rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

/// 0 ok, 1 validation, 2 numerical failure, 3 I/O.
int exit_code(ErrorCode code);

}  // namespace mcland
