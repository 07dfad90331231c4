#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace disg {

struct RunOptions {
  std::filesystem::path config_path;
  std::filesystem::path out_dir;
  std::optional<std::uint64_t> seed_override;
  std::optional<int> grid_override;
};

// Executes one CLI command (validate, solve, bound, simulate, finite-check,
// sweep, plot), writing artifact files into out_dir. Returns the process exit
// status: 0 on success, 1 on configuration errors, 2 on NotConverged/tainted
// results. Errors are reported as one JSON object on err.
int run_command(const std::string& command, const RunOptions& options, std::ostream& out,
                std::ostream& err);

}  // namespace disg
