#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

namespace tjs::run {

struct RunOptions {
  std::filesystem::path config_path;
  std::filesystem::path out_dir;
  int threads = 1;
  std::optional<std::uint64_t> seed_override;
  bool force = false;
};

/// Load a config document, resolving its "include" list (later fields win).
nlohmann::json load_config(const std::filesystem::path& path);

/// Stable FNV-1a hash of the canonical config dump.
std::string config_hash(const nlohmann::json& config);

int run_ground(const RunOptions& options);
int run_ramp(const RunOptions& options);
int run_measure(const RunOptions& options);
int run_reconstruct(const RunOptions& options);
int run_fit_init(const RunOptions& options);
int run_toycheck(std::ostream& os);

/// Dispatch by subcommand name; returns the process exit code.
int dispatch(const std::string& subcommand, const RunOptions& options, std::ostream& os);

}  // namespace tjs::run
