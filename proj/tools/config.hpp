#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "fairdiv/core.hpp"
#include "fairdiv/policies.hpp"

namespace fairdiv::cli {

/// Bad or unparsable configuration; maps to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kOutputDirEnv = "FAIRDIV_OUTPUT_DIR";

struct RunConfig {
  InstanceSpec spec;
  /// "explicit" or "random_normalized"
  std::string mu_star_source = "explicit";
  std::uint64_t mu_star_seed = 0;
  PolicyConfig policy;
  std::filesystem::path output_dir = "fairdiv_out";
  bool record_full_allocations = false;
};

/// INI text with sections [instance], [policy], [constraints], [grid] and
/// [output]. Unknown sections or keys are rejected by name. The instance is
/// validated before returning.
RunConfig parse_config(const std::string& text);

/// Reads and parses a file, then applies the output directory override from
/// the environment.
RunConfig load_config(const std::filesystem::path& path);

/// Re-checks the instance after a field was changed programmatically.
void revalidate(RunConfig& config);

nlohmann::json config_echo(const RunConfig& config);

}  // namespace fairdiv::cli
