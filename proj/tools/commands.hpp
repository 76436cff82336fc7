#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fairdiv/sim.hpp"

namespace fairdiv::cli {

/// Embedded in every summary; bumped whenever a CSV or JSON schema changes.
inline constexpr const char* kArtifactVersion = "fairdiv-0.3.0/run-csv-1";

enum ExitCode : int { kOk = 0, kConfigError = 1, kContractViolation = 2 };

inline constexpr const char* kRunCsvHeader =
    "t,k_t,i_t,v_t,regret_inc,cum_regret,min_slack,event_e_flag";

/// Shortest round-trip decimal form.
std::string format_double(double v);

void write_run_csv(std::ostream& out, const RunResult& result);

/// Writes <dir>/run.csv and <dir>/summary.json (plus allocations.csv when
/// requested by the config).
int cmd_run(const std::filesystem::path& config_path, std::ostream& err);

struct SweepArgs {
  std::filesystem::path config;
  std::string param;
  std::vector<std::string> values;
  std::size_t seeds = 1;
  std::size_t workers = 0;
};

/// Writes <dir>/sweep.csv: one row per (value, seed), then one median row per
/// value. Seeds are the config seed and its successors.
int cmd_sweep(const SweepArgs& args, std::ostream& err);

/// Prints the suite's JSON report; nonzero exit if any check failed.
int cmd_verify(const std::string& suite, std::ostream& out, std::ostream& err);

struct LowerboundArgs {
  std::size_t T = 1000;
  std::size_t seeds = 1;
  std::string policy = "ucb_fair";
  double noise_sigma = 1.0;
  double warmup_scale = 1.0;
  std::size_t grid_cap = 512;
  std::optional<std::filesystem::path> out;
};

/// CSV rows instance,seed,statistic,final_regret for mu1 and, when its
/// entries stay inside the value bounds, mu2.
int cmd_lowerbound(const LowerboundArgs& args, std::ostream& out, std::ostream& err);

}  // namespace fairdiv::cli
