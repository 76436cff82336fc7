#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fairdiv/constraints.hpp"
#include "fairdiv/core.hpp"
#include "fairdiv/policies.hpp"

namespace fairdiv {

struct RoundRecord {
  std::size_t t = 0;
  std::size_t item = 0;
  std::size_t player = 0;
  double value = 0.0;
  double regret_inc = 0.0;
  double cum_regret = 0.0;
  /// Smallest constraint slack of the round's allocation under the true means.
  double min_slack = 0.0;
  /// True means inside the round's clamped confidence box.
  bool in_box = false;
};

struct RunResult {
  InstanceSpec spec;
  PolicyKind policy = PolicyKind::kUar;
  std::size_t exploration_rounds = 0;
  double optimal_welfare = 0.0;
  std::vector<RoundRecord> rounds;
  /// Filled only when full allocations are requested.
  std::vector<Allocation> allocations;
};

struct RunOptions {
  bool record_full_allocations = false;
};

/// Plays T rounds: item type uniform on [m], recipient drawn from the
/// allocation's column, value Gaussian around the true mean. Item types,
/// recipients and values come from separate random substreams of spec.seed.
/// Contract violations abort the run.
RunResult run(const InstanceSpec& spec, Policy& policy, const RunOptions& options = {});

/// Builds the constraint set and policy from `config` and plays the run.
RunResult run(const InstanceSpec& spec, const PolicyConfig& config, const RunOptions& options = {});

std::vector<double> regret_curve(const RunResult& result);

/// max(0, -min slack) per round, from the recorded slacks.
std::vector<double> violation_trace(const RunResult& result);

/// Same, recomputed from recorded allocations under `cs`.
/// Throws std::logic_error if allocations were not recorded.
std::vector<double> violation_trace(const RunResult& result, const ConstraintSet& cs);

/// max over players of (1/n)·Σ_t μ*_{i,k_t} - Σ_{t: i_t = i} μ*_{i,k_t}, floored at 0.
double disproportionality(const RunResult& result);

/// Fraction of rounds after the policy's exploration phase whose box held the
/// true means; 1 when there are no such rounds.
double event_e_diagnostic(const RunResult& result);

struct RunSummary {
  double final_regret = 0.0;
  double max_violation = 0.0;
  double disproportionality = 0.0;
  double event_e_fraction = 1.0;
};

RunSummary summarize(const RunResult& result);

struct BatchCase {
  InstanceSpec spec;
  PolicyConfig policy;
};

struct BatchRow {
  std::size_t case_index = 0;
  PolicyKind policy = PolicyKind::kUar;
  std::uint64_t seed = 0;
  std::optional<RunSummary> summary;
  std::string error;
};

/// Every (case, seed) pair, seed replacing spec.seed, in that nesting order.
/// Runs are spread over `workers` threads (0 = hardware concurrency); a failed
/// run is reported in its row and the rest continue.
std::vector<BatchRow> batch(const std::vector<BatchCase>& cases,
                            const std::vector<std::uint64_t>& seeds, std::size_t workers = 0);

}  // namespace fairdiv
