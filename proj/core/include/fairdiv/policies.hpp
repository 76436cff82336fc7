#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "fairdiv/constraints.hpp"
#include "fairdiv/core.hpp"
#include "fairdiv/opt.hpp"

namespace fairdiv {

struct Observation {
  std::size_t t = 0;
  std::size_t item = 0;
  std::size_t player = 0;
  double value = 0.0;
};

/// Everything observed so far: one record per past round plus per-cell
/// sample counts and value sums.
class History {
 public:
  History(std::size_t n, std::size_t m);

  void record(std::size_t t, std::size_t item, std::size_t player, double value);

  std::size_t players() const { return n_; }
  std::size_t item_types() const { return m_; }
  std::size_t size() const { return records_.size(); }
  const std::vector<Observation>& records() const { return records_; }
  std::size_t count(std::size_t i, std::size_t k) const { return counts_[i * m_ + k]; }
  double value_sum(std::size_t i, std::size_t k) const { return sums_[i * m_ + k]; }

 private:
  std::size_t n_;
  std::size_t m_;
  std::vector<Observation> records_;
  std::vector<std::size_t> counts_;
  std::vector<double> sums_;
};

/// ε_ik = ln(6nmT)/√N_ik, and +∞ for cells never sampled.
Matrix confidence_radii(const History& history, std::size_t T);

/// Per-cell sample means; unsampled cells take (a + b)/2.
ValueMatrix empirical_means(const History& history, double a, double b);

/// min(T, ceil(ln²(T)·√T·scale))
std::size_t warmup_length(std::size_t T, double scale = 1.0);

/// min(T, ceil(T^(2/3)·scale))
std::size_t commit_round(std::size_t T, double scale = 1.0);

/// The scalars a learning policy may see. The true means are deliberately
/// absent.
struct PublicParams {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t T = 0;
  double a = 0.0;
  double b = 0.0;

  static PublicParams of(const InstanceSpec& spec);
};

/// Box around the empirical means with the current radii, clamped to [a, b].
ConfidenceBox confidence_box(const History& history, const PublicParams& params);

/// What the UCB pipeline did in one round.
struct RoundTrace {
  bool warmup = true;
  bool robust_infeasible = false;  // X̂ had no solution; UAR was used
  bool clamp_dropped = false;      // clamped box was empty, clamp removed
  double max_radius = 0.0;
  double gridmax = 0.0;
  double budget = 0.0;
  std::size_t grid_points = 0;
  std::size_t grid_infeasible = 0;
  std::uint64_t full_grid_size = 0;
};

struct UcbOptions {
  double warmup_scale = 1.0;
  /// Spacing 0 means 1/√T.
  double grid_spacing = 0.0;
  std::size_t grid_cap = 512;
  std::uint64_t grid_seed = 0;
};

/// One round of fair UCB. UAR during warm-up; afterwards the robust welfare
/// LP, the grid term, the welfare budget, one exploration LP per cell and
/// their average. Falls back to UAR when the robust LP is infeasible.
/// Contract violations from the LPs are rethrown with the round index.
Allocation ucb_fair_allocate(std::size_t t, const History& history, const PublicParams& params,
                             const ConstraintSet& cs, const UcbOptions& options,
                             RoundTrace* trace = nullptr);

/// Explore-then-commit: UAR before the commit round, then the robust welfare
/// allocation for the box at the commit round (UAR if that LP is infeasible).
Allocation etc_allocate(std::size_t t, const History& history, const PublicParams& params,
                        const ConstraintSet& cs, double etc_scale = 1.0);

/// Y^{μ*}
Allocation oracle_allocate(const InstanceSpec& spec, const ConstraintSet& cs);

enum class PolicyKind { kUar, kOracle, kEtc, kUcbFair };

std::string_view to_string(PolicyKind kind);
std::optional<PolicyKind> parse_policy_kind(std::string_view name);

class Policy {
 public:
  virtual ~Policy() = default;
  virtual PolicyKind kind() const = 0;
  virtual Allocation allocate(std::size_t t, const History& history) = 0;
  /// Rounds before the policy starts acting on its estimates.
  virtual std::size_t exploration_rounds() const { return 0; }
};

class UarPolicy final : public Policy {
 public:
  UarPolicy(std::size_t n, std::size_t m) : uar_(uar_allocation(n, m)) {}
  PolicyKind kind() const override { return PolicyKind::kUar; }
  Allocation allocate(std::size_t, const History&) override { return uar_; }

 private:
  Allocation uar_;
};

class OraclePolicy final : public Policy {
 public:
  OraclePolicy(const InstanceSpec& spec, const ConstraintSet& cs) : y_(oracle_allocate(spec, cs)) {}
  PolicyKind kind() const override { return PolicyKind::kOracle; }
  Allocation allocate(std::size_t, const History&) override { return y_; }

 private:
  Allocation y_;
};

class EtcPolicy final : public Policy {
 public:
  EtcPolicy(PublicParams params, ConstraintSet cs, double etc_scale = 1.0);
  PolicyKind kind() const override { return PolicyKind::kEtc; }
  Allocation allocate(std::size_t t, const History& history) override;
  std::size_t exploration_rounds() const override { return commit_; }

 private:
  PublicParams params_;
  ConstraintSet cs_;
  double scale_;
  std::size_t commit_;
  std::optional<Allocation> committed_;
};

class UcbFairPolicy final : public Policy {
 public:
  UcbFairPolicy(PublicParams params, ConstraintSet cs, UcbOptions options = {});
  PolicyKind kind() const override { return PolicyKind::kUcbFair; }
  Allocation allocate(std::size_t t, const History& history) override;
  std::size_t exploration_rounds() const override { return warmup_; }
  /// One entry per post-warm-up round.
  const std::vector<RoundTrace>& traces() const { return traces_; }

 private:
  PublicParams params_;
  ConstraintSet cs_;
  UcbOptions options_;
  std::size_t warmup_;
  std::vector<RoundTrace> traces_;
};

struct PolicyConfig {
  PolicyKind kind = PolicyKind::kUcbFair;
  double warmup_scale = 1.0;
  double etc_scale = 1.0;
  double grid_spacing = 0.0;
  std::size_t grid_cap = 512;
  std::uint64_t grid_seed = 0;
};

/// Only the oracle is handed the true means.
std::unique_ptr<Policy> make_policy(const PolicyConfig& config, const InstanceSpec& spec,
                                    const ConstraintSet& cs);

}  // namespace fairdiv
