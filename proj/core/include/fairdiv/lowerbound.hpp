#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "fairdiv/core.hpp"
#include "fairdiv/sim.hpp"

namespace fairdiv {

/// Value bounds of the hard instances after dividing by 42.
inline constexpr double kLbLowerValue = 1.0 / 42.0;
inline constexpr double kLbUpperValue = 40.0 / 42.0;

/// Two 3×3 envy-freeness instances that differ only in player 2's values for
/// item types 2 and 3 (one-based), by ε = T^(-1/3) in opposite directions.
struct LbInstancePair {
  ValueMatrix mu1;
  ValueMatrix mu2;
  double epsilon = 0.0;
  std::size_t T = 0;
};

/// Throws std::invalid_argument for T < 8.
LbInstancePair lb_instances(std::size_t T);

/// The welfare-optimal envy-free allocation for mu1: player 1 takes type 2,
/// player 2 takes type 1, player 3 takes type 3.
Allocation ef_optimal_mu1();

struct DecompositionCheck {
  double lhs = 0.0;  // ⟨Y, μ₁⟩ - ⟨X, μ₁⟩
  double rhs = 0.0;  // (X22 + X23 + X32)/42, one-based
  bool ok = false;
  /// Set when X is not envy-free under mu1; the check is then skipped.
  std::optional<std::string> precondition_error;
};

DecompositionCheck regret_decomposition_check(const Allocation& x);

/// X22 + X23 + X32 (one-based) of one allocation.
double lb_cells(const Allocation& x);

/// Σ_t lb_cells(X^t). Throws std::logic_error if allocations were not recorded.
double lb_statistic(const RunResult& result);

/// An InstanceSpec for one of the pair (which = 1 or 2) with envy-freeness
/// constraints and bounds [1/42, 40/42].
InstanceSpec lb_spec(const LbInstancePair& pair, int which, double noise_sigma, std::uint64_t seed);

}  // namespace fairdiv
