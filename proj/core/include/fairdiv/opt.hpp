#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "fairdiv/constraints.hpp"
#include "fairdiv/core.hpp"
#include "fairdiv/lp.hpp"

namespace fairdiv {

/// An allocation LP had no feasible point.
class InfeasibleProgram : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lattice over a confidence box: every entry a multiple of `spacing`.
struct GridSpec {
  double spacing = 0.0;
  std::size_t cap = 512;
  std::uint64_t sample_seed = 0;

  /// spacing = 1/√T
  static GridSpec for_horizon(std::size_t T, std::size_t cap = 512, std::uint64_t seed = 0);
};

/// Relaxation subtracted from the exploration welfare budget so that X̂ stays
/// feasible for the exploration LP under rounding.
inline constexpr double kBudgetRelaxation = 1e-9;

/// X flattened row-major into the LP variable vector, columns summing to 1.
lp::LinearProgram allocation_program(std::size_t n, std::size_t m);

/// Appends ⟨B, X⟩_F >= c to an allocation program.
void add_lower_bound(lp::LinearProgram& program, const Matrix& coeffs, double c);

/// Y^μ: the welfare-maximizing allocation satisfying cs at μ.
/// Throws InfeasibleProgram when no allocation meets the constraints.
Allocation solve_Y(const ValueMatrix& mu, const ConstraintSet& cs);

/// X̂: maximizes ⟨X, μ_U⟩ subject to cs holding for every μ in the box.
/// Throws InfeasibleProgram when the robust constraints admit no allocation.
Allocation solve_robust_welfare(const ConfidenceBox& box, const ConstraintSet& cs,
                                const ValueMatrix& mu_upper);

/// Grid matrices inside the box, row-major entry order. Entries whose interval
/// holds no multiple of the spacing fall back to the interval midpoint. When the
/// product exceeds `cap`, a seeded uniform subsample of `cap` points is returned
/// in index order.
std::vector<ValueMatrix> grid_points(const ConfidenceBox& box, const GridSpec& grid);

/// Number of points in the full (uncapped) grid, saturating at UINT64_MAX.
std::uint64_t grid_size(const ConfidenceBox& box, const GridSpec& grid);

/// Round-local memo of solve_Y keyed by the exact bits of μ. Infeasible
/// points are remembered as std::nullopt.
class YCache {
 public:
  const std::optional<Allocation>& get(const ValueMatrix& mu, const ConstraintSet& cs);
  std::size_t size() const { return entries_.size(); }
  std::size_t hits() const { return hits_; }

 private:
  std::unordered_map<std::string, std::optional<Allocation>> entries_;
  std::size_t hits_ = 0;
};

struct GridMaxResult {
  double value = 0.0;
  std::size_t points = 0;
  std::size_t infeasible_points = 0;
  std::uint64_t full_grid_size = 0;
};

/// max over grid points μ of ⟨Y^μ, eps⟩_F. Grid points where Y^μ does not
/// exist are skipped; if none is feasible the value is +∞ (no usable bound).
GridMaxResult grid_max(const ConfidenceBox& box, const ConstraintSet& cs, const Matrix& eps,
                       const GridSpec& grid, YCache* cache = nullptr);

double grid_max_term(const ConfidenceBox& box, const ConstraintSet& cs, const Matrix& eps,
                     const GridSpec& grid, YCache* cache = nullptr);

/// ⟨X̂, μ_U⟩ - 4·K·C_P2·gridmax - 2·⟨X̂, ε⟩ - kBudgetRelaxation.
/// Infinite terms propagate to -∞, which disables the welfare constraint.
double slack_budget(const Allocation& xhat, const ValueMatrix& mu_upper, const Matrix& eps,
                    double gridmax, const ConstraintSet& cs);

struct Cell {
  std::size_t player = 0;
  std::size_t item = 0;
};

/// Ẑ^{ik}: maximizes X_ik subject to the robust constraints, columns summing
/// to 1, and ⟨X, μ_U⟩ >= budget (omitted when budget is -∞).
/// Infeasibility is a ContractViolation: X̂ is feasible by construction.
Allocation solve_explore(const ConfidenceBox& box, const ConstraintSet& cs,
                         const ValueMatrix& mu_upper, Cell target, double budget);

/// Entrywise mean of the explorers.
Allocation average_explorers(std::span<const Allocation> explorers);

}  // namespace fairdiv
