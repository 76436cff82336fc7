#include "fairdiv/opt.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>
#include <sstream>

#include "fairdiv/random.hpp"

namespace fairdiv {

GridSpec GridSpec::for_horizon(std::size_t T, std::size_t cap, std::uint64_t seed) {
  return GridSpec{1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(T, 1))), cap, seed};
}

lp::LinearProgram allocation_program(std::size_t n, std::size_t m) {
  lp::LinearProgram program;
  program.objective.assign(n * m, 0.0);
  program.eq_constraints.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    lp::LinearConstraint col{std::vector<double>(n * m, 0.0), 1.0};
    for (std::size_t i = 0; i < n; ++i) col.coeffs[i * m + k] = 1.0;
    program.eq_constraints.push_back(std::move(col));
  }
  return program;
}

void add_lower_bound(lp::LinearProgram& program, const Matrix& coeffs, double c) {
  lp::LinearConstraint row{std::vector<double>(coeffs.size()), -c};
  for (std::size_t j = 0; j < coeffs.size(); ++j) row.coeffs[j] = -coeffs.values()[j];
  program.ub_constraints.push_back(std::move(row));
}

namespace {

Allocation to_allocation(const lp::LpSolution& sol, std::size_t n, std::size_t m) {
  return Allocation(n, m, sol.x).renormalized();
}

void require_box_shape(const ConfidenceBox& box, const ConstraintSet& cs, const char* what) {
  if (box.rows() != cs.players() || box.cols() != cs.item_types()) {
    throw DimensionError(std::string(what) + ": box shape does not match constraint set");
  }
}

}  // namespace

Allocation solve_Y(const ValueMatrix& mu, const ConstraintSet& cs) {
  const std::size_t n = mu.rows();
  const std::size_t m = mu.cols();
  auto program = allocation_program(n, m);
  std::copy(mu.values().begin(), mu.values().end(), program.objective.begin());
  const auto coeffs = cs.coefficients(mu);
  program.ub_constraints.reserve(coeffs.size());
  for (std::size_t l = 0; l < coeffs.size(); ++l) add_lower_bound(program, coeffs[l], cs.thresholds()[l]);
  const auto sol = lp::solve(program);
  if (!sol.optimal()) {
    throw InfeasibleProgram("solve_Y: " + std::string(lp::to_string(sol.status)) + " under " + cs.name());
  }
  return to_allocation(sol, n, m);
}

Allocation solve_robust_welfare(const ConfidenceBox& box, const ConstraintSet& cs,
                                const ValueMatrix& mu_upper) {
  require_box_shape(box, cs, "solve_robust_welfare");
  require_same_shape(box.center, mu_upper, "solve_robust_welfare");
  const std::size_t n = box.rows();
  const std::size_t m = box.cols();
  auto program = allocation_program(n, m);
  std::copy(mu_upper.values().begin(), mu_upper.values().end(), program.objective.begin());
  const auto worst = robust_coefficients(cs, box);
  for (std::size_t l = 0; l < worst.size(); ++l) add_lower_bound(program, worst[l], cs.thresholds()[l]);
  const auto sol = lp::solve(program);
  if (!sol.optimal()) {
    throw InfeasibleProgram("solve_robust_welfare: robust " + cs.name() + " constraints are " +
                            std::string(lp::to_string(sol.status)));
  }
  return to_allocation(sol, n, m);
}

namespace {

struct EntryGrid {
  std::int64_t first = 0;  // first multiple index, or the fallback flag below
  std::uint64_t count = 1;
  bool fallback = false;
  double midpoint = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

std::vector<EntryGrid> entry_grids(const ConfidenceBox& box, const GridSpec& grid) {
  if (!(grid.spacing > 0.0) || grid.cap < 1) throw std::invalid_argument("grid: spacing > 0 and cap >= 1 required");
  if (box.empty()) throw EmptyBoxError("grid_points: empty box");
  std::vector<EntryGrid> out;
  out.reserve(box.center.size());
  for (std::size_t i = 0; i < box.rows(); ++i) {
    for (std::size_t k = 0; k < box.cols(); ++k) {
      EntryGrid e;
      e.lo = box.lower(i, k);
      e.hi = box.upper(i, k);
      if (!std::isfinite(e.lo) || !std::isfinite(e.hi)) throw EmptyBoxError("grid_points: unbounded box");
      e.midpoint = 0.5 * (e.lo + e.hi);
      const double first = std::ceil(e.lo / grid.spacing - 1e-9);
      const double last = std::floor(e.hi / grid.spacing + 1e-9);
      if (last < first) {
        e.fallback = true;
        e.count = 1;
      } else {
        e.first = static_cast<std::int64_t>(first);
        e.count = static_cast<std::uint64_t>(last - first) + 1;
      }
      out.push_back(e);
    }
  }
  return out;
}

double entry_value(const EntryGrid& e, std::uint64_t idx, double spacing) {
  if (e.fallback) return e.midpoint;
  const double v = static_cast<double>(e.first + static_cast<std::int64_t>(idx)) * spacing;
  return std::clamp(v, e.lo, e.hi);
}

std::uint64_t saturating_product(const std::vector<EntryGrid>& grids) {
  std::uint64_t total = 1;
  for (const auto& e : grids) {
    if (e.count != 0 && total > UINT64_MAX / e.count) return UINT64_MAX;
    total *= e.count;
  }
  return total;
}

ValueMatrix decode(std::uint64_t index, const std::vector<EntryGrid>& grids, std::size_t n,
                   std::size_t m, double spacing) {
  ValueMatrix mu(n, m);
  // Last entry varies fastest.
  for (std::size_t j = grids.size(); j-- > 0;) {
    const auto& e = grids[j];
    mu.values()[j] = entry_value(e, index % e.count, spacing);
    index /= e.count;
  }
  return mu;
}

}  // namespace

std::uint64_t grid_size(const ConfidenceBox& box, const GridSpec& grid) {
  return saturating_product(entry_grids(box, grid));
}

std::vector<ValueMatrix> grid_points(const ConfidenceBox& box, const GridSpec& grid) {
  const auto grids = entry_grids(box, grid);
  const std::uint64_t total = saturating_product(grids);
  const std::size_t n = box.rows();
  const std::size_t m = box.cols();
  std::vector<ValueMatrix> out;

  if (total <= grid.cap) {
    out.reserve(total);
    for (std::uint64_t idx = 0; idx < total; ++idx) out.push_back(decode(idx, grids, n, m, grid.spacing));
    return out;
  }

  CounterRng rng(grid.sample_seed, Stream::kGridSample);
  out.reserve(grid.cap);
  if (total < UINT64_MAX) {
    // Floyd's sampling of `cap` distinct indices in [0, total).
    std::set<std::uint64_t> chosen;
    for (std::uint64_t j = total - grid.cap; j < total; ++j) {
      const std::uint64_t t = rng.below(j + 1);
      if (!chosen.insert(t).second) chosen.insert(j);
    }
    for (std::uint64_t idx : chosen) out.push_back(decode(idx, grids, n, m, grid.spacing));
    return out;
  }

  // Product overflows 64 bits: draw entry indices independently, dropping repeats.
  std::set<std::vector<std::uint64_t>> chosen;
  while (chosen.size() < grid.cap) {
    std::vector<std::uint64_t> pick(grids.size());
    for (std::size_t j = 0; j < grids.size(); ++j) pick[j] = rng.below(grids[j].count);
    chosen.insert(std::move(pick));
  }
  for (const auto& pick : chosen) {
    ValueMatrix mu(n, m);
    for (std::size_t j = 0; j < grids.size(); ++j) mu.values()[j] = entry_value(grids[j], pick[j], grid.spacing);
    out.push_back(std::move(mu));
  }
  return out;
}

const std::optional<Allocation>& YCache::get(const ValueMatrix& mu, const ConstraintSet& cs) {
  std::string key(mu.size() * sizeof(double), '\0');
  std::memcpy(key.data(), mu.values().data(), key.size());
  auto it = entries_.find(key);
  if (it != entries_.end()) {
    ++hits_;
    return it->second;
  }
  std::optional<Allocation> y;
  try {
    y = solve_Y(mu, cs);
  } catch (const InfeasibleProgram&) {
    y.reset();
  }
  return entries_.emplace(std::move(key), std::move(y)).first->second;
}

GridMaxResult grid_max(const ConfidenceBox& box, const ConstraintSet& cs, const Matrix& eps,
                       const GridSpec& grid, YCache* cache) {
  require_box_shape(box, cs, "grid_max_term");
  require_same_shape(box.center, eps, "grid_max_term");
  YCache local;
  YCache& memo = cache ? *cache : local;

  GridMaxResult result;
  result.full_grid_size = grid_size(box, grid);
  result.value = -std::numeric_limits<double>::infinity();
  for (const auto& mu : grid_points(box, grid)) {
    ++result.points;
    const auto& y = memo.get(mu, cs);
    if (!y) {
      ++result.infeasible_points;
      continue;
    }
    result.value = std::max(result.value, radius_weighted(*y, eps));
  }
  if (result.infeasible_points == result.points) {
    result.value = std::numeric_limits<double>::infinity();
  }
  return result;
}

double grid_max_term(const ConfidenceBox& box, const ConstraintSet& cs, const Matrix& eps,
                     const GridSpec& grid, YCache* cache) {
  return grid_max(box, cs, eps, grid, cache).value;
}

double slack_budget(const Allocation& xhat, const ValueMatrix& mu_upper, const Matrix& eps,
                    double gridmax, const ConstraintSet& cs) {
  const double welfare = frobenius(xhat, mu_upper);
  const double explore = radius_weighted(xhat, eps);
  const double budget = welfare - 4.0 * cs.lipschitz_k() * cs.c_p2() * gridmax - 2.0 * explore -
                        kBudgetRelaxation;
  if (std::isnan(budget)) return -std::numeric_limits<double>::infinity();
  return budget;
}

Allocation solve_explore(const ConfidenceBox& box, const ConstraintSet& cs,
                         const ValueMatrix& mu_upper, Cell target, double budget) {
  require_box_shape(box, cs, "solve_explore");
  require_same_shape(box.center, mu_upper, "solve_explore");
  const std::size_t n = box.rows();
  const std::size_t m = box.cols();
  if (target.player >= n || target.item >= m) throw DimensionError("solve_explore: target out of range");

  auto program = allocation_program(n, m);
  program.objective[target.player * m + target.item] = 1.0;
  const auto worst = robust_coefficients(cs, box);
  for (std::size_t l = 0; l < worst.size(); ++l) add_lower_bound(program, worst[l], cs.thresholds()[l]);
  if (std::isfinite(budget)) add_lower_bound(program, mu_upper, budget);
  const auto sol = lp::solve(program);
  if (!sol.optimal()) {
    std::ostringstream os;
    os << "solve_explore: LP for target (" << target.player << ", " << target.item << ") is "
       << lp::to_string(sol.status) << " with welfare budget " << budget;
    throw ContractViolation(os.str());
  }
  return to_allocation(sol, n, m);
}

Allocation average_explorers(std::span<const Allocation> explorers) {
  return Allocation(mean_of(explorers));
}

}  // namespace fairdiv
