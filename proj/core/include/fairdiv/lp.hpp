#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fairdiv::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Feasibility tolerance reported for optimal solutions.
inline constexpr double kFeasibilityTol = 1e-9;
/// Target accuracy of the reported optimum.
inline constexpr double kOptimalityTol = 1e-8;

/// Largest variable count accepted by enumerate_vertices().
inline constexpr std::size_t kMaxEnumerationVariables = 10;

struct LinearConstraint {
  std::vector<double> coeffs;
  double rhs = 0.0;
};

struct VariableBound {
  double lo = 0.0;
  double hi = kInfinity;
};

/// maximize objective·x
///   s.t.  eq.coeffs·x  = eq.rhs   for every eq constraint
///         ub.coeffs·x <= ub.rhs   for every ub constraint
///         lo_j <= x_j <= hi_j
/// An empty var_bounds means every variable lives in [0, +inf).
struct LinearProgram {
  std::vector<double> objective;
  std::vector<LinearConstraint> eq_constraints;
  std::vector<LinearConstraint> ub_constraints;
  std::vector<VariableBound> var_bounds;

  std::size_t num_variables() const { return objective.size(); }
  VariableBound bound(std::size_t j) const {
    return var_bounds.empty() ? VariableBound{} : var_bounds[j];
  }
};

enum class Status { kOptimal, kInfeasible, kUnbounded };

std::string_view to_string(Status status);

struct LpSolution {
  Status status = Status::kInfeasible;
  std::vector<double> x;
  double objective_value = 0.0;

  bool optimal() const { return status == Status::kOptimal; }
};

/// Thrown for dimension mismatches, inverted bounds and non-finite data.
class MalformedProgram : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Throws MalformedProgram if `lp` breaks a structural invariant.
void check_well_formed(const LinearProgram& lp);

/// Two-phase dense tableau simplex with Bland's rule. The pivot sequence is a
/// function of the input only, so identical programs give bit-identical
/// solutions.
LpSolution solve(const LinearProgram& lp);

/// All basic feasible solutions, found by intersecting every n-subset of the
/// constraint hyperplanes. Exponential; meant as a brute-force reference for
/// small programs (at most kMaxEnumerationVariables variables).
std::vector<std::vector<double>> enumerate_vertices(const LinearProgram& lp);

/// Largest constraint or bound violation of `x` (0 when feasible).
double max_violation(const LinearProgram& lp, std::span<const double> x);

/// objective·x
double objective_at(const LinearProgram& lp, std::span<const double> x);

}  // namespace fairdiv::lp
