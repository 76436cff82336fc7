#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fairdiv/core.hpp"

namespace fairdiv {

/// Slack below -kConstraintTol counts as a violated constraint.
inline constexpr double kConstraintTol = 1e-9;

/// How a coefficient entry B_ℓ(μ)_ik moves as μ grows entrywise.
enum class Monotonicity { kIncreasing, kDecreasing, kConstant };

using CoefficientFn = std::function<std::vector<Matrix>(const ValueMatrix&)>;

/// A family of linear fairness constraints ⟨B_ℓ(μ), X⟩_F >= c_ℓ, ℓ = 0..L-1,
/// together with the structural constants the fair-UCB analysis needs.
///
/// Each coefficient entry must depend on a single entry of μ and be monotone
/// in it; `corner_rule` records the direction. That is what lets a box of
/// uncertain μ collapse to one worst-case matrix per constraint.
class ConstraintSet {
 public:
  struct Constants {
    double lipschitz_k = 1.0;
    double c_p2 = 1.0;
    double c_p3 = 1.0;
    double gamma0 = 0.0;
  };

  ConstraintSet(std::string name, std::size_t n, std::size_t m, CoefficientFn coeff_fn,
                std::vector<double> thresholds, std::vector<Monotonicity> corner_rule,
                Constants constants);

  const std::string& name() const { return name_; }
  std::size_t size() const { return thresholds_.size(); }
  std::size_t players() const { return n_; }
  std::size_t item_types() const { return m_; }

  /// B_ℓ(μ) for every ℓ; checks shapes on the way out.
  std::vector<Matrix> coefficients(const ValueMatrix& mu) const;
  const std::vector<double>& thresholds() const { return thresholds_; }
  Monotonicity corner(std::size_t l, std::size_t i, std::size_t k) const {
    return corner_rule_[(l * n_ + i) * m_ + k];
  }

  double lipschitz_k() const { return constants_.lipschitz_k; }
  double c_p2() const { return constants_.c_p2; }
  double c_p3() const { return constants_.c_p3; }
  double gamma0() const { return constants_.gamma0; }

 private:
  std::string name_;
  std::size_t n_;
  std::size_t m_;
  CoefficientFn coeff_fn_;
  std::vector<double> thresholds_;
  std::vector<Monotonicity> corner_rule_;
  Constants constants_;
};

/// X_ℓ·μ_ℓ >= 1/n for every player ℓ.
ConstraintSet proportionality(std::size_t n, std::size_t m, double a, double b);

/// X_i·μ_i >= X_j·μ_i for every ordered pair i != j. Requires n >= 2.
ConstraintSet envy_freeness(std::size_t n, std::size_t m, double a, double b);

ConstraintSet make_constraint_set(ConstraintKind kind, std::size_t n, std::size_t m, double a,
                                  double b);

class EmptyBoxError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Entrywise interval set {μ' : |μ'_ik - center_ik| <= radius_ik}, optionally
/// intersected with [clamp_lo, clamp_hi]. Radii may be +∞.
struct ConfidenceBox {
  ValueMatrix center;
  Matrix radius;
  std::optional<double> clamp_lo;
  std::optional<double> clamp_hi;

  std::size_t rows() const { return center.rows(); }
  std::size_t cols() const { return center.cols(); }

  double lower(std::size_t i, std::size_t k) const;
  double upper(std::size_t i, std::size_t k) const;
  ValueMatrix lower_corner() const;
  ValueMatrix upper_corner() const;
  /// Some effective interval is empty.
  bool empty() const;
  bool contains(const Matrix& mu, double tol = 0.0) const;
};

/// Builds a box, checking shapes and that radii are nonnegative.
ConfidenceBox make_box(ValueMatrix center, Matrix radius, std::optional<double> clamp_lo = {},
                       std::optional<double> clamp_hi = {});

/// slack_ℓ = ⟨B_ℓ(μ), X⟩_F - c_ℓ
std::vector<double> evaluate(const Allocation& x, const ValueMatrix& mu, const ConstraintSet& cs);

/// min over ℓ of evaluate(); +∞ for an empty family.
double min_slack(const Allocation& x, const ValueMatrix& mu, const ConstraintSet& cs);

/// Worst-case coefficient matrices over the box: because allocations are
/// nonnegative, ⟨B_ℓ^worst, X⟩ <= ⟨B_ℓ(μ), X⟩ for every μ in the box, so the
/// semi-infinite family reduces to L linear constraints.
/// Throws EmptyBoxError for empty or unbounded boxes.
std::vector<Matrix> robust_coefficients(const ConstraintSet& cs, const ConfidenceBox& box);

/// UAR meets every constraint at μ (min slack >= -kConstraintTol).
bool check_property_uar(const ConstraintSet& cs, const ValueMatrix& mu);

/// |B_ℓ(μ¹)_ik - B_ℓ(μ²)_ik| <= K·eps_ik for all ℓ, i, k. Throws
/// ContractViolation if |μ¹ - μ²| exceeds eps somewhere.
bool check_lipschitz(const ConstraintSet& cs, const ValueMatrix& mu1, const ValueMatrix& mu2,
                     const Matrix& eps);

}  // namespace fairdiv
