#pragma once

#include <vector>

#include "fairdiv/constraints.hpp"
#include "fairdiv/core.hpp"

namespace fairdiv {

/// Tolerance for every lemma check: each side may come from an LP solve.
inline constexpr double kLemmaTol = 1e-8;

/// S_i = Y_i·μ_i - 1/n
std::vector<double> slack_profile(const Allocation& y, const ValueMatrix& mu);

/// Shifts a little allocation from each player in proportion to their
/// proportionality slack and spreads it evenly, so every player ends with
/// slack at least γ. Returns UAR when the total slack is at most (b/a)·n·γ.
/// Rows of Y with zero total contribute nothing. Requires 0 <= γ < a/(bn).
Allocation construct_xprime(const Allocation& y, const ValueMatrix& mu, double gamma, double a,
                            double b);

struct SlackConstructionReport {
  bool uar_case = false;
  double welfare_loss = 0.0;
  double welfare_bound = 0.0;
  double min_slack = 0.0;      // min_i X'_i·μ_i - 1/n
  double max_deviation = 0.0;  // max_ik |X'_ik - Y_ik|
  double deviation_bound = 0.0;
  bool welfare_ok = false;
  bool slack_ok = false;
  bool deviation_ok = false;

  bool passed() const { return welfare_ok && slack_ok && deviation_ok; }
};

/// Checks a candidate X' against Y: welfare loss <= bnγ/a, and unless X' is
/// UAR, slack >= γ for every player and |X' - Y| <= nγ/a entrywise.
SlackConstructionReport check_slack_construction(const Allocation& xprime, const Allocation& y,
                                                 const ValueMatrix& mu, double gamma, double a,
                                                 double b);

/// check_slack_construction applied to construct_xprime's output.
SlackConstructionReport verify_slack_construction(const Allocation& y, const ValueMatrix& mu,
                                                  double gamma, double a, double b);

/// Repairs an allocation that meets proportionality only up to -eps by moving
/// allocation from players with surplus to players with a deficit; UAR when
/// the surplus is too small relative to the deficit. Throws ContractViolation
/// if some player's slack is below -eps.
Allocation construct_w(const Allocation& z, const ValueMatrix& mu, double eps, double a, double b);

struct ContinuityReport {
  double welfare1 = 0.0;
  double welfare2 = 0.0;
  double distance = 0.0;  // ‖μ¹ - μ²‖₁
  double bound = 0.0;     // C_P2·distance
  bool ok = false;
};

/// |⟨Y^{μ¹}, μ¹⟩ - ⟨Y^{μ²}, μ²⟩| <= C_P2·‖μ¹ - μ²‖₁ + kLemmaTol, where C_P2 = bn/a
/// for the built-in families.
ContinuityReport verify_continuity(const ValueMatrix& mu1, const ValueMatrix& mu2,
                                   const ConstraintSet& cs);

}  // namespace fairdiv
