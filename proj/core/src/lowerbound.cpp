#include "fairdiv/lowerbound.hpp"

#include <cmath>
#include <stdexcept>

#include "fairdiv/constraints.hpp"

namespace fairdiv {

LbInstancePair lb_instances(std::size_t T) {
  if (T < 8) throw std::invalid_argument("lb_instances: T must be >= 8");
  LbInstancePair pair;
  pair.T = T;
  pair.epsilon = 1.0 / std::cbrt(static_cast<double>(T));
  pair.mu1 = ValueMatrix{{20.0 / 42, 21.0 / 42, 1.0 / 42},
                         {19.0 / 42, 19.0 / 42, 4.0 / 42},
                         {1.0 / 42, 1.0 / 42, 40.0 / 42}};
  pair.mu2 = pair.mu1;
  pair.mu2(1, 1) += pair.epsilon;
  pair.mu2(1, 2) -= pair.epsilon;
  return pair;
}

Allocation ef_optimal_mu1() {
  return Allocation{{0.0, 1.0, 0.0}, {1.0, 0.0, 0.0}, {0.0, 0.0, 1.0}};
}

DecompositionCheck regret_decomposition_check(const Allocation& x) {
  const auto pair = lb_instances(8);
  DecompositionCheck check;
  if (x.rows() != 3 || x.cols() != 3) {
    check.precondition_error = "allocation must be 3x3";
    return check;
  }
  const auto ef = envy_freeness(3, 3, kLbLowerValue, kLbUpperValue);
  const double slack = min_slack(x, pair.mu1, ef);
  if (slack < -kConstraintTol) {
    check.precondition_error = "allocation is not envy-free under mu1 (min slack " + std::to_string(slack) + ")";
    return check;
  }
  check.lhs = frobenius(ef_optimal_mu1(), pair.mu1) - frobenius(x, pair.mu1);
  check.rhs = lb_cells(x) / 42.0;
  check.ok = check.lhs >= check.rhs - 1e-9;
  return check;
}

double lb_cells(const Allocation& x) { return x(1, 1) + x(1, 2) + x(2, 1); }

double lb_statistic(const RunResult& result) {
  if (result.allocations.size() != result.rounds.size()) {
    throw std::logic_error("lb_statistic: run did not record full allocations");
  }
  double total = 0.0;
  for (const auto& x : result.allocations) total += lb_cells(x);
  return total;
}

InstanceSpec lb_spec(const LbInstancePair& pair, int which, double noise_sigma, std::uint64_t seed) {
  if (which != 1 && which != 2) throw std::invalid_argument("lb_spec: which must be 1 or 2");
  InstanceSpec spec;
  spec.n = 3;
  spec.m = 3;
  spec.T = pair.T;
  spec.a = kLbLowerValue;
  spec.b = kLbUpperValue;
  spec.mu_star = which == 1 ? pair.mu1 : pair.mu2;
  spec.noise_sigma = noise_sigma;
  spec.seed = seed;
  spec.constraint_kind = ConstraintKind::kEnvyFreeness;
  return spec;
}

}  // namespace fairdiv
