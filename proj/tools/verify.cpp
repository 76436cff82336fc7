#include "verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "fairdiv/constraints.hpp"
#include "fairdiv/lemmas.hpp"
#include "fairdiv/lowerbound.hpp"
#include "fairdiv/lp.hpp"
#include "fairdiv/opt.hpp"
#include "fairdiv/random.hpp"

namespace fairdiv::cli {

namespace {

using nlohmann::json;

constexpr std::uint64_t kSuiteSeed = 20240611;

struct Shape {
  std::size_t n;
  std::size_t m;
};

json timed(const std::string& name, const std::function<json()>& body) {
  const auto start = std::chrono::steady_clock::now();
  json check = body();
  check["name"] = name;
  check["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return check;
}

lp::LinearProgram random_lp(CounterRng& rng) {
  const std::size_t nv = 1 + rng.below(4);
  const std::size_t n_eq = rng.below(3);
  const std::size_t n_ub = rng.below(7 - n_eq);
  lp::LinearProgram prog;
  for (std::size_t j = 0; j < nv; ++j) prog.objective.push_back(rng.uniform(-1.0, 1.0));
  auto row = [&] {
    std::vector<double> c(nv);
    for (double& v : c) v = rng.uniform(-1.0, 1.0);
    return c;
  };
  for (std::size_t r = 0; r < n_eq; ++r) prog.eq_constraints.push_back({row(), rng.uniform(-0.5, 1.0)});
  for (std::size_t r = 0; r < n_ub; ++r) prog.ub_constraints.push_back({row(), rng.uniform(-0.2, 1.0)});
  for (std::size_t j = 0; j < nv; ++j) prog.var_bounds.push_back({0.0, rng.uniform(0.5, 2.0)});
  return prog;
}

json lp_equivalence() {
  std::size_t mismatches = 0;
  std::size_t optimal = 0;
  double worst = 0.0;
  for (std::size_t idx = 0; idx < 200; ++idx) {
    CounterRng rng(kSuiteSeed, Stream::kProperty, idx);
    const auto prog = random_lp(rng);
    const auto sol = lp::solve(prog);
    const auto vertices = lp::enumerate_vertices(prog);
    if (vertices.empty() != !sol.optimal()) {
      ++mismatches;
      continue;
    }
    if (!sol.optimal()) continue;
    ++optimal;
    double best = -lp::kInfinity;
    for (const auto& v : vertices) best = std::max(best, lp::objective_at(prog, v));
    const double gap = std::abs(best - sol.objective_value);
    worst = std::max(worst, gap);
    if (gap > 1e-8) ++mismatches;
  }
  return {{"passed", mismatches == 0},
          {"programs", 200},
          {"optimal", optimal},
          {"mismatches", mismatches},
          {"max_objective_gap", worst}};
}

json uar_proportional() {
  double worst = 0.0;
  for (std::size_t idx = 0; idx < 100; ++idx) {
    CounterRng rng(kSuiteSeed, Stream::kProperty, 1000 + idx);
    const std::size_t n = 1 + rng.below(4);
    const std::size_t m = 1 + rng.below(4);
    const auto mu = random_normalized_means(n, m, 0.01, 1.0, rng.next_u64());
    const auto slacks = evaluate(uar_allocation(n, m), mu, proportionality(n, m, 0.01, 1.0));
    for (double s : slacks) worst = std::max(worst, std::abs(s));
  }
  return {{"passed", worst <= 1e-12}, {"instances", 100}, {"max_abs_slack", worst}};
}

// Moves up to 0.025 of value between two entries of one row, keeping the row
// sum and the [a, b] bounds.
ValueMatrix nearby_means(const ValueMatrix& mu, double a, double b, CounterRng& rng) {
  ValueMatrix out = mu;
  const std::size_t i = rng.below(mu.rows());
  const std::size_t k1 = rng.below(mu.cols());
  std::size_t k2 = rng.below(mu.cols() - 1);
  if (k2 >= k1) ++k2;
  const double room = std::min(b - out(i, k1), out(i, k2) - a);
  const double delta = std::min(room, rng.uniform(0.0, 0.025));
  out(i, k1) += delta;
  out(i, k2) -= delta;
  return out;
}

json continuity() {
  const double a = 0.1;
  const double b = 0.9;
  std::size_t failures = 0;
  double worst_ratio = 0.0;
  std::size_t idx = 0;
  for (Shape shape : {Shape{2, 2}, Shape{2, 3}, Shape{3, 3}}) {
    const auto cs = proportionality(shape.n, shape.m, a, b);
    for (std::size_t r = 0; r < 100; ++r, ++idx) {
      CounterRng rng(kSuiteSeed, Stream::kProperty, 2000 + idx);
      const auto mu = random_normalized_means(shape.n, shape.m, a, b, rng.next_u64());
      const auto mu2 = nearby_means(mu, a, b, rng);
      const auto rep = verify_continuity(mu, mu2, cs);
      if (!rep.ok) ++failures;
      if (rep.bound > 0.0) worst_ratio = std::max(worst_ratio, std::abs(rep.welfare1 - rep.welfare2) / rep.bound);
    }
  }
  return {{"passed", failures == 0}, {"pairs", idx}, {"failures", failures}, {"max_gap_over_bound", worst_ratio}};
}

json slack_construction() {
  const double a = 0.1;
  const double b = 0.9;
  std::size_t failures = 0;
  std::size_t uar_cases = 0;
  std::size_t cases = 0;
  const Shape shapes[] = {{2, 2}, {2, 3}, {3, 3}, {3, 2}};
  for (std::size_t idx = 0; idx < 100; ++idx) {
    CounterRng rng(kSuiteSeed, Stream::kProperty, 3000 + idx);
    const Shape shape = shapes[idx % 4];
    const auto mu = random_normalized_means(shape.n, shape.m, a, b, rng.next_u64());
    const auto y = solve_Y(mu, proportionality(shape.n, shape.m, a, b));
    for (double gamma : {1e-3, 1e-2}) {
      ++cases;
      const auto rep = verify_slack_construction(y, mu, gamma, a, b);
      if (rep.uar_case) ++uar_cases;
      if (!rep.passed()) ++failures;
    }
  }
  return {{"passed", failures == 0}, {"cases", cases}, {"uar_cases", uar_cases}, {"failures", failures}};
}

json repair_construction() {
  const double a = 0.2;
  const double b = 0.8;
  const double eps = 0.02;
  std::size_t failures = 0;
  double worst_slack = lp::kInfinity;
  const auto cs = proportionality(2, 2, a, b);
  for (std::size_t idx = 0; idx < 100; ++idx) {
    CounterRng rng(kSuiteSeed, Stream::kProperty, 4000 + idx);
    const auto mu = random_normalized_means(2, 2, a, b, rng.next_u64());
    auto prog = allocation_program(2, 2);
    for (double& c : prog.objective) c = rng.uniform(-1.0, 1.0);
    const auto coeffs = cs.coefficients(mu);
    for (std::size_t l = 0; l < coeffs.size(); ++l) add_lower_bound(prog, coeffs[l], cs.thresholds()[l] - eps);
    const auto sol = lp::solve(prog);
    if (!sol.optimal()) {
      ++failures;
      continue;
    }
    const Allocation z = Allocation(2, 2, sol.x).renormalized();
    const auto w = construct_w(z, mu, eps, a, b);
    const double slack = min_slack(w, mu, cs);
    worst_slack = std::min(worst_slack, slack);
    const bool welfare_ok = frobenius(w, mu) >= frobenius(z, mu) - cs.c_p2() * eps - kLemmaTol;
    if (slack < -kConstraintTol || !welfare_ok || !w.is_valid()) ++failures;
  }
  return {{"passed", failures == 0}, {"allocations", 100}, {"failures", failures}, {"min_slack", worst_slack}};
}

json robust_soundness() {
  const double a = 0.1;
  const double b = 0.9;
  std::size_t boxes = 0;
  std::size_t skipped = 0;
  std::size_t bad_samples = 0;
  double worst = lp::kInfinity;
  for (std::size_t idx = 0; boxes < 20 && idx < 10000; ++idx) {
    CounterRng rng(kSuiteSeed, Stream::kProperty, 5000 + idx);
    const std::size_t n = 2 + rng.below(2);
    const std::size_t m = 2 + rng.below(2);
    const auto kind = idx % 2 == 0 ? ConstraintKind::kProportionality : ConstraintKind::kEnvyFreeness;
    const auto cs = make_constraint_set(kind, n, m, a, b);
    const auto center = random_normalized_means(n, m, a, b, rng.next_u64());
    Matrix radius(n, m);
    for (double& r : radius.values()) r = rng.uniform(0.0, 0.05);
    const auto box = make_box(center, radius, a, b);
    ValueMatrix upper(n, m);
    for (std::size_t j = 0; j < upper.size(); ++j) upper.values()[j] = center.values()[j] + radius.values()[j];
    Allocation x;
    try {
      x = solve_robust_welfare(box, cs, upper);
    } catch (const InfeasibleProgram&) {
      ++skipped;
      continue;
    }
    ++boxes;
    for (std::size_t s = 0; s < 1000; ++s) {
      ValueMatrix mu(n, m);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < m; ++k) mu(i, k) = rng.uniform(box.lower(i, k), box.upper(i, k));
      }
      const double slack = min_slack(x, mu, cs);
      worst = std::min(worst, slack);
      if (slack < -kConstraintTol) ++bad_samples;
    }
  }
  return {{"passed", boxes == 20 && bad_samples == 0},
          {"boxes", boxes},
          {"infeasible_boxes_skipped", skipped},
          {"violating_samples", bad_samples},
          {"min_slack", worst}};
}

json lb_optimum() {
  const auto pair = lb_instances(1000);
  const auto ef = envy_freeness(3, 3, kLbLowerValue, kLbUpperValue);
  const auto y = solve_Y(pair.mu1, ef);
  const auto expected = ef_optimal_mu1();
  double max_diff = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) max_diff = std::max(max_diff, std::abs(y.values()[j] - expected.values()[j]));
  const double welfare = frobenius(y, pair.mu1);
  return {{"passed", max_diff <= 1e-8 && std::abs(welfare - 80.0 / 42.0) <= 1e-8},
          {"max_entry_diff", max_diff},
          {"welfare", welfare}};
}

json lb_decomposition() {
  const auto pair = lb_instances(1000);
  const auto ef = envy_freeness(3, 3, kLbLowerValue, kLbUpperValue);
  const auto coeffs = ef.coefficients(pair.mu1);
  std::size_t failures = 0;
  double min_margin = lp::kInfinity;
  for (std::size_t idx = 0; idx < 1000; ++idx) {
    CounterRng rng(kSuiteSeed, Stream::kProperty, 6000 + idx);
    auto prog = allocation_program(3, 3);
    for (double& c : prog.objective) c = rng.uniform(-1.0, 1.0);
    for (std::size_t l = 0; l < coeffs.size(); ++l) add_lower_bound(prog, coeffs[l], 0.0);
    const auto sol = lp::solve(prog);
    if (!sol.optimal()) {
      ++failures;
      continue;
    }
    const auto check = regret_decomposition_check(Allocation(3, 3, sol.x));
    if (check.precondition_error || !check.ok) ++failures;
    if (!check.precondition_error) min_margin = std::min(min_margin, check.lhs - check.rhs);
  }
  return {{"passed", failures == 0}, {"allocations", 1000}, {"failures", failures}, {"min_lhs_minus_rhs", min_margin}};
}

json run_checks(const std::string& suite, const std::vector<std::pair<std::string, std::function<json()>>>& checks) {
  json report;
  report["suite"] = suite;
  report["checks"] = json::array();
  bool all = true;
  for (const auto& [name, fn] : checks) {
    json c;
    try {
      c = timed(name, fn);
    } catch (const std::exception& e) {
      c = {{"name", name}, {"passed", false}, {"error", e.what()}};
    }
    all = all && c.value("passed", false);
    report["checks"].push_back(c);
  }
  report["passed"] = all;
  return report;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"lp", "lemmas", "robust", "lowerbound"};
  return names;
}

nlohmann::json run_suite(const std::string& name) {
  if (name == "lp") return run_checks(name, {{"simplex_matches_vertex_enumeration", lp_equivalence}});
  if (name == "lemmas") {
    return run_checks(name, {{"uar_is_proportional", uar_proportional},
                             {"welfare_continuity", continuity},
                             {"slack_construction", slack_construction},
                             {"deficit_repair", repair_construction}});
  }
  if (name == "robust") return run_checks(name, {{"robust_welfare_soundness", robust_soundness}});
  if (name == "lowerbound") {
    return run_checks(name, {{"ef_optimum_mu1", lb_optimum}, {"regret_decomposition", lb_decomposition}});
  }
  throw std::invalid_argument("unknown suite '" + name + "'");
}

}  // namespace fairdiv::cli
