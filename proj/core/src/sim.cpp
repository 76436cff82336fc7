#include "fairdiv/sim.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <sstream>
#include <thread>

#include "fairdiv/random.hpp"

namespace fairdiv {

namespace {

std::size_t draw_recipient(const Allocation& x, std::size_t item, double u) {
  const std::size_t n = x.rows();
  double cdf = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = x(i, item);
    if (p <= 0.0) continue;
    last_positive = i;
    cdf += p;
    if (u < cdf) return i;
  }
  return last_positive;
}

void require_valid_spec(const InstanceSpec& spec) {
  const auto problems = validate(spec);
  if (problems.empty()) return;
  std::ostringstream os;
  os << "invalid instance:";
  for (const auto& v : problems) os << ' ' << v.message << ';';
  throw std::invalid_argument(os.str());
}

}  // namespace

RunResult run(const InstanceSpec& spec, Policy& policy, const RunOptions& options) {
  require_valid_spec(spec);
  const auto cs = make_constraint_set(spec.constraint_kind, spec.n, spec.m, spec.a, spec.b);
  const auto params = PublicParams::of(spec);
  const Allocation y_star = solve_Y(spec.mu_star, cs);

  RunResult result;
  result.spec = spec;
  result.policy = policy.kind();
  result.exploration_rounds = policy.exploration_rounds();
  result.optimal_welfare = frobenius(y_star, spec.mu_star);
  result.rounds.reserve(spec.T);
  if (options.record_full_allocations) result.allocations.reserve(spec.T);

  History history(spec.n, spec.m);
  double cum = 0.0;
  for (std::size_t t = 0; t < spec.T; ++t) {
    const bool in_box = confidence_box(history, params).contains(spec.mu_star);
    Allocation x = policy.allocate(t, history);
    if (auto err = x.validity_error()) {
      std::ostringstream os;
      os << "round " << t << ": policy " << to_string(policy.kind()) << " returned an invalid allocation: " << *err;
      throw ContractViolation(os.str());
    }

    RoundRecord rec;
    rec.t = t;
    rec.item = CounterRng(spec.seed, Stream::kItemType, t).below(spec.m);
    rec.player = draw_recipient(x, rec.item, CounterRng(spec.seed, Stream::kAssignment, t).uniform());
    rec.value = spec.mu_star(rec.player, rec.item) +
                spec.noise_sigma * CounterRng(spec.seed, Stream::kValue, t).normal();
    rec.regret_inc = result.optimal_welfare - frobenius(x, spec.mu_star);
    cum += rec.regret_inc;
    rec.cum_regret = cum;
    rec.min_slack = min_slack(x, spec.mu_star, cs);
    rec.in_box = in_box;

    history.record(t, rec.item, rec.player, rec.value);
    result.rounds.push_back(rec);
    if (options.record_full_allocations) result.allocations.push_back(std::move(x));
  }
  return result;
}

RunResult run(const InstanceSpec& spec, const PolicyConfig& config, const RunOptions& options) {
  require_valid_spec(spec);
  const auto cs = make_constraint_set(spec.constraint_kind, spec.n, spec.m, spec.a, spec.b);
  auto policy = make_policy(config, spec, cs);
  return run(spec, *policy, options);
}

std::vector<double> regret_curve(const RunResult& result) {
  std::vector<double> curve;
  curve.reserve(result.rounds.size());
  double cum = 0.0;
  for (const auto& r : result.rounds) {
    cum += r.regret_inc;
    curve.push_back(cum);
  }
  return curve;
}

std::vector<double> violation_trace(const RunResult& result) {
  std::vector<double> out;
  out.reserve(result.rounds.size());
  for (const auto& r : result.rounds) out.push_back(std::max(0.0, -r.min_slack));
  return out;
}

std::vector<double> violation_trace(const RunResult& result, const ConstraintSet& cs) {
  if (result.allocations.size() != result.rounds.size()) {
    throw std::logic_error("violation_trace: run did not record full allocations");
  }
  std::vector<double> out;
  out.reserve(result.allocations.size());
  for (const auto& x : result.allocations) out.push_back(std::max(0.0, -min_slack(x, result.spec.mu_star, cs)));
  return out;
}

double disproportionality(const RunResult& result) {
  const auto& mu = result.spec.mu_star;
  const std::size_t n = result.spec.n;
  std::vector<double> share(n, 0.0);
  std::vector<double> received(n, 0.0);
  for (const auto& r : result.rounds) {
    for (std::size_t i = 0; i < n; ++i) share[i] += mu(i, r.item);
    received[r.player] += mu(r.player, r.item);
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    worst = std::max(worst, share[i] / static_cast<double>(n) - received[i]);
  }
  return worst;
}

double event_e_diagnostic(const RunResult& result) {
  std::size_t total = 0;
  std::size_t inside = 0;
  for (const auto& r : result.rounds) {
    if (r.t < result.exploration_rounds) continue;
    ++total;
    if (r.in_box) ++inside;
  }
  return total == 0 ? 1.0 : static_cast<double>(inside) / static_cast<double>(total);
}

RunSummary summarize(const RunResult& result) {
  RunSummary s;
  s.final_regret = result.rounds.empty() ? 0.0 : result.rounds.back().cum_regret;
  for (double v : violation_trace(result)) s.max_violation = std::max(s.max_violation, v);
  s.disproportionality = disproportionality(result);
  s.event_e_fraction = event_e_diagnostic(result);
  return s;
}

std::vector<BatchRow> batch(const std::vector<BatchCase>& cases,
                            const std::vector<std::uint64_t>& seeds, std::size_t workers) {
  std::vector<BatchRow> rows(cases.size() * seeds.size());
  for (std::size_t c = 0; c < cases.size(); ++c) {
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      auto& row = rows[c * seeds.size() + s];
      row.case_index = c;
      row.policy = cases[c].policy.kind;
      row.seed = seeds[s];
    }
  }
  if (rows.empty()) return rows;

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t j = next++; j < rows.size(); j = next++) {
      auto& row = rows[j];
      InstanceSpec spec = cases[row.case_index].spec;
      spec.seed = row.seed;
      try {
        row.summary = summarize(run(spec, cases[row.case_index].policy));
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  };

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, rows.size());
  if (workers <= 1) {
    work();
    return rows;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  pool.clear();
  return rows;
}

}  // namespace fairdiv
