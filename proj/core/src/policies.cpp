#include "fairdiv/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fairdiv/random.hpp"

namespace fairdiv {

History::History(std::size_t n, std::size_t m)
    : n_(n), m_(m), counts_(n * m, 0), sums_(n * m, 0.0) {}

void History::record(std::size_t t, std::size_t item, std::size_t player, double value) {
  if (player >= n_ || item >= m_) throw DimensionError("History::record: cell out of range");
  records_.push_back({t, item, player, value});
  ++counts_[player * m_ + item];
  sums_[player * m_ + item] += value;
}

Matrix confidence_radii(const History& history, std::size_t T) {
  if (T < 1) throw std::invalid_argument("confidence_radii: T must be >= 1");
  const std::size_t n = history.players();
  const std::size_t m = history.item_types();
  const double log_term = std::log(6.0 * static_cast<double>(n * m) * static_cast<double>(T));
  Matrix eps(n, m, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < m; ++k) {
      const auto count = history.count(i, k);
      if (count > 0) eps(i, k) = std::sqrt(log_term * log_term / static_cast<double>(count));
    }
  }
  return eps;
}

ValueMatrix empirical_means(const History& history, double a, double b) {
  const std::size_t n = history.players();
  const std::size_t m = history.item_types();
  ValueMatrix mu(n, m, 0.5 * (a + b));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < m; ++k) {
      const auto count = history.count(i, k);
      if (count > 0) mu(i, k) = history.value_sum(i, k) / static_cast<double>(count);
    }
  }
  return mu;
}

std::size_t warmup_length(std::size_t T, double scale) {
  const double tt = static_cast<double>(T);
  const double lg = std::log(tt);
  const double rounds = std::ceil(lg * lg * std::sqrt(tt) * scale);
  if (!(rounds < tt)) return T;
  return rounds > 0.0 ? static_cast<std::size_t>(rounds) : 0;
}

std::size_t commit_round(std::size_t T, double scale) {
  const double tt = static_cast<double>(T);
  const double rounds = std::ceil(std::cbrt(tt * tt) * scale);
  if (!(rounds < tt)) return T;
  return rounds > 0.0 ? static_cast<std::size_t>(rounds) : 0;
}

PublicParams PublicParams::of(const InstanceSpec& spec) {
  return PublicParams{spec.n, spec.m, spec.T, spec.a, spec.b};
}

ConfidenceBox confidence_box(const History& history, const PublicParams& params) {
  return make_box(empirical_means(history, params.a, params.b), confidence_radii(history, params.T),
                  params.a, params.b);
}

namespace {

// μ_U = μ̂ + ε, with unsampled cells pinned to the upper value bound.
ValueMatrix optimistic_means(const ConfidenceBox& box, double b) {
  ValueMatrix mu_upper(box.rows(), box.cols());
  for (std::size_t j = 0; j < mu_upper.size(); ++j) {
    const double r = box.radius.values()[j];
    mu_upper.values()[j] = std::isfinite(r) ? box.center.values()[j] + r : b;
  }
  return mu_upper;
}

std::string round_message(std::size_t t, const std::exception& e) {
  std::ostringstream os;
  os << "round " << t << ": " << e.what();
  return os.str();
}

}  // namespace

Allocation ucb_fair_allocate(std::size_t t, const History& history, const PublicParams& params,
                             const ConstraintSet& cs, const UcbOptions& options,
                             RoundTrace* trace) {
  RoundTrace local;
  RoundTrace& tr = trace ? *trace : local;
  tr = RoundTrace{};
  const std::size_t n = params.n;
  const std::size_t m = params.m;
  if (t < warmup_length(params.T, options.warmup_scale)) return uar_allocation(n, m);
  tr.warmup = false;

  ConfidenceBox box = confidence_box(history, params);
  if (box.empty()) {
    box.clamp_lo.reset();
    box.clamp_hi.reset();
    tr.clamp_dropped = true;
  }
  for (double r : box.radius.values()) tr.max_radius = std::max(tr.max_radius, r);
  const ValueMatrix mu_upper = optimistic_means(box, params.b);

  Allocation xhat;
  try {
    xhat = solve_robust_welfare(box, cs, mu_upper);
  } catch (const InfeasibleProgram&) {
    tr.robust_infeasible = true;
    return uar_allocation(n, m);
  } catch (const EmptyBoxError&) {
    tr.robust_infeasible = true;
    return uar_allocation(n, m);
  }

  try {
    GridSpec grid = GridSpec::for_horizon(params.T, options.grid_cap);
    if (options.grid_spacing > 0.0) grid.spacing = options.grid_spacing;
    grid.sample_seed = CounterRng(options.grid_seed, Stream::kGridSample, t).next_u64();

    YCache cache;
    const auto gm = grid_max(box, cs, box.radius, grid, &cache);
    tr.gridmax = gm.value;
    tr.grid_points = gm.points;
    tr.grid_infeasible = gm.infeasible_points;
    tr.full_grid_size = gm.full_grid_size;

    tr.budget = slack_budget(xhat, mu_upper, box.radius, gm.value, cs);

    std::vector<Allocation> explorers;
    explorers.reserve(n * m);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < m; ++k) {
        explorers.push_back(solve_explore(box, cs, mu_upper, Cell{i, k}, tr.budget));
      }
    }
    return average_explorers(explorers);
  } catch (const ContractViolation& e) {
    throw ContractViolation(round_message(t, e));
  }
}

Allocation etc_allocate(std::size_t t, const History& history, const PublicParams& params,
                        const ConstraintSet& cs, double etc_scale) {
  if (t < commit_round(params.T, etc_scale)) return uar_allocation(params.n, params.m);
  ConfidenceBox box = confidence_box(history, params);
  if (box.empty()) {
    box.clamp_lo.reset();
    box.clamp_hi.reset();
  }
  try {
    return solve_robust_welfare(box, cs, optimistic_means(box, params.b));
  } catch (const InfeasibleProgram&) {
    return uar_allocation(params.n, params.m);
  } catch (const EmptyBoxError&) {
    return uar_allocation(params.n, params.m);
  }
}

Allocation oracle_allocate(const InstanceSpec& spec, const ConstraintSet& cs) {
  return solve_Y(spec.mu_star, cs);
}

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kUar:
      return "uar";
    case PolicyKind::kOracle:
      return "oracle";
    case PolicyKind::kEtc:
      return "etc";
    case PolicyKind::kUcbFair:
      return "ucb_fair";
  }
  return "unknown";
}

std::optional<PolicyKind> parse_policy_kind(std::string_view name) {
  for (auto kind : {PolicyKind::kUar, PolicyKind::kOracle, PolicyKind::kEtc, PolicyKind::kUcbFair}) {
    if (name == to_string(kind)) return kind;
  }
  return std::nullopt;
}

EtcPolicy::EtcPolicy(PublicParams params, ConstraintSet cs, double etc_scale)
    : params_(params),
      cs_(std::move(cs)),
      scale_(etc_scale),
      commit_(commit_round(params.T, etc_scale)) {}

Allocation EtcPolicy::allocate(std::size_t t, const History& history) {
  if (t < commit_) return uar_allocation(params_.n, params_.m);
  if (!committed_) committed_ = etc_allocate(t, history, params_, cs_, scale_);
  return *committed_;
}

UcbFairPolicy::UcbFairPolicy(PublicParams params, ConstraintSet cs, UcbOptions options)
    : params_(params),
      cs_(std::move(cs)),
      options_(options),
      warmup_(warmup_length(params.T, options.warmup_scale)) {}

Allocation UcbFairPolicy::allocate(std::size_t t, const History& history) {
  if (t < warmup_) return uar_allocation(params_.n, params_.m);
  RoundTrace trace;
  auto x = ucb_fair_allocate(t, history, params_, cs_, options_, &trace);
  traces_.push_back(trace);
  return x;
}

std::unique_ptr<Policy> make_policy(const PolicyConfig& config, const InstanceSpec& spec,
                                    const ConstraintSet& cs) {
  const auto params = PublicParams::of(spec);
  switch (config.kind) {
    case PolicyKind::kUar:
      return std::make_unique<UarPolicy>(spec.n, spec.m);
    case PolicyKind::kOracle:
      return std::make_unique<OraclePolicy>(spec, cs);
    case PolicyKind::kEtc:
      return std::make_unique<EtcPolicy>(params, cs, config.etc_scale);
    case PolicyKind::kUcbFair: {
      UcbOptions options;
      options.warmup_scale = config.warmup_scale;
      options.grid_spacing = config.grid_spacing;
      options.grid_cap = config.grid_cap;
      options.grid_seed = config.grid_seed;
      return std::make_unique<UcbFairPolicy>(params, cs, options);
    }
  }
  throw std::invalid_argument("make_policy: unknown policy kind");
}

}  // namespace fairdiv
