#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "fairdiv/sim.hpp"

using namespace fairdiv;

namespace {

InstanceSpec diagonal_spec(std::size_t T, std::uint64_t seed = 1) {
  return InstanceSpec{2, 2, T, 0.2, 0.8, ValueMatrix{{0.8, 0.2}, {0.2, 0.8}}, 0.1, seed,
                      ConstraintKind::kProportionality};
}

// Hands every item to player 0.
class GreedyPolicy final : public Policy {
 public:
  PolicyKind kind() const override { return PolicyKind::kUar; }
  Allocation allocate(std::size_t, const History&) override { return Allocation{{1, 1}, {0, 0}}; }
};

class BrokenPolicy final : public Policy {
 public:
  PolicyKind kind() const override { return PolicyKind::kUar; }
  Allocation allocate(std::size_t, const History&) override { return Allocation{{0.7, 1}, {0.7, 0}}; }
};

}  // namespace

TEST_CASE("the oracle has no regret and no violations") {
  const auto r = run(diagonal_spec(500), PolicyConfig{PolicyKind::kOracle});
  CHECK(r.optimal_welfare == doctest::Approx(1.6));
  REQUIRE(r.rounds.size() == 500);
  for (const auto& rec : r.rounds) {
    CHECK(std::abs(rec.cum_regret) <= 1e-9);
    CHECK(rec.min_slack == doctest::Approx(0.3));
    CHECK(rec.player == rec.item);
  }
}

TEST_CASE("uniform allocation loses a fixed amount each round") {
  const auto r = run(diagonal_spec(1000), PolicyConfig{PolicyKind::kUar});
  CHECK(r.rounds.back().cum_regret == doctest::Approx(600.0).epsilon(1e-9));
  const auto curve = regret_curve(r);
  for (std::size_t t = 0; t < curve.size(); ++t) CHECK(curve[t] == r.rounds[t].cum_regret);
  for (double v : violation_trace(r)) CHECK(v == 0.0);
  CHECK(event_e_diagnostic(r) == 1.0);
}

TEST_CASE("runs are reproducible and seeds matter") {
  const auto a = run(diagonal_spec(300, 9), PolicyConfig{PolicyKind::kUar});
  const auto b = run(diagonal_spec(300, 9), PolicyConfig{PolicyKind::kUar});
  const auto c = run(diagonal_spec(300, 10), PolicyConfig{PolicyKind::kUar});
  bool differs = false;
  for (std::size_t t = 0; t < 300; ++t) {
    CHECK(a.rounds[t].item == b.rounds[t].item);
    CHECK(a.rounds[t].player == b.rounds[t].player);
    CHECK(a.rounds[t].value == b.rounds[t].value);
    differs = differs || a.rounds[t].item != c.rounds[t].item;
  }
  CHECK(differs);
}

TEST_CASE("noise level does not disturb item or recipient draws") {
  auto quiet = diagonal_spec(300, 4);
  quiet.noise_sigma = 0.0;
  const auto a = run(quiet, PolicyConfig{PolicyKind::kUar});
  const auto b = run(diagonal_spec(300, 4), PolicyConfig{PolicyKind::kUar});
  for (std::size_t t = 0; t < 300; ++t) {
    CHECK(a.rounds[t].item == b.rounds[t].item);
    CHECK(a.rounds[t].player == b.rounds[t].player);
    CHECK(a.rounds[t].value == quiet.mu_star(a.rounds[t].player, a.rounds[t].item));
  }
}

TEST_CASE("item types are uniform and values centre on the means") {
  const auto r = run(diagonal_spec(20000, 2), PolicyConfig{PolicyKind::kUar});
  std::size_t zeros = 0;
  double sum00 = 0.0;
  std::size_t n00 = 0;
  for (const auto& rec : r.rounds) {
    zeros += rec.item == 0;
    if (rec.item == 0 && rec.player == 0) {
      sum00 += rec.value;
      ++n00;
    }
  }
  CHECK(std::abs(static_cast<double>(zeros) - 10000.0) < 400.0);
  CHECK(std::abs(static_cast<double>(n00) - 5000.0) < 300.0);
  CHECK(sum00 / static_cast<double>(n00) == doctest::Approx(0.8).epsilon(0.01));
}

TEST_CASE("violations and disproportionality of a one-sided policy") {
  GreedyPolicy greedy;
  const auto spec = diagonal_spec(400, 5);
  const auto r = run(spec, greedy, RunOptions{true});
  double expected = 0.0;
  for (const auto& rec : r.rounds) {
    CHECK(rec.player == 0u);
    expected += 0.5 * spec.mu_star(1, rec.item);
  }
  CHECK(disproportionality(r) == doctest::Approx(expected));
  const auto cs = proportionality(2, 2, 0.2, 0.8);
  const auto recorded = violation_trace(r);
  const auto recomputed = violation_trace(r, cs);
  REQUIRE(recorded.size() == recomputed.size());
  for (std::size_t t = 0; t < recorded.size(); ++t) {
    CHECK(recorded[t] == doctest::Approx(0.5));
    CHECK(recomputed[t] == doctest::Approx(recorded[t]));
  }
  CHECK(summarize(r).max_violation == doctest::Approx(0.5));
}

TEST_CASE("allocations are only kept on request") {
  const auto r = run(diagonal_spec(50), PolicyConfig{PolicyKind::kUar});
  CHECK(r.allocations.empty());
  CHECK_THROWS_AS(violation_trace(r, proportionality(2, 2, 0.2, 0.8)), std::logic_error);
}

TEST_CASE("invalid allocations and specs abort the run") {
  BrokenPolicy broken;
  CHECK_THROWS_AS(run(diagonal_spec(10), broken), ContractViolation);
  auto bad = diagonal_spec(10);
  bad.mu_star(0, 0) = 0.9;
  CHECK_THROWS_AS(run(bad, PolicyConfig{PolicyKind::kUar}), std::invalid_argument);
}

TEST_CASE("batch runs match sequential runs in order") {
  auto broken = diagonal_spec(100);
  broken.T = 0;
  const std::vector<BatchCase> cases{{diagonal_spec(200), PolicyConfig{PolicyKind::kUar}},
                                     {diagonal_spec(200), PolicyConfig{PolicyKind::kEtc}},
                                     {broken, PolicyConfig{PolicyKind::kUar}}};
  const std::vector<std::uint64_t> seeds{1, 2, 3};
  const auto rows = batch(cases, seeds, 2);
  REQUIRE(rows.size() == 9);
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t s = 0; s < 3; ++s) {
      const auto& row = rows[c * 3 + s];
      CHECK(row.case_index == c);
      CHECK(row.seed == seeds[s]);
      REQUIRE(row.summary.has_value());
      auto spec = cases[c].spec;
      spec.seed = seeds[s];
      CHECK(row.summary->final_regret == summarize(run(spec, cases[c].policy)).final_regret);
    }
  }
  for (std::size_t s = 0; s < 3; ++s) {
    CHECK_FALSE(rows[6 + s].summary.has_value());
    CHECK_FALSE(rows[6 + s].error.empty());
  }
}
