#include <doctest.h>

#include <cmath>

#include "fairdiv/lemmas.hpp"
#include "fairdiv/opt.hpp"
#include "fairdiv/random.hpp"

using namespace fairdiv;

namespace {

const ValueMatrix kMu{{0.8, 0.2}, {0.2, 0.8}};
const Allocation kEye{{1, 0}, {0, 1}};

}  // namespace

TEST_CASE("slack profile") {
  const auto s = slack_profile(kEye, kMu);
  CHECK(s[0] == doctest::Approx(0.3));
  CHECK(s[1] == doctest::Approx(0.3));
}

TEST_CASE("raising every player's slack on the diagonal instance") {
  const auto x = construct_xprime(kEye, kMu, 0.01, 0.2, 0.8);
  CHECK(x(0, 0) == doctest::Approx(0.975));
  CHECK(x(0, 1) == doctest::Approx(0.025));
  CHECK(x(1, 0) == doctest::Approx(0.025));
  CHECK(x(1, 1) == doctest::Approx(0.975));
  CHECK(x.row(0)[0] * 0.8 + x.row(0)[1] * 0.2 == doctest::Approx(0.785));

  const auto report = check_slack_construction(x, kEye, kMu, 0.01, 0.2, 0.8);
  CHECK_FALSE(report.uar_case);
  CHECK(report.passed());
  CHECK(report.welfare_bound == doctest::Approx(0.08));
  CHECK(report.deviation_bound == doctest::Approx(0.1));
}

TEST_CASE("little total slack falls back to the uniform allocation") {
  // Total slack 0.6 <= (b/a)·n·γ = 0.8.
  const auto x = construct_xprime(kEye, kMu, 0.1, 0.2, 0.8);
  CHECK(x == uar_allocation(2, 2));
  const auto report = verify_slack_construction(kEye, kMu, 0.1, 0.2, 0.8);
  CHECK(report.uar_case);
  CHECK(report.passed());
}

TEST_CASE("gamma outside the admissible range is rejected") {
  CHECK_THROWS(construct_xprime(kEye, kMu, 0.125, 0.2, 0.8));
  CHECK_THROWS(construct_xprime(kEye, kMu, -0.01, 0.2, 0.8));
}

TEST_CASE("a candidate without the promised slack fails the check") {
  // Player 0 ends below proportionality.
  const Allocation lopsided{{0.6, 0.0}, {0.4, 1.0}};
  const auto report = check_slack_construction(lopsided, kEye, kMu, 0.05, 0.2, 0.8);
  CHECK_FALSE(report.slack_ok);
  CHECK_FALSE(report.passed());
}

TEST_CASE("slack construction holds on random instances") {
  for (std::uint64_t s = 0; s < 60; ++s) {
    const std::size_t n = 2 + s % 2;
    const std::size_t m = 2 + (s / 2) % 2;
    const double a = 0.1;
    const double b = 0.9;
    const auto mu = random_normalized_means(n, m, a, b, 1000 + s);
    const auto y = solve_Y(mu, proportionality(n, m, a, b));
    for (double gamma : {1e-3, 1e-2}) {
      const auto report = verify_slack_construction(y, mu, gamma, a, b);
      INFO("seed " << s << " gamma " << gamma);
      CHECK(report.passed());
    }
  }
}

TEST_CASE("repairing a small proportionality deficit") {
  // Player 1 is short by 0.01, player 0 has surplus 0.3775.
  const Allocation z{{1.0, 0.3875}, {0.0, 0.6125}};
  const double a = 0.2, b = 0.8, eps = 0.02;
  const auto w = construct_w(z, kMu, eps, a, b);

  const double surplus = 0.8 + 0.2 * 0.3875 - 0.5;
  const double deficit = 0.5 - 0.8 * 0.6125;
  const double row_value = 0.8 + 0.2 * 0.3875;
  const double keep = 1.0 - (b / a) * (deficit / surplus) * surplus / row_value;
  CHECK(w(0, 0) == doctest::Approx(keep));
  CHECK(w(0, 1) == doctest::Approx(0.3875 * keep));
  CHECK(w(1, 0) == doctest::Approx(1.0 - keep));
  CHECK(w(1, 1) == doctest::Approx(0.6125 + 0.3875 * (1.0 - keep)));

  const auto cs = proportionality(2, 2, a, b);
  CHECK(w.is_valid());
  CHECK(min_slack(w, kMu, cs) >= -1e-12);
  CHECK(frobenius(w, kMu) >= frobenius(z, kMu) - cs.c_p2() * eps);
}

TEST_CASE("deficit repair falls back to uniform and rejects large deficits") {
  // Player 0 is short by 0.15, far beyond eps.
  const Allocation z{{0.7, 0.0}, {0.3, 1.0}};
  const ValueMatrix mu{{0.5, 0.5}, {0.2, 0.8}};
  CHECK_THROWS_AS(construct_w(z, mu, 0.02, 0.2, 0.8), ContractViolation);

  // Surplus 0.01 against deficit 0.01: a/b times the surplus cannot cover it.
  const Allocation near{{0.98, 0.0}, {0.02, 1.0}};
  const ValueMatrix flat{{0.5, 0.5}, {0.5, 0.5}};
  CHECK(construct_w(near, flat, 0.02, 0.2, 0.8) == uar_allocation(2, 2));
}

TEST_CASE("welfare continuity on random pairs") {
  for (std::uint64_t s = 0; s < 50; ++s) {
    CounterRng rng(s, Stream::kProperty, 3);
    const std::size_t n = 2 + s % 2;
    const std::size_t m = 2 + (s / 2) % 2;
    const auto mu1 = random_normalized_means(n, m, 0.1, 0.9, s);
    ValueMatrix mu2 = mu1;
    // Move mass within each row so both stay normalized.
    for (std::size_t i = 0; i < n; ++i) {
      const double d = rng.uniform(0.0, 0.02);
      const double room = std::min(mu2(i, 0) - 0.1, 0.9 - mu2(i, 1));
      mu2(i, 0) -= std::min(d, room);
      mu2(i, 1) += std::min(d, room);
    }
    for (auto kind : {ConstraintKind::kProportionality, ConstraintKind::kEnvyFreeness}) {
      const auto rep = verify_continuity(mu1, mu2, make_constraint_set(kind, n, m, 0.1, 0.9));
      CHECK(rep.ok);
      CHECK(std::abs(rep.welfare1 - rep.welfare2) <= rep.bound + kLemmaTol);
    }
  }
}
