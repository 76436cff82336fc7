#include "fairdiv/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "fairdiv/opt.hpp"

namespace fairdiv {

namespace {

double row_dot(const Matrix& x, const Matrix& mu, std::size_t i) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.cols(); ++k) s += x(i, k) * mu(i, k);
  return s;
}

bool is_uar(const Allocation& x) {
  const double share = 1.0 / static_cast<double>(x.rows());
  return std::all_of(x.values().begin(), x.values().end(),
                     [share](double v) { return std::abs(v - share) <= 1e-12; });
}

}  // namespace

std::vector<double> slack_profile(const Allocation& y, const ValueMatrix& mu) {
  require_same_shape(y, mu, "slack_profile");
  const double share = 1.0 / static_cast<double>(y.rows());
  std::vector<double> s(y.rows());
  for (std::size_t i = 0; i < y.rows(); ++i) s[i] = row_dot(y, mu, i) - share;
  return s;
}

Allocation construct_xprime(const Allocation& y, const ValueMatrix& mu, double gamma, double a,
                            double b) {
  require_same_shape(y, mu, "construct_xprime");
  const std::size_t n = y.rows();
  const std::size_t m = y.cols();
  const double nn = static_cast<double>(n);
  if (!(a > 0.0 && b >= a)) throw std::invalid_argument("construct_xprime: need 0 < a <= b");
  if (!(gamma >= 0.0 && gamma < a / (b * nn))) {
    throw std::invalid_argument("construct_xprime: gamma must lie in [0, a/(bn))");
  }

  const auto s = slack_profile(y, mu);
  const double total = std::accumulate(s.begin(), s.end(), 0.0);
  if (total <= (b / a) * nn * gamma) return uar_allocation(n, m);

  Matrix delta(n, m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double row_total = y.row_sum(i);
    if (!(row_total > 0.0)) continue;
    const double scale = (s[i] / total) * (nn * gamma / a) / row_total;
    for (std::size_t k = 0; k < m; ++k) delta(i, k) = y(i, k) * scale;
  }
  Allocation out(n, m);
  for (std::size_t k = 0; k < m; ++k) {
    const double spread = delta.col_sum(k) / nn;
    for (std::size_t i = 0; i < n; ++i) out(i, k) = y(i, k) - delta(i, k) + spread;
  }
  return out;
}

SlackConstructionReport check_slack_construction(const Allocation& xprime, const Allocation& y,
                                                 const ValueMatrix& mu, double gamma, double a,
                                                 double b) {
  require_same_shape(xprime, y, "check_slack_construction");
  require_same_shape(y, mu, "check_slack_construction");
  const double nn = static_cast<double>(y.rows());
  SlackConstructionReport r;
  r.uar_case = is_uar(xprime);
  r.welfare_loss = frobenius(y, mu) - frobenius(xprime, mu);
  r.welfare_bound = b * nn * gamma / a;
  r.welfare_ok = r.welfare_loss <= r.welfare_bound + kLemmaTol;

  const auto s = slack_profile(xprime, mu);
  r.min_slack = s.empty() ? 0.0 : *std::min_element(s.begin(), s.end());
  for (std::size_t j = 0; j < y.size(); ++j) {
    r.max_deviation = std::max(r.max_deviation, std::abs(xprime.values()[j] - y.values()[j]));
  }
  r.deviation_bound = nn * gamma / a;
  if (r.uar_case) {
    r.slack_ok = true;
    r.deviation_ok = true;
  } else {
    r.slack_ok = r.min_slack >= gamma - kLemmaTol;
    r.deviation_ok = r.max_deviation <= r.deviation_bound + kLemmaTol;
  }
  return r;
}

SlackConstructionReport verify_slack_construction(const Allocation& y, const ValueMatrix& mu,
                                                  double gamma, double a, double b) {
  return check_slack_construction(construct_xprime(y, mu, gamma, a, b), y, mu, gamma, a, b);
}

Allocation construct_w(const Allocation& z, const ValueMatrix& mu, double eps, double a, double b) {
  require_same_shape(z, mu, "construct_w");
  if (!(eps >= 0.0)) throw std::invalid_argument("construct_w: eps must be >= 0");
  if (!(a > 0.0 && b >= a)) throw std::invalid_argument("construct_w: need 0 < a <= b");
  const std::size_t n = z.rows();
  const std::size_t m = z.cols();

  const auto s = slack_profile(z, mu);
  double surplus = 0.0;
  double deficit = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (s[i] < -eps - kConstraintTol) {
      std::ostringstream os;
      os << "construct_w: player " << i << " has slack " << s[i] << " below -eps = " << -eps;
      throw ContractViolation(os.str());
    }
    if (s[i] >= 0.0) {
      surplus += s[i];
    } else {
      deficit -= s[i];
    }
  }
  if ((a / b) * surplus <= deficit) return uar_allocation(n, m);

  // Per item type, the surplus-weighted allocation donors hand over, each
  // donor's row scaled to unit value for that donor.
  std::vector<double> pool(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (s[i] < 0.0) continue;
    const double weight = s[i] / row_dot(z, mu, i);
    for (std::size_t k = 0; k < m; ++k) pool[k] += weight * z(i, k);
  }

  const double ratio = b / a;
  Allocation w = z;
  for (std::size_t i = 0; i < n; ++i) {
    if (s[i] >= 0.0) {
      const double cut = ratio * (deficit / surplus) * s[i] / row_dot(z, mu, i);
      for (std::size_t k = 0; k < m; ++k) w(i, k) = z(i, k) - cut * z(i, k);
    } else {
      const double gain = ratio * (-s[i]) / surplus;
      for (std::size_t k = 0; k < m; ++k) w(i, k) = z(i, k) + gain * pool[k];
    }
  }
  return w;
}

ContinuityReport verify_continuity(const ValueMatrix& mu1, const ValueMatrix& mu2,
                                   const ConstraintSet& cs) {
  require_same_shape(mu1, mu2, "verify_continuity");
  ContinuityReport r;
  r.welfare1 = frobenius(solve_Y(mu1, cs), mu1);
  r.welfare2 = frobenius(solve_Y(mu2, cs), mu2);
  r.distance = l1_distance(mu1, mu2);
  r.bound = cs.c_p2() * r.distance;
  r.ok = std::abs(r.welfare1 - r.welfare2) <= r.bound + kLemmaTol;
  return r;
}

}  // namespace fairdiv
