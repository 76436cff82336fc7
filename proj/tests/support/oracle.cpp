#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Solves the square system in place; false when singular.
bool solve_square(Mat a, Vec b, Vec& x) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    if (std::abs(a[piv][col]) < 1e-10) return false;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  x.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return true;
}

bool feasible(const DenseLp& lp, const Vec& x) {
  constexpr double tol = 1e-9;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] < lp.lo[j] - tol || x[j] > lp.hi[j] + tol) return false;
  }
  auto dot = [&](const Vec& row) {
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) s += row[j] * x[j];
    return s;
  };
  for (std::size_t r = 0; r < lp.a_ub.size(); ++r) {
    if (dot(lp.a_ub[r]) > lp.b_ub[r] + tol) return false;
  }
  for (std::size_t r = 0; r < lp.a_eq.size(); ++r) {
    if (std::abs(dot(lp.a_eq[r]) - lp.b_eq[r]) > tol) return false;
  }
  return true;
}

// Odometer over the grid axes, last axis fastest.
bool next_index(std::vector<std::size_t>& idx, const std::vector<Vec>& axis) {
  for (std::size_t j = idx.size(); j-- > 0;) {
    if (++idx[j] < axis[j].size()) return true;
    idx[j] = 0;
  }
  return false;
}

}  // namespace

std::optional<BruteResult> brute_force_max(const DenseLp& lp) {
  const std::size_t nv = lp.c.size();
  // Candidate tight rows: inequality rows and finite bounds. Equalities are
  // always tight.
  Mat rows;
  Vec rhs;
  for (std::size_t r = 0; r < lp.a_ub.size(); ++r) {
    rows.push_back(lp.a_ub[r]);
    rhs.push_back(lp.b_ub[r]);
  }
  for (std::size_t j = 0; j < nv; ++j) {
    Vec e(nv, 0.0);
    e[j] = 1.0;
    rows.push_back(e);
    rhs.push_back(lp.lo[j]);
    if (std::isfinite(lp.hi[j])) {
      rows.push_back(e);
      rhs.push_back(lp.hi[j]);
    }
  }
  const std::size_t n_eq = lp.a_eq.size();
  if (n_eq > nv) return std::nullopt;
  const std::size_t pick = nv - n_eq;

  std::optional<BruteResult> best;
  std::vector<bool> mask(rows.size(), false);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(std::min(pick, rows.size())), true);
  if (pick > rows.size()) return std::nullopt;
  do {
    Mat a = lp.a_eq;
    Vec b = lp.b_eq;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (mask[r]) {
        a.push_back(rows[r]);
        b.push_back(rhs[r]);
      }
    }
    Vec x;
    if (!solve_square(a, b, x) || !feasible(lp, x)) continue;
    double v = 0.0;
    for (std::size_t j = 0; j < nv; ++j) v += lp.c[j] * x[j];
    if (!best || v > best->value + 1e-12) best = BruteResult{v, x};
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return best;
}

DenseLp allocation_lp(std::size_t n, std::size_t m, const Vec& objective, const Mat& ge_rows,
                      const Vec& ge_rhs) {
  DenseLp lp;
  lp.c = objective;
  lp.lo.assign(n * m, 0.0);
  lp.hi.assign(n * m, 1.0);
  for (std::size_t k = 0; k < m; ++k) {
    Vec row(n * m, 0.0);
    for (std::size_t i = 0; i < n; ++i) row[i * m + k] = 1.0;
    lp.a_eq.push_back(row);
    lp.b_eq.push_back(1.0);
  }
  for (std::size_t r = 0; r < ge_rows.size(); ++r) {
    Vec neg(ge_rows[r].size());
    for (std::size_t j = 0; j < neg.size(); ++j) neg[j] = -ge_rows[r][j];
    lp.a_ub.push_back(neg);
    lp.b_ub.push_back(-ge_rhs[r]);
  }
  return lp;
}

void proportionality_rows(std::size_t n, std::size_t m, const Vec& mu, Mat& rows, Vec& rhs) {
  for (std::size_t l = 0; l < n; ++l) {
    Vec row(n * m, 0.0);
    for (std::size_t k = 0; k < m; ++k) row[l * m + k] = mu[l * m + k];
    rows.push_back(row);
    rhs.push_back(1.0 / static_cast<double>(n));
  }
}

void robust_proportionality_rows(std::size_t n, std::size_t m, const Vec& lower, Mat& rows, Vec& rhs) {
  proportionality_rows(n, m, lower, rows, rhs);
}

ReferenceRound reference_round(std::size_t n, std::size_t m, std::size_t T, double a, double b,
                               const std::vector<std::size_t>& counts, const Vec& sums,
                               double spacing) {
  const std::size_t nm = n * m;
  ReferenceRound out;
  out.center.resize(nm);
  out.radius.resize(nm);
  out.lower.resize(nm);
  out.upper.resize(nm);
  out.mu_upper.resize(nm);
  const double lg = std::log(6.0 * static_cast<double>(nm) * static_cast<double>(T));
  for (std::size_t j = 0; j < nm; ++j) {
    out.center[j] = counts[j] ? sums[j] / static_cast<double>(counts[j]) : 0.5 * (a + b);
    out.radius[j] = counts[j] ? lg / std::sqrt(static_cast<double>(counts[j])) : kInf;
    out.lower[j] = std::max(out.center[j] - out.radius[j], a);
    out.upper[j] = std::min(out.center[j] + out.radius[j], b);
    out.mu_upper[j] = counts[j] ? out.center[j] + out.radius[j] : b;
  }

  Mat rows;
  Vec rhs;
  robust_proportionality_rows(n, m, out.lower, rows, rhs);
  const auto xhat = brute_force_max(allocation_lp(n, m, out.mu_upper, rows, rhs));
  if (!xhat) return out;
  out.xhat = xhat->x;
  out.xhat_value = xhat->value;

  // Grid: multiples of the spacing inside each interval, midpoint if none.
  std::vector<Vec> axis(nm);
  for (std::size_t j = 0; j < nm; ++j) {
    const long first = static_cast<long>(std::ceil(out.lower[j] / spacing - 1e-9));
    const long last = static_cast<long>(std::floor(out.upper[j] / spacing + 1e-9));
    for (long q = first; q <= last; ++q) axis[j].push_back(std::clamp(q * spacing, out.lower[j], out.upper[j]));
    if (axis[j].empty()) axis[j].push_back(0.5 * (out.lower[j] + out.upper[j]));
  }
  std::vector<std::size_t> idx(nm, 0);
  out.gridmax = -kInf;
  bool any = false;
  do {
    Vec mu(nm);
    for (std::size_t j = 0; j < nm; ++j) mu[j] = axis[j][idx[j]];
    ++out.grid_points;
    Mat prow;
    Vec prhs;
    proportionality_rows(n, m, mu, prow, prhs);
    if (auto y = brute_force_max(allocation_lp(n, m, mu, prow, prhs))) {
      double v = 0.0;
      for (std::size_t j = 0; j < nm; ++j) {
        if (y->x[j] != 0.0) v += y->x[j] * out.radius[j];
      }
      out.gridmax = std::max(out.gridmax, v);
      any = true;
    }
  } while (next_index(idx, axis));
  if (!any) out.gridmax = kInf;

  double explore = 0.0;
  for (std::size_t j = 0; j < nm; ++j) {
    if (out.xhat[j] != 0.0) explore += out.xhat[j] * out.radius[j];
  }
  const double c_p2 = b * static_cast<double>(n) / a;
  out.budget = out.xhat_value - 4.0 * c_p2 * out.gridmax - 2.0 * explore - 1e-9;
  if (std::isnan(out.budget)) out.budget = -kInf;

  out.explore_max.resize(nm);
  for (std::size_t j = 0; j < nm; ++j) {
    Mat erows = rows;
    Vec erhs = rhs;
    if (std::isfinite(out.budget)) {
      erows.push_back(out.mu_upper);
      erhs.push_back(out.budget);
    }
    Vec obj(nm, 0.0);
    obj[j] = 1.0;
    const auto z = brute_force_max(allocation_lp(n, m, obj, erows, erhs));
    out.explore_max[j] = z ? z->value : -kInf;
  }
  return out;
}

}  // namespace oracle
