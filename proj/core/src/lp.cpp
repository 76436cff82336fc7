#include "fairdiv/lp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace fairdiv::lp {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-11;
constexpr double kRatioTieTol = 1e-12;
constexpr double kPhaseOneTol = 1e-9;
constexpr double kRedundantRowTol = 1e-9;
constexpr std::size_t kMaxPivots = 200000;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return s;
}

// Dense row-major tableau. Rows [0, rows) are constraints, row `rows` is the
// reduced-cost row; the last column holds right-hand sides (and -objective in
// the reduced-cost row).
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols, std::vector<double>& storage)
      : rows_(rows), cols_(cols), data_(storage) {
    data_.assign((rows + 1) * (cols + 1), 0.0);
    basis_.assign(rows, 0);
  }

  double& at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double rhs(std::size_t r) const { return at(r, cols_); }
  double& cost(std::size_t c) { return at(rows_, c); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t r, std::size_t q) {
    const std::size_t width = cols_ + 1;
    double* prow = &data_[r * width];
    const double inv = 1.0 / prow[q];
    for (std::size_t c = 0; c < width; ++c) prow[c] *= inv;
    prow[q] = 1.0;
    for (std::size_t i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      double* row = &data_[i * width];
      const double f = row[q];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < width; ++c) row[c] -= f * prow[c];
      row[q] = 0.0;
      if (i < rows_ && row[cols_] < 0.0 && row[cols_] > -kRatioTieTol) row[cols_] = 0.0;
    }
    basis_[r] = q;
  }

  // Bland's rule simplex on the current reduced-cost row, entering columns
  // restricted to [0, limit). Returns false if unbounded.
  bool optimize(std::size_t limit) {
    for (std::size_t iter = 0; iter < kMaxPivots; ++iter) {
      std::size_t q = limit;
      for (std::size_t j = 0; j < limit; ++j) {
        if (cost(j) > kCostTol) {
          q = j;
          break;
        }
      }
      if (q == limit) return true;

      std::size_t leave = rows_;
      double best = 0.0;
      for (std::size_t r = 0; r < rows_; ++r) {
        const double a = at(r, q);
        if (a <= kPivotTol) continue;
        const double ratio = rhs(r) / a;
        if (leave == rows_ || ratio < best - kRatioTieTol) {
          best = ratio;
          leave = r;
        } else if (ratio <= best + kRatioTieTol && basis_[r] < basis_[leave]) {
          leave = r;
        }
      }
      if (leave == rows_) return false;
      pivot(leave, q);
    }
    throw std::runtime_error("simplex: pivot limit exceeded");
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double>& data_;
  std::vector<std::size_t> basis_;
};

}  // namespace

std::string_view to_string(Status status) {
  switch (status) {
    case Status::kOptimal:
      return "optimal";
    case Status::kInfeasible:
      return "infeasible";
    case Status::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

void check_well_formed(const LinearProgram& lp) {
  const std::size_t n = lp.num_variables();
  auto fail = [](const std::string& what) { throw MalformedProgram("linear program: " + what); };
  for (double c : lp.objective) {
    if (!std::isfinite(c)) fail("non-finite objective coefficient");
  }
  auto check_rows = [&](const std::vector<LinearConstraint>& rows, const char* kind) {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].coeffs.size() != n) {
        std::ostringstream os;
        os << kind << " constraint " << r << " has " << rows[r].coeffs.size()
           << " coefficients, expected " << n;
        fail(os.str());
      }
      for (double c : rows[r].coeffs) {
        if (!std::isfinite(c)) fail(std::string("non-finite coefficient in ") + kind + " constraint");
      }
      if (!std::isfinite(rows[r].rhs)) fail(std::string("non-finite rhs in ") + kind + " constraint");
    }
  };
  check_rows(lp.eq_constraints, "eq");
  check_rows(lp.ub_constraints, "ub");
  if (!lp.var_bounds.empty() && lp.var_bounds.size() != n) {
    fail("var_bounds size does not match objective length");
  }
  for (std::size_t j = 0; j < lp.var_bounds.size(); ++j) {
    const auto& b = lp.var_bounds[j];
    if (!std::isfinite(b.lo)) fail("variable lower bounds must be finite");
    if (std::isnan(b.hi) || b.hi == -kInfinity) fail("invalid variable upper bound");
    if (b.lo > b.hi) {
      std::ostringstream os;
      os << "variable " << j << " has lo > hi";
      fail(os.str());
    }
  }
}

LpSolution solve(const LinearProgram& lp) {
  check_well_formed(lp);
  const std::size_t n = lp.num_variables();

  std::vector<double> lo(n);
  for (std::size_t j = 0; j < n; ++j) lo[j] = lp.bound(j).lo;

  std::size_t num_hi = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (std::isfinite(lp.bound(j).hi)) ++num_hi;
  }
  const std::size_t num_eq = lp.eq_constraints.size();
  const std::size_t num_ub = lp.ub_constraints.size() + num_hi;

  // Shifted right-hand sides (x = lo + y, y >= 0).
  std::vector<double> eq_rhs(num_eq);
  for (std::size_t e = 0; e < num_eq; ++e) {
    eq_rhs[e] = lp.eq_constraints[e].rhs - dot(lp.eq_constraints[e].coeffs, lo);
  }
  std::vector<double> ub_rhs(lp.ub_constraints.size());
  std::size_t num_art = num_eq;
  for (std::size_t u = 0; u < lp.ub_constraints.size(); ++u) {
    ub_rhs[u] = lp.ub_constraints[u].rhs - dot(lp.ub_constraints[u].coeffs, lo);
    if (ub_rhs[u] < 0.0) ++num_art;
  }

  const std::size_t rows = num_eq + num_ub;
  const std::size_t slack0 = n;
  const std::size_t art0 = n + num_ub;
  const std::size_t cols = n + num_ub + num_art;

  thread_local std::vector<double> storage;
  Tableau tab(rows, cols, storage);
  auto& basis = tab.basis();

  std::size_t next_art = art0;
  std::size_t r = 0;
  for (std::size_t e = 0; e < num_eq; ++e, ++r) {
    const double sign = eq_rhs[e] < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) tab.at(r, j) = sign * lp.eq_constraints[e].coeffs[j];
    tab.rhs(r) = sign * eq_rhs[e];
    tab.at(r, next_art) = 1.0;
    basis[r] = next_art++;
  }
  for (std::size_t u = 0; u < lp.ub_constraints.size(); ++u, ++r) {
    const double sign = ub_rhs[u] < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) tab.at(r, j) = sign * lp.ub_constraints[u].coeffs[j];
    tab.at(r, slack0 + u) = sign;
    tab.rhs(r) = sign * ub_rhs[u];
    if (sign < 0.0) {
      tab.at(r, next_art) = 1.0;
      basis[r] = next_art++;
    } else {
      basis[r] = slack0 + u;
    }
  }
  for (std::size_t j = 0, h = lp.ub_constraints.size(); j < n; ++j) {
    const double hi = lp.bound(j).hi;
    if (!std::isfinite(hi)) continue;
    tab.at(r, j) = 1.0;
    tab.at(r, slack0 + h) = 1.0;
    tab.rhs(r) = hi - lo[j];
    basis[r] = slack0 + h;
    ++h;
    ++r;
  }

  const std::size_t real_cols = art0;

  // Phase 1: maximize -sum(artificials).
  if (num_art > 0) {
    for (std::size_t i = 0; i < rows; ++i) {
      if (basis[i] < art0) continue;
      for (std::size_t c = 0; c < real_cols; ++c) tab.cost(c) += tab.at(i, c);
      tab.at(rows, cols) += tab.rhs(i);
    }
    tab.optimize(real_cols);
    if (tab.at(rows, cols) > kPhaseOneTol) {
      return LpSolution{Status::kInfeasible, {}, 0.0};
    }
    // Pivot remaining (zero-level) artificials out of the basis.
    for (std::size_t i = 0; i < rows; ++i) {
      if (basis[i] < art0) continue;
      std::size_t q = real_cols;
      for (std::size_t c = 0; c < real_cols; ++c) {
        if (std::abs(tab.at(i, c)) > kRedundantRowTol) {
          q = c;
          break;
        }
      }
      if (q < real_cols) {
        tab.pivot(i, q);
      } else {
        for (std::size_t c = 0; c <= cols; ++c) tab.at(i, c) = 0.0;
      }
    }
  }

  // Phase 2 reduced costs: d_j = c_j - c_B B^{-1} a_j.
  for (std::size_t c = 0; c <= cols; ++c) tab.at(rows, c) = 0.0;
  for (std::size_t j = 0; j < n; ++j) tab.cost(j) = lp.objective[j];
  for (std::size_t i = 0; i < rows; ++i) {
    const std::size_t b = basis[i];
    if (b >= n) continue;
    const double cb = lp.objective[b];
    if (cb == 0.0) continue;
    for (std::size_t c = 0; c <= cols; ++c) tab.at(rows, c) -= cb * tab.at(i, c);
  }
  for (std::size_t i = 0; i < rows; ++i) {
    if (basis[i] < n) tab.cost(basis[i]) = 0.0;
  }

  if (!tab.optimize(real_cols)) {
    return LpSolution{Status::kUnbounded, {}, 0.0};
  }

  LpSolution sol;
  sol.status = Status::kOptimal;
  sol.x = lo;
  for (std::size_t i = 0; i < rows; ++i) {
    if (basis[i] < n) sol.x[basis[i]] += tab.rhs(i);
  }
  sol.objective_value = dot(lp.objective, sol.x);
  return sol;
}

double objective_at(const LinearProgram& lp, std::span<const double> x) {
  return dot(lp.objective, x);
}

double max_violation(const LinearProgram& lp, std::span<const double> x) {
  double worst = 0.0;
  for (const auto& c : lp.eq_constraints) {
    worst = std::max(worst, std::abs(dot(c.coeffs, x) - c.rhs));
  }
  for (const auto& c : lp.ub_constraints) {
    worst = std::max(worst, dot(c.coeffs, x) - c.rhs);
  }
  for (std::size_t j = 0; j < x.size(); ++j) {
    const auto b = lp.bound(j);
    worst = std::max(worst, b.lo - x[j]);
    if (std::isfinite(b.hi)) worst = std::max(worst, x[j] - b.hi);
  }
  return worst;
}

namespace {

// Solves the square system in place; false when (numerically) singular.
bool solve_square(std::vector<double>& a, std::vector<double>& b, std::size_t n) {
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
    }
    if (std::abs(a[piv * n + col]) < 1e-10) return false;
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a[piv * n + c], a[col * n + c]);
      std::swap(b[piv], b[col]);
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r * n + col] / a[col * n + col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
      b[r] -= f * b[col];
    }
  }
  for (std::size_t r = 0; r < n; ++r) b[r] /= a[r * n + r];
  return true;
}

}  // namespace

std::vector<std::vector<double>> enumerate_vertices(const LinearProgram& lp) {
  check_well_formed(lp);
  const std::size_t n = lp.num_variables();
  if (n > kMaxEnumerationVariables) {
    throw std::invalid_argument("enumerate_vertices: " + std::to_string(n) +
                                " variables exceeds the limit of " +
                                std::to_string(kMaxEnumerationVariables));
  }

  // Every constraint and bound as a hyperplane a·x = rhs.
  std::vector<LinearConstraint> planes;
  for (const auto& c : lp.eq_constraints) planes.push_back(c);
  for (const auto& c : lp.ub_constraints) planes.push_back(c);
  for (std::size_t j = 0; j < n; ++j) {
    LinearConstraint lo_plane{std::vector<double>(n, 0.0), lp.bound(j).lo};
    lo_plane.coeffs[j] = 1.0;
    planes.push_back(lo_plane);
    if (std::isfinite(lp.bound(j).hi)) {
      LinearConstraint hi_plane{std::vector<double>(n, 0.0), lp.bound(j).hi};
      hi_plane.coeffs[j] = 1.0;
      planes.push_back(hi_plane);
    }
  }

  std::vector<std::vector<double>> vertices;
  if (n == 0) {
    if (max_violation(lp, {}) <= kFeasibilityTol) vertices.emplace_back();
    return vertices;
  }
  if (planes.size() < n) return vertices;

  std::vector<std::size_t> pick(n);
  std::iota(pick.begin(), pick.end(), 0);
  std::vector<double> a(n * n), b(n);
  while (true) {
    for (std::size_t r = 0; r < n; ++r) {
      const auto& p = planes[pick[r]];
      std::copy(p.coeffs.begin(), p.coeffs.end(), a.begin() + static_cast<std::ptrdiff_t>(r * n));
      b[r] = p.rhs;
    }
    if (solve_square(a, b, n) && max_violation(lp, b) <= kFeasibilityTol) {
      const bool seen = std::any_of(vertices.begin(), vertices.end(), [&](const auto& v) {
        for (std::size_t j = 0; j < n; ++j) {
          if (std::abs(v[j] - b[j]) > kFeasibilityTol) return false;
        }
        return true;
      });
      if (!seen) vertices.push_back(b);
    }
    // Next n-combination of plane indices in lexicographic order.
    std::size_t k = n;
    while (k > 0 && pick[k - 1] == planes.size() - n + (k - 1)) --k;
    if (k == 0) break;
    ++pick[k - 1];
    for (std::size_t i = k; i < n; ++i) pick[i] = pick[i - 1] + 1;
  }
  return vertices;
}

}  // namespace fairdiv::lp
