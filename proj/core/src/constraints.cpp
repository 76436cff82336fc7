#include "fairdiv/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fairdiv {

ConstraintSet::ConstraintSet(std::string name, std::size_t n, std::size_t m,
                             CoefficientFn coeff_fn, std::vector<double> thresholds,
                             std::vector<Monotonicity> corner_rule, Constants constants)
    : name_(std::move(name)),
      n_(n),
      m_(m),
      coeff_fn_(std::move(coeff_fn)),
      thresholds_(std::move(thresholds)),
      corner_rule_(std::move(corner_rule)),
      constants_(constants) {
  if (corner_rule_.size() != thresholds_.size() * n_ * m_) {
    throw DimensionError("constraint set '" + name_ + "': corner rule size mismatch");
  }
}

std::vector<Matrix> ConstraintSet::coefficients(const ValueMatrix& mu) const {
  if (mu.rows() != n_ || mu.cols() != m_) {
    std::ostringstream os;
    os << name_ << ": value matrix is " << mu.rows() << "x" << mu.cols() << ", expected " << n_
       << "x" << m_;
    throw DimensionError(os.str());
  }
  auto out = coeff_fn_(mu);
  if (out.size() != size()) throw DimensionError(name_ + ": coefficient count mismatch");
  for (const auto& b : out) {
    if (b.rows() != n_ || b.cols() != m_) throw DimensionError(name_ + ": coefficient shape mismatch");
  }
  return out;
}

ConstraintSet proportionality(std::size_t n, std::size_t m, double a, double b) {
  if (n == 0 || m == 0) throw DimensionError("proportionality requires n, m >= 1");
  const double nn = static_cast<double>(n);
  auto coeff = [n, m](const ValueMatrix& mu) {
    std::vector<Matrix> out(n, Matrix(n, m, 0.0));
    for (std::size_t l = 0; l < n; ++l) {
      for (std::size_t k = 0; k < m; ++k) out[l](l, k) = mu(l, k);
    }
    return out;
  };
  std::vector<Monotonicity> corner(n * n * m, Monotonicity::kConstant);
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t k = 0; k < m; ++k) corner[(l * n + l) * m + k] = Monotonicity::kIncreasing;
  }
  ConstraintSet::Constants c;
  c.lipschitz_k = 1.0;
  c.c_p2 = b * nn / a;
  c.c_p3 = b * nn / a;
  c.gamma0 = a / (b * nn);
  return ConstraintSet("proportionality", n, m, coeff, std::vector<double>(n, 1.0 / nn),
                       std::move(corner), c);
}

ConstraintSet envy_freeness(std::size_t n, std::size_t m, double a, double b) {
  if (n < 2 || m == 0) throw DimensionError("envy_freeness requires n >= 2 and m >= 1");
  const std::size_t L = n * (n - 1);
  auto coeff = [n, m, L](const ValueMatrix& mu) {
    std::vector<Matrix> out(L, Matrix(n, m, 0.0));
    std::size_t l = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        for (std::size_t k = 0; k < m; ++k) {
          out[l](i, k) = mu(i, k);
          out[l](j, k) = -mu(i, k);
        }
        ++l;
      }
    }
    return out;
  };
  std::vector<Monotonicity> corner(L * n * m, Monotonicity::kConstant);
  std::size_t l = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      for (std::size_t k = 0; k < m; ++k) {
        corner[(l * n + i) * m + k] = Monotonicity::kIncreasing;
        corner[(l * n + j) * m + k] = Monotonicity::kDecreasing;
      }
      ++l;
    }
  }
  const double nn = static_cast<double>(n);
  ConstraintSet::Constants c;
  c.lipschitz_k = 1.0;
  c.c_p2 = b * nn / a;
  c.c_p3 = b * nn / a;
  c.gamma0 = a / (b * nn);
  return ConstraintSet("envy_freeness", n, m, coeff, std::vector<double>(L, 0.0),
                       std::move(corner), c);
}

ConstraintSet make_constraint_set(ConstraintKind kind, std::size_t n, std::size_t m, double a,
                                  double b) {
  switch (kind) {
    case ConstraintKind::kProportionality:
      return proportionality(n, m, a, b);
    case ConstraintKind::kEnvyFreeness:
      return envy_freeness(n, m, a, b);
  }
  throw std::invalid_argument("unknown constraint kind");
}

double ConfidenceBox::lower(std::size_t i, std::size_t k) const {
  double lo = center(i, k) - radius(i, k);
  if (clamp_lo) lo = std::max(lo, *clamp_lo);
  return lo;
}

double ConfidenceBox::upper(std::size_t i, std::size_t k) const {
  double hi = center(i, k) + radius(i, k);
  if (clamp_hi) hi = std::min(hi, *clamp_hi);
  return hi;
}

ValueMatrix ConfidenceBox::lower_corner() const {
  ValueMatrix out(rows(), cols());
  for (std::size_t i = 0; i < rows(); ++i) {
    for (std::size_t k = 0; k < cols(); ++k) out(i, k) = lower(i, k);
  }
  return out;
}

ValueMatrix ConfidenceBox::upper_corner() const {
  ValueMatrix out(rows(), cols());
  for (std::size_t i = 0; i < rows(); ++i) {
    for (std::size_t k = 0; k < cols(); ++k) out(i, k) = upper(i, k);
  }
  return out;
}

bool ConfidenceBox::empty() const {
  for (std::size_t i = 0; i < rows(); ++i) {
    for (std::size_t k = 0; k < cols(); ++k) {
      if (lower(i, k) > upper(i, k)) return true;
    }
  }
  return false;
}

bool ConfidenceBox::contains(const Matrix& mu, double tol) const {
  require_same_shape(center, mu, "ConfidenceBox::contains");
  for (std::size_t i = 0; i < rows(); ++i) {
    for (std::size_t k = 0; k < cols(); ++k) {
      if (mu(i, k) < lower(i, k) - tol || mu(i, k) > upper(i, k) + tol) return false;
    }
  }
  return true;
}

ConfidenceBox make_box(ValueMatrix center, Matrix radius, std::optional<double> clamp_lo,
                       std::optional<double> clamp_hi) {
  require_same_shape(center, radius, "make_box");
  for (double r : radius.values()) {
    if (!(r >= 0.0)) throw std::invalid_argument("make_box: radius entries must be >= 0");
  }
  return ConfidenceBox{std::move(center), std::move(radius), clamp_lo, clamp_hi};
}

std::vector<double> evaluate(const Allocation& x, const ValueMatrix& mu, const ConstraintSet& cs) {
  require_same_shape(x, mu, "evaluate");
  const auto coeffs = cs.coefficients(mu);
  std::vector<double> slack(cs.size());
  for (std::size_t l = 0; l < cs.size(); ++l) {
    slack[l] = frobenius(coeffs[l], x) - cs.thresholds()[l];
  }
  return slack;
}

double min_slack(const Allocation& x, const ValueMatrix& mu, const ConstraintSet& cs) {
  const auto s = evaluate(x, mu, cs);
  return s.empty() ? std::numeric_limits<double>::infinity() : *std::min_element(s.begin(), s.end());
}

std::vector<Matrix> robust_coefficients(const ConstraintSet& cs, const ConfidenceBox& box) {
  if (box.empty()) throw EmptyBoxError("robust_coefficients: box has an empty interval");
  const ValueMatrix lo = box.lower_corner();
  const ValueMatrix hi = box.upper_corner();
  for (std::size_t j = 0; j < lo.size(); ++j) {
    if (!std::isfinite(lo.values()[j]) || !std::isfinite(hi.values()[j])) {
      throw EmptyBoxError("robust_coefficients: box is unbounded; clamp it to [a, b]");
    }
  }
  const auto at_lo = cs.coefficients(lo);
  const auto at_hi = cs.coefficients(hi);
  const auto at_center = cs.coefficients(box.center);
  std::vector<Matrix> worst = at_center;
  for (std::size_t l = 0; l < cs.size(); ++l) {
    for (std::size_t i = 0; i < box.rows(); ++i) {
      for (std::size_t k = 0; k < box.cols(); ++k) {
        switch (cs.corner(l, i, k)) {
          case Monotonicity::kIncreasing:
            worst[l](i, k) = at_lo[l](i, k);
            break;
          case Monotonicity::kDecreasing:
            worst[l](i, k) = at_hi[l](i, k);
            break;
          case Monotonicity::kConstant:
            break;
        }
      }
    }
  }
  return worst;
}

bool check_property_uar(const ConstraintSet& cs, const ValueMatrix& mu) {
  return min_slack(uar_allocation(mu.rows(), mu.cols()), mu, cs) >= -kConstraintTol;
}

bool check_lipschitz(const ConstraintSet& cs, const ValueMatrix& mu1, const ValueMatrix& mu2,
                     const Matrix& eps) {
  require_same_shape(mu1, mu2, "check_lipschitz");
  require_same_shape(mu1, eps, "check_lipschitz");
  for (std::size_t i = 0; i < mu1.rows(); ++i) {
    for (std::size_t k = 0; k < mu1.cols(); ++k) {
      if (std::abs(mu1(i, k) - mu2(i, k)) > eps(i, k)) {
        std::ostringstream os;
        os << "check_lipschitz: |mu1 - mu2| exceeds eps at (" << i << ", " << k << ")";
        throw ContractViolation(os.str());
      }
    }
  }
  const auto b1 = cs.coefficients(mu1);
  const auto b2 = cs.coefficients(mu2);
  const double K = cs.lipschitz_k();
  for (std::size_t l = 0; l < cs.size(); ++l) {
    for (std::size_t i = 0; i < mu1.rows(); ++i) {
      for (std::size_t k = 0; k < mu1.cols(); ++k) {
        if (std::abs(b1[l](i, k) - b2[l](i, k)) > K * eps(i, k) + 1e-15) return false;
      }
    }
  }
  return true;
}

}  // namespace fairdiv
