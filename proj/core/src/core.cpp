#include "fairdiv/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fairdiv/random.hpp"

namespace fairdiv {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), data_(std::move(values)) {
  if (data_.size() != rows * cols) throw DimensionError("matrix data length mismatch");
}

double Matrix::row_sum(std::size_t i) const {
  double s = 0.0;
  for (double v : row(i)) s += v;
  return s;
}

double Matrix::col_sum(std::size_t k) const {
  double s = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) s += (*this)(i, k);
  return s;
}

double Allocation::column_sum_error() const {
  double worst = 0.0;
  for (std::size_t k = 0; k < cols(); ++k) worst = std::max(worst, std::abs(col_sum(k) - 1.0));
  return worst;
}

std::optional<std::string> Allocation::validity_error(double tol) const {
  for (std::size_t k = 0; k < cols(); ++k) {
    const double s = col_sum(k);
    if (!(std::abs(s - 1.0) <= tol)) {
      std::ostringstream os;
      os << "column " << k << " sums to " << s;
      return os.str();
    }
  }
  for (std::size_t i = 0; i < rows(); ++i) {
    for (std::size_t k = 0; k < cols(); ++k) {
      const double v = (*this)(i, k);
      if (!(v >= -kEntryTol && v <= 1.0 + kEntryTol)) {
        std::ostringstream os;
        os << "entry (" << i << ", " << k << ") = " << v << " outside [0, 1]";
        return os.str();
      }
    }
  }
  return std::nullopt;
}

bool Allocation::is_valid(double tol) const { return !validity_error(tol).has_value(); }

Allocation Allocation::renormalized() const {
  Allocation out = *this;
  for (double& v : out.values()) v = std::clamp(v, 0.0, 1.0);
  for (std::size_t k = 0; k < cols(); ++k) {
    const double s = out.col_sum(k);
    if (!(s > 0.0)) throw ContractViolation("renormalize: column " + std::to_string(k) + " is empty");
    for (std::size_t i = 0; i < rows(); ++i) out(i, k) /= s;
  }
  return out;
}

Allocation uar_allocation(std::size_t n, std::size_t m) {
  if (n == 0 || m == 0) throw DimensionError("uar_allocation requires n, m >= 1");
  return Allocation(n, m, 1.0 / static_cast<double>(n));
}

void require_same_shape(const Matrix& a, const Matrix& b, std::string_view what) {
  if (!a.same_shape(b)) {
    std::ostringstream os;
    os << what << ": shape " << a.rows() << "x" << a.cols() << " vs " << b.rows() << "x"
       << b.cols();
    throw DimensionError(os.str());
  }
}

double frobenius(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "frobenius");
  double s = 0.0;
  const auto av = a.values();
  const auto bv = b.values();
  for (std::size_t j = 0; j < av.size(); ++j) s += av[j] * bv[j];
  return s;
}

double frobenius_welfare(const Allocation& x, const ValueMatrix& mu) { return frobenius(x, mu); }

double radius_weighted(const Matrix& x, const Matrix& radius) {
  require_same_shape(x, radius, "radius_weighted");
  double s = 0.0;
  const auto xv = x.values();
  const auto rv = radius.values();
  for (std::size_t j = 0; j < xv.size(); ++j) {
    if (xv[j] == 0.0) continue;
    s += xv[j] * rv[j];
  }
  return s;
}

double l1_distance(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "l1_distance");
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += std::abs(a.values()[j] - b.values()[j]);
  return s;
}

Matrix mean_of(std::span<const Allocation> mats) {
  if (mats.empty()) throw DimensionError("mean_of: empty input");
  Matrix out(mats.front().rows(), mats.front().cols(), 0.0);
  for (const auto& z : mats) {
    require_same_shape(out, z, "mean_of");
    for (std::size_t j = 0; j < out.size(); ++j) out.values()[j] += z.values()[j];
  }
  const double inv = 1.0 / static_cast<double>(mats.size());
  for (double& v : out.values()) v *= inv;
  return out;
}

std::string_view to_string(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::kProportionality:
      return "proportionality";
    case ConstraintKind::kEnvyFreeness:
      return "envy_freeness";
  }
  return "unknown";
}

std::optional<ConstraintKind> parse_constraint_kind(std::string_view name) {
  if (name == "proportionality") return ConstraintKind::kProportionality;
  if (name == "envy_freeness") return ConstraintKind::kEnvyFreeness;
  return std::nullopt;
}

std::vector<Violation> validate_means(const ValueMatrix& mu, double a, double b) {
  std::vector<Violation> out;
  for (std::size_t i = 0; i < mu.rows(); ++i) {
    for (std::size_t k = 0; k < mu.cols(); ++k) {
      const double v = mu(i, k);
      if (!(v >= a && v <= b)) {
        std::ostringstream os;
        os << "mu_star(" << i << ", " << k << ") = " << v << " outside [" << a << ", " << b << "]";
        out.push_back({Violation::Kind::kEntryBound, os.str(), i, k});
      }
    }
    const double s = mu.row_sum(i);
    if (!(std::abs(s - 1.0) <= kNormalizationTol)) {
      std::ostringstream os;
      os.precision(17);
      os << "row " << i << " of mu_star sums to " << s << ", expected 1";
      out.push_back({Violation::Kind::kNormalization, os.str(), i, std::nullopt});
    }
  }
  return out;
}

std::vector<Violation> validate(const InstanceSpec& spec) {
  std::vector<Violation> out;
  if (spec.n == 0 || spec.m == 0) {
    out.push_back({Violation::Kind::kShape, "n and m must be positive", std::nullopt, std::nullopt});
  }
  if (spec.mu_star.rows() != spec.n || spec.mu_star.cols() != spec.m) {
    std::ostringstream os;
    os << "mu_star is " << spec.mu_star.rows() << "x" << spec.mu_star.cols() << ", expected "
       << spec.n << "x" << spec.m;
    out.push_back({Violation::Kind::kShape, os.str(), std::nullopt, std::nullopt});
  }
  if (spec.T < 1) {
    out.push_back({Violation::Kind::kHorizon, "T must be at least 1", std::nullopt, std::nullopt});
  }
  if (!(spec.a > 0.0 && spec.a <= spec.b && std::isfinite(spec.b))) {
    out.push_back({Violation::Kind::kBounds, "value bounds must satisfy 0 < a <= b < inf",
                   std::nullopt, std::nullopt});
  }
  if (!(spec.noise_sigma >= 0.0 && std::isfinite(spec.noise_sigma))) {
    out.push_back({Violation::Kind::kNoise, "noise_sigma must be finite and nonnegative",
                   std::nullopt, std::nullopt});
  }
  auto means = validate_means(spec.mu_star, spec.a, spec.b);
  out.insert(out.end(), std::make_move_iterator(means.begin()),
             std::make_move_iterator(means.end()));
  return out;
}

ValueMatrix random_normalized_means(std::size_t n, std::size_t m, double a, double b,
                                   std::uint64_t seed, std::size_t max_tries) {
  if (n == 0 || m == 0) throw DimensionError("random_normalized_means: n, m >= 1 required");
  const double uniform_share = 1.0 / static_cast<double>(m);
  if (!(a > 0.0 && a <= uniform_share && uniform_share <= b)) {
    throw std::invalid_argument("random_normalized_means: need 0 < a <= 1/m <= b");
  }
  ValueMatrix mu(n, m);
  std::vector<double> row(m);
  for (std::size_t i = 0; i < n; ++i) {
    CounterRng rng(seed, Stream::kInstance, i);
    bool accepted = false;
    for (std::size_t attempt = 0; attempt < max_tries && !accepted; ++attempt) {
      double total = 0.0;
      for (double& v : row) total += (v = rng.exponential());
      accepted = true;
      for (double& v : row) {
        v /= total;
        if (v < a || v > b) accepted = false;
      }
    }
    if (!accepted) throw std::invalid_argument("random_normalized_means: rejection sampling exhausted");
    std::copy(row.begin(), row.end(), mu.row(i).begin());
  }
  return mu;
}

}  // namespace fairdiv
