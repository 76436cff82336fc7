#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fairdiv {

/// Shape mismatch between matrices, or between a matrix and a constraint set.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A routine's documented precondition or postcondition did not hold.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Column-sum tolerance for a valid allocation.
inline constexpr double kColumnSumTol = 1e-9;
/// Entries of a valid allocation may stray this far outside [0, 1].
inline constexpr double kEntryTol = 1e-12;

/// Dense row-major n×m matrix. Rows index players, columns item types.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t i, std::size_t k) { return data_[i * cols_ + k]; }
  double operator()(std::size_t i, std::size_t k) const { return data_[i * cols_ + k]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  double row_sum(std::size_t i) const;
  double col_sum(std::size_t k) const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Mean values μ: entry (i, k) is player i's expected value for item type k.
class ValueMatrix : public Matrix {
 public:
  using Matrix::Matrix;
  ValueMatrix() = default;
  explicit ValueMatrix(Matrix m) : Matrix(std::move(m)) {}
};

/// Fractional allocation X: entry (i, k) is the probability that player i
/// receives an arriving item of type k. Valid when every column sums to 1.
class Allocation : public Matrix {
 public:
  using Matrix::Matrix;
  Allocation() = default;
  explicit Allocation(Matrix m) : Matrix(std::move(m)) {}

  /// Largest |column sum - 1|.
  double column_sum_error() const;
  /// Columns sum to 1 within `tol` and entries lie in [-kEntryTol, 1 + kEntryTol].
  bool is_valid(double tol = kColumnSumTol) const;
  /// Human-readable reason the allocation is invalid, if it is.
  std::optional<std::string> validity_error(double tol = kColumnSumTol) const;
  /// Clamps entries to [0, 1] and rescales each column to sum to exactly 1.
  /// Intended for cleaning simplex output; columns summing to 0 are rejected.
  Allocation renormalized() const;
};

/// Every entry equals 1/n.
Allocation uar_allocation(std::size_t n, std::size_t m);

/// ⟨A, B⟩_F. Throws DimensionError on shape mismatch.
double frobenius(const Matrix& a, const Matrix& b);

/// ⟨X, μ⟩_F, the expected welfare of X summed over item types (the per-item
/// expectation is this divided by m).
double frobenius_welfare(const Allocation& x, const ValueMatrix& mu);

/// ⟨X, ε⟩_F with 0·∞ taken as 0, for radius matrices that carry +∞ entries.
double radius_weighted(const Matrix& x, const Matrix& radius);

/// Σ |a_ik - b_ik|
double l1_distance(const Matrix& a, const Matrix& b);

/// Mean of equally shaped matrices.
Matrix mean_of(std::span<const Allocation> mats);

void require_same_shape(const Matrix& a, const Matrix& b, std::string_view what);

enum class ConstraintKind { kProportionality, kEnvyFreeness };

std::string_view to_string(ConstraintKind kind);
std::optional<ConstraintKind> parse_constraint_kind(std::string_view name);

struct InstanceSpec {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t T = 0;
  double a = 0.0;
  double b = 0.0;
  ValueMatrix mu_star;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  ConstraintKind constraint_kind = ConstraintKind::kProportionality;
};

struct Violation {
  enum class Kind { kShape, kHorizon, kBounds, kNoise, kEntryBound, kNormalization };
  Kind kind;
  std::string message;
  std::optional<std::size_t> player;
  std::optional<std::size_t> item;
};

/// Row sums within this tolerance of 1 count as normalized.
inline constexpr double kNormalizationTol = 1e-12;

/// Every broken invariant of `spec`; empty when the spec is valid.
std::vector<Violation> validate(const InstanceSpec& spec);

/// Entry bounds a <= μ_ik <= b and row normalization only.
std::vector<Violation> validate_means(const ValueMatrix& mu, double a, double b);

/// Rows drawn from a flat Dirichlet, redrawn until every entry lies in
/// [a, b]. Deterministic in `seed`. Throws std::invalid_argument when no
/// normalized row fits the bounds or `max_tries` redraws of a row fail.
ValueMatrix random_normalized_means(std::size_t n, std::size_t m, double a, double b,
                                   std::uint64_t seed, std::size_t max_tries = 1000000);

}  // namespace fairdiv
