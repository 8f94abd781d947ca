#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace schatten {

/// Dense real matrix stored row-major. Value type; copies are deep.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  /// Zero-filled rows x cols matrix.
  DenseMatrix(std::size_t rows, std::size_t cols);
  /// Takes ownership of row-major entries. Throws InputError on size mismatch or non-finite entries.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
  /// Nested-list constructor for literals; rows must have equal length.
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(std::span<const double> values);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  [[nodiscard]] std::span<const double> data() const noexcept { return data_; }
  [[nodiscard]] std::span<double> data() noexcept { return data_; }
  [[nodiscard]] std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }

  [[nodiscard]] DenseMatrix transposed() const;
  [[nodiscard]] bool all_finite() const noexcept;
  [[nodiscard]] double frobenius_norm() const noexcept;
  [[nodiscard]] bool is_zero() const noexcept;

  DenseMatrix& operator+=(const DenseMatrix& other);
  DenseMatrix& operator-=(const DenseMatrix& other);
  DenseMatrix& operator*=(double c) noexcept;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator*(double c, DenseMatrix a);

/// Matrix product. Accumulation order is fixed (i, k, j), so results are reproducible.
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);

/// a * b^T without forming the transpose.
DenseMatrix multiply_transposed(const DenseMatrix& a, const DenseMatrix& b);

/// Matrix-vector product.
std::vector<double> multiply(const DenseMatrix& a, std::span<const double> x);

/// Row vector x^T * a.
std::vector<double> left_multiply(std::span<const double> x, const DenseMatrix& a);

/// Orthonormalizes the columns of a tall matrix (Householder QR, Q factor returned).
/// Requires rows >= cols.
DenseMatrix orthonormal_columns(const DenseMatrix& a);

/// Max |(a^T a - I)_{ij}|.
double gram_deviation(const DenseMatrix& a);

double euclidean_norm(std::span<const double> x) noexcept;

}  // namespace schatten
