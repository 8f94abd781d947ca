#include "schatten/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "schatten/error.hpp"

namespace schatten {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw InputError("matrix entry count " + std::to_string(data_.size()) + " does not match " +
                     std::to_string(rows) + "x" + std::to_string(cols));
  }
  if (!all_finite()) throw InputError("matrix has non-finite entries");
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw InputError("ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
  if (!all_finite()) throw InputError("matrix has non-finite entries");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> values) {
  DenseMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool DenseMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

double DenseMatrix::frobenius_norm() const noexcept { return euclidean_norm(data_); }

bool DenseMatrix::is_zero() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return x == 0.0; });
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw InputError("matrix sum: shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw InputError("matrix difference: shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

DenseMatrix& DenseMatrix::operator*=(double c) noexcept {
  for (double& x : data_) x *= c;
  return *this;
}

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
DenseMatrix operator*(double c, DenseMatrix a) { return a *= c; }

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw InputError("matrix product: inner dimensions " + std::to_string(a.cols()) + " and " +
                     std::to_string(b.rows()) + " differ");
  }
  DenseMatrix c(a.rows(), b.cols());
  const std::size_t n = b.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* ci = c.data().data() + i * n;
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      const double* bk = b.data().data() + k * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

DenseMatrix multiply_transposed(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.cols()) throw InputError("matrix product a*b^T: column counts differ");
  DenseMatrix c(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto ai = a.row(i);
    for (std::size_t j = 0; j < b.rows(); ++j) {
      const auto bj = b.row(j);
      double s = 0.0;
      for (std::size_t k = 0; k < ai.size(); ++k) s += ai[k] * bj[k];
      c(i, j) = s;
    }
  }
  return c;
}

std::vector<double> multiply(const DenseMatrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw InputError("matrix-vector product: dimension mismatch");
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto ai = a.row(i);
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += ai[k] * x[k];
    y[i] = s;
  }
  return y;
}

std::vector<double> left_multiply(std::span<const double> x, const DenseMatrix& a) {
  if (a.rows() != x.size()) throw InputError("vector-matrix product: dimension mismatch");
  std::vector<double> y(a.cols(), 0.0);
  for (std::size_t k = 0; k < x.size(); ++k) {
    const auto ak = a.row(k);
    for (std::size_t j = 0; j < y.size(); ++j) y[j] += x[k] * ak[j];
  }
  return y;
}

DenseMatrix orthonormal_columns(const DenseMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (m < n) throw InputError("orthonormal_columns requires rows >= cols");

  // Householder vectors stored column-wise in a column-major work array.
  std::vector<double> work(m * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) work[j * m + i] = a(i, j);
  std::vector<std::vector<double>> reflectors;
  reflectors.reserve(n);

  for (std::size_t k = 0; k < n; ++k) {
    double* col = work.data() + k * m;
    double norm = 0.0;
    for (std::size_t i = k; i < m; ++i) norm += col[i] * col[i];
    norm = std::sqrt(norm);
    std::vector<double> v(m, 0.0);
    if (norm > 0.0) {
      const double alpha = col[k] > 0 ? -norm : norm;
      for (std::size_t i = k; i < m; ++i) v[i] = col[i];
      v[k] -= alpha;
      double vnorm = 0.0;
      for (std::size_t i = k; i < m; ++i) vnorm += v[i] * v[i];
      vnorm = std::sqrt(vnorm);
      if (vnorm > 0.0)
        for (std::size_t i = k; i < m; ++i) v[i] /= vnorm;
      for (std::size_t j = k; j < n; ++j) {
        double* cj = work.data() + j * m;
        double dot = 0.0;
        for (std::size_t i = k; i < m; ++i) dot += v[i] * cj[i];
        for (std::size_t i = k; i < m; ++i) cj[i] -= 2.0 * dot * v[i];
      }
    }
    reflectors.push_back(std::move(v));
  }

  // Q = H_0 H_1 ... H_{n-1} applied to the first n columns of the identity.
  DenseMatrix q(m, n);
  std::vector<double> e(m);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(e.begin(), e.end(), 0.0);
    e[j] = 1.0;
    for (std::size_t k = n; k-- > 0;) {
      const auto& v = reflectors[k];
      double dot = 0.0;
      for (std::size_t i = k; i < m; ++i) dot += v[i] * e[i];
      for (std::size_t i = k; i < m; ++i) e[i] -= 2.0 * dot * v[i];
    }
    for (std::size_t i = 0; i < m; ++i) q(i, j) = e[i];
  }
  return q;
}

double gram_deviation(const DenseMatrix& a) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.cols(); ++i) {
    for (std::size_t j = i; j < a.cols(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.rows(); ++k) s += a(k, i) * a(k, j);
      worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

double euclidean_norm(std::span<const double> x) noexcept {
  double top = 0.0;
  for (double v : x) top = std::max(top, std::abs(v));
  if (top == 0.0) return 0.0;
  // Plain accumulation is safe when squares neither overflow nor lose the largest term.
  if (top > 1e-140 && top < 1e140) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
  }
  const int e = std::ilogb(top);
  const double scale = std::ldexp(1.0, -e);
  double s = 0.0;
  for (double v : x) s += (v * scale) * (v * scale);
  return std::ldexp(std::sqrt(s), e);
}

}  // namespace schatten
