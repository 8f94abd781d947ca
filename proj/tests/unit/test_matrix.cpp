#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "schatten/error.hpp"
#include "schatten/matrix.hpp"
#include "schatten/random.hpp"

using namespace schatten;

TEST_CASE("dense matrix construction checks shape and finiteness") {
  CHECK_NOTHROW(DenseMatrix(2, 3, std::vector<double>(6, 1.0)));
  CHECK_THROWS_AS(DenseMatrix(2, 3, std::vector<double>(5, 1.0)), InputError);
  CHECK_THROWS_AS(DenseMatrix(1, 2, {1.0, std::numeric_limits<double>::quiet_NaN()}), InputError);
  CHECK_THROWS_AS(DenseMatrix(1, 1, {std::numeric_limits<double>::infinity()}), InputError);
  CHECK_THROWS_AS((DenseMatrix{{1.0, 2.0}, {3.0}}), InputError);

  const DenseMatrix z(3, 4);
  CHECK(z.is_zero());
  CHECK(z.rows() == 3);
  CHECK(z.cols() == 4);
}

TEST_CASE("products match a naive triple loop") {
  const DenseMatrix a = gaussian_matrix(7, 5, 11);
  const DenseMatrix b = gaussian_matrix(5, 9, 12);
  const DenseMatrix c = multiply(a, b);
  const auto ref = oracle::naive_product(a.data(), b.data(), 7, 5, 9);
  for (std::size_t k = 0; k < ref.size(); ++k) CHECK(c.data()[k] == doctest::Approx(ref[k]).epsilon(1e-13));

  const DenseMatrix bt = b.transposed();
  const DenseMatrix c2 = multiply_transposed(a, bt);
  for (std::size_t k = 0; k < ref.size(); ++k) CHECK(c2.data()[k] == doctest::Approx(ref[k]).epsilon(1e-13));

  CHECK_THROWS_AS(multiply(a, a), InputError);
}

TEST_CASE("matrix-vector products") {
  const DenseMatrix a{{1, 2, 3}, {4, 5, 6}};
  const std::vector<double> x{1, 0, -1};
  const auto y = multiply(a, x);
  CHECK(y == std::vector<double>{-2, -2});
  const std::vector<double> g{1, -1};
  CHECK(left_multiply(g, a) == std::vector<double>{-3, -3, -3});
}

TEST_CASE("orthonormal columns have identity Gram matrix") {
  const DenseMatrix q = orthonormal_columns(gaussian_matrix(40, 9, 3));
  CHECK(q.rows() == 40);
  CHECK(q.cols() == 9);
  CHECK(gram_deviation(q) < 1e-13);
  CHECK(gram_deviation(random_orthogonal(17, 5)) < 1e-13);
}

TEST_CASE("euclidean norm is robust to extreme magnitudes") {
  const std::vector<double> big{3e200, 4e200};
  CHECK(euclidean_norm(big) == doctest::Approx(5e200));
  const std::vector<double> tiny{3e-200, 4e-200};
  CHECK(euclidean_norm(tiny) == doctest::Approx(5e-200));
  CHECK(DenseMatrix{{3, 0}, {0, 4}}.frobenius_norm() == 5.0);
}
