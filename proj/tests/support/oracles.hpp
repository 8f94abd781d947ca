#pragma once

// Independent reference computations for tests. Nothing here calls the library's
// spectral code.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace oracle {

// Roots of x^3 - c2 x^2 + c1 x - c0 for a symmetric PSD Gram matrix (all roots real, >= 0),
// returned in descending order. Coefficients are exact integers for integer inputs.
inline std::array<long double, 3> gram_cubic_roots(std::int64_t c2, std::int64_t c1, std::int64_t c0) {
  using ld = long double;
  auto poly = [&](ld x) { return ((x - c2) * x + c1) * x - c0; };
  auto dpoly = [&](ld x) { return (3 * x - 2 * c2) * x + c1; };
  std::array<ld, 3> r{0, 0, 0};
  if (c0 == 0) {
    // One root is exactly 0; the rest solve x^2 - c2 x + c1 = 0.
    const ld disc = std::max<ld>(static_cast<ld>(c2) * c2 - 4.0L * c1, 0.0L);
    const ld s = std::sqrt(disc);
    r[0] = (c2 + s) / 2;
    r[1] = c2 - r[0] > 0 ? static_cast<ld>(c1) / r[0] : 0.0L;
    if (r[0] == 0) r[1] = 0;
    r[2] = 0;
  } else {
    // Depressed cubic y^3 + a y + b with x = y + c2/3; trigonometric form.
    const ld shift = static_cast<ld>(c2) / 3;
    const ld a = static_cast<ld>(c1) - static_cast<ld>(c2) * c2 / 3.0L;
    const ld b = -2.0L * c2 * c2 * c2 / 27.0L + static_cast<ld>(c2) * c1 / 3.0L - c0;
    if (a >= 0) {
      r = {shift, shift, shift};
    } else {
      const ld m = 2 * std::sqrt(-a / 3);
      ld arg = 3 * b / (a * m);
      arg = std::clamp<ld>(arg, -1.0L, 1.0L);
      const ld theta = std::acos(arg) / 3;
      const ld two_pi_3 = 2.0L * std::acos(-1.0L) / 3;
      for (int k = 0; k < 3; ++k) r[k] = shift + m * std::cos(theta - two_pi_3 * k);
    }
    for (auto& x : r) {
      // Newton steps are kept only when they shrink |f|; near a double root f' vanishes.
      for (int it = 0; it < 4; ++it) {
        const ld d = dpoly(x);
        if (d == 0) break;
        const ld y = x - poly(x) / d;
        if (!(std::abs(poly(y)) < std::abs(poly(x)))) break;
        x = y;
      }
      x = std::max<ld>(x, 0.0L);
    }
  }
  std::sort(r.begin(), r.end(), [](ld x, ld y) { return x > y; });
  return r;
}

// Singular values of an integer 3x3 matrix (row-major) from the characteristic
// polynomial of A^T A.
inline std::array<double, 3> singular_values_3x3(const std::array<int, 9>& a) {
  std::int64_t g[3][3];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      std::int64_t s = 0;
      for (int k = 0; k < 3; ++k) s += static_cast<std::int64_t>(a[k * 3 + i]) * a[k * 3 + j];
      g[i][j] = s;
    }
  }
  const std::int64_t c2 = g[0][0] + g[1][1] + g[2][2];
  const std::int64_t c1 = g[0][0] * g[1][1] - g[0][1] * g[1][0] + g[0][0] * g[2][2] - g[0][2] * g[2][0] +
                          g[1][1] * g[2][2] - g[1][2] * g[2][1];
  // det(A^T A) = det(A)^2; the integer determinant keeps this exact.
  const std::int64_t det = static_cast<std::int64_t>(a[0]) * (a[4] * a[8] - a[5] * a[7]) -
                           static_cast<std::int64_t>(a[1]) * (a[3] * a[8] - a[5] * a[6]) +
                           static_cast<std::int64_t>(a[2]) * (a[3] * a[7] - a[4] * a[6]);
  const auto roots = gram_cubic_roots(c2, c1, det * det);
  return {static_cast<double>(std::sqrt(roots[0])), static_cast<double>(std::sqrt(roots[1])),
          static_cast<double>(std::sqrt(roots[2]))};
}

// Singular values of [[a, b], [c, d]] from the quadratic formula on A^T A.
inline std::array<double, 2> singular_values_2x2(double a, double b, double c, double d) {
  const long double tr = static_cast<long double>(a) * a + static_cast<long double>(b) * b +
                         static_cast<long double>(c) * c + static_cast<long double>(d) * d;
  const long double det = static_cast<long double>(a) * d - static_cast<long double>(b) * c;
  const long double disc = std::max<long double>(tr * tr - 4 * det * det, 0.0L);
  const long double l1 = (tr + std::sqrt(disc)) / 2;
  const long double l2 = l1 > 0 ? det * det / l1 : 0.0L;
  return {static_cast<double>(std::sqrt(l1)), static_cast<double>(std::sqrt(std::max<long double>(l2, 0)))};
}

// (sum s^p)^(1/p) over positive values; p = inf gives the maximum.
template <typename Range>
double lp_norm(const Range& values, double p) {
  double mx = 0.0;
  for (double v : values) mx = std::max(mx, v);
  if (mx == 0.0) return 0.0;
  if (std::isinf(p)) return mx;
  long double s = 0.0L;
  for (double v : values) {
    if (v > 0.0) s += std::pow(static_cast<long double>(v / mx), static_cast<long double>(p));
  }
  return static_cast<double>(mx * std::pow(s, 1.0L / p));
}

// Naive triple loop product of row-major matrices.
inline std::vector<double> naive_product(std::span<const double> a, std::span<const double> b, std::size_t m,
                                         std::size_t k, std::size_t n) {
  std::vector<double> c(m * n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      long double s = 0.0L;
      for (std::size_t l = 0; l < k; ++l) s += static_cast<long double>(a[i * k + l]) * b[l * n + j];
      c[i * n + j] = static_cast<double>(s);
    }
  }
  return c;
}

}  // namespace oracle
