#include "schatten/random.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <string>

#include "schatten/error.hpp"

namespace schatten {

double normal_quantile(double u) noexcept {
  if (std::isnan(u) || u < 0.0 || u > 1.0) return std::numeric_limits<double>::quiet_NaN();
  if (u == 0.0) return -std::numeric_limits<double>::infinity();
  if (u == 1.0) return std::numeric_limits<double>::infinity();

  const double q = u - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((r * 2509.0809287301226727 + 33430.575583588128105) * r + 67265.770927008700853) * r +
                45921.953931549871457) * r + 13731.693765509461125) * r + 1971.5909503065514427) * r +
             133.14166789178437745) * r + 3.387132872796366608) /
           (((((((r * 5226.495278852854561 + 28729.085735721942674) * r + 39307.89580009271061) * r +
                21213.794301586595867) * r + 5394.1960214247511077) * r + 687.1870074920579083) * r +
             42.313330701600911252) * r + 1.0);
  }

  // Tails: r = sqrt(-log(min(u, 1-u))).
  double r = std::sqrt(-std::log(q < 0.0 ? u : 1.0 - u));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((r * 7.7454501427834140764e-4 + 0.0227238449892691845833) * r + 0.24178072517745061177) * r +
               1.27045825245236838258) * r + 3.64784832476320460504) * r + 5.7694972214606914055) * r +
            4.6303378461565452959) * r + 1.42343711074968357734) /
          (((((((r * 1.05075007164441684324e-9 + 5.475938084995344946e-4) * r + 0.0151986665636164571966) * r +
               0.14810397642748007459) * r + 0.68976733498510000455) * r + 1.6763848301838038494) * r +
            2.05319162663775882187) * r + 1.0);
  } else {
    r -= 5.0;
    val = (((((((r * 2.01033439929228813265e-7 + 2.71155556874348757815e-5) * r + 0.0012426609473880784386) * r +
               0.026532189526576123093) * r + 0.29656057182850489123) * r + 1.7848265399172913358) * r +
            5.4637849111641143699) * r + 6.6579046435011037772) /
          (((((((r * 2.04426310338993978564e-15 + 1.4215117583164458887e-7) * r + 1.8463183175100546818e-5) * r +
               7.868691311456132591e-4) * r + 0.0148753612908506148525) * r + 0.13692988092273580531) * r +
            0.59983220655588793769) * r + 1.0);
  }
  return q < 0.0 ? -val : val;
}

double standard_normal_at(std::uint64_t seed, std::uint64_t counter) noexcept {
  return normal_quantile(uniform_at(seed, counter));
}

DenseMatrix gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed, double stddev) {
  DenseMatrix m(rows, cols);
  auto data = m.data();
  for (std::size_t k = 0; k < data.size(); ++k) data[k] = stddev * standard_normal_at(seed, k);
  return m;
}

std::vector<double> gaussian_vector(std::size_t n, std::uint64_t seed) {
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = standard_normal_at(seed, k);
  return v;
}

DenseMatrix random_orthogonal(std::size_t size, std::uint64_t seed) {
  return orthonormal_columns(gaussian_matrix(size, size, seed));
}

std::uint64_t parse_seed(std::string_view text) {
  int base = 10;
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    base = 16;
    text.remove_prefix(2);
  }
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value, base);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigurationError("invalid seed '" + std::string(text) + "' (expected decimal or 0x-prefixed hex)");
  }
  return value;
}

}  // namespace schatten
