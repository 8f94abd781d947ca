#include "schatten/kwise_hash.hpp"

#include "schatten/error.hpp"
#include "schatten/random.hpp"

namespace schatten {

PolynomialHash::PolynomialHash(std::size_t k, std::uint64_t seed) {
  if (k < 1) throw ConfigurationError("polynomial hash needs independence k >= 1");
  coefficients_.reserve(k);
  // Rejection sampling of 61-bit words gives exactly uniform field elements.
  std::uint64_t counter = 0;
  while (coefficients_.size() < k) {
    const std::uint64_t candidate = counter_bits(seed, counter++) >> 3;
    if (candidate < mersenne61::kPrime) coefficients_.push_back(candidate);
  }
}

std::uint64_t PolynomialHash::operator()(std::uint64_t x) const noexcept {
  const std::uint64_t point = mersenne61::reduce(x);
  std::uint64_t acc = 0;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) {
    acc = mersenne61::add(mersenne61::mul(acc, point), *it);
  }
  return acc;
}

}  // namespace schatten
