#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace schatten {

/// Arithmetic in the prime field of order 2^61 - 1.
namespace mersenne61 {

inline constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;

constexpr std::uint64_t reduce(std::uint64_t x) noexcept {
  x = (x & kPrime) + (x >> 61);
  return x >= kPrime ? x - kPrime : x;
}

constexpr std::uint64_t add(std::uint64_t a, std::uint64_t b) noexcept { return reduce(a + b); }

__extension__ using uint128 = unsigned __int128;

inline std::uint64_t mul(std::uint64_t a, std::uint64_t b) noexcept {
  const uint128 prod = static_cast<uint128>(a) * b;
  const std::uint64_t lo = static_cast<std::uint64_t>(prod) & kPrime;
  const std::uint64_t hi = static_cast<std::uint64_t>(prod >> 61);
  return reduce(lo + hi);
}

}  // namespace mersenne61

/// Random polynomial of degree k-1 over GF(2^61 - 1). Its values at distinct points
/// are k-wise independent and uniform on the field.
class PolynomialHash {
 public:
  /// Draws k coefficients from the seed. Requires k >= 1.
  PolynomialHash(std::size_t k, std::uint64_t seed);

  [[nodiscard]] std::size_t independence() const noexcept { return coefficients_.size(); }
  [[nodiscard]] std::span<const std::uint64_t> coefficients() const noexcept { return coefficients_; }

  /// Horner evaluation at x mod p; result in [0, p).
  [[nodiscard]] std::uint64_t operator()(std::uint64_t x) const noexcept;

  /// Storage needed for the coefficients.
  [[nodiscard]] std::size_t storage_bits() const noexcept { return 61 * coefficients_.size(); }

 private:
  std::vector<std::uint64_t> coefficients_;
};

}  // namespace schatten
