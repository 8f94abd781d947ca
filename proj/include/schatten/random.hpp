#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "schatten/matrix.hpp"

namespace schatten {

/// SplitMix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Pure function of (seed, counter); the basis of every random draw in the library.
constexpr std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t counter) noexcept {
  return mix64(mix64(seed) ^ mix64(counter ^ 0xD1B54A32D192ED03ULL));
}

/// Child seed for an independent sub-stream, e.g. per trial or per instance family.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept {
  return mix64(seed ^ mix64(tag + 0x632BE59BD9B4E019ULL));
}

/// Seed used for the right-hand sketch S given the master seed of R.
constexpr std::uint64_t companion_seed(std::uint64_t seed) noexcept {
  return ((seed << 17) | (seed >> 47)) ^ 0xA5A5A5A55A5A5A5AULL;
}

/// Maps the top 53 bits of a word to the open interval (0, 1).
constexpr double bits_to_open_unit(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

/// Uniform (0,1) value at a counter position.
constexpr double uniform_at(std::uint64_t seed, std::uint64_t counter) noexcept {
  return bits_to_open_unit(counter_bits(seed, counter));
}

/// Inverse of the standard normal CDF on (0, 1) (Wichura's AS 241 rational approximations).
/// Returns -inf / +inf at 0 / 1 and NaN outside [0, 1].
double normal_quantile(double u) noexcept;

/// Standard normal value at a counter position.
double standard_normal_at(std::uint64_t seed, std::uint64_t counter) noexcept;

/// rows x cols matrix of i.i.d. N(0, stddev^2) entries, entry (i, j) at counter i*cols + j.
DenseMatrix gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed, double stddev = 1.0);

/// Length-n vector of i.i.d. standard normals.
std::vector<double> gaussian_vector(std::size_t n, std::uint64_t seed);

/// size x size Haar-distributed orthogonal matrix (QR of a Gaussian matrix).
DenseMatrix random_orthogonal(std::size_t size, std::uint64_t seed);

/// Parses a seed written in decimal or as 0x-prefixed hex. Throws ConfigurationError.
std::uint64_t parse_seed(std::string_view text);

}  // namespace schatten
