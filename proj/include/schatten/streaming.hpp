#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "schatten/matrix.hpp"
#include "schatten/sketch.hpp"

namespace schatten {

/// Turnstile update A[i][j] += delta.
struct StreamUpdate {
  std::size_t i = 0;
  std::size_t j = 0;
  double delta = 0.0;
};

struct StreamOptions {
  /// Independence degree is min(4t, independence_cap).
  std::size_t independence_cap = 1024;
};

/// Space budget c * (n^2 / D^4) * max(2, log2 n)^log_power bits.
struct SpaceBudget {
  double constant = 256.0;
  double log_power = 3.0;

  [[nodiscard]] std::size_t bits(std::size_t n, double D) const;
};

struct SpaceReport {
  std::size_t sketch_bits = 0;
  std::size_t seed_bits = 0;
  std::size_t total_bits = 0;
  std::size_t budget_bits = 0;
};

/// Sketch size for target approximation D: clamp(ceil(n / D^2), 1, n).
std::size_t stream_sketch_size(std::size_t n, double D);

/// Two-sided sketch R A S^T of a matrix given as a turnstile stream. R and S are
/// t x n k-wise independent truncated Gaussians regenerated column by column from
/// their seeds, so the only stored state is the t x t accumulator and two seeds.
///
/// Single writer: update() needs exclusive access; copies are independent snapshots.
class StreamSketch {
 public:
  /// Zeroed sketch. Throws ConfigurationError unless n >= 1 and 1 <= D <= sqrt(n).
  StreamSketch(std::size_t n, double D, std::uint64_t seed, StreamOptions options = {});

  /// sketch += delta * R[:, i] * S[:, j]^T. Throws IndexError for i or j >= n.
  void update(const StreamUpdate& u);
  void update(std::span<const StreamUpdate> updates);

  /// Nuclear norm of the accumulator.
  [[nodiscard]] double estimate() const;

  /// Throws InvariantViolation when the accounted bits exceed the budget.
  [[nodiscard]] SpaceReport space_report(const SpaceBudget& budget = {}) const;

  [[nodiscard]] std::size_t n() const noexcept { return n_; }
  [[nodiscard]] double D() const noexcept { return D_; }
  [[nodiscard]] std::size_t t() const noexcept { return t_; }
  [[nodiscard]] std::size_t update_count() const noexcept { return update_count_; }
  [[nodiscard]] const DenseMatrix& sketch() const noexcept { return sketch_; }
  [[nodiscard]] const SketchSpec& left_spec() const noexcept { return left_.spec(); }
  [[nodiscard]] const SketchSpec& right_spec() const noexcept { return right_.spec(); }

 private:
  std::size_t n_;
  double D_;
  std::size_t t_;
  SketchEntrySource left_;
  SketchEntrySource right_;
  DenseMatrix sketch_;
  std::size_t update_count_ = 0;
};

}  // namespace schatten
