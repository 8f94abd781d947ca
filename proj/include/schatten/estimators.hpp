#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "schatten/matrix.hpp"
#include "schatten/sketch.hpp"
#include "schatten/spectrum.hpp"

namespace schatten {

struct EstimatorConfig {
  SchattenOrder p{1.0};
  SchattenOrder q{1.0};
  /// Target sketch size.
  std::size_t t = 1;
  /// r = ceil(row_multiplier * t * ln(max(n/t, e))) unless rows_override is set.
  double row_multiplier = 1.0;
  std::optional<std::size_t> rows_override;
  /// Rows of the right-hand sketch S, as a multiple of t.
  std::size_t right_rows_factor = 4;
  std::uint64_t seed = 0;
  /// Multiplies the reported estimate; 1.0 reports the raw sketch norm.
  double calibration = 1.0;

  /// Throws ConfigurationError unless t >= 1, row_multiplier > 0 and calibration > 0.
  void validate() const;
  /// Number of rows of R for an n x n input.
  [[nodiscard]] std::size_t left_rows(std::size_t n) const;
  [[nodiscard]] std::size_t right_rows() const noexcept { return right_rows_factor * t; }

  /// Dense Gaussian specs for R (r x n, variance 1/r) and S (right_rows x n, variance 1/right_rows).
  [[nodiscard]] SketchSpec left_spec(std::size_t n) const;
  [[nodiscard]] SketchSpec right_spec(std::size_t n) const;
};

struct EstimateResult {
  double estimate = 0.0;
  /// Shape of the sketched matrix whose norm was taken.
  std::size_t rows = 0;
  std::size_t cols = 0;
  double predicted_distortion = 1.0;
  std::optional<double> exact_norm;
};

void to_json(nlohmann::json& j, const EstimateResult& r);

/// calibration * ||R A||_q for an n x n input.
/// Throws InputError for non-square A and ConfigurationError when t >= n.
EstimateResult one_sided_estimate(const DenseMatrix& a, const EstimatorConfig& cfg);

/// calibration * ||R A S^T||_q, with S seeded from companion_seed(cfg.seed).
EstimateResult two_sided_estimate(const DenseMatrix& a, const EstimatorConfig& cfg);

/// The sketched matrices themselves, for callers that need more than one norm.
DenseMatrix one_sided_sketch(const DenseMatrix& a, const EstimatorConfig& cfg);
DenseMatrix two_sided_sketch(const DenseMatrix& a, const EstimatorConfig& cfg);

/// ||g^T A||_2 with g a standard Gaussian vector drawn from seed.
double single_row_estimate(const DenseMatrix& a, std::uint64_t seed);

/// tilde_distortion(p, q, n, t) times max(1, ln(n/t)).
double predicted_distortion(SchattenOrder p, SchattenOrder q, std::size_t n, std::size_t t);

/// Multiplicative window [lower, upper] for the raw sketch norm relative to ||A||_p,
/// with every unknown absolute constant set to 1.
struct GuaranteeWindow {
  double lower = 1.0;
  double upper = 1.0;
  /// Single-row sketch regimes (1 <= p <= 2 <= q and 1 <= q <= 2 <= p).
  bool single_row = false;
  /// Always false: the constants are not calibrated.
  bool calibrated = false;
  std::string regime;

  [[nodiscard]] bool contains(double ratio, double slack = 1.0) const noexcept {
    return ratio >= lower / slack && ratio <= upper * slack;
  }
};

GuaranteeWindow guarantee_window(SchattenOrder p, SchattenOrder q, std::size_t n, std::size_t t);

}  // namespace schatten
