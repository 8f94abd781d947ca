#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "schatten/estimators.hpp"
#include "schatten/matrix.hpp"
#include "schatten/spectrum.hpp"

namespace schatten {

enum class Family {
  kIdentity,
  kElementaryUnit,
  kBlockIdentity,
  kPaddedGaussian,
  kFullGaussian,
  kRankTProduct,
  kRankOneGaussian,
};

std::string to_string(Family family);
Family family_from_string(const std::string& name);

/// A reproducible n x n test matrix from one of the lower-bound families.
struct InstanceFamily {
  Family family = Family::kIdentity;
  std::size_t n = 1;
  /// Block size t (BlockIdentity), Gaussian width r (PaddedGaussian) or factor width (RankTProduct).
  std::size_t param = 0;
  /// Position of the unit entry (ElementaryUnit).
  std::size_t row = 0;
  std::size_t col = 0;
  std::uint64_t seed = 0;

  static InstanceFamily identity(std::size_t n);
  static InstanceFamily elementary_unit(std::size_t n, std::size_t i, std::size_t j);
  static InstanceFamily block_identity(std::size_t n, std::size_t t);
  static InstanceFamily padded_gaussian(std::size_t n, std::size_t r, std::uint64_t seed);
  static InstanceFamily full_gaussian(std::size_t n, std::uint64_t seed);
  /// G H^T with G, H n x width.
  static InstanceFamily rank_t_product(std::size_t n, std::size_t width, std::uint64_t seed);
  static InstanceFamily rank_one_gaussian(std::size_t n, std::uint64_t seed);

  /// Unique key over all fields; used for memoizing spectra.
  [[nodiscard]] std::string key() const;
};

/// Throws InputError on invalid parameters.
DenseMatrix make_instance(const InstanceFamily& f);

/// One draw of the full suite for sketch size t: every family once, random parameters
/// (unit-entry position, Gaussian seeds) derived from trial_seed. Gaussian widths are
/// min(width_factor * t, n).
std::vector<InstanceFamily> hard_instance_suite(std::size_t n, std::size_t t, std::uint64_t trial_seed,
                                                std::size_t width_factor = 10);

/// Memoizes exact spectra of instances so that t-independent families are decomposed once per sweep.
class SpectrumCache {
 public:
  const SingularSpectrum& spectrum(const InstanceFamily& f, const DenseMatrix& a);
  [[nodiscard]] std::size_t size() const noexcept { return cache_.size(); }

 private:
  std::map<std::string, SingularSpectrum> cache_;
};

enum class SketchSide { kOneSided, kTwoSided };

struct DistortionConfig {
  SchattenOrder p{1.0};
  SchattenOrder q{1.0};
  std::size_t n = 64;
  std::size_t t = 4;
  std::uint64_t seed = 0;
  std::size_t trials = 1;
  SketchSide side = SketchSide::kTwoSided;
  double row_multiplier = 1.0;
  std::optional<std::size_t> rows_override;
  std::size_t width_factor = 10;
};

struct InstanceRatio {
  std::string family;
  std::size_t trial = 0;
  /// ||sketch(A)||_q / ||A||_p.
  double ratio = 0.0;
};

struct DistortionReport {
  SchattenOrder p{1.0};
  SchattenOrder q{1.0};
  std::size_t n = 0;
  std::size_t t = 0;
  std::size_t trials = 0;
  std::vector<InstanceRatio> ratios;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  /// max ratio / min ratio over all families and trials.
  double empirical_distortion = 1.0;
  double predicted_hat = 1.0;
  double predicted_tilde = 1.0;
};

/// Sketches every suite instance with one (R, S) draw per trial and aggregates ratios.
/// Throws ConfigurationError unless 4t <= n.
DistortionReport measure_distortion(const DistortionConfig& cfg, SpectrumCache* cache = nullptr);

/// Least-squares slope of log(y) against log(x).
double log_log_slope(std::span<const double> x, std::span<const double> y);

struct RatioStatistics {
  std::vector<double> values;
  double median = 0.0;
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;

  static RatioStatistics from(std::vector<double> values);
};

/// ||R G||_p / (sqrt(w) ||R||_p) with G an n x w Gaussian, w = 10t, one G per trial.
/// R must be t x n and nonzero.
RatioStatistics techniques_check_RG(const DenseMatrix& r, std::size_t n, std::size_t t, SchattenOrder p,
                                    std::uint64_t seed, std::size_t trials);

/// ||G H^T||_p / (sqrt(w) ||F||_p) with G, H n x w and F n x n Gaussian, w = 10t.
/// Requires 10t <= n/4.
RatioStatistics techniques_check_product(std::size_t n, std::size_t t, SchattenOrder p, std::uint64_t seed,
                                         std::size_t trials);

/// Same draws evaluated for several orders at once; results are in the order of ps.
std::vector<RatioStatistics> techniques_check_product(std::size_t n, std::size_t t,
                                                      std::span<const SchattenOrder> ps, std::uint64_t seed,
                                                      std::size_t trials);

struct KhintchineReport {
  SchattenOrder p{2.0};
  std::size_t n = 0;
  std::size_t trials = 0;
  /// Per-trial ||A G B||_p divided by the reference bound.
  std::vector<double> ratios;
  /// Reference bound: ln^3(n) ||A||_op ||B||_op E_p(A,B) for p < 2,
  /// max{||A||_p ||B||_F, ||A||_F ||B||_p} for p >= 2.
  double bound = 0.0;
  /// Smallest constant making every trial pass: max ratio for p < 2, max(max, 1/min) for p >= 2.
  double constant = 0.0;
  /// Fraction of trials outside the acceptance region for the threshold passed in.
  double failure_fraction = 0.0;
  double threshold = 8.0;
};

/// Compares ||A G B||_p for diagonal A = diag(spec_a), B = diag(spec_b) and Gaussian G
/// against the band-statistic bound (p < 2) or the Frobenius-mixed bound (p >= 2).
KhintchineReport khintchine_diagnostic(const SingularSpectrum& spec_a, const SingularSpectrum& spec_b,
                                       SchattenOrder p, std::size_t n, std::uint64_t seed, std::size_t trials,
                                       double threshold = 8.0);

}  // namespace schatten
