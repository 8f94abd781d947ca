#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "schatten/matrix.hpp"

namespace schatten {

/// Order p of a Schatten norm, p in [1, inf]. Infinity denotes the operator norm.
class SchattenOrder {
 public:
  /// Throws DomainError when p < 1 or p is NaN.
  explicit SchattenOrder(double p);
  static SchattenOrder infinity() { return SchattenOrder(std::numeric_limits<double>::infinity()); }

  [[nodiscard]] double value() const noexcept { return p_; }
  [[nodiscard]] bool is_infinite() const noexcept { return p_ == std::numeric_limits<double>::infinity(); }
  /// 1/p, with 1/inf = 0.
  [[nodiscard]] double inverse() const noexcept { return is_infinite() ? 0.0 : 1.0 / p_; }

  friend bool operator==(SchattenOrder, SchattenOrder) = default;

 private:
  double p_;
};

/// Singular values sorted in nonincreasing order, all nonnegative.
class SingularSpectrum {
 public:
  SingularSpectrum() = default;
  /// Sorts the values descending. Throws InputError on negative or non-finite values.
  explicit SingularSpectrum(std::vector<double> values);

  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] double operator[](std::size_t k) const noexcept { return values_[k]; }
  [[nodiscard]] double largest() const noexcept { return values_.empty() ? 0.0 : values_.front(); }
  [[nodiscard]] std::size_t rank() const noexcept;
  [[nodiscard]] bool is_zero() const noexcept { return largest() == 0.0; }

  /// Multiplies every value by |c|.
  [[nodiscard]] SingularSpectrum scaled(double c) const;

 private:
  std::vector<double> values_;
};

/// Singular-value bands: k is in band i iff op_norm / 2^{i+1} < sigma_k <= op_norm / 2^i.
struct BandDecomposition {
  double op_norm = 0.0;
  /// Band index -> zero-based spectrum positions, for non-empty bands only.
  std::map<int, std::vector<std::size_t>> bands;

  /// N_i; zero for empty bands.
  [[nodiscard]] std::size_t count(int band) const;
  [[nodiscard]] std::size_t total() const;
};

/// Singular values by one-sided Jacobi rotations. Throws InputError on non-finite entries.
SingularSpectrum svd_spectrum(const DenseMatrix& a);

/// svd_spectrum of each matrix; bitwise identical results. Runs of small matrices of one
/// shape are iterated together, which is much faster than separate calls.
std::vector<SingularSpectrum> svd_spectra(std::span<const DenseMatrix> matrices);

/// (sum sigma_i^p)^{1/p}; the largest value when p is infinite. Zero spectrum gives 0.
double schatten_norm(const SingularSpectrum& spectrum, SchattenOrder p);

/// Convenience: schatten_norm(svd_spectrum(a), p).
double schatten_norm(const DenseMatrix& a, SchattenOrder p);

/// Throws DegenerateInputError for an all-zero (or empty) spectrum.
BandDecomposition band_decomposition(const SingularSpectrum& spectrum);

/// Lower-bound distortion table for sketches with t rows on n x n inputs.
/// At p = 2 or q = 2 the first listed branch that applies is used.
double hat_distortion(SchattenOrder p, SchattenOrder q, std::size_t n, std::size_t t);

/// Achievable distortion table; differs from hat_distortion only when 1 <= q <= p <= 2.
double tilde_distortion(SchattenOrder p, SchattenOrder q, std::size_t n, std::size_t t);

/// The case of the distortion tables a pair (p, q) falls into, in table order.
enum class DistortionRegime {
  kPLeQBelowTwo,   // 1 <= p <= q <= 2
  kPBelowTwoLeQ,   // 1 <= p <= 2 <= q
  kTwoLePLeQ,      // 2 <= p <= q
  kQBelowTwoLeP,   // 1 <= q <= 2 <= p
  kTwoLeQLeP,      // 2 <= q <= p
  kQLePBelowTwo,   // 1 <= q <= p <= 2
};

DistortionRegime distortion_regime(SchattenOrder p, SchattenOrder q);

/// Which prefix/tail condition of the heavy-tail dichotomy was established.
enum class SplitKind { kTopHeavy, kTail };

struct SplitOutcome {
  SplitKind kind = SplitKind::kTopHeavy;
  /// Number of size-t blocks b; the prefix covers the first b*t values.
  std::size_t blocks = 0;
  /// sum_{i <= b t} sigma_i^p and sum_i sigma_i^p.
  double prefix_mass = 0.0;
  double total_mass = 0.0;
  /// Smallest one-based s <= b t with sigma_s^2 <= (2/t) sum_{i >= s} sigma_i^2, if any.
  std::optional<std::size_t> tail_index;
};

/// b = ceil(2 log2(max(n/t, 2))).
std::size_t heavy_tail_block_count(std::size_t n, std::size_t t);

/// Classifies a spectrum as top-heavy (first b*t values carry half the p-mass) or
/// heavy-tailed with a stopping index. TopHeavy wins when both hold.
/// Throws DegenerateInputError on an empty or zero spectrum, InvariantViolation if neither holds.
SplitOutcome heavy_tail_split(const SingularSpectrum& spectrum, std::size_t t, SchattenOrder p);

/// Band statistic max_{0 <= i, j <= ceil(3 log2 n)} 2^{-(i+j)} min{N_i(A), N_j(B)}^{1/p} max{sqrt N_i(A), sqrt N_j(B)}.
double band_statistic(const SingularSpectrum& a, const SingularSpectrum& b, SchattenOrder p, std::size_t n);

}  // namespace schatten
