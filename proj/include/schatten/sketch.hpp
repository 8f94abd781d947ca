#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "schatten/kwise_hash.hpp"
#include "schatten/matrix.hpp"

namespace schatten {

enum class SketchKind { kDenseGaussian, kKWiseTruncatedGaussian };

std::string to_string(SketchKind kind);
SketchKind sketch_kind_from_string(const std::string& name);

/// Seeded description of a rows x cols sketching matrix. Entry (a, i) is a pure
/// function of the spec, so the matrix never has to be stored.
struct SketchSpec {
  std::size_t rows = 1;
  std::size_t cols = 1;
  SketchKind kind = SketchKind::kDenseGaussian;
  std::uint64_t seed = 0;
  double variance = 1.0;
  /// KWise only.
  std::size_t independence_k = 0;
  /// KWise only: entries are rounded to multiples of 2^{-truncation_bits}.
  std::size_t truncation_bits = 0;

  /// i.i.d. N(0, variance) entries; variance defaults to 1/rows.
  static SketchSpec dense_gaussian(std::size_t rows, std::size_t cols, std::uint64_t seed,
                                   std::optional<double> variance = std::nullopt);
  /// k-wise independent truncated Gaussian with truncation bits max(40, ceil(3 log2 cols)) unless given.
  static SketchSpec kwise_gaussian(std::size_t rows, std::size_t cols, std::uint64_t seed, std::size_t k,
                                   std::optional<std::size_t> truncation_bits = std::nullopt,
                                   std::optional<double> variance = std::nullopt);

  /// Throws ConfigurationError when an invariant is broken.
  void validate() const;

  /// Bits required to regenerate the matrix: the 64-bit seed plus 61 bits per hash coefficient.
  [[nodiscard]] std::size_t seed_bits() const noexcept;

  friend bool operator==(const SketchSpec&, const SketchSpec&) = default;
};

/// max(40, ceil(3 log2 n)).
std::size_t default_truncation_bits(std::size_t n);

void to_json(nlohmann::json& j, const SketchSpec& spec);
void from_json(const nlohmann::json& j, SketchSpec& spec);

class SketchMatrix;

/// Per-entry generator for a spec. Holds the polynomial hash for KWise specs.
class SketchEntrySource {
 public:
  explicit SketchEntrySource(const SketchSpec& spec);

  [[nodiscard]] const SketchSpec& spec() const noexcept { return spec_; }
  /// Entry (a, i). No bounds check.
  [[nodiscard]] double entry(std::size_t a, std::size_t i) const noexcept;
  /// Value before truncation (equal to entry() for dense Gaussian specs).
  [[nodiscard]] double untruncated_entry(std::size_t a, std::size_t i) const noexcept;
  /// Column i as a length-rows vector. Throws IndexError when i >= cols.
  [[nodiscard]] std::vector<double> column(std::size_t i) const;

 private:
  SketchSpec spec_;
  double stddev_;
  double quantum_;
  std::optional<PolynomialHash> hash_;
};

/// A sketch matrix that is either materialized or generated entry by entry on demand.
class SketchMatrix {
 public:
  /// Implicit matrix: nothing is stored beyond the spec.
  static SketchMatrix implicit(const SketchSpec& spec);

  [[nodiscard]] const SketchSpec& spec() const noexcept { return source_.spec(); }
  [[nodiscard]] std::size_t rows() const noexcept { return spec().rows; }
  [[nodiscard]] std::size_t cols() const noexcept { return spec().cols; }
  [[nodiscard]] bool is_materialized() const noexcept { return dense_.has_value(); }

  [[nodiscard]] double entry(std::size_t a, std::size_t i) const;
  [[nodiscard]] std::vector<double> column(std::size_t i) const;
  /// Materialized entries; generates a dense copy for implicit matrices.
  [[nodiscard]] DenseMatrix to_dense() const;

  /// M * A.
  [[nodiscard]] DenseMatrix apply(const DenseMatrix& a) const;

 private:
  friend SketchMatrix generate(const SketchSpec& spec);
  explicit SketchMatrix(SketchEntrySource source) : source_(std::move(source)) {}

  SketchEntrySource source_;
  std::optional<DenseMatrix> dense_;
};

/// Materializes the matrix described by spec.
SketchMatrix generate(const SketchSpec& spec);

/// Column i of generate(spec), computed without materializing the matrix.
std::vector<double> sketch_column(const SketchSpec& spec, std::size_t i);

/// True iff every singular value of M * basis lies in [1 - eta, 1 + eta]. Always false
/// when M has fewer rows than the basis has columns. Throws InputError for a basis whose
/// Gram matrix deviates from the identity by more than 1e-8.
bool verify_subspace_embedding(const DenseMatrix& m, const DenseMatrix& basis, double eta);
bool verify_subspace_embedding(const SketchMatrix& m, const DenseMatrix& basis, double eta);

/// True iff ||M A||_op <= c (||A||_op + ||A||_F / sqrt(rows of M)).
bool verify_operator_bound(const DenseMatrix& m, const DenseMatrix& a, double c);
bool verify_operator_bound(const SketchMatrix& m, const DenseMatrix& a, double c);

/// True iff ||M A||_F / ||A||_F lies in [1 - eta, 1 + eta]. Throws DegenerateInputError for A = 0.
bool verify_frobenius(const DenseMatrix& m, const DenseMatrix& a, double eta);
bool verify_frobenius(const SketchMatrix& m, const DenseMatrix& a, double eta);

}  // namespace schatten
