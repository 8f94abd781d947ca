#include "schatten/sketch.hpp"

#include <cmath>
#include <limits>

#include "schatten/error.hpp"
#include "schatten/random.hpp"
#include "schatten/spectrum.hpp"

namespace schatten {

std::string to_string(SketchKind kind) {
  switch (kind) {
    case SketchKind::kDenseGaussian:
      return "DenseGaussian";
    case SketchKind::kKWiseTruncatedGaussian:
      return "KWiseTruncatedGaussian";
  }
  return "unknown";
}

SketchKind sketch_kind_from_string(const std::string& name) {
  if (name == "DenseGaussian") return SketchKind::kDenseGaussian;
  if (name == "KWiseTruncatedGaussian") return SketchKind::kKWiseTruncatedGaussian;
  throw InputError("unknown sketch kind '" + name + "'");
}

std::size_t default_truncation_bits(std::size_t n) {
  const double bits = n <= 1 ? 0.0 : std::ceil(3.0 * std::log2(static_cast<double>(n)));
  return std::max<std::size_t>(40, static_cast<std::size_t>(bits));
}

SketchSpec SketchSpec::dense_gaussian(std::size_t rows, std::size_t cols, std::uint64_t seed,
                                      std::optional<double> variance) {
  SketchSpec s;
  s.rows = rows;
  s.cols = cols;
  s.kind = SketchKind::kDenseGaussian;
  s.seed = seed;
  s.variance = variance.value_or(rows > 0 ? 1.0 / static_cast<double>(rows) : 1.0);
  s.validate();
  return s;
}

SketchSpec SketchSpec::kwise_gaussian(std::size_t rows, std::size_t cols, std::uint64_t seed, std::size_t k,
                                      std::optional<std::size_t> truncation_bits, std::optional<double> variance) {
  SketchSpec s;
  s.rows = rows;
  s.cols = cols;
  s.kind = SketchKind::kKWiseTruncatedGaussian;
  s.seed = seed;
  s.variance = variance.value_or(rows > 0 ? 1.0 / static_cast<double>(rows) : 1.0);
  s.independence_k = k;
  s.truncation_bits = truncation_bits.value_or(default_truncation_bits(cols));
  s.validate();
  return s;
}

void SketchSpec::validate() const {
  if (rows < 1 || cols < 1) throw ConfigurationError("sketch spec needs rows >= 1 and cols >= 1");
  if (!(variance > 0.0) || !std::isfinite(variance)) throw ConfigurationError("sketch variance must be positive");
  if (kind == SketchKind::kKWiseTruncatedGaussian) {
    if (independence_k < 1) throw ConfigurationError("k-wise sketch needs independence_k >= 1");
    if (truncation_bits < 20) throw ConfigurationError("k-wise sketch needs truncation_bits >= 20");
    if (truncation_bits > 1000) throw ConfigurationError("truncation_bits out of range");
    // Flat indices must be distinct field elements.
    if (static_cast<long double>(rows) * static_cast<long double>(cols) >=
        static_cast<long double>(mersenne61::kPrime)) {
      throw ConfigurationError("k-wise sketch too large for the 2^61-1 field");
    }
  }
}

std::size_t SketchSpec::seed_bits() const noexcept {
  std::size_t bits = 64;
  if (kind == SketchKind::kKWiseTruncatedGaussian) bits += 61 * independence_k;
  return bits;
}

void to_json(nlohmann::json& j, const SketchSpec& spec) {
  j = nlohmann::json{{"rows", spec.rows},
                     {"cols", spec.cols},
                     {"kind", to_string(spec.kind)},
                     {"seed", spec.seed},
                     {"variance", spec.variance},
                     {"independence_k", spec.independence_k},
                     {"truncation_bits", spec.truncation_bits}};
}

void from_json(const nlohmann::json& j, SketchSpec& spec) {
  try {
    spec.rows = j.at("rows").get<std::size_t>();
    spec.cols = j.at("cols").get<std::size_t>();
    spec.kind = sketch_kind_from_string(j.at("kind").get<std::string>());
    const auto& seed = j.at("seed");
    spec.seed = seed.is_string() ? parse_seed(seed.get<std::string>()) : seed.get<std::uint64_t>();
    spec.variance = j.at("variance").get<double>();
    spec.independence_k = j.at("independence_k").get<std::size_t>();
    spec.truncation_bits = j.at("truncation_bits").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed sketch spec: ") + e.what());
  }
  spec.validate();
}

SketchEntrySource::SketchEntrySource(const SketchSpec& spec)
    : spec_(spec), stddev_(std::sqrt(spec.variance)), quantum_(1.0) {
  spec_.validate();
  if (spec_.kind == SketchKind::kKWiseTruncatedGaussian) {
    hash_.emplace(spec_.independence_k, spec_.seed);
    quantum_ = std::ldexp(1.0, -static_cast<int>(spec_.truncation_bits));
  }
}

double SketchEntrySource::untruncated_entry(std::size_t a, std::size_t i) const noexcept {
  const std::uint64_t flat = static_cast<std::uint64_t>(a) * spec_.cols + i;
  if (!hash_) return stddev_ * standard_normal_at(spec_.seed, flat);
  // Field element in [0, 2^61 - 1) mapped through its top 53 bits to (0, 1).
  const double u = bits_to_open_unit((*hash_)(flat) << 3);
  return stddev_ * normal_quantile(u);
}

double SketchEntrySource::entry(std::size_t a, std::size_t i) const noexcept {
  const double raw = untruncated_entry(a, i);
  if (!hash_) return raw;
  const int bits = static_cast<int>(spec_.truncation_bits);
  return std::ldexp(std::nearbyint(std::ldexp(raw, bits)), -bits);
}

std::vector<double> SketchEntrySource::column(std::size_t i) const {
  if (i >= spec_.cols) {
    throw IndexError("sketch column " + std::to_string(i) + " out of range for " + std::to_string(spec_.cols) +
                     " columns");
  }
  std::vector<double> col(spec_.rows);
  for (std::size_t a = 0; a < spec_.rows; ++a) col[a] = entry(a, i);
  return col;
}

SketchMatrix SketchMatrix::implicit(const SketchSpec& spec) { return SketchMatrix(SketchEntrySource(spec)); }

double SketchMatrix::entry(std::size_t a, std::size_t i) const {
  if (a >= rows() || i >= cols()) throw IndexError("sketch entry out of range");
  return dense_ ? (*dense_)(a, i) : source_.entry(a, i);
}

std::vector<double> SketchMatrix::column(std::size_t i) const {
  if (!dense_) return source_.column(i);
  if (i >= cols()) throw IndexError("sketch column out of range");
  std::vector<double> col(rows());
  for (std::size_t a = 0; a < rows(); ++a) col[a] = (*dense_)(a, i);
  return col;
}

DenseMatrix SketchMatrix::to_dense() const {
  if (dense_) return *dense_;
  DenseMatrix m(rows(), cols());
  for (std::size_t a = 0; a < rows(); ++a)
    for (std::size_t i = 0; i < cols(); ++i) m(a, i) = source_.entry(a, i);
  return m;
}

DenseMatrix SketchMatrix::apply(const DenseMatrix& a) const {
  if (dense_) return multiply(*dense_, a);
  return multiply(to_dense(), a);
}

SketchMatrix generate(const SketchSpec& spec) {
  SketchMatrix m{SketchEntrySource(spec)};
  m.dense_ = m.to_dense();
  return m;
}

std::vector<double> sketch_column(const SketchSpec& spec, std::size_t i) { return SketchEntrySource(spec).column(i); }

bool verify_subspace_embedding(const DenseMatrix& m, const DenseMatrix& basis, double eta) {
  if (m.cols() != basis.rows()) throw InputError("verify_subspace_embedding: dimension mismatch");
  if (gram_deviation(basis) > 1e-8) throw InputError("verify_subspace_embedding: basis is not orthonormal");
  if (m.rows() < basis.cols()) return false;
  const SingularSpectrum s = svd_spectrum(multiply(m, basis));
  for (double v : s.values()) {
    if (v < 1.0 - eta || v > 1.0 + eta) return false;
  }
  return true;
}

bool verify_subspace_embedding(const SketchMatrix& m, const DenseMatrix& basis, double eta) {
  return verify_subspace_embedding(m.to_dense(), basis, eta);
}

bool verify_operator_bound(const DenseMatrix& m, const DenseMatrix& a, double c) {
  if (m.cols() != a.rows()) throw InputError("verify_operator_bound: dimension mismatch");
  const double lhs = svd_spectrum(multiply(m, a)).largest();
  const double op = svd_spectrum(a).largest();
  const double rhs = c * (op + a.frobenius_norm() / std::sqrt(static_cast<double>(m.rows())));
  return lhs <= rhs;
}

bool verify_operator_bound(const SketchMatrix& m, const DenseMatrix& a, double c) {
  return verify_operator_bound(m.to_dense(), a, c);
}

bool verify_frobenius(const DenseMatrix& m, const DenseMatrix& a, double eta) {
  if (m.cols() != a.rows()) throw InputError("verify_frobenius: dimension mismatch");
  const double fro = a.frobenius_norm();
  if (fro == 0.0) throw DegenerateInputError("verify_frobenius: A is zero");
  const double ratio = multiply(m, a).frobenius_norm() / fro;
  return ratio >= 1.0 - eta && ratio <= 1.0 + eta;
}

bool verify_frobenius(const SketchMatrix& m, const DenseMatrix& a, double eta) {
  return verify_frobenius(m.to_dense(), a, eta);
}

}  // namespace schatten
