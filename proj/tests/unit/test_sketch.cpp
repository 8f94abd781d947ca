#include <doctest.h>

#include <cmath>

#include "schatten/error.hpp"
#include "schatten/random.hpp"
#include "schatten/sketch.hpp"
#include "schatten/spectrum.hpp"

using namespace schatten;

TEST_CASE("dense gaussian spec") {
  const auto spec = SketchSpec::dense_gaussian(8, 100, 5);
  CHECK(spec.variance == doctest::Approx(1.0 / 8));
  CHECK(spec.seed_bits() == 64);
  const auto a = generate(spec);
  const auto b = generate(spec);
  CHECK(a.to_dense() == b.to_dense());
  CHECK(a.is_materialized());
  CHECK_FALSE(SketchMatrix::implicit(spec).is_materialized());
  CHECK(SketchMatrix::implicit(spec).to_dense() == a.to_dense());
  CHECK_THROWS_AS(SketchSpec::dense_gaussian(0, 10, 1), ConfigurationError);
  CHECK_THROWS_AS(SketchSpec::dense_gaussian(2, 10, 1, -1.0), ConfigurationError);
}

TEST_CASE("dense gaussian sample mean") {
  const auto m = generate(SketchSpec::dense_gaussian(64, 4096, 2024)).to_dense();
  double sum = 0, sq = 0;
  for (double v : m.data()) {
    sum += v;
    sq += v * v;
  }
  const double count = 64.0 * 4096.0;
  CHECK(std::abs(sum / count) <= 4 * std::sqrt((1.0 / 64) / count));
  CHECK(sq / count == doctest::Approx(1.0 / 64).epsilon(0.02));
}

TEST_CASE("columns agree with the materialized matrix") {
  for (const auto& spec : {SketchSpec::dense_gaussian(5, 40, 9), SketchSpec::kwise_gaussian(5, 40, 9, 20)}) {
    const auto m = generate(spec);
    const auto implicit = SketchMatrix::implicit(spec);
    for (std::size_t i = 0; i < spec.cols; ++i) {
      const auto col = sketch_column(spec, i);
      REQUIRE(col.size() == spec.rows);
      for (std::size_t a = 0; a < spec.rows; ++a) {
        CHECK(col[a] == m.entry(a, i));
        CHECK(implicit.entry(a, i) == m.entry(a, i));
      }
      CHECK(implicit.column(i) == col);
    }
    CHECK(sketch_column(spec, 0) != sketch_column(spec, 1));
    auto other = spec;
    other.seed += 1;
    CHECK(sketch_column(other, 3) != sketch_column(spec, 3));
    CHECK_THROWS_AS(sketch_column(spec, spec.cols), IndexError);
    CHECK_THROWS_AS(static_cast<void>(m.entry(spec.rows, 0)), IndexError);
  }
}

TEST_CASE("k-wise truncation") {
  const auto spec = SketchSpec::kwise_gaussian(16, 300, 3, 64);
  CHECK(spec.truncation_bits == 40);
  CHECK(default_truncation_bits(1u << 20) == 60);
  CHECK(spec.seed_bits() == 64 + 61 * 64);
  const SketchEntrySource src(spec);
  const double quantum = std::ldexp(1.0, -40);
  DenseMatrix diff(16, 300);
  for (std::size_t a = 0; a < 16; ++a) {
    for (std::size_t i = 0; i < 300; ++i) {
      const double e = src.entry(a, i);
      CHECK(std::floor(e / quantum) == e / quantum);
      const double d = e - src.untruncated_entry(a, i);
      CHECK(std::abs(d) <= quantum);
      diff(a, i) = d;
    }
  }
  CHECK(svd_spectrum(diff).largest() <= 0.001);

  CHECK_THROWS_AS(SketchSpec::kwise_gaussian(4, 4, 1, 2, 19), ConfigurationError);
  CHECK_THROWS_AS(SketchSpec::kwise_gaussian(4, 4, 1, 0), ConfigurationError);
}

TEST_CASE("k-wise truncated operator error on wide shapes") {
  for (std::size_t cols : {256, 1024, 4096}) {
    const auto spec = SketchSpec::kwise_gaussian(32, cols, cols, 128);
    const SketchEntrySource src(spec);
    DenseMatrix diff(32, cols);
    for (std::size_t a = 0; a < 32; ++a)
      for (std::size_t i = 0; i < cols; ++i) diff(a, i) = src.entry(a, i) - src.untruncated_entry(a, i);
    CHECK(svd_spectrum(diff).largest() <= 0.001);
  }
}

TEST_CASE("k-wise moments") {
  const auto spec = SketchSpec::kwise_gaussian(100, 1000, 8675309, 16);
  const SketchEntrySource src(spec);
  double s1 = 0, s2 = 0;
  for (std::size_t a = 0; a < 100; ++a) {
    for (std::size_t i = 0; i < 1000; ++i) {
      const double v = src.entry(a, i);
      s1 += v;
      s2 += v * v;
    }
  }
  const double count = 1e5;
  const double mean = s1 / count;
  const double var = s2 / count - mean * mean;
  CHECK(std::abs(mean) <= 4 * std::sqrt(spec.variance / count));
  CHECK(var == doctest::Approx(spec.variance).epsilon(0.05));
}

TEST_CASE("spec json round trip") {
  const auto spec = SketchSpec::kwise_gaussian(7, 70, 0xDEADBEEFULL, 12);
  nlohmann::json j = spec;
  CHECK(j.size() == 7);
  for (const char* key : {"rows", "cols", "kind", "seed", "variance", "independence_k", "truncation_bits"})
    CHECK(j.contains(key));
  CHECK(j["kind"] == "KWiseTruncatedGaussian");
  const auto back = j.get<SketchSpec>();
  CHECK(back == spec);

  j["seed"] = "0x10";
  CHECK(j.get<SketchSpec>().seed == 16);
  j["kind"] = "Sparse";
  CHECK_THROWS_AS(j.get<SketchSpec>(), InputError);
  nlohmann::json missing = {{"rows", 1}};
  CHECK_THROWS_AS(missing.get<SketchSpec>(), InputError);
}

TEST_CASE("subspace embedding verifier") {
  const std::size_t n = 64;
  const DenseMatrix q = random_orthogonal(n, 1);
  const DenseMatrix basis = orthonormal_columns(gaussian_matrix(n, 8, 2));
  CHECK(verify_subspace_embedding(q, basis, 0.01));
  CHECK_FALSE(verify_subspace_embedding(gaussian_matrix(7, n, 3), basis, 10.0));
  CHECK_THROWS_AS(verify_subspace_embedding(q, gaussian_matrix(n, 8, 2), 0.5), InputError);
  CHECK_THROWS_AS(verify_subspace_embedding(gaussian_matrix(4, n - 1, 3), basis, 0.5), InputError);

  // With many more rows than the subspace dimension the embedding holds easily.
  int pass = 0;
  for (std::uint64_t s = 0; s < 20; ++s) pass += verify_subspace_embedding(generate(SketchSpec::dense_gaussian(512, n, s)), basis, 0.5);
  CHECK(pass >= 19);
}

TEST_CASE("operator bound verifier") {
  const DenseMatrix m = generate(SketchSpec::dense_gaussian(16, 64, 4)).to_dense();
  CHECK(verify_operator_bound(m, DenseMatrix(64, 5), 0.0));
  CHECK_FALSE(verify_operator_bound(m, DenseMatrix::identity(64), 0.0));
  CHECK(verify_operator_bound(random_orthogonal(64, 5), gaussian_matrix(64, 64, 6), 1.0 + 1e-12));
  CHECK_THROWS_AS(verify_operator_bound(m, DenseMatrix::identity(3), 3.0), InputError);
}

TEST_CASE("frobenius verifier") {
  const DenseMatrix a = gaussian_matrix(64, 10, 7);
  CHECK(verify_frobenius(random_orthogonal(64, 8), a, 1e-9));
  CHECK_FALSE(verify_frobenius(generate(SketchSpec::dense_gaussian(16, 64, 9)).to_dense(), a, 0.0));
  CHECK_THROWS_AS(verify_frobenius(random_orthogonal(64, 8), DenseMatrix(64, 3), 0.5), DegenerateInputError);
  const auto sm = generate(SketchSpec::dense_gaussian(16, 64, 9));
  CHECK(verify_frobenius(sm, a, 10.0) == verify_frobenius(sm.to_dense(), a, 10.0));
}

TEST_CASE("sketch application is linear with a fixed accumulation order") {
  const auto m = generate(SketchSpec::dense_gaussian(6, 30, 10));
  const DenseMatrix a = gaussian_matrix(30, 4, 11);
  const DenseMatrix b = gaussian_matrix(30, 4, 12);
  const DenseMatrix lhs = m.apply(a + b);
  const DenseMatrix rhs = m.apply(a) + m.apply(b);
  for (std::size_t k = 0; k < lhs.data().size(); ++k)
    CHECK(std::abs(lhs.data()[k] - rhs.data()[k]) <= 1e-12 * (1 + std::abs(rhs.data()[k])));
  CHECK(m.apply(a) == SketchMatrix::implicit(m.spec()).apply(a));
}
