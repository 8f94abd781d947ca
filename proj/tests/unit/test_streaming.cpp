#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "schatten/error.hpp"
#include "schatten/hard_instances.hpp"
#include "schatten/random.hpp"
#include "schatten/streaming.hpp"

using namespace schatten;

namespace {

std::vector<StreamUpdate> random_stream(std::size_t n, std::size_t count, std::uint64_t seed) {
  std::vector<StreamUpdate> out;
  for (std::size_t k = 0; k < count; ++k) {
    const std::uint64_t bits = counter_bits(seed, k);
    const std::size_t i = bits % n;
    const std::size_t j = (bits >> 20) % n;
    const double delta = std::round(standard_normal_at(seed, k + count) * 1000.0) / 64.0;
    out.push_back({i, j, delta});
    if (k % 17 == 0) out.push_back({i, j, -delta});
  }
  return out;
}

DenseMatrix batch_sketch(const StreamSketch& sk, const DenseMatrix& a) {
  const DenseMatrix r = generate(sk.left_spec()).to_dense();
  const DenseMatrix s = generate(sk.right_spec()).to_dense();
  return multiply_transposed(multiply(r, a), s);
}

double max_relative_gap(const DenseMatrix& x, const DenseMatrix& y) {
  double scale = 0;
  for (double v : y.data()) scale = std::max(scale, std::abs(v));
  double gap = 0;
  for (std::size_t k = 0; k < x.data().size(); ++k) gap = std::max(gap, std::abs(x.data()[k] - y.data()[k]));
  return scale == 0 ? gap : gap / scale;
}

}  // namespace

TEST_CASE("sketch size examples") {
  CHECK(stream_sketch_size(1024, 4) == 64);
  CHECK(stream_sketch_size(16, 1) == 16);
  CHECK(stream_sketch_size(1024, 32) == 1);
  CHECK(stream_sketch_size(1000, 3) == 112);
  CHECK_THROWS_AS(stream_sketch_size(1024, 33), ConfigurationError);
  CHECK_THROWS_AS(stream_sketch_size(16, 0.5), ConfigurationError);
  CHECK_THROWS_AS(StreamSketch(0, 1, 0), ConfigurationError);

  const StreamSketch sk(1024, 4, 1);
  CHECK(sk.t() == 64);
  CHECK(sk.sketch().rows() == 64);
  CHECK(sk.sketch().is_zero());
  CHECK(sk.left_spec().independence_k == 256);
  CHECK(sk.left_spec().truncation_bits == 40);
  CHECK(sk.left_spec().variance == doctest::Approx(1.0 / 64));
  CHECK(sk.left_spec().seed != sk.right_spec().seed);
  CHECK(StreamSketch(1024, 1, 0).left_spec().independence_k == 1024);
  StreamOptions capped;
  capped.independence_cap = 10;
  CHECK(StreamSketch(1024, 4, 1, capped).left_spec().independence_k == 10);
}

TEST_CASE("update and its negation restore the sketch") {
  StreamSketch sk(64, 2, 5);
  for (const auto& u : random_stream(64, 50, 1)) sk.update(u);
  const DenseMatrix before = sk.sketch();
  sk.update({3, 7, 0.5});
  CHECK(sk.sketch() != before);
  sk.update({3, 7, -0.5});
  // Rounding of x + d - d makes the round trip exact only up to one ulp per entry.
  CHECK(max_relative_gap(sk.sketch(), before) <= 1e-12);
  CHECK(sk.update_count() == 52 + 50 / 17 + 1);

  StreamSketch fresh(64, 2, 5);
  fresh.update({10, 20, 1.75});
  fresh.update({10, 20, -1.75});
  CHECK(fresh.sketch().is_zero());
  CHECK(fresh.estimate() == 0.0);
}

TEST_CASE("update validation") {
  StreamSketch sk(8, 2, 0);
  CHECK_THROWS_AS(sk.update({8, 0, 1.0}), IndexError);
  CHECK_THROWS_AS(sk.update({0, 8, 1.0}), IndexError);
  CHECK_THROWS_AS(sk.update({0, 0, std::nan("")}), InputError);
  CHECK(sk.update_count() == 0);
  CHECK(sk.estimate() == 0.0);
}

TEST_CASE("order invariance") {
  auto updates = random_stream(48, 600, 3);
  StreamSketch a(48, 2, 9);
  a.update(updates);
  std::reverse(updates.begin(), updates.end());
  StreamSketch b(48, 2, 9);
  b.update(updates);
  std::rotate(updates.begin(), updates.begin() + 211, updates.end());
  StreamSketch c(48, 2, 9);
  c.update(updates);
  CHECK(max_relative_gap(a.sketch(), b.sketch()) <= 1e-12);
  CHECK(max_relative_gap(a.sketch(), c.sketch()) <= 1e-12);
  CHECK(b.estimate() == doctest::Approx(a.estimate()).epsilon(1e-10));
  CHECK(c.estimate() == doctest::Approx(a.estimate()).epsilon(1e-10));
}

TEST_CASE("stream matches the batch sketch") {
  for (std::uint64_t s = 0; s < 8; ++s) {
    const std::size_t n = 16 + 20 * s;
    const double D = 1.0 + 0.5 * static_cast<double>(s % 4);
    const auto updates = random_stream(n, 2000, 100 + s);
    StreamSketch sk(n, D, s);
    sk.update(updates);
    DenseMatrix a(n, n);
    for (const auto& u : updates) a(u.i, u.j) += u.delta;
    const DenseMatrix batch = batch_sketch(sk, a);
    CHECK(max_relative_gap(sk.sketch(), batch) <= 1e-10);
    CHECK(sk.estimate() == doctest::Approx(schatten_norm(batch, SchattenOrder(1))).epsilon(1e-10));
  }
}

TEST_CASE("copies are independent snapshots") {
  StreamSketch sk(32, 2, 1);
  sk.update({1, 2, 3.0});
  StreamSketch snapshot = sk;
  sk.update({4, 5, 1.0});
  CHECK(snapshot.update_count() == 1);
  CHECK(snapshot.sketch() != sk.sketch());
}

TEST_CASE("space report") {
  const StreamSketch sk(1024, 4, 0);
  const auto r = sk.space_report();
  CHECK(r.sketch_bits == 262144);
  CHECK(r.seed_bits == 2 * (64 + 61 * 256));
  CHECK(r.total_bits == r.sketch_bits + r.seed_bits);
  CHECK(r.total_bits <= r.budget_bits);
  CHECK(64 * 1024 * 1024 / r.sketch_bits >= 256);
  CHECK(SpaceBudget{}.bits(1024, 4) == static_cast<std::size_t>(256.0 * 1024 * 1024 / 256 * 1000));

  for (double D : {1.0, 2.0, 8.0, 32.0}) CHECK_NOTHROW(static_cast<void>(StreamSketch(1024, D, 0).space_report()));
  const auto full = StreamSketch(1024, 1, 0).space_report();
  CHECK(full.sketch_bits == 64ULL * 1024 * 1024);
  CHECK_THROWS_AS(static_cast<void>(sk.space_report(SpaceBudget{0.01, 3.0})), InvariantViolation);

  for (double D : {1.0, 2.0, 4.0}) {
    const auto rep = StreamSketch(1024, D, 0).space_report();
    CHECK(rep.seed_bits < rep.sketch_bits);
  }
}

TEST_CASE("identity stream at D = 1 stays within a constant window") {
  for (std::uint64_t s = 0; s < 5; ++s) {
    StreamSketch sk(32, 1, s);
    for (std::size_t i = 0; i < 32; ++i) sk.update({i, i, 1.0});
    const double ratio = sk.estimate() / 32.0;
    CHECK(ratio >= 0.5);
    CHECK(ratio <= 2.0);
  }
}

TEST_CASE("median error over the suite does not grow as D decreases") {
  const std::size_t n = 128;
  double previous = std::numeric_limits<double>::infinity();
  for (double D : {8.0, 4.0, 2.0}) {
    std::vector<double> errors;
    for (std::uint64_t trial = 0; trial < 5; ++trial) {
      const StreamSketch sk(n, D, derive_seed(77, trial));
      for (const auto& f : hard_instance_suite(n, sk.t(), derive_seed(78, trial))) {
        const DenseMatrix a = make_instance(f);
        const double exact = schatten_norm(a, SchattenOrder(1));
        const double est = schatten_norm(batch_sketch(sk, a), SchattenOrder(1));
        errors.push_back(std::abs(est / exact - 1.0));
      }
    }
    std::nth_element(errors.begin(), errors.begin() + errors.size() / 2, errors.end());
    const double median = errors[errors.size() / 2];
    INFO("D=" << D << " median error " << median);
    CHECK(median <= 1.25 * previous);
    previous = median;
  }
}
