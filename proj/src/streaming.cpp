#include "schatten/streaming.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "schatten/error.hpp"
#include "schatten/random.hpp"
#include "schatten/spectrum.hpp"

namespace schatten {

std::size_t SpaceBudget::bits(std::size_t n, double D) const {
  const double nn = static_cast<double>(n);
  const double log_term = std::pow(std::max(2.0, std::log2(nn)), log_power);
  return static_cast<std::size_t>(std::ceil(constant * (nn * nn) / std::pow(D, 4.0) * log_term));
}

std::size_t stream_sketch_size(std::size_t n, double D) {
  if (n < 1) throw ConfigurationError("stream needs n >= 1");
  if (!(D >= 1.0) || D * D > static_cast<double>(n) * (1.0 + 1e-12)) {
    throw ConfigurationError("approximation factor D=" + std::to_string(D) + " outside [1, sqrt(n)] for n=" +
                             std::to_string(n));
  }
  const double t = std::ceil(static_cast<double>(n) / (D * D));
  return std::clamp<std::size_t>(static_cast<std::size_t>(t), 1, n);
}

namespace {

SketchSpec stream_spec(std::size_t n, double D, std::uint64_t seed, const StreamOptions& options) {
  const std::size_t t = stream_sketch_size(n, D);
  if (options.independence_cap < 1) throw ConfigurationError("independence cap must be at least 1");
  const std::size_t k = std::min(4 * t, options.independence_cap);
  return SketchSpec::kwise_gaussian(t, n, seed, k);
}

}  // namespace

StreamSketch::StreamSketch(std::size_t n, double D, std::uint64_t seed, StreamOptions options)
    : n_(n),
      D_(D),
      t_(stream_sketch_size(n, D)),
      left_(stream_spec(n, D, seed, options)),
      right_(stream_spec(n, D, companion_seed(seed), options)),
      sketch_(t_, t_) {}

void StreamSketch::update(const StreamUpdate& u) {
  if (u.i >= n_ || u.j >= n_) {
    throw IndexError("stream update (" + std::to_string(u.i) + ", " + std::to_string(u.j) +
                     ") out of range for n=" + std::to_string(n_));
  }
  if (!std::isfinite(u.delta)) throw InputError("stream update delta must be finite");
  const std::vector<double> r = left_.column(u.i);
  const std::vector<double> s = right_.column(u.j);
  for (std::size_t a = 0; a < t_; ++a) {
    const double ra = u.delta * r[a];
    double* row = sketch_.data().data() + a * t_;
    for (std::size_t b = 0; b < t_; ++b) row[b] += ra * s[b];
  }
  ++update_count_;
}

void StreamSketch::update(std::span<const StreamUpdate> updates) {
  for (const auto& u : updates) update(u);
}

double StreamSketch::estimate() const { return schatten_norm(sketch_, SchattenOrder(1.0)); }

SpaceReport StreamSketch::space_report(const SpaceBudget& budget) const {
  SpaceReport r;
  r.sketch_bits = 64 * t_ * t_;
  r.seed_bits = left_.spec().seed_bits() + right_.spec().seed_bits();
  r.total_bits = r.sketch_bits + r.seed_bits;
  r.budget_bits = budget.bits(n_, D_);
  if (r.total_bits > r.budget_bits) {
    throw InvariantViolation("stream state uses " + std::to_string(r.total_bits) + " bits, budget is " +
                             std::to_string(r.budget_bits));
  }
  return r;
}

}  // namespace schatten
