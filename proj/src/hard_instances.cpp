#include "schatten/hard_instances.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "schatten/error.hpp"
#include "schatten/random.hpp"

namespace schatten {

namespace {

constexpr std::array<std::pair<Family, const char*>, 7> kFamilyNames{{
    {Family::kIdentity, "Identity"},
    {Family::kElementaryUnit, "ElementaryUnit"},
    {Family::kBlockIdentity, "BlockIdentity"},
    {Family::kPaddedGaussian, "PaddedGaussian"},
    {Family::kFullGaussian, "FullGaussian"},
    {Family::kRankTProduct, "RankTProduct"},
    {Family::kRankOneGaussian, "RankOneGaussian"},
}};

// Tags separating the sketch stream from the instance streams of one trial.
constexpr std::uint64_t kSketchTag = 0x5343'4845'5443'4800ULL;
constexpr std::uint64_t kUnitRowTag = 101;
constexpr std::uint64_t kUnitColTag = 102;

}  // namespace

std::string to_string(Family family) {
  for (const auto& [f, name] : kFamilyNames) {
    if (f == family) return name;
  }
  return "Unknown";
}

Family family_from_string(const std::string& name) {
  for (const auto& [f, n] : kFamilyNames) {
    if (name == n) return f;
  }
  throw ConfigurationError("unknown instance family '" + name + "'");
}

InstanceFamily InstanceFamily::identity(std::size_t n) { return {Family::kIdentity, n}; }

InstanceFamily InstanceFamily::elementary_unit(std::size_t n, std::size_t i, std::size_t j) {
  return {Family::kElementaryUnit, n, 0, i, j};
}

InstanceFamily InstanceFamily::block_identity(std::size_t n, std::size_t t) {
  return {Family::kBlockIdentity, n, t};
}

InstanceFamily InstanceFamily::padded_gaussian(std::size_t n, std::size_t r, std::uint64_t seed) {
  return {Family::kPaddedGaussian, n, r, 0, 0, seed};
}

InstanceFamily InstanceFamily::full_gaussian(std::size_t n, std::uint64_t seed) {
  return {Family::kFullGaussian, n, 0, 0, 0, seed};
}

InstanceFamily InstanceFamily::rank_t_product(std::size_t n, std::size_t width, std::uint64_t seed) {
  return {Family::kRankTProduct, n, width, 0, 0, seed};
}

InstanceFamily InstanceFamily::rank_one_gaussian(std::size_t n, std::uint64_t seed) {
  return {Family::kRankOneGaussian, n, 0, 0, 0, seed};
}

std::string InstanceFamily::key() const {
  return to_string(family) + ":" + std::to_string(n) + ":" + std::to_string(param) + ":" + std::to_string(row) +
         ":" + std::to_string(col) + ":" + std::to_string(seed);
}

DenseMatrix make_instance(const InstanceFamily& f) {
  const std::size_t n = f.n;
  if (n < 1) throw InputError("instance dimension must be at least 1");
  switch (f.family) {
    case Family::kIdentity:
      return DenseMatrix::identity(n);
    case Family::kElementaryUnit: {
      if (f.row >= n || f.col >= n) throw InputError("elementary unit position out of range");
      DenseMatrix a(n, n);
      a(f.row, f.col) = 1.0;
      return a;
    }
    case Family::kBlockIdentity: {
      if (f.param < 1 || f.param > n) throw InputError("block identity needs 1 <= t <= n");
      DenseMatrix a(n, n);
      for (std::size_t i = 0; i < f.param; ++i) a(i, i) = 1.0;
      return a;
    }
    case Family::kPaddedGaussian: {
      if (f.param < 1 || f.param > n) throw InputError("padded Gaussian needs 1 <= r <= n");
      const DenseMatrix g = gaussian_matrix(n, f.param, f.seed);
      DenseMatrix a(n, n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < f.param; ++j) a(i, j) = g(i, j);
      }
      return a;
    }
    case Family::kFullGaussian:
      return gaussian_matrix(n, n, f.seed);
    case Family::kRankTProduct: {
      if (f.param < 1) throw InputError("rank-t product needs width >= 1");
      const DenseMatrix g = gaussian_matrix(n, f.param, derive_seed(f.seed, 1));
      const DenseMatrix h = gaussian_matrix(n, f.param, derive_seed(f.seed, 2));
      return multiply_transposed(g, h);
    }
    case Family::kRankOneGaussian: {
      const std::vector<double> g = gaussian_vector(n, derive_seed(f.seed, 1));
      const std::vector<double> h = gaussian_vector(n, derive_seed(f.seed, 2));
      DenseMatrix a(n, n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a(i, j) = g[i] * h[j];
      }
      return a;
    }
  }
  throw InputError("unknown instance family");
}

std::vector<InstanceFamily> hard_instance_suite(std::size_t n, std::size_t t, std::uint64_t trial_seed,
                                                std::size_t width_factor) {
  if (t < 1 || t > n) throw ConfigurationError("suite needs 1 <= t <= n");
  const std::size_t width = std::min(width_factor * t, n);
  // Seeds depend on the trial only, so t-independent members coincide across a sweep.
  auto seed_for = [&](Family f) { return derive_seed(trial_seed, static_cast<std::uint64_t>(f)); };
  return {
      InstanceFamily::identity(n),
      InstanceFamily::elementary_unit(n, counter_bits(trial_seed, kUnitRowTag) % n,
                                      counter_bits(trial_seed, kUnitColTag) % n),
      InstanceFamily::block_identity(n, t),
      InstanceFamily::padded_gaussian(n, width, seed_for(Family::kPaddedGaussian)),
      InstanceFamily::full_gaussian(n, seed_for(Family::kFullGaussian)),
      InstanceFamily::rank_t_product(n, width, seed_for(Family::kRankTProduct)),
      InstanceFamily::rank_one_gaussian(n, seed_for(Family::kRankOneGaussian)),
  };
}

const SingularSpectrum& SpectrumCache::spectrum(const InstanceFamily& f, const DenseMatrix& a) {
  const std::string k = f.key();
  auto it = cache_.find(k);
  if (it == cache_.end()) it = cache_.emplace(k, svd_spectrum(a)).first;
  return it->second;
}

DistortionReport measure_distortion(const DistortionConfig& cfg, SpectrumCache* cache) {
  if (cfg.t < 1 || 4 * cfg.t > cfg.n) {
    throw ConfigurationError("distortion sweep needs 1 <= t <= n/4; got t=" + std::to_string(cfg.t) +
                             ", n=" + std::to_string(cfg.n));
  }
  if (cfg.trials < 1) throw ConfigurationError("distortion sweep needs at least one trial");

  SpectrumCache local;
  SpectrumCache& spectra = cache ? *cache : local;

  DistortionReport report;
  report.p = cfg.p;
  report.q = cfg.q;
  report.n = cfg.n;
  report.t = cfg.t;
  report.trials = cfg.trials;
  report.predicted_hat = hat_distortion(cfg.p, cfg.q, cfg.n, cfg.t);
  report.predicted_tilde = tilde_distortion(cfg.p, cfg.q, cfg.n, cfg.t);

  for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
    const std::uint64_t trial_seed = derive_seed(cfg.seed, trial);
    EstimatorConfig est;
    est.p = cfg.p;
    est.q = cfg.q;
    est.t = cfg.t;
    est.row_multiplier = cfg.row_multiplier;
    est.rows_override = cfg.rows_override;
    est.seed = derive_seed(trial_seed, kSketchTag);
    est.validate();
    const DenseMatrix r = generate(est.left_spec(cfg.n)).to_dense();
    const DenseMatrix s = generate(est.right_spec(cfg.n)).to_dense();

    for (const InstanceFamily& f : hard_instance_suite(cfg.n, cfg.t, trial_seed, cfg.width_factor)) {
      const DenseMatrix a = make_instance(f);
      const double exact = schatten_norm(spectra.spectrum(f, a), cfg.p);
      DenseMatrix sketched = multiply(r, a);
      if (cfg.side == SketchSide::kTwoSided) sketched = multiply_transposed(sketched, s);
      const double ratio = schatten_norm(sketched, cfg.q) / exact;
      report.ratios.push_back({to_string(f.family), trial, ratio});
    }
  }

  const auto [lo, hi] = std::minmax_element(report.ratios.begin(), report.ratios.end(),
                                            [](const auto& x, const auto& y) { return x.ratio < y.ratio; });
  report.min_ratio = lo->ratio;
  report.max_ratio = hi->ratio;
  if (!(report.min_ratio > 0.0)) throw InvariantViolation("sketch annihilated a nonzero instance");
  report.empirical_distortion = report.max_ratio / report.min_ratio;
  return report;
}

double log_log_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InputError("slope fit needs two or more matching points");
  const std::size_t m = x.size();
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw InputError("slope fit needs positive data");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw InputError("slope fit needs distinct abscissae");
  return sxy / sxx;
}

RatioStatistics RatioStatistics::from(std::vector<double> values) {
  if (values.empty()) throw InputError("no ratios to summarize");
  RatioStatistics s;
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t m = sorted.size();
  s.median = m % 2 == 1 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
  s.min = sorted.front();
  s.max = sorted.back();
  s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(m);
  s.values = std::move(values);
  return s;
}

RatioStatistics techniques_check_RG(const DenseMatrix& r, std::size_t n, std::size_t t, SchattenOrder p,
                                    std::uint64_t seed, std::size_t trials) {
  if (r.rows() != t || r.cols() != n) throw InputError("R must be t x n");
  if (trials < 1) throw ConfigurationError("need at least one trial");
  const double r_norm = schatten_norm(r, p);
  if (r.is_zero() || !(r_norm > 0.0)) throw DegenerateInputError("R = 0 leaves the statistic undefined");
  const std::size_t w = 10 * t;
  std::vector<double> values;
  values.reserve(trials);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const DenseMatrix g = gaussian_matrix(n, w, derive_seed(seed, trial));
    values.push_back(schatten_norm(multiply(r, g), p) / (std::sqrt(static_cast<double>(w)) * r_norm));
  }
  return RatioStatistics::from(std::move(values));
}

namespace {

// Singular values of G H^T via thin QR of both factors: G H^T = Q_G (R_G R_H^T) Q_H^T.
SingularSpectrum low_rank_product_spectrum(const DenseMatrix& g, const DenseMatrix& h) {
  const DenseMatrix qg = orthonormal_columns(g);
  const DenseMatrix qh = orthonormal_columns(h);
  const DenseMatrix rg = multiply(qg.transposed(), g);
  const DenseMatrix rh = multiply(qh.transposed(), h);
  return svd_spectrum(multiply_transposed(rg, rh));
}

}  // namespace

std::vector<RatioStatistics> techniques_check_product(std::size_t n, std::size_t t,
                                                      std::span<const SchattenOrder> ps, std::uint64_t seed,
                                                      std::size_t trials) {
  if (t < 1 || 40 * t > n) throw ConfigurationError("product check needs 10t <= n/4");
  if (trials < 1) throw ConfigurationError("need at least one trial");
  const std::size_t w = 10 * t;
  const double root_w = std::sqrt(static_cast<double>(w));
  std::vector<std::vector<double>> values(ps.size());
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const std::uint64_t s = derive_seed(seed, trial);
    const DenseMatrix g = gaussian_matrix(n, w, derive_seed(s, 1));
    const DenseMatrix h = gaussian_matrix(n, w, derive_seed(s, 2));
    const DenseMatrix f = gaussian_matrix(n, n, derive_seed(s, 3));
    const SingularSpectrum product = low_rank_product_spectrum(g, h);
    const SingularSpectrum full = svd_spectrum(f);
    for (std::size_t k = 0; k < ps.size(); ++k) {
      values[k].push_back(schatten_norm(product, ps[k]) / (root_w * schatten_norm(full, ps[k])));
    }
  }
  std::vector<RatioStatistics> out;
  out.reserve(ps.size());
  for (auto& v : values) out.push_back(RatioStatistics::from(std::move(v)));
  return out;
}

RatioStatistics techniques_check_product(std::size_t n, std::size_t t, SchattenOrder p, std::uint64_t seed,
                                         std::size_t trials) {
  const std::array<SchattenOrder, 1> ps{p};
  return std::move(techniques_check_product(n, t, ps, seed, trials).front());
}

KhintchineReport khintchine_diagnostic(const SingularSpectrum& spec_a, const SingularSpectrum& spec_b,
                                       SchattenOrder p, std::size_t n, std::uint64_t seed, std::size_t trials,
                                       double threshold) {
  if (spec_a.size() != n || spec_b.size() != n) throw InputError("spectra must have length n");
  if (spec_a.is_zero() || spec_b.is_zero()) throw DegenerateInputError("diagonal factors must be nonzero");
  if (trials < 1) throw ConfigurationError("need at least one trial");
  if (!(threshold >= 1.0)) throw ConfigurationError("threshold must be at least 1");

  KhintchineReport report;
  report.p = p;
  report.n = n;
  report.trials = trials;
  report.threshold = threshold;
  const SchattenOrder two(2.0);
  const bool small_p = p.value() < 2.0;
  if (small_p) {
    const double ln = std::log(static_cast<double>(std::max<std::size_t>(n, 3)));
    report.bound = ln * ln * ln * spec_a.largest() * spec_b.largest() * band_statistic(spec_a, spec_b, p, n);
  } else {
    report.bound = std::max(schatten_norm(spec_a, p) * schatten_norm(spec_b, two),
                            schatten_norm(spec_a, two) * schatten_norm(spec_b, p));
  }

  std::size_t failures = 0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const std::uint64_t s = derive_seed(seed, trial);
    DenseMatrix agb(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        agb(i, j) = spec_a[i] * standard_normal_at(s, i * n + j) * spec_b[j];
      }
    }
    const double ratio = schatten_norm(agb, p) / report.bound;
    report.ratios.push_back(ratio);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    const bool ok = small_p ? ratio <= threshold : (ratio >= 1.0 / threshold && ratio <= threshold);
    if (!ok) ++failures;
  }
  report.constant = small_p ? hi : std::max(hi, 1.0 / lo);
  report.failure_fraction = static_cast<double>(failures) / static_cast<double>(trials);
  return report;
}

}  // namespace schatten
