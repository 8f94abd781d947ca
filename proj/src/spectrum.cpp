#include "schatten/spectrum.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cfloat>
#include <cmath>
#include <functional>
#include <string>

#include "schatten/error.hpp"

namespace schatten {

SchattenOrder::SchattenOrder(double p) : p_(p) {
  if (!(p >= 1.0)) throw DomainError("Schatten order must satisfy p >= 1, got " + std::to_string(p));
}

SingularSpectrum::SingularSpectrum(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0) throw InputError("singular values must be finite and nonnegative");
  }
  std::sort(values_.begin(), values_.end(), std::greater<>());
}

std::size_t SingularSpectrum::rank() const noexcept {
  return static_cast<std::size_t>(std::count_if(values_.begin(), values_.end(), [](double v) { return v > 0.0; }));
}

SingularSpectrum SingularSpectrum::scaled(double c) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= std::abs(c);
  return SingularSpectrum(std::move(v));
}

std::size_t BandDecomposition::count(int band) const {
  const auto it = bands.find(band);
  return it == bands.end() ? 0 : it->second.size();
}

std::size_t BandDecomposition::total() const {
  std::size_t s = 0;
  for (const auto& [_, members] : bands) s += members.size();
  return s;
}

namespace {

inline double dot(const double* x, const double* y, std::size_t n) noexcept {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += x[i] * y[i];
    s1 += x[i + 1] * y[i + 1];
    s2 += x[i + 2] * y[i + 2];
    s3 += x[i + 3] * y[i + 3];
  }
  for (; i < n; ++i) s0 += x[i] * y[i];
  return (s0 + s1) + (s2 + s3);
}

// Householder QR with column pivoting of a column-major len x ncols array (len >= ncols).
// Returns R^T in column-major form (ncols x ncols): its columns are the rows of R.
// Singular values are preserved; Jacobi on R^T converges in far fewer sweeps.
std::vector<double> pivoted_qr_rows(std::vector<double>& work, std::size_t len, std::size_t ncols) {
  std::vector<double> norms2(ncols);
  for (std::size_t j = 0; j < ncols; ++j) norms2[j] = dot(&work[j * len], &work[j * len], len);
  std::vector<double> v(len);
  for (std::size_t k = 0; k < ncols; ++k) {
    std::size_t best = k;
    for (std::size_t j = k + 1; j < ncols; ++j)
      if (norms2[j] > norms2[best]) best = j;
    if (best != k) {
      std::swap_ranges(work.begin() + static_cast<std::ptrdiff_t>(k * len),
                       work.begin() + static_cast<std::ptrdiff_t>((k + 1) * len),
                       work.begin() + static_cast<std::ptrdiff_t>(best * len));
    }
    double* ck = &work[k * len];
    const double norm = std::sqrt(dot(ck + k, ck + k, len - k));
    if (norm == 0.0) break;  // remaining columns are exactly zero below row k
    const double alpha = ck[k] > 0 ? -norm : norm;
    for (std::size_t i = k; i < len; ++i) v[i] = ck[i];
    v[k] -= alpha;
    const double vnorm2 = dot(&v[k], &v[k], len - k);
    for (std::size_t j = k; j < ncols; ++j) {
      double* cj = &work[j * len];
      const double f = 2.0 * dot(&v[k], cj + k, len - k) / vnorm2;
      for (std::size_t i = k; i < len; ++i) cj[i] -= f * v[i];
    }
    for (std::size_t j = k + 1; j < ncols; ++j) {
      const double* cj = &work[j * len];
      norms2[j] = dot(cj + k + 1, cj + k + 1, len - k - 1);
    }
  }
  std::vector<double> rt(ncols * ncols, 0.0);
  for (std::size_t j = 0; j < ncols; ++j)
    for (std::size_t i = 0; i <= j; ++i) rt[i * ncols + j] = work[j * len + i];
  return rt;
}

constexpr std::size_t kPreconditionThreshold = 16;

}  // namespace

namespace {

// 2^k for normal exponents, without a libm call.
inline double pow2(int k) noexcept {
  if (k < -1022 || k > 1023) return std::ldexp(1.0, k);
  return std::bit_cast<double>(static_cast<std::uint64_t>(1023 + k) << 52);
}

struct JacobiShape {
  std::size_t len;
  std::size_t ncols;
  double skip_abs;
};

JacobiShape jacobi_shape(std::size_t len, std::size_t ncols, double tolerance) {
  const double pairs = 0.5 * static_cast<double>(ncols) * static_cast<double>(ncols - 1);
  return {len, ncols, pairs > 0 ? 0.5 * tolerance / std::sqrt(2.0 * pairs) : 0.0};
}

// Orthogonalizes columns p < q of a column-major array; returns gamma^2 measured before rotating.
inline double rotate_pair(double* work, std::size_t len, double* norms2, std::size_t p, std::size_t q,
                          double skip_abs) noexcept {
  const double alpha = norms2[p];
  const double beta = norms2[q];
  if (alpha == 0.0 || beta == 0.0) return 0.0;
  double* cp = &work[p * len];
  double* cq = &work[q * len];
  const double gamma = dot(cp, cq, len);
  const double g2 = gamma * gamma;
  if (g2 <= DBL_EPSILON * DBL_EPSILON * alpha * beta || std::abs(gamma) <= skip_abs) return g2;
  const double zeta = (beta - alpha) / (2.0 * gamma);
  const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = c * t;
  for (std::size_t i = 0; i < len; ++i) {
    const double x = cp[i];
    const double y = cq[i];
    cp[i] = c * x - s * y;
    cq[i] = s * x + c * y;
  }
  norms2[p] = std::max(alpha - t * gamma, 0.0);
  norms2[q] = std::max(beta + t * gamma, 0.0);
  return g2;
}

constexpr int kMaxSweeps = 100;

// Cyclic one-sided Jacobi on the columns of a column-major len x ncols array.
// Converged when the off-diagonal Gram mass is at most `tolerance`. kLen and kCols
// fix the shape at compile time for tiny inputs; 0 means runtime sizes.
template <std::size_t kLen, std::size_t kCols>
void jacobi_columns(double* work, JacobiShape shape, double* norms2, double tolerance) {
  const std::size_t len = kLen ? kLen : shape.len;
  const std::size_t ncols = kCols ? kCols : shape.ncols;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    for (std::size_t j = 0; j < ncols; ++j) norms2[j] = dot(&work[j * len], &work[j * len], len);
    double off2 = 0.0;
    for (std::size_t p = 0; p + 1 < ncols; ++p) {
      for (std::size_t q = p + 1; q < ncols; ++q) off2 += rotate_pair(work, len, norms2, p, q, shape.skip_abs);
    }
    if (std::sqrt(2.0 * off2) <= tolerance) break;
  }
}

// The same iteration run on several independent problems of one shape, pair by pair,
// so that their dependency chains overlap. Per-problem arithmetic is unchanged.
template <std::size_t kLen, std::size_t kCols>
void jacobi_columns_batch(std::span<double*> works, std::span<double*> norms, std::span<const double> tolerances,
                          std::span<const double> skips, JacobiShape shape) {
  const std::size_t len = kLen ? kLen : shape.len;
  const std::size_t ncols = kCols ? kCols : shape.ncols;
  const std::size_t lanes = works.size();
  std::array<double, 64> off2{};
  std::array<bool, 64> active{};
  std::fill_n(active.begin(), lanes, true);
  std::size_t remaining = lanes;
  for (int sweep = 0; sweep < kMaxSweeps && remaining > 0; ++sweep) {
    for (std::size_t l = 0; l < lanes; ++l) {
      if (!active[l]) continue;
      off2[l] = 0.0;
      for (std::size_t j = 0; j < ncols; ++j) norms[l][j] = dot(&works[l][j * len], &works[l][j * len], len);
    }
    for (std::size_t p = 0; p + 1 < ncols; ++p) {
      for (std::size_t q = p + 1; q < ncols; ++q) {
        for (std::size_t l = 0; l < lanes; ++l) {
          if (active[l]) off2[l] += rotate_pair(works[l], len, norms[l], p, q, skips[l]);
        }
      }
    }
    for (std::size_t l = 0; l < lanes; ++l) {
      if (active[l] && std::sqrt(2.0 * off2[l]) <= tolerances[l]) {
        active[l] = false;
        --remaining;
      }
    }
  }
}

constexpr std::size_t kSmallEntries = 16;
constexpr std::size_t kBatchLanes = 8;

struct Loaded {
  std::size_t len = 0;
  std::size_t ncols = 0;
  int shift = 0;
  double tolerance = 0.0;
  bool zero = false;
};

// Validates a and writes a power-of-two rescaled column-major copy (long side down the
// columns) into work, which must hold rows*cols values.
Loaded load_scaled(const DenseMatrix& a, double* work) {
  if (!a.all_finite()) throw InputError("svd_spectrum: matrix has non-finite entries");
  Loaded out;
  const bool tall = a.rows() >= a.cols();
  out.len = tall ? a.rows() : a.cols();
  out.ncols = tall ? a.cols() : a.rows();
  const double fro = a.frobenius_norm();
  if (out.ncols == 0 || fro == 0.0) {
    out.zero = true;
    return out;
  }
  // Power-of-two rescaling keeps the work array near unit norm without rounding.
  out.shift = -std::ilogb(fro);
  const double scale = pow2(out.shift);
  const double fro_scaled = fro * scale;
  out.tolerance = 1e-13 * fro_scaled * fro_scaled;
  const double* src = a.data().data();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double v = src[i * a.cols() + j] * scale;
      if (tall)
        work[j * out.len + i] = v;
      else
        work[i * out.len + j] = v;
    }
  }
  return out;
}

SingularSpectrum finish_spectrum(const double* work, std::size_t len, std::size_t ncols, int shift) {
  std::vector<double> values(ncols);
  const double unscale = pow2(-shift);
  for (std::size_t j = 0; j < ncols; ++j) values[j] = std::sqrt(dot(&work[j * len], &work[j * len], len)) * unscale;
  return SingularSpectrum(std::move(values));
}

bool batchable(const DenseMatrix& a) {
  return a.rows() * a.cols() <= kSmallEntries && std::min(a.rows(), a.cols()) > 0;
}

}  // namespace

SingularSpectrum svd_spectrum(const DenseMatrix& a) {
  const bool small = a.rows() * a.cols() <= kSmallEntries;
  std::array<double, kSmallEntries> small_work{};
  std::array<double, kSmallEntries> small_norms{};
  std::vector<double> heap_work;
  std::vector<double> heap_norms;
  double* work = small_work.data();
  double* norms2 = small_norms.data();
  if (!small) {
    heap_work.resize(a.rows() * a.cols());
    work = heap_work.data();
  }
  const Loaded ld = load_scaled(a, work);
  if (ld.zero) return SingularSpectrum(std::vector<double>(ld.ncols, 0.0));
  std::size_t len = ld.len;
  const std::size_t ncols = ld.ncols;
  if (!small) {
    heap_norms.resize(ncols);
    norms2 = heap_norms.data();
  }
  if (ncols >= kPreconditionThreshold) {
    heap_work = pivoted_qr_rows(heap_work, len, ncols);
    work = heap_work.data();
    len = ncols;
  }

  const JacobiShape shape = jacobi_shape(len, ncols, ld.tolerance);
  if (len == 3 && ncols == 3)
    jacobi_columns<3, 3>(work, shape, norms2, ld.tolerance);
  else if (len == 2 && ncols == 2)
    jacobi_columns<2, 2>(work, shape, norms2, ld.tolerance);
  else
    jacobi_columns<0, 0>(work, shape, norms2, ld.tolerance);
  return finish_spectrum(work, len, ncols, ld.shift);
}

std::vector<SingularSpectrum> svd_spectra(std::span<const DenseMatrix> matrices) {
  std::vector<SingularSpectrum> out(matrices.size());
  std::size_t k = 0;
  while (k < matrices.size()) {
    const DenseMatrix& first = matrices[k];
    if (!batchable(first)) {
      out[k] = svd_spectrum(first);
      ++k;
      continue;
    }
    // Gather up to kBatchLanes consecutive nonzero problems of this shape.
    std::array<std::array<double, kSmallEntries>, kBatchLanes> work{};
    std::array<std::array<double, kSmallEntries>, kBatchLanes> norms{};
    std::array<double*, kBatchLanes> work_ptr{};
    std::array<double*, kBatchLanes> norm_ptr{};
    std::array<double, kBatchLanes> tol{};
    std::array<double, kBatchLanes> skip{};
    std::array<std::size_t, kBatchLanes> index{};
    std::array<int, kBatchLanes> shift{};
    std::size_t lanes = 0;
    Loaded ld;
    while (k < matrices.size() && lanes < kBatchLanes && matrices[k].rows() == first.rows() &&
           matrices[k].cols() == first.cols()) {
      ld = load_scaled(matrices[k], work[lanes].data());
      if (ld.zero) {
        out[k] = SingularSpectrum(std::vector<double>(ld.ncols, 0.0));
      } else {
        work_ptr[lanes] = work[lanes].data();
        norm_ptr[lanes] = norms[lanes].data();
        tol[lanes] = ld.tolerance;
        skip[lanes] = jacobi_shape(ld.len, ld.ncols, ld.tolerance).skip_abs;
        index[lanes] = k;
        shift[lanes] = ld.shift;
        ++lanes;
      }
      ++k;
    }
    if (lanes == 0) continue;
    const std::size_t len = std::max(first.rows(), first.cols());
    const std::size_t ncols = std::min(first.rows(), first.cols());
    const JacobiShape shape{len, ncols, 0.0};
    const std::span<double*> w(work_ptr.data(), lanes);
    const std::span<double*> nr(norm_ptr.data(), lanes);
    const std::span<const double> tl(tol.data(), lanes);
    const std::span<const double> sk(skip.data(), lanes);
    if (len == 3 && ncols == 3)
      jacobi_columns_batch<3, 3>(w, nr, tl, sk, shape);
    else if (len == 2 && ncols == 2)
      jacobi_columns_batch<2, 2>(w, nr, tl, sk, shape);
    else
      jacobi_columns_batch<0, 0>(w, nr, tl, sk, shape);
    for (std::size_t l = 0; l < lanes; ++l) out[index[l]] = finish_spectrum(work_ptr[l], len, ncols, shift[l]);
  }
  return out;
}

double schatten_norm(const SingularSpectrum& spectrum, SchattenOrder p) {
  const double top = spectrum.largest();
  if (top == 0.0) return 0.0;
  if (p.is_infinite()) return top;
  if (p.value() == 2.0) return euclidean_norm(spectrum.values());
  if (p.value() == 1.0) {
    double sum = 0.0;
    for (double v : spectrum.values()) sum += v;
    return sum;
  }
  // Normalizing by the largest value avoids overflow in sigma^p.
  double sum = 0.0;
  for (double v : spectrum.values()) {
    if (v > 0.0) sum += std::pow(v / top, p.value());
  }
  return top * std::pow(sum, 1.0 / p.value());
}

double schatten_norm(const DenseMatrix& a, SchattenOrder p) { return schatten_norm(svd_spectrum(a), p); }

namespace {

int band_index(double op_norm, double sigma) {
  int i = static_cast<int>(std::floor(std::log2(op_norm / sigma)));
  i = std::max(i, 0);
  // Settle rounding at band edges with exact power-of-two comparisons.
  while (i > 0 && sigma > std::ldexp(op_norm, -i)) --i;
  while (!(sigma > std::ldexp(op_norm, -(i + 1)))) ++i;
  return i;
}

}  // namespace

BandDecomposition band_decomposition(const SingularSpectrum& spectrum) {
  if (spectrum.is_zero()) throw DegenerateInputError("band_decomposition: spectrum has no positive value");
  BandDecomposition out;
  out.op_norm = spectrum.largest();
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    if (spectrum[k] > 0.0) out.bands[band_index(out.op_norm, spectrum[k])].push_back(k);
  }
  return out;
}

namespace {

void check_sizes(std::size_t n, std::size_t t) {
  if (t < 1) throw DomainError("sketch size t must be at least 1");
  if (t > n) throw DomainError("sketch size t=" + std::to_string(t) + " exceeds n=" + std::to_string(n));
}

// t / ln t, with the t = 1 singularity replaced by 1.
double t_over_log_t(double t) { return t <= 1.0 ? 1.0 : std::max(t / std::log(t), 1.0); }

}  // namespace

DistortionRegime distortion_regime(SchattenOrder p, SchattenOrder q) {
  const double pv = p.value();
  const double qv = q.value();
  if (pv <= qv && qv <= 2.0) return DistortionRegime::kPLeQBelowTwo;
  if (pv <= 2.0 && 2.0 <= qv) return DistortionRegime::kPBelowTwoLeQ;
  if (2.0 <= pv && pv <= qv) return DistortionRegime::kTwoLePLeQ;
  if (qv <= 2.0 && 2.0 <= pv) return DistortionRegime::kQBelowTwoLeP;
  if (2.0 <= qv && qv <= pv) return DistortionRegime::kTwoLeQLeP;
  return DistortionRegime::kQLePBelowTwo;
}

double hat_distortion(SchattenOrder p, SchattenOrder q, std::size_t n, std::size_t t) {
  check_sizes(n, t);
  const double ip = p.inverse();
  const double iq = q.inverse();
  const double nn = static_cast<double>(n);
  const double tt = static_cast<double>(t);
  switch (distortion_regime(p, q)) {
    case DistortionRegime::kPLeQBelowTwo:
      return std::pow(nn, ip - 0.5) / std::pow(tt, iq - 0.5);
    case DistortionRegime::kPBelowTwoLeQ:
      return std::pow(nn, ip - 0.5);
    case DistortionRegime::kTwoLePLeQ:
      return std::max(std::pow(nn / tt, 0.5 - ip), std::pow(tt, ip - iq));
    case DistortionRegime::kQBelowTwoLeP:
      return std::pow(nn, 0.5 - ip);
    case DistortionRegime::kTwoLeQLeP:
      return std::pow(nn, 0.5 - ip) / std::pow(tt, 0.5 - iq);
    case DistortionRegime::kQLePBelowTwo:
      return std::max(std::pow(nn / tt, ip - 0.5), std::pow(t_over_log_t(tt), iq - ip));
  }
  return 1.0;
}

double tilde_distortion(SchattenOrder p, SchattenOrder q, std::size_t n, std::size_t t) {
  check_sizes(n, t);
  if (distortion_regime(p, q) != DistortionRegime::kQLePBelowTwo) return hat_distortion(p, q, n, t);
  const double ip = p.inverse();
  const double iq = q.inverse();
  const double nn = static_cast<double>(n);
  const double tt = static_cast<double>(t);
  return std::max(std::pow(nn / tt, ip - 0.5), std::pow(tt, iq - ip));
}

std::size_t heavy_tail_block_count(std::size_t n, std::size_t t) {
  if (t < 1) throw DomainError("heavy_tail_split: t must be at least 1");
  const double ratio = std::max(static_cast<double>(n) / static_cast<double>(t), 2.0);
  return static_cast<std::size_t>(std::ceil(2.0 * std::log2(ratio)));
}

SplitOutcome heavy_tail_split(const SingularSpectrum& spectrum, std::size_t t, SchattenOrder p) {
  if (spectrum.size() == 0 || spectrum.is_zero()) {
    throw DegenerateInputError("heavy_tail_split: spectrum is empty or zero");
  }
  const std::size_t n = spectrum.size();
  SplitOutcome out;
  out.blocks = heavy_tail_block_count(n, t);
  const std::size_t prefix_len = std::min(out.blocks * t, n);
  const double top = spectrum.largest();

  if (p.is_infinite()) {
    out.prefix_mass = out.total_mass = top;
  } else {
    for (std::size_t k = 0; k < n; ++k) {
      const double m = std::pow(spectrum[k] / top, p.value());
      out.total_mass += m;
      if (k < prefix_len) out.prefix_mass += m;
    }
    const double unscale = std::pow(top, p.value());
    out.prefix_mass *= unscale;
    out.total_mass *= unscale;
  }

  // suffix[k] = sum_{i >= k} (sigma_i / top)^2, zero-based.
  std::vector<double> suffix(n + 1, 0.0);
  for (std::size_t k = n; k-- > 0;) {
    const double r = spectrum[k] / top;
    suffix[k] = suffix[k + 1] + r * r;
  }
  const double factor = 2.0 / static_cast<double>(t);
  for (std::size_t k = 0; k < prefix_len; ++k) {
    const double r = spectrum[k] / top;
    if (r * r <= factor * suffix[k]) {
      out.tail_index = k + 1;
      break;
    }
  }

  const bool top_heavy = out.prefix_mass >= 0.5 * out.total_mass;
  if (top_heavy) {
    out.kind = SplitKind::kTopHeavy;
  } else if (out.tail_index) {
    out.kind = SplitKind::kTail;
  } else {
    throw InvariantViolation("heavy_tail_split: neither the prefix-mass nor the stopping condition holds");
  }
  return out;
}

double band_statistic(const SingularSpectrum& a, const SingularSpectrum& b, SchattenOrder p, std::size_t n) {
  if (a.is_zero() || b.is_zero()) throw DegenerateInputError("band_statistic: spectra must be nonzero");
  const BandDecomposition ba = band_decomposition(a);
  const BandDecomposition bb = band_decomposition(b);
  const int last = n <= 1 ? 0 : static_cast<int>(std::ceil(3.0 * std::log2(static_cast<double>(n))));
  double best = 0.0;
  for (const auto& [i, members_a] : ba.bands) {
    if (i > last) break;
    for (const auto& [j, members_b] : bb.bands) {
      if (j > last) break;
      const double na = static_cast<double>(members_a.size());
      const double nb = static_cast<double>(members_b.size());
      const double term = std::ldexp(1.0, -(i + j)) * std::pow(std::min(na, nb), p.inverse()) *
                          std::sqrt(std::max(na, nb));
      best = std::max(best, term);
    }
  }
  return best;
}

}  // namespace schatten
