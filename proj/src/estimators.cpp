#include "schatten/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "schatten/error.hpp"
#include "schatten/random.hpp"

namespace schatten {

void EstimatorConfig::validate() const {
  if (t < 1) throw ConfigurationError("estimator needs t >= 1");
  if (!(row_multiplier > 0.0)) throw ConfigurationError("row multiplier must be positive");
  if (!(calibration > 0.0)) throw ConfigurationError("calibration must be positive");
  if (right_rows_factor < 1) throw ConfigurationError("right sketch needs at least t rows");
  if (rows_override && *rows_override < 1) throw ConfigurationError("row override must be at least 1");
}

std::size_t EstimatorConfig::left_rows(std::size_t n) const {
  if (rows_override) return *rows_override;
  const double ratio = std::max(static_cast<double>(n) / static_cast<double>(t), std::numbers::e);
  return static_cast<std::size_t>(std::ceil(row_multiplier * static_cast<double>(t) * std::log(ratio)));
}

SketchSpec EstimatorConfig::left_spec(std::size_t n) const {
  return SketchSpec::dense_gaussian(left_rows(n), n, seed);
}

SketchSpec EstimatorConfig::right_spec(std::size_t n) const {
  return SketchSpec::dense_gaussian(right_rows(), n, companion_seed(seed));
}

void to_json(nlohmann::json& j, const EstimateResult& r) {
  j = nlohmann::json{{"estimate", r.estimate},
                     {"rows", r.rows},
                     {"cols", r.cols},
                     {"predicted_distortion", r.predicted_distortion},
                     {"exact_norm", r.exact_norm ? nlohmann::json(*r.exact_norm) : nlohmann::json(nullptr)}};
}

namespace {

void check_input(const DenseMatrix& a, const EstimatorConfig& cfg) {
  cfg.validate();
  if (a.rows() != a.cols()) {
    throw InputError("estimators take square inputs; got " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()));
  }
  if (cfg.t >= a.rows()) {
    throw ConfigurationError("sketch size t=" + std::to_string(cfg.t) + " does not compress n=" +
                             std::to_string(a.rows()));
  }
}

EstimateResult finish(const DenseMatrix& sketched, const EstimatorConfig& cfg, std::size_t n) {
  EstimateResult r;
  r.estimate = cfg.calibration * schatten_norm(sketched, cfg.q);
  r.rows = sketched.rows();
  r.cols = sketched.cols();
  r.predicted_distortion = predicted_distortion(cfg.p, cfg.q, n, cfg.t);
  return r;
}

}  // namespace

DenseMatrix one_sided_sketch(const DenseMatrix& a, const EstimatorConfig& cfg) {
  check_input(a, cfg);
  return generate(cfg.left_spec(a.rows())).apply(a);
}

DenseMatrix two_sided_sketch(const DenseMatrix& a, const EstimatorConfig& cfg) {
  const DenseMatrix ra = one_sided_sketch(a, cfg);
  const DenseMatrix s = generate(cfg.right_spec(a.rows())).to_dense();
  return multiply_transposed(ra, s);
}

EstimateResult one_sided_estimate(const DenseMatrix& a, const EstimatorConfig& cfg) {
  return finish(one_sided_sketch(a, cfg), cfg, a.rows());
}

EstimateResult two_sided_estimate(const DenseMatrix& a, const EstimatorConfig& cfg) {
  return finish(two_sided_sketch(a, cfg), cfg, a.rows());
}

double single_row_estimate(const DenseMatrix& a, std::uint64_t seed) {
  const std::vector<double> g = gaussian_vector(a.rows(), seed);
  return euclidean_norm(left_multiply(g, a));
}

double predicted_distortion(SchattenOrder p, SchattenOrder q, std::size_t n, std::size_t t) {
  const double log_factor = std::max(1.0, std::log(static_cast<double>(n) / static_cast<double>(t)));
  return tilde_distortion(p, q, n, t) * log_factor;
}

GuaranteeWindow guarantee_window(SchattenOrder p, SchattenOrder q, std::size_t n, std::size_t t) {
  if (t < 1 || t > n) throw DomainError("guarantee_window needs 1 <= t <= n");
  const double ip = p.inverse();
  const double iq = q.inverse();
  const double pv = p.value();
  const double qv = q.value();
  const double nn = static_cast<double>(n);
  const double tt = static_cast<double>(t);
  // log(n/t) factors, floored at 1 so small n/t never inflates a window.
  const double log_factor = std::max(1.0, std::log(nn / tt));

  GuaranteeWindow w;
  if (pv == 2.0 && qv == 2.0) {
    w.regime = "p=q=2";
  } else if (pv < 2.0 && qv < 2.0 && pv <= qv) {
    w.regime = "p<=q<2";
    w.lower = std::pow(tt, iq - 0.5) / (std::pow(nn, ip - 0.5) * log_factor);
    w.upper = 1.0;
  } else if (pv < 2.0 && qv < 2.0) {
    w.regime = "q<=p<2";
    w.lower = std::min(1.0 / log_factor, std::pow(tt, iq - 0.5) / std::pow(nn, ip - 0.5));
    w.upper = std::pow(tt, iq - ip);
  } else if (pv >= 2.0 && qv >= 2.0 && qv >= pv) {
    w.regime = "q>=p>=2";
    w.lower = 1.0 / (std::pow(tt, ip - iq) * log_factor);
    w.upper = std::max(std::pow(nn, 0.5 - ip) / std::pow(tt, 0.5 - iq), 1.0);
  } else if (pv >= 2.0 && qv >= 2.0) {
    w.regime = "p>=q>=2";
    w.lower = 1.0 / log_factor;
    w.upper = std::pow(nn, 0.5 - ip) / std::pow(tt, 0.5 - iq);
  } else if (pv <= 2.0) {
    w.regime = "p<=2<=q";
    w.single_row = true;
    w.lower = std::pow(nn, 0.5 - ip);
    w.upper = 1.0;
  } else {
    w.regime = "q<=2<=p";
    w.single_row = true;
    w.lower = 1.0;
    w.upper = std::pow(nn, 0.5 - ip);
  }
  return w;
}

}  // namespace schatten
