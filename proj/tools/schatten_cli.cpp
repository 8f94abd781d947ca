// schatten_cli: exact norms, sketch experiments, streaming runs and distortion sweeps.
//
// Exit codes: 0 ok, 2 configuration error, 3 input/parse error, 4 invariant violation.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "schatten/error.hpp"
#include "schatten/estimators.hpp"
#include "schatten/hard_instances.hpp"
#include "schatten/io.hpp"
#include "schatten/random.hpp"
#include "schatten/spectrum.hpp"
#include "schatten/streaming.hpp"

namespace {

using namespace schatten;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInput = 3;
constexpr int kExitInvariant = 4;

struct ExperimentConfig {
  std::string command;
  std::string p = "1";
  std::string q;
  std::vector<std::string> p_grid;
  std::vector<std::string> q_grid;
  std::size_t n = 0;
  std::vector<std::size_t> t_grid;
  double D = 2.0;
  std::string seed = "0";
  std::size_t trials = 1;
  std::string input_path;
  std::string output_path;
  std::string summary_path;
  /// Empty selects the command default: plain number for norm, CSV for sweep, JSON otherwise.
  std::string format;
  double rows_multiplier = 1.0;
  /// Fixed left row count r = Theta(t); zero keeps the t ln(n/t) default.
  std::size_t rows = 0;
  bool verify = false;
  std::string family;
  std::string side = "two";
  std::string check = "khintchine";
  std::string spectrum = "random";
  double budget_constant = SpaceBudget{}.constant;
};

SchattenOrder parse_order(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "op") return SchattenOrder::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigurationError("cannot parse Schatten order '" + text + "'");
  }
  if (used != text.size()) throw ConfigurationError("cannot parse Schatten order '" + text + "'");
  try {
    return SchattenOrder(v);
  } catch (const DomainError& e) {
    throw ConfigurationError(e.what());
  }
}

std::string order_text(SchattenOrder p) { return p.is_infinite() ? "inf" : format_number(p.value(), 12); }

ordered_json order_json(SchattenOrder p) {
  if (p.is_infinite()) return "inf";
  return p.value();
}

// Writes to --output when given, stdout otherwise.
void emit(const ExperimentConfig& cfg, const std::string& text) {
  if (cfg.output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.output_path);
  if (!out) throw InputError("cannot open output '" + cfg.output_path + "'");
  out << text;
  if (!out) throw InputError("write to '" + cfg.output_path + "' failed");
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open output '" + path + "'");
  out << text;
  if (!out) throw InputError("write to '" + path + "' failed");
}

void require_format(const ExperimentConfig& cfg) {
  if (!cfg.format.empty() && cfg.format != "json" && cfg.format != "csv") {
    throw ConfigurationError("--format must be csv or json, got '" + cfg.format + "'");
  }
}

int run_norm(const ExperimentConfig& cfg) {
  if (cfg.input_path.empty()) throw ConfigurationError("norm needs --input");
  const SchattenOrder p = parse_order(cfg.p);
  const DenseMatrix a = read_matrix_file(cfg.input_path);
  const double norm = schatten_norm(a, p);
  if (cfg.format == "json") {
    ordered_json j{{"p", order_json(p)}, {"rows", a.rows()}, {"cols", a.cols()}, {"norm", norm}};
    emit(cfg, j.dump(2) + "\n");
  } else {
    emit(cfg, format_number(norm, 12) + "\n");
  }
  return kExitOk;
}

DenseMatrix sketch_input(const ExperimentConfig& cfg, std::uint64_t seed) {
  if (!cfg.input_path.empty()) return read_matrix_file(cfg.input_path);
  if (cfg.family.empty()) throw ConfigurationError("sketch needs --input or --family");
  if (cfg.n < 1) throw ConfigurationError("--family needs --n");
  const std::size_t t = cfg.t_grid.empty() ? 1 : cfg.t_grid.front();
  const auto suite = hard_instance_suite(cfg.n, t, derive_seed(seed, 0));
  const Family f = family_from_string(cfg.family);
  for (const auto& inst : suite) {
    if (inst.family == f) return make_instance(inst);
  }
  throw ConfigurationError("family '" + cfg.family + "' not in suite");
}

int run_sketch(const ExperimentConfig& cfg) {
  if (cfg.t_grid.size() != 1) throw ConfigurationError("sketch needs exactly one --t");
  if (cfg.side != "one" && cfg.side != "two") throw ConfigurationError("--side must be one or two");
  EstimatorConfig est;
  est.p = parse_order(cfg.p);
  est.q = parse_order(cfg.q.empty() ? cfg.p : cfg.q);
  est.t = cfg.t_grid.front();
  est.row_multiplier = cfg.rows_multiplier;
  if (cfg.rows > 0) est.rows_override = cfg.rows;
  est.seed = parse_seed(cfg.seed);
  const DenseMatrix a = sketch_input(cfg, est.seed);
  EstimateResult r = cfg.side == "two" ? two_sided_estimate(a, est) : one_sided_estimate(a, est);
  if (cfg.verify) r.exact_norm = schatten_norm(a, est.p);

  if (cfg.format == "csv") {
    std::ostringstream out;
    out << "p,q,n,t,side,rows,cols,estimate,exact,predicted_distortion\n";
    out << order_text(est.p) << ',' << order_text(est.q) << ',' << a.rows() << ',' << est.t << ',' << cfg.side
        << ',' << r.rows << ',' << r.cols << ',' << format_number(r.estimate, 12) << ','
        << (r.exact_norm ? format_number(*r.exact_norm, 12) : "") << ','
        << format_number(r.predicted_distortion, 12) << '\n';
    emit(cfg, out.str());
    return kExitOk;
  }
  nlohmann::json result = r;
  ordered_json j;
  j["p"] = order_json(est.p);
  j["q"] = order_json(est.q);
  j["n"] = a.rows();
  j["t"] = est.t;
  j["side"] = cfg.side;
  for (const auto& [k, v] : result.items()) j[k] = v;
  j["left_sketch"] = nlohmann::json(est.left_spec(a.rows()));
  if (cfg.side == "two") j["right_sketch"] = nlohmann::json(est.right_spec(a.rows()));
  emit(cfg, j.dump(2) + "\n");
  return kExitOk;
}

int run_stream(const ExperimentConfig& cfg) {
  if (cfg.format == "csv") throw ConfigurationError("stream output is JSON only");
  if (cfg.n < 1) throw ConfigurationError("stream needs --n");
  if (cfg.input_path.empty()) throw ConfigurationError("stream needs --input");
  if (cfg.verify && cfg.n > 1024) throw ConfigurationError("--verify is limited to n <= 1024");
  if (!(cfg.budget_constant > 0.0)) throw ConfigurationError("--budget-constant must be positive");
  const std::uint64_t seed = parse_seed(cfg.seed);
  const std::vector<StreamUpdate> updates = read_stream_file(cfg.input_path);

  StreamSketch sketch(cfg.n, cfg.D, seed);
  std::optional<DenseMatrix> exact;
  if (cfg.verify) exact.emplace(cfg.n, cfg.n);
  for (const auto& u : updates) {
    sketch.update(u);
    if (exact) (*exact)(u.i, u.j) += u.delta;
  }
  SpaceBudget budget;
  budget.constant = cfg.budget_constant;
  const SpaceReport space = sketch.space_report(budget);

  ordered_json j;
  j["n"] = cfg.n;
  j["D"] = cfg.D;
  j["estimate"] = sketch.estimate();
  if (exact) {
    const double e = schatten_norm(*exact, SchattenOrder(1.0));
    j["exact"] = e;
    j["ratio"] = e > 0.0 ? ordered_json(sketch.estimate() / e) : ordered_json(nullptr);
  }
  j["t"] = sketch.t();
  j["independence_k"] = sketch.left_spec().independence_k;
  j["sketch_bits"] = space.sketch_bits;
  j["seed_bits"] = space.seed_bits;
  j["total_bits"] = space.total_bits;
  j["budget_bits"] = space.budget_bits;
  j["update_count"] = sketch.update_count();
  emit(cfg, j.dump(2) + "\n");
  return kExitOk;
}

int run_sweep(const ExperimentConfig& cfg) {
  if (cfg.n < 1) throw ConfigurationError("sweep needs --n");
  if (cfg.t_grid.empty()) throw ConfigurationError("sweep needs at least one --t");
  if (cfg.side != "one" && cfg.side != "two") throw ConfigurationError("--side must be one or two");
  std::vector<SchattenOrder> ps;
  for (const auto& s : cfg.p_grid.empty() ? std::vector<std::string>{cfg.p} : cfg.p_grid) ps.push_back(parse_order(s));
  std::vector<SchattenOrder> qs;
  for (const auto& s : cfg.q_grid) qs.push_back(parse_order(s));
  if (qs.empty()) qs = ps;
  std::vector<std::size_t> ts = cfg.t_grid;
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  for (std::size_t t : ts) {
    if (t < 1 || 4 * t > cfg.n) {
      throw ConfigurationError("infeasible grid: t=" + std::to_string(t) + " exceeds n/4 for n=" +
                               std::to_string(cfg.n));
    }
  }
  auto by_value = [](SchattenOrder a, SchattenOrder b) { return a.value() < b.value(); };
  std::sort(ps.begin(), ps.end(), by_value);
  std::sort(qs.begin(), qs.end(), by_value);
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  qs.erase(std::unique(qs.begin(), qs.end()), qs.end());
  if (cfg.trials < 1) throw ConfigurationError("--trials must be at least 1");

  const std::uint64_t seed = parse_seed(cfg.seed);
  SpectrumCache cache;
  std::ostringstream csv;
  csv << "p,q,n,t,family,trial,ratio,predicted_hat,predicted_tilde\n";
  ordered_json reports = ordered_json::array();
  ordered_json fits = ordered_json::array();
  for (SchattenOrder p : ps) {
    for (SchattenOrder q : qs) {
      std::vector<double> x;
      std::vector<double> y;
      for (std::size_t t : ts) {
        DistortionConfig dc;
        dc.p = p;
        dc.q = q;
        dc.n = cfg.n;
        dc.t = t;
        dc.seed = seed;
        dc.trials = cfg.trials;
        dc.side = cfg.side == "two" ? SketchSide::kTwoSided : SketchSide::kOneSided;
        dc.row_multiplier = cfg.rows_multiplier;
        if (cfg.rows > 0) dc.rows_override = cfg.rows;
        const DistortionReport r = measure_distortion(dc, &cache);
        for (const auto& ratio : r.ratios) {
          csv << order_text(p) << ',' << order_text(q) << ',' << cfg.n << ',' << t << ',' << ratio.family << ','
              << ratio.trial << ',' << format_number(ratio.ratio, 12) << ',' << format_number(r.predicted_hat, 12)
              << ',' << format_number(r.predicted_tilde, 12) << '\n';
        }
        reports.push_back({{"p", order_json(p)},
                           {"q", order_json(q)},
                           {"n", cfg.n},
                           {"t", t},
                           {"trials", r.trials},
                           {"empirical_distortion", r.empirical_distortion},
                           {"min_ratio", r.min_ratio},
                           {"max_ratio", r.max_ratio},
                           {"predicted_hat", r.predicted_hat},
                           {"predicted_tilde", r.predicted_tilde}});
        x.push_back(static_cast<double>(cfg.n) / static_cast<double>(t));
        y.push_back(r.empirical_distortion);
      }
      if (x.size() < 2) continue;
      ordered_json fit{{"p", order_json(p)}, {"q", order_json(q)}, {"exponent", log_log_slope(x, y)}};
      // Two candidate log corrections for the lower bound when 1 <= q <= p < 2.
      if (q.value() <= p.value() && p.value() < 2.0) {
        const double exponent = p.inverse() - 0.5;
        ordered_json candidates = ordered_json::array();
        for (const auto& [name, power] : {std::pair<const char*, double>{"log^1.5(t)", 1.5},
                                          {"log^(3p/(2-p))(t)", 3.0 * p.value() / (2.0 - p.value())}}) {
          ordered_json per_t = ordered_json::array();
          for (std::size_t k = 0; k < ts.size(); ++k) {
            const double lt = std::max(1.0, std::log(static_cast<double>(ts[k])));
            const double curve = std::pow(x[k], exponent) / std::pow(lt, power);
            per_t.push_back({{"t", ts[k]}, {"curve", curve}, {"empirical_over_curve", y[k] / curve}});
          }
          candidates.push_back({{"correction", name}, {"points", per_t}});
        }
        fit["candidates"] = candidates;
      }
      fits.push_back(fit);
    }
  }
  ordered_json summary{{"n", cfg.n}, {"trials", cfg.trials}, {"seed", seed}, {"side", cfg.side},
                       {"reports", reports}, {"fits", fits}};
  if (cfg.format != "json") {
    emit(cfg, csv.str());
    if (!cfg.summary_path.empty()) write_file(cfg.summary_path, summary.dump(2) + "\n");
  } else {
    emit(cfg, summary.dump(2) + "\n");
  }
  return kExitOk;
}

ordered_json stats_json(const RatioStatistics& s) {
  return {{"median", s.median}, {"min", s.min}, {"max", s.max}, {"mean", s.mean}, {"values", s.values}};
}

SingularSpectrum diagnostic_spectrum(const std::string& kind, std::size_t n, std::uint64_t seed) {
  std::vector<double> v(n, 1.0);
  if (kind == "identity") return SingularSpectrum(v);
  if (kind == "random") {
    for (std::size_t k = 0; k < n; ++k) v[k] = uniform_at(seed, k);
    return SingularSpectrum(v);
  }
  if (kind == "geometric") {
    for (std::size_t k = 0; k < n; ++k) v[k] = std::pow(0.9, static_cast<double>(k));
    return SingularSpectrum(v);
  }
  throw ConfigurationError("--spectrum must be identity, random or geometric");
}

int run_diagnose(const ExperimentConfig& cfg) {
  if (cfg.format == "csv") throw ConfigurationError("diagnose output is JSON only");
  if (cfg.n < 1) throw ConfigurationError("diagnose needs --n");
  const SchattenOrder p = parse_order(cfg.p);
  const std::uint64_t seed = parse_seed(cfg.seed);
  ordered_json j{{"check", cfg.check}, {"p", order_json(p)}, {"n", cfg.n}, {"trials", cfg.trials}};
  if (cfg.check == "rg" || cfg.check == "product") {
    if (cfg.t_grid.size() != 1) throw ConfigurationError(cfg.check + " needs exactly one --t");
    const std::size_t t = cfg.t_grid.front();
    j["t"] = t;
    if (cfg.check == "rg") {
      if (t > cfg.n) throw ConfigurationError("rg needs t <= n");
      // Partial isometry: t orthonormal rows.
      const DenseMatrix r = orthonormal_columns(gaussian_matrix(cfg.n, t, derive_seed(seed, 0))).transposed();
      j["statistic"] = stats_json(techniques_check_RG(r, cfg.n, t, p, derive_seed(seed, 1), cfg.trials));
    } else {
      j["statistic"] = stats_json(techniques_check_product(cfg.n, t, p, seed, cfg.trials));
    }
  } else if (cfg.check == "khintchine") {
    const SingularSpectrum a = diagnostic_spectrum(cfg.spectrum, cfg.n, derive_seed(seed, 1));
    const SingularSpectrum b = diagnostic_spectrum(cfg.spectrum, cfg.n, derive_seed(seed, 2));
    const KhintchineReport r = khintchine_diagnostic(a, b, p, cfg.n, derive_seed(seed, 3), cfg.trials);
    j["spectrum"] = cfg.spectrum;
    j["bound"] = r.bound;
    j["constant"] = r.constant;
    j["threshold"] = r.threshold;
    j["failure_fraction"] = r.failure_fraction;
    j["ratios"] = r.ratios;
  } else {
    throw ConfigurationError("--check must be rg, product or khintchine");
  }
  emit(cfg, j.dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schatten norm sketching harness"};
  app.require_subcommand(1);
  ExperimentConfig cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "64-bit seed (decimal or 0x hex)");
    sub->add_option("--output", cfg.output_path, "Output file (default stdout)");
    sub->add_option("--format", cfg.format, "csv or json");
  };

  auto* norm = app.add_subcommand("norm", "Exact Schatten-p norm of a matrix file");
  norm->add_option("--input", cfg.input_path, "Matrix file")->required();
  norm->add_option("--p", cfg.p, "Schatten order (number or inf)");
  add_common(norm);

  auto* sketch = app.add_subcommand("sketch", "Sketched norm estimate");
  sketch->add_option("--input", cfg.input_path, "Matrix file");
  sketch->add_option("--family", cfg.family, "Generate a suite instance instead of reading a file");
  sketch->add_option("--n", cfg.n, "Dimension for --family");
  sketch->add_option("--p", cfg.p, "Norm of the input");
  sketch->add_option("--q", cfg.q, "Norm applied to the sketch (default p)");
  sketch->add_option("--t", cfg.t_grid, "Sketch size")->required();
  sketch->add_option("--rows-multiplier", cfg.rows_multiplier, "Left rows ceil(m t ln(n/t))");
  sketch->add_option("--rows", cfg.rows, "Fixed number of left rows (overrides --rows-multiplier)");
  sketch->add_option("--side", cfg.side, "one or two");
  sketch->add_flag("--verify", cfg.verify, "Also compute the exact norm");
  add_common(sketch);

  auto* stream = app.add_subcommand("stream", "Turnstile stream estimate of the nuclear norm");
  stream->add_option("--n", cfg.n, "Dimension")->required();
  stream->add_option("--D", cfg.D, "Approximation factor in [1, sqrt(n)]");
  stream->add_option("--input", cfg.input_path, "Update file with lines 'i j delta'")->required();
  stream->add_flag("--verify", cfg.verify, "Also compute the exact nuclear norm (n <= 1024)");
  stream->add_option("--budget-constant", cfg.budget_constant, "Constant c of the bit budget");
  add_common(stream);

  auto* sweep = app.add_subcommand("sweep", "Distortion sweep over the hard-instance suite");
  sweep->add_option("--n", cfg.n, "Dimension")->required();
  sweep->add_option("--t", cfg.t_grid, "Sketch sizes")->delimiter(',')->required();
  sweep->add_option("--p", cfg.p_grid, "Input norms")->delimiter(',');
  sweep->add_option("--q", cfg.q_grid, "Sketch norms (default: the p grid)")->delimiter(',');
  sweep->add_option("--trials", cfg.trials, "Trials per grid point");
  sweep->add_option("--rows-multiplier", cfg.rows_multiplier, "Left rows ceil(m t ln(n/t))");
  sweep->add_option("--rows", cfg.rows, "Fixed number of left rows (overrides --rows-multiplier)");
  sweep->add_option("--side", cfg.side, "one or two");
  sweep->add_option("--summary", cfg.summary_path, "Summary JSON file when --format csv");
  add_common(sweep);

  auto* diagnose = app.add_subcommand("diagnose", "Techniques and band-statistic diagnostics");
  diagnose->add_option("--check", cfg.check, "rg, product or khintchine");
  diagnose->add_option("--n", cfg.n, "Dimension")->required();
  diagnose->add_option("--t", cfg.t_grid, "Sketch size (rg, product)");
  diagnose->add_option("--p", cfg.p, "Schatten order");
  diagnose->add_option("--trials", cfg.trials, "Trials");
  diagnose->add_option("--spectrum", cfg.spectrum, "identity, random or geometric (khintchine)");
  add_common(diagnose);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    cfg.command = app.get_subcommands().front()->get_name();
    require_format(cfg);
    if (*norm) return run_norm(cfg);
    if (*sketch) return run_sketch(cfg);
    if (*stream) return run_stream(cfg);
    if (*sweep) return run_sweep(cfg);
    if (*diagnose) return run_diagnose(cfg);
  } catch (const ConfigurationError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  }
  return kExitConfig;
}
