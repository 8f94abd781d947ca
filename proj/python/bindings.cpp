#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "schatten/error.hpp"
#include "schatten/estimators.hpp"
#include "schatten/hard_instances.hpp"
#include "schatten/random.hpp"
#include "schatten/sketch.hpp"
#include "schatten/spectrum.hpp"
#include "schatten/streaming.hpp"

namespace py = pybind11;
using namespace schatten;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

DenseMatrix to_matrix(const Array& a) {
  if (a.ndim() != 2) throw InputError("expected a 2-D array");
  const auto rows = static_cast<std::size_t>(a.shape(0));
  const auto cols = static_cast<std::size_t>(a.shape(1));
  return DenseMatrix(rows, cols, std::vector<double>(a.data(), a.data() + rows * cols));
}

Array to_array(const DenseMatrix& m) {
  Array out({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

EstimatorConfig estimator_config(double p, std::optional<double> q, std::size_t t, std::uint64_t seed,
                                 double row_multiplier, std::optional<std::size_t> rows) {
  EstimatorConfig cfg;
  cfg.p = SchattenOrder(p);
  cfg.q = SchattenOrder(q.value_or(p));
  cfg.t = t;
  cfg.seed = seed;
  cfg.row_multiplier = row_multiplier;
  cfg.rows_override = rows;
  return cfg;
}

py::dict estimate_dict(const EstimateResult& r) {
  py::dict d;
  d["estimate"] = r.estimate;
  d["rows"] = r.rows;
  d["cols"] = r.cols;
  d["predicted_distortion"] = r.predicted_distortion;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Schatten norm sketching: exact norms, sketch estimators, streaming and distortion harness";

  // Translators run newest first, so subclasses are registered after their bases.
  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  auto input = py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConfigurationError>(m, "ConfigurationError", PyExc_ValueError);
  py::register_exception<InvariantViolation>(m, "InvariantViolation", base.ptr());
  py::register_exception<IndexError>(m, "IndexOutOfRange", input.ptr());
  py::register_exception<DegenerateInputError>(m, "DegenerateInputError", input.ptr());

  m.def("singular_values", [](const Array& a) {
    const auto s = svd_spectrum(to_matrix(a));
    return std::vector<double>(s.values().begin(), s.values().end());
  }, py::arg("a"), "Singular values in nonincreasing order");

  m.def("schatten_norm", [](const Array& a, double p) { return schatten_norm(to_matrix(a), SchattenOrder(p)); },
        py::arg("a"), py::arg("p"), "Exact Schatten-p norm; p = inf gives the operator norm");

  m.def("hat_distortion", [](double p, double q, std::size_t n, std::size_t t) {
    return hat_distortion(SchattenOrder(p), SchattenOrder(q), n, t);
  }, py::arg("p"), py::arg("q"), py::arg("n"), py::arg("t"));

  m.def("tilde_distortion", [](double p, double q, std::size_t n, std::size_t t) {
    return tilde_distortion(SchattenOrder(p), SchattenOrder(q), n, t);
  }, py::arg("p"), py::arg("q"), py::arg("n"), py::arg("t"));

  m.def("band_counts", [](std::vector<double> values) {
    const auto b = band_decomposition(SingularSpectrum(std::move(values)));
    std::map<int, std::size_t> counts;
    for (const auto& [i, members] : b.bands) counts[i] = members.size();
    return counts;
  }, py::arg("singular_values"), "Band index -> number of singular values in that band");

  m.def("heavy_tail_split", [](std::vector<double> values, std::size_t t, double p) {
    const auto out = heavy_tail_split(SingularSpectrum(std::move(values)), t, SchattenOrder(p));
    py::dict d;
    d["kind"] = out.kind == SplitKind::kTopHeavy ? "TopHeavy" : "Tail";
    d["blocks"] = out.blocks;
    d["prefix_mass"] = out.prefix_mass;
    d["total_mass"] = out.total_mass;
    d["tail_index"] = out.tail_index ? py::cast(*out.tail_index) : py::none();
    return d;
  }, py::arg("singular_values"), py::arg("t"), py::arg("p"));

  m.def("sketch_matrix", [](std::size_t rows, std::size_t cols, std::uint64_t seed, std::size_t k) {
    const SketchSpec spec = k == 0 ? SketchSpec::dense_gaussian(rows, cols, seed)
                                   : SketchSpec::kwise_gaussian(rows, cols, seed, k);
    return to_array(generate(spec).to_dense());
  }, py::arg("rows"), py::arg("cols"), py::arg("seed") = 0, py::arg("k") = 0,
     "Gaussian sketch with variance 1/rows; k > 0 selects the k-wise truncated construction");

  m.def("one_sided_estimate",
        [](const Array& a, double p, std::optional<double> q, std::size_t t, std::uint64_t seed,
           double row_multiplier, std::optional<std::size_t> rows) {
          return estimate_dict(one_sided_estimate(to_matrix(a), estimator_config(p, q, t, seed, row_multiplier, rows)));
        },
        py::arg("a"), py::arg("p"), py::arg("q") = py::none(), py::arg("t") = 1, py::arg("seed") = 0,
        py::arg("row_multiplier") = 1.0, py::arg("rows") = py::none());

  m.def("two_sided_estimate",
        [](const Array& a, double p, std::optional<double> q, std::size_t t, std::uint64_t seed,
           double row_multiplier, std::optional<std::size_t> rows) {
          return estimate_dict(two_sided_estimate(to_matrix(a), estimator_config(p, q, t, seed, row_multiplier, rows)));
        },
        py::arg("a"), py::arg("p"), py::arg("q") = py::none(), py::arg("t") = 1, py::arg("seed") = 0,
        py::arg("row_multiplier") = 1.0, py::arg("rows") = py::none());

  m.def("single_row_estimate", [](const Array& a, std::uint64_t seed) {
    return single_row_estimate(to_matrix(a), seed);
  }, py::arg("a"), py::arg("seed") = 0);

  m.def("guarantee_window", [](double p, double q, std::size_t n, std::size_t t) {
    const auto w = guarantee_window(SchattenOrder(p), SchattenOrder(q), n, t);
    return py::make_tuple(w.lower, w.upper);
  }, py::arg("p"), py::arg("q"), py::arg("n"), py::arg("t"));

  m.def("measure_distortion",
        [](double p, double q, std::size_t n, std::size_t t, std::uint64_t seed, std::size_t trials, bool two_sided) {
          DistortionConfig cfg;
          cfg.p = SchattenOrder(p);
          cfg.q = SchattenOrder(q);
          cfg.n = n;
          cfg.t = t;
          cfg.seed = seed;
          cfg.trials = trials;
          cfg.side = two_sided ? SketchSide::kTwoSided : SketchSide::kOneSided;
          const auto r = [&] {
            py::gil_scoped_release release;
            return measure_distortion(cfg);
          }();
          py::list ratios;
          for (const auto& x : r.ratios) ratios.append(py::make_tuple(x.family, x.trial, x.ratio));
          py::dict d;
          d["ratios"] = ratios;
          d["min_ratio"] = r.min_ratio;
          d["max_ratio"] = r.max_ratio;
          d["empirical_distortion"] = r.empirical_distortion;
          d["predicted_hat"] = r.predicted_hat;
          d["predicted_tilde"] = r.predicted_tilde;
          return d;
        },
        py::arg("p"), py::arg("q"), py::arg("n"), py::arg("t"), py::arg("seed") = 0, py::arg("trials") = 1,
        py::arg("two_sided") = true);

  py::class_<StreamSketch>(m, "StreamSketch")
      .def(py::init<std::size_t, double, std::uint64_t>(), py::arg("n"), py::arg("D"), py::arg("seed") = 0)
      .def("update", [](StreamSketch& s, std::size_t i, std::size_t j, double delta) { s.update({i, j, delta}); },
           py::arg("i"), py::arg("j"), py::arg("delta"))
      .def("estimate", &StreamSketch::estimate)
      .def("sketch", [](const StreamSketch& s) { return to_array(s.sketch()); })
      .def("space_report", [](const StreamSketch& s) {
        const auto r = s.space_report();
        py::dict d;
        d["sketch_bits"] = r.sketch_bits;
        d["seed_bits"] = r.seed_bits;
        d["total_bits"] = r.total_bits;
        d["budget_bits"] = r.budget_bits;
        return d;
      })
      .def_property_readonly("n", &StreamSketch::n)
      .def_property_readonly("t", &StreamSketch::t)
      .def_property_readonly("update_count", &StreamSketch::update_count);
}
