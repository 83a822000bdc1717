#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "qabba/bench.hpp"
#include "qabba/metrics.hpp"
#include "qabba/pipeline.hpp"
#include "qabba/storage.hpp"

namespace py = pybind11;
using namespace qabba;

namespace {

DigitizeMethod parse_method(const std::string& s) {
  if (s == "vq") return DigitizeMethod::VQ;
  if (s == "ga") return DigitizeMethod::GA;
  throw Error(Errc::InvalidRange, "method must be 'vq' or 'ga'");
}

NormKind parse_norm(const std::string& s) {
  if (s == "minmax") return NormKind::MinMax;
  if (s == "std") return NormKind::StdDev;
  throw Error(Errc::InvalidRange, "norm must be 'minmax' or 'std'");
}

QuantMode parse_mode(const std::string& s) {
  if (s == "asymmetric") return QuantMode::Asymmetric;
  if (s == "symmetric") return QuantMode::Symmetric;
  throw Error(Errc::InvalidRange, "mode must be 'asymmetric' or 'symmetric'");
}

PipelineConfig build_config(double tol, const std::string& method,
                            std::size_t k, double alpha, double scl,
                            const std::string& norm, std::uint64_t seed,
                            bool quantize, int bits_len, int bits_inc,
                            const std::string& mode,
                            std::optional<std::int64_t> max_len) {
  PipelineConfig cfg;
  cfg.compression.tol = tol;
  cfg.compression.max_len = max_len;
  cfg.digitization.method = parse_method(method);
  cfg.digitization.k = k;
  cfg.digitization.alpha = alpha;
  cfg.digitization.scl = scl;
  cfg.digitization.norm = parse_norm(norm);
  cfg.digitization.seed = seed;
  if (quantize) {
    cfg.quant = QuantSpec{bits_len, bits_inc, parse_mode(mode)};
  }
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_qabba, m) {
  m.doc() = "Symbolic time-series approximation with a quantized codebook";

  py::register_exception<Error>(m, "QabbaError");

  py::class_<Codebook>(m, "Codebook")
      .def_readonly("lens", &Codebook::lens)
      .def_readonly("incs", &Codebook::incs)
      .def_readonly("counts", &Codebook::counts)
      .def("__len__", &Codebook::size);

  py::class_<SymbolicArtifact>(m, "Artifact")
      .def_readonly("initial_values", &SymbolicArtifact::initial_values)
      .def_readonly("symbols", &SymbolicArtifact::symbols)
      .def_readonly("codebook", &SymbolicArtifact::codebook)
      .def_readonly("series_length", &SymbolicArtifact::series_length)
      .def_property_readonly(
          "quantized",
          [](const SymbolicArtifact& a) { return a.quant.has_value(); })
      .def("__repr__", [](const SymbolicArtifact& a) {
        return "<Artifact N=" + std::to_string(a.symbols.size()) +
               " k=" + std::to_string(a.codebook.size()) +
               (a.quant ? " quantized>" : ">");
      });

  m.def(
      "symbolize",
      [](const std::vector<double>& samples, double tol,
         const std::string& method, std::size_t k, double alpha, double scl,
         const std::string& norm, std::uint64_t seed, bool quantize,
         int bits_len, int bits_inc, const std::string& mode,
         std::optional<std::int64_t> max_len) {
        Series s{samples, "python"};
        return symbolize(s, build_config(tol, method, k, alpha, scl, norm,
                                         seed, quantize, bits_len, bits_inc,
                                         mode, max_len));
      },
      py::arg("samples"), py::arg("tol") = 0.1, py::arg("method") = "ga",
      py::arg("k") = 8, py::arg("alpha") = 0.4, py::arg("scl") = 1.0,
      py::arg("norm") = "minmax", py::arg("seed") = 0,
      py::arg("quantize") = true, py::arg("bits_len") = 8,
      py::arg("bits_inc") = 12, py::arg("mode") = "asymmetric",
      py::arg("max_len") = std::nullopt,
      "Compress a series into symbols plus a (quantized) codebook.");

  m.def(
      "reconstruct",
      [](const SymbolicArtifact& a) { return reconstruct(a).samples; },
      py::arg("artifact"), "Rebuild the approximate series from an artifact.");

  m.def(
      "encode",
      [](const SymbolicArtifact& a) {
        const std::vector<std::uint8_t> bytes = encode(a);
        return py::bytes(reinterpret_cast<const char*>(bytes.data()),
                         bytes.size());
      },
      py::arg("artifact"), "Serialize an artifact to the container format.");

  m.def(
      "decode",
      [](const py::bytes& blob) {
        std::string_view view = blob;
        return decode(std::span<const std::uint8_t>(
            reinterpret_cast<const std::uint8_t*>(view.data()), view.size()));
      },
      py::arg("blob"), "Parse a container back into an artifact.");

  m.def(
      "mse",
      [](const std::vector<double>& a, const std::vector<double>& b,
         bool strict) {
        return mse(Series{a, "a"}, Series{b, "b"},
                   strict ? LengthPolicy::Strict : LengthPolicy::Lenient);
      },
      py::arg("a"), py::arg("b"), py::arg("strict") = true);

  m.def(
      "dtw",
      [](const std::vector<double>& a, const std::vector<double>& b) {
        return dtw(Series{a, "a"}, Series{b, "b"});
      },
      py::arg("a"), py::arg("b"));

  m.def(
      "metric_report",
      [](const std::vector<double>& a, const std::vector<double>& b,
         bool strict) {
        const MetricReport r =
            metric_report(Series{a, "a"}, Series{b, "b"},
                          strict ? LengthPolicy::Strict : LengthPolicy::Lenient);
        py::dict d;
        d["mse"] = r.mse;
        d["rmse"] = r.rmse;
        d["euclidean"] = r.euclidean;
        d["dtw"] = r.dtw;
        d["euclidean_diff"] = r.euclidean_diff;
        d["dtw_diff"] = r.dtw_diff;
        d["truncated"] = r.truncated;
        return d;
      },
      py::arg("a"), py::arg("b"), py::arg("strict") = true);

  m.def(
      "ratio_abba",
      [](std::size_t n_symbols, std::size_t k, std::size_t n, std::size_t p,
         int b_t, int b_len, int b_inc, int b_sym) {
        StorageModel model;
        model.b_t = b_t;
        model.b_len = b_len;
        model.b_inc = b_inc;
        model.b_sym = b_sym;
        model.p = p;
        model.n_symbols = n_symbols;
        model.k = k;
        model.n = n;
        return ratio_abba(model);
      },
      py::arg("n_symbols"), py::arg("k"), py::arg("n"), py::arg("p") = 1,
      py::arg("b_t") = 32, py::arg("b_len") = 32, py::arg("b_inc") = 32,
      py::arg("b_sym") = 8);

  m.def(
      "ratio_qabba",
      [](std::size_t n_symbols, std::size_t k, std::size_t n, std::size_t p,
         int b_t, int b_len, int b_inc, int b_s, int b_sym) {
        StorageModel model;
        model.b_t = b_t;
        model.b_len = b_len;
        model.b_inc = b_inc;
        model.b_s = b_s;
        model.b_sym = b_sym;
        model.p = p;
        model.n_symbols = n_symbols;
        model.k = k;
        model.n = n;
        return ratio_qabba(model);
      },
      py::arg("n_symbols"), py::arg("k"), py::arg("n"), py::arg("p") = 1,
      py::arg("b_t") = 32, py::arg("b_len") = 8, py::arg("b_inc") = 12,
      py::arg("b_s") = 32, py::arg("b_sym") = 8);

  m.def("render_symbols",
        [](const std::vector<std::uint32_t>& symbols) {
          return render_symbols(symbols);
        },
        py::arg("symbols"));

  m.def(
      "synth_gaussian",
      [](std::size_t n, std::size_t count, std::uint64_t seed) {
        std::vector<std::vector<double>> out;
        for (Series& s : synth_gaussian(n, count, seed)) {
          out.push_back(std::move(s.samples));
        }
        return out;
      },
      py::arg("n"), py::arg("count"), py::arg("seed") = 0);

  m.def(
      "performance_profile",
      [](const std::vector<std::vector<double>>& values,
         std::vector<double> thetas, std::vector<std::string> algorithms) {
        ProfileMatrix matrix;
        matrix.values = values;
        matrix.algorithms = algorithms;
        const auto ratios = performance_ratios(matrix);
        const ProfileCurve curve =
            performance_profile(ratios, std::move(thetas), std::move(algorithms));
        py::dict d;
        d["thetas"] = curve.thetas;
        d["rho"] = curve.rho;
        d["algorithms"] = curve.algorithms;
        return d;
      },
      py::arg("values"), py::arg("thetas"),
      py::arg("algorithms") = std::vector<std::string>{});

  m.attr("__version__") = "0.1.0";
}
