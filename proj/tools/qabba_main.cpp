#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qabba/bench.hpp"
#include "qabba/metrics.hpp"
#include "qabba/pipeline.hpp"
#include "qabba/storage.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct PipelineFlags {
  double tol = 0.1;
  std::string method = "ga";
  std::size_t k = 8;
  double alpha = 0.4;
  double scl = 1.0;
  std::string norm = "minmax";
  int bits_len = 8;
  int bits_inc = 12;
  bool no_quant = false;
  std::uint64_t seed = 0;
  std::optional<std::int64_t> max_len;
};

void add_pipeline_flags(CLI::App* cmd, PipelineFlags& f) {
  cmd->add_option("--tol", f.tol, "compression tolerance");
  cmd->add_option("--method", f.method, "digitization method")
      ->check(CLI::IsMember({"vq", "ga"}));
  cmd->add_option("--k", f.k, "cluster count (vq)");
  cmd->add_option("--alpha", f.alpha, "aggregation tolerance (ga)");
  cmd->add_option("--scl", f.scl, "length coordinate weight");
  cmd->add_option("--norm", f.norm, "normalization kind")
      ->check(CLI::IsMember({"minmax", "std"}));
  cmd->add_option("--bits-len", f.bits_len, "codebook length row bit width");
  cmd->add_option("--bits-inc", f.bits_inc, "codebook increment row bit width");
  cmd->add_flag("--no-quant", f.no_quant, "keep the codebook in floats");
  cmd->add_option("--seed", f.seed, "clustering seed");
  cmd->add_option("--max-len", f.max_len, "maximum piece length");
}

qabba::PipelineConfig to_config(const PipelineFlags& f) {
  qabba::PipelineConfig cfg;
  cfg.compression.tol = f.tol;
  cfg.compression.max_len = f.max_len;
  cfg.digitization.method =
      f.method == "vq" ? qabba::DigitizeMethod::VQ : qabba::DigitizeMethod::GA;
  cfg.digitization.k = f.k;
  cfg.digitization.alpha = f.alpha;
  cfg.digitization.scl = f.scl;
  cfg.digitization.norm =
      f.norm == "std" ? qabba::NormKind::StdDev : qabba::NormKind::MinMax;
  cfg.digitization.seed = f.seed;
  if (!f.no_quant) {
    cfg.quant = qabba::QuantSpec{f.bits_len, f.bits_inc,
                                 qabba::QuantMode::Asymmetric};
  }
  return cfg;
}

void write_file_atomic(const fs::path& path, const void* data,
                       std::size_t size) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw qabba::Error(qabba::Errc::ParseError,
                         "cannot open " + tmp.string() + " for writing");
    }
    out.write(static_cast<const char*>(data),
              static_cast<std::streamsize>(size));
    if (!out) {
      throw qabba::Error(qabba::Errc::ParseError,
                         "write failed for " + tmp.string());
    }
  }
  fs::rename(tmp, path);
}

void write_file_atomic(const fs::path& path, const std::string& text) {
  write_file_atomic(path, text.data(), text.size());
}

std::vector<std::uint8_t> read_binary(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw qabba::Error(qabba::Errc::ParseError, "cannot open " + path.string());
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Single-column reader: one sample per line.
qabba::Series read_csv_column(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw qabba::Error(qabba::Errc::ParseError, "cannot open " + path.string());
  }
  qabba::Series s;
  s.name = path.stem().string();
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      ++row;
      continue;
    }
    double value = 0.0;
    const char* begin = line.data();
    const char* end = begin + line.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
      throw qabba::Error(qabba::Errc::ParseError,
                         path.string() + ": line " + std::to_string(row + 1) +
                             ": cannot parse '" + line + "'",
                         static_cast<std::ptrdiff_t>(row));
    }
    s.samples.push_back(value);
    ++row;
  }
  return s;
}

bool is_corpus(const fs::path& path) { return path.extension() == ".tsv"; }

std::vector<qabba::Series> read_input(const fs::path& path) {
  if (is_corpus(path)) return qabba::load_tsv(path);
  return {read_csv_column(path)};
}

fs::path indexed_path(const fs::path& base, std::size_t i) {
  fs::path p = base.parent_path() / base.stem();
  p += "_" + std::to_string(i);
  p += base.extension();
  return p;
}

std::string format_series_csv(const qabba::Series& s) {
  std::ostringstream os;
  os.precision(17);
  for (double v : s.samples) os << v << "\n";
  return os.str();
}

double theoretical_ratio(const qabba::SymbolicArtifact& artifact) {
  const qabba::StorageModel model = qabba::model_for(artifact);
  return artifact.quant ? qabba::ratio_qabba(model) : qabba::ratio_abba(model);
}

json summarize(const qabba::SymbolicArtifact& artifact, std::size_t bytes,
               const fs::path& out) {
  return json{{"n", artifact.series_length},
              {"N", artifact.symbols.size()},
              {"k", artifact.codebook.size()},
              {"quantized", artifact.quant.has_value()},
              {"theoretical_ratio", theoretical_ratio(artifact)},
              {"actual_bytes", bytes},
              {"output", out.string()}};
}

json report_to_json(const qabba::MetricReport& r) {
  return json{{"mse", r.mse},
              {"rmse", r.rmse},
              {"euclidean", r.euclidean},
              {"dtw", r.dtw},
              {"euclidean_diff", r.euclidean_diff},
              {"dtw_diff", r.dtw_diff},
              {"truncated", r.truncated}};
}

std::string report_to_csv(const json& j) {
  std::ostringstream os;
  os << "metric,value\n";
  os.precision(17);
  for (const auto& [key, value] : j.items()) {
    os << key << "," << value.dump() << "\n";
  }
  return os.str();
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
  } else {
    write_file_atomic(out, text);
  }
}

std::vector<double> parse_double_list(const std::string& csv,
                                      const char* what) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw qabba::Error(qabba::Errc::ParseError,
                         std::string("bad ") + what + " value '" + item + "'");
    }
  }
  return out;
}

int cmd_compress(const fs::path& input, const fs::path& output,
                 const PipelineFlags& flags) {
  const std::vector<qabba::Series> series = read_input(input);
  const qabba::PipelineConfig cfg = to_config(flags);
  const std::vector<qabba::SymbolicArtifact> artifacts =
      qabba::symbolize_multichannel(series, cfg);

  json summaries = json::array();
  for (std::size_t i = 0; i < artifacts.size(); ++i) {
    const fs::path out =
        artifacts.size() == 1 ? output : indexed_path(output, i);
    const std::vector<std::uint8_t> bytes = qabba::encode(artifacts[i]);
    write_file_atomic(out, bytes.data(), bytes.size());
    summaries.push_back(summarize(artifacts[i], bytes.size(), out));
  }
  std::cout << (summaries.size() == 1 ? summaries[0] : summaries).dump(2)
            << "\n";
  return 0;
}

int cmd_reconstruct(const fs::path& input, const fs::path& output,
                    const std::string& original, bool strict) {
  const qabba::SymbolicArtifact artifact = qabba::decode(read_binary(input));
  const qabba::Series rebuilt = qabba::reconstruct(artifact);
  write_file_atomic(output, format_series_csv(rebuilt));
  json j{{"samples", rebuilt.samples.size()}, {"output", output.string()}};
  if (!original.empty()) {
    const qabba::Series src = read_csv_column(original);
    j["mse"] = qabba::mse(src, rebuilt,
                          strict ? qabba::LengthPolicy::Strict
                                 : qabba::LengthPolicy::Lenient);
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_evaluate(const fs::path& original, const fs::path& artifact_path,
                 bool strict, const std::string& format,
                 const std::string& out) {
  const std::vector<qabba::Series> series = read_input(original);
  const qabba::LengthPolicy policy =
      strict ? qabba::LengthPolicy::Strict : qabba::LengthPolicy::Lenient;

  json channels = json::array();
  double mse_sum = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const fs::path path = series.size() == 1
                              ? artifact_path
                              : indexed_path(artifact_path, i);
    const qabba::SymbolicArtifact artifact = qabba::decode(read_binary(path));
    const qabba::Series rebuilt = qabba::reconstruct(artifact);
    const qabba::MetricReport r = qabba::metric_report(series[i], rebuilt, policy);
    json entry = report_to_json(r);
    entry["theoretical_ratio"] = theoretical_ratio(artifact);
    entry["artifact"] = path.string();
    channels.push_back(entry);
    mse_sum += r.mse;
  }

  json result;
  if (channels.size() == 1) {
    result = channels[0];
  } else {
    result = json{{"channels", channels},
                  {"mean_mse", mse_sum / static_cast<double>(channels.size())}};
  }
  if (format == "csv") {
    if (channels.size() == 1) {
      emit(report_to_csv(result), out);
    } else {
      std::ostringstream os;
      os << "channel,mse,rmse,euclidean,dtw,euclidean_diff,dtw_diff\n";
      os.precision(17);
      for (std::size_t i = 0; i < channels.size(); ++i) {
        const json& c = channels[i];
        os << i << "," << c["mse"].dump() << "," << c["rmse"].dump() << ","
           << c["euclidean"].dump() << "," << c["dtw"].dump() << ","
           << c["euclidean_diff"].dump() << "," << c["dtw_diff"].dump()
           << "\n";
      }
      emit(os.str(), out);
    }
  } else {
    emit(result.dump(2) + "\n", out);
  }
  return 0;
}

int cmd_sweep(const std::string& corpus, std::size_t synth_n,
              std::size_t synth_count, const PipelineFlags& flags,
              const std::string& bits_csv, const std::string& row_name,
              const std::string& format, const std::string& out) {
  std::vector<qabba::Series> series;
  if (!corpus.empty()) {
    series = read_input(corpus);
  } else {
    series = qabba::synth_gaussian(synth_n, synth_count, flags.seed);
  }
  std::vector<int> bits;
  for (double b : parse_double_list(bits_csv, "bits")) {
    bits.push_back(static_cast<int>(b));
  }
  const qabba::QuantRow row =
      row_name == "len" ? qabba::QuantRow::Len : qabba::QuantRow::Inc;
  const std::vector<qabba::SweepRow> rows =
      qabba::bitwidth_sweep(series, to_config(flags), bits, row);

  if (format == "json") {
    json j = json::array();
    for (const auto& r : rows) {
      j.push_back({{"bits", r.bits}, {"mean_mse", r.mean_mse}});
    }
    emit(json{{"row", row_name}, {"results", j}}.dump(2) + "\n", out);
  } else {
    emit(qabba::to_csv(rows), out);
  }
  return 0;
}

qabba::ProfileMatrix read_matrix_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw qabba::Error(qabba::Errc::ParseError, "cannot open " + path.string());
  }
  qabba::ProfileMatrix m;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      ++row;
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (row == 0 && cells.size() > 1 && cells[0] == "algorithm") {
      for (std::size_t i = 1; i < cells.size(); ++i) {
        m.problems.push_back(cells[i]);
      }
      ++row;
      continue;
    }
    if (cells.size() < 2) {
      throw qabba::Error(qabba::Errc::ParseError,
                         "matrix row " + std::to_string(row) +
                             " needs a name and at least one value");
    }
    m.algorithms.push_back(cells[0]);
    std::vector<double> values;
    for (std::size_t i = 1; i < cells.size(); ++i) {
      if (cells[i] == "inf" || cells[i] == "fail") {
        values.push_back(qabba::kFailure);
      } else {
        try {
          values.push_back(std::stod(cells[i]));
        } catch (const std::exception&) {
          throw qabba::Error(qabba::Errc::ParseError,
                             "matrix row " + std::to_string(row) +
                                 ": cannot parse '" + cells[i] + "'");
        }
      }
    }
    m.values.push_back(std::move(values));
    ++row;
  }
  return m;
}

qabba::ProfileMatrix measure_methods(const std::vector<qabba::Series>& series,
                                     const PipelineFlags& flags,
                                     const std::vector<std::string>& methods,
                                     const std::string& metric) {
  qabba::ProfileMatrix m;
  m.algorithms = methods;
  for (std::size_t i = 0; i < series.size(); ++i) {
    m.problems.push_back(series[i].name.empty() ? std::to_string(i)
                                                : series[i].name);
  }
  for (const std::string& method : methods) {
    PipelineFlags f = flags;
    if (method == "vq" || method == "qvq") f.method = "vq";
    if (method == "ga" || method == "qga") f.method = "ga";
    f.no_quant = method == "vq" || method == "ga";
    const qabba::PipelineConfig cfg = to_config(f);
    std::vector<double> rowvals;
    for (const qabba::Series& s : series) {
      try {
        const qabba::Series rebuilt = qabba::reconstruct(qabba::symbolize(s, cfg));
        if (metric == "dtw") {
          rowvals.push_back(qabba::dtw(s, rebuilt));
        } else if (metric == "euclidean") {
          rowvals.push_back(
              qabba::euclidean(s, rebuilt, qabba::LengthPolicy::Lenient));
        } else {
          rowvals.push_back(qabba::mse(s, rebuilt, qabba::LengthPolicy::Lenient));
        }
      } catch (const qabba::Error&) {
        rowvals.push_back(qabba::kFailure);  // recorded failure
      }
    }
    m.values.push_back(std::move(rowvals));
  }
  return m;
}

int cmd_profile(const std::string& corpus, const std::string& matrix_file,
                const PipelineFlags& flags, const std::string& methods_csv,
                const std::string& metric, const std::string& thetas_csv,
                const std::string& format, const std::string& out) {
  qabba::ProfileMatrix matrix;
  if (!matrix_file.empty()) {
    matrix = read_matrix_csv(matrix_file);
  } else if (!corpus.empty()) {
    std::vector<std::string> methods;
    std::stringstream ss(methods_csv);
    std::string item;
    while (std::getline(ss, item, ',')) methods.push_back(item);
    matrix = measure_methods(read_input(corpus), flags, methods, metric);
  } else {
    throw qabba::Error(qabba::Errc::EmptyInput,
                       "profile needs --matrix or a corpus");
  }

  const auto ratios = qabba::performance_ratios(matrix);
  std::vector<double> thetas;
  if (!thetas_csv.empty()) {
    thetas = parse_double_list(thetas_csv, "theta");
  } else {
    double max_finite = 1.0;
    for (const auto& rowv : ratios) {
      for (double r : rowv) {
        if (std::isfinite(r)) max_finite = std::max(max_finite, r);
      }
    }
    const double top = max_finite * 1.05 + 1e-9;
    for (int i = 0; i <= 100; ++i) {
      thetas.push_back(1.0 + (top - 1.0) * static_cast<double>(i) / 100.0);
    }
  }
  const qabba::ProfileCurve curve =
      qabba::performance_profile(ratios, std::move(thetas), matrix.algorithms);

  if (format == "json") {
    json j{{"thetas", curve.thetas},
           {"algorithms", curve.algorithms},
           {"rho", curve.rho}};
    emit(j.dump(2) + "\n", out);
  } else {
    emit(qabba::to_csv(curve), out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symbolic time-series approximation with a quantized codebook"};
  app.require_subcommand(1);

  PipelineFlags flags;

  auto* compress =
      app.add_subcommand("compress", "series -> .qabba container(s)");
  std::string in_path, out_path;
  compress->add_option("input", in_path,
                       "single-column .csv or .tsv corpus (label column first)")
      ->required();
  compress->add_option("output", out_path, ".qabba path")->required();
  add_pipeline_flags(compress, flags);

  auto* reconstruct =
      app.add_subcommand("reconstruct", ".qabba container -> series csv");
  std::string rec_in, rec_out, rec_original;
  bool strict_lengths = false;
  reconstruct->add_option("input", rec_in, ".qabba path")->required();
  reconstruct->add_option("output", rec_out, "output csv path")->required();
  reconstruct->add_option("--original", rec_original,
                          "source csv; adds a round-trip mse to the summary");
  reconstruct->add_option("--strict-lengths", strict_lengths,
                          "error on length mismatch instead of truncating "
                          "(default false)");

  auto* evaluate =
      app.add_subcommand("evaluate", "reconstruction quality report");
  std::string eval_original, eval_artifact, eval_format = "json", eval_out;
  evaluate->add_option("original", eval_original, "source csv/tsv")->required();
  evaluate->add_option("artifact", eval_artifact, ".qabba path")->required();
  evaluate->add_option("--strict-lengths", strict_lengths,
                       "error on length mismatch instead of truncating "
                       "(default false)");
  evaluate->add_option("--format", eval_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  evaluate->add_option("--out", eval_out, "write here instead of stdout");

  auto* sweep = app.add_subcommand(
      "sweep", "reconstruction error as one codebook row's bit width varies");
  std::string sweep_corpus, sweep_bits = "4,6,8,12,16,32", sweep_row = "inc";
  std::string sweep_format = "csv", sweep_out;
  std::size_t synth_n = 5000, synth_count = 100;
  sweep->add_option("corpus", sweep_corpus,
                    "csv/tsv input; omitted: synthetic gaussian corpus");
  sweep->add_option("--bits", sweep_bits, "comma-separated bit widths");
  sweep->add_option("--row", sweep_row, "which codebook row to quantize")
      ->check(CLI::IsMember({"len", "inc"}));
  sweep->add_option("--synth-n", synth_n, "synthetic series length");
  sweep->add_option("--synth-count", synth_count, "synthetic series count");
  sweep->add_option("--format", sweep_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  sweep->add_option("--out", sweep_out, "write here instead of stdout");
  add_pipeline_flags(sweep, flags);

  auto* profile =
      app.add_subcommand("profile", "performance profile curves");
  std::string prof_corpus, prof_matrix, prof_methods = "vq,ga,qvq,qga";
  std::string prof_metric = "mse", prof_thetas, prof_format = "csv", prof_out;
  profile->add_option("corpus", prof_corpus, "csv/tsv input to run methods on");
  profile->add_option("--matrix", prof_matrix,
                      "measurements csv: algorithm,value,value,...");
  profile->add_option("--methods", prof_methods,
                      "comma list of vq,ga,qvq,qga (corpus mode)");
  profile->add_option("--metric", prof_metric, "mse, dtw or euclidean")
      ->check(CLI::IsMember({"mse", "dtw", "euclidean"}));
  profile->add_option("--thetas", prof_thetas,
                      "comma-separated grid; default: auto up to the max ratio");
  profile->add_option("--format", prof_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  profile->add_option("--out", prof_out, "write here instead of stdout");
  add_pipeline_flags(profile, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // 2 for usage errors, 0 for --help
  }

  try {
    if (compress->parsed()) {
      return cmd_compress(in_path, out_path, flags);
    }
    if (reconstruct->parsed()) {
      return cmd_reconstruct(rec_in, rec_out, rec_original, strict_lengths);
    }
    if (evaluate->parsed()) {
      return cmd_evaluate(eval_original, eval_artifact, strict_lengths,
                          eval_format, eval_out);
    }
    if (sweep->parsed()) {
      return cmd_sweep(sweep_corpus, synth_n, synth_count, flags, sweep_bits,
                       sweep_row, sweep_format, sweep_out);
    }
    if (profile->parsed()) {
      return cmd_profile(prof_corpus, prof_matrix, flags, prof_methods,
                         prof_metric, prof_thetas, prof_format, prof_out);
    }
  } catch (const qabba::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
