#include "qabba/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "qabba/metrics.hpp"
#include "qabba/quantization.hpp"
#include "qabba/rng.hpp"

namespace qabba {

namespace {

// Runs fn(i) for i in [0, count), spread over at most `threads` workers.
// Workers own disjoint index ranges, so writes to per-index slots are safe
// and the result is independent of scheduling.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn) {
  threads = std::max<unsigned>(
      1, static_cast<unsigned>(std::min<std::size_t>(threads, count)));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  const std::size_t chunk = (count + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t]() {
      const std::size_t lo = t * chunk;
      const std::size_t hi = std::min(count, lo + chunk);
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw Error(Errc::ParseError,
                "row " + std::to_string(row) + ", column " +
                    std::to_string(col) + ": cannot parse '" + cell + "'",
                static_cast<std::ptrdiff_t>(row));
  }
  return value;
}

}  // namespace

std::vector<std::vector<double>> performance_ratios(const ProfileMatrix& m) {
  if (m.values.empty() || m.values.front().empty()) {
    throw Error(Errc::EmptyInput, "empty measurement matrix");
  }
  const std::size_t algs = m.values.size();
  const std::size_t probs = m.values.front().size();
  for (std::size_t i = 0; i < algs; ++i) {
    if (m.values[i].size() != probs) {
      throw Error(Errc::ShapeMismatch, "ragged measurement matrix");
    }
    for (double v : m.values[i]) {
      if (std::isnan(v) || v < 0.0) {
        throw Error(Errc::InvalidRange,
                    "measurements must be nonnegative (or +inf for failure)");
      }
    }
  }

  std::vector<std::vector<double>> ratios(algs, std::vector<double>(probs));
  for (std::size_t j = 0; j < probs; ++j) {
    double best = kFailure;
    for (std::size_t i = 0; i < algs; ++i) {
      best = std::min(best, m.values[i][j]);
    }
    if (best == kFailure) {
      throw Error(Errc::AllZeroColumn,
                  "problem " + std::to_string(j) +
                      " has no successful measurement",
                  static_cast<std::ptrdiff_t>(j));
    }
    for (std::size_t i = 0; i < algs; ++i) {
      const double v = m.values[i][j];
      if (best == 0.0) {
        // Every exact zero ties at the optimum; anything else is
        // unboundedly worse than a zero-cost best.
        ratios[i][j] = v == 0.0 ? 1.0 : kFailure;
      } else {
        ratios[i][j] = v / best;
      }
    }
  }
  return ratios;
}

ProfileCurve performance_profile(const std::vector<std::vector<double>>& ratios,
                                 std::vector<double> thetas,
                                 std::vector<std::string> algorithms) {
  if (ratios.empty() || ratios.front().empty()) {
    throw Error(Errc::EmptyInput, "empty ratio matrix");
  }
  if (thetas.empty()) {
    throw Error(Errc::EmptyInput, "no thetas");
  }
  for (std::size_t t = 0; t < thetas.size(); ++t) {
    if (!(thetas[t] >= 1.0)) {
      throw Error(Errc::InvalidRange, "thetas must be >= 1");
    }
    if (t > 0 && !(thetas[t] > thetas[t - 1])) {
      throw Error(Errc::InvalidRange, "thetas must be strictly increasing");
    }
  }
  const std::size_t probs = ratios.front().size();
  ProfileCurve curve;
  curve.thetas = std::move(thetas);
  curve.algorithms = std::move(algorithms);
  curve.rho.reserve(ratios.size());
  for (const auto& row : ratios) {
    if (row.size() != probs) {
      throw Error(Errc::ShapeMismatch, "ragged ratio matrix");
    }
    std::vector<double> rho;
    rho.reserve(curve.thetas.size());
    for (double theta : curve.thetas) {
      std::size_t hits = 0;
      for (double r : row) {
        if (r < theta) ++hits;  // strict; failures (+inf) never count
      }
      rho.push_back(static_cast<double>(hits) / static_cast<double>(probs));
    }
    curve.rho.push_back(std::move(rho));
  }
  return curve;
}

std::vector<Series> load_tsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::ParseError, "cannot open " + path.string());
  }
  std::vector<Series> out;
  std::string line;
  std::size_t row = 0;
  const std::string stem = path.stem().string();
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      ++row;
      continue;
    }
    Series s;
    std::size_t col = 0;
    std::size_t start = 0;
    while (start <= line.size()) {
      std::size_t tab = line.find('\t', start);
      if (tab == std::string::npos) tab = line.size();
      const std::string cell = line.substr(start, tab - start);
      if (col == 0) {
        // first column is the class label; dropped
      } else if (cell == "NaN" || cell == "nan" || cell == "NA" ||
                 cell.empty()) {
        s.samples.push_back(std::numeric_limits<double>::quiet_NaN());
      } else {
        s.samples.push_back(parse_cell(cell, row, col));
      }
      ++col;
      start = tab + 1;
      if (tab == line.size()) break;
    }
    while (!s.samples.empty() && std::isnan(s.samples.back())) {
      s.samples.pop_back();  // trailing NaN padding
    }
    for (std::size_t i = 0; i < s.samples.size(); ++i) {
      if (std::isnan(s.samples[i])) {
        throw Error(Errc::ParseError,
                    "row " + std::to_string(row) +
                        " has an interior missing value at column " +
                        std::to_string(i + 1),
                    static_cast<std::ptrdiff_t>(row));
      }
    }
    s.name = stem + "[" + std::to_string(row) + "]";
    out.push_back(std::move(s));
    ++row;
  }
  return out;
}

std::vector<Series> synth_gaussian(std::size_t n, std::size_t count,
                                   std::uint64_t seed) {
  if (n < 2 || count == 0) {
    throw Error(Errc::InvalidRange, "need n >= 2 and count >= 1");
  }
  Rng rng(seed);
  std::vector<Series> out;
  out.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    Series s;
    s.samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      s.samples.push_back(rng.normal());
    }
    s.name = "synth[" + std::to_string(c) + "]";
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<SweepRow> bitwidth_sweep(std::span<const Series> corpus,
                                     const PipelineConfig& cfg,
                                     std::span<const int> bits, QuantRow row) {
  if (corpus.empty() || bits.empty()) {
    throw Error(Errc::EmptyInput, "need series and bit widths");
  }
  PipelineConfig base = cfg;
  base.quant.reset();  // the sweep quantizes one row by hand

  std::vector<std::vector<double>> per_series(corpus.size());
  parallel_for(corpus.size(), thread_budget(), [&](std::size_t i) {
    const SymbolicArtifact artifact = symbolize(corpus[i], base);
    std::vector<double>& errs = per_series[i];
    errs.reserve(bits.size());
    for (int width : bits) {
      SymbolicArtifact tweaked = artifact;
      auto& values = row == QuantRow::Len ? tweaked.codebook.lens
                                          : tweaked.codebook.incs;
      const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
      const QuantParams params =
          make_params(*lo, *hi, width, QuantMode::Asymmetric);
      for (double& v : values) {
        v = dequantize(quantize(v, params), params);
      }
      const Series rebuilt = reconstruct(tweaked);
      errs.push_back(mse(corpus[i], rebuilt, LengthPolicy::Lenient));
    }
  });

  std::vector<SweepRow> rows;
  rows.reserve(bits.size());
  for (std::size_t b = 0; b < bits.size(); ++b) {
    double total = 0.0;
    for (const auto& errs : per_series) total += errs[b];
    rows.push_back({bits[b], total / static_cast<double>(corpus.size())});
  }
  return rows;
}

unsigned thread_budget() {
  if (const char* env = std::getenv("QABBA_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
    return 1;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "bits,mean_mse\n";
  os.precision(17);
  for (const SweepRow& r : rows) {
    os << r.bits << "," << r.mean_mse << "\n";
  }
  return os.str();
}

std::string to_csv(const ProfileCurve& curve) {
  std::ostringstream os;
  os << "algorithm,theta,rho\n";
  os.precision(17);
  for (std::size_t i = 0; i < curve.rho.size(); ++i) {
    const std::string name = i < curve.algorithms.size()
                                 ? curve.algorithms[i]
                                 : "alg" + std::to_string(i);
    for (std::size_t t = 0; t < curve.thetas.size(); ++t) {
      os << name << "," << curve.thetas[t] << "," << curve.rho[i][t] << "\n";
    }
  }
  return os.str();
}

}  // namespace qabba
