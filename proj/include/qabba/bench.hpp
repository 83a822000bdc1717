#pragma once

#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "qabba/pipeline.hpp"
#include "qabba/types.hpp"

namespace qabba {

/// Sentinel recorded in a ProfileMatrix when an algorithm fails on a
/// problem; such entries never count toward any profile curve.
inline constexpr double kFailure = std::numeric_limits<double>::infinity();

/// Nonnegative measurements, smaller is better: values[i][j] is algorithm
/// i's score on problem j (kFailure where it failed).
struct ProfileMatrix {
  std::vector<std::vector<double>> values;
  std::vector<std::string> algorithms;
  std::vector<std::string> problems;
};

/// r[i][j] = values[i][j] / min_i values[i][j]. Failures stay +inf. A
/// column whose minimum is 0 gives ratio 1 to every exact zero (tie at the
/// optimum) and +inf to the rest. A column where every algorithm failed
/// has no usable measurement and raises AllZeroColumn.
std::vector<std::vector<double>> performance_ratios(const ProfileMatrix& m);

struct ProfileCurve {
  std::vector<double> thetas;
  std::vector<std::vector<double>> rho;  // rho[algorithm][theta] in [0, 1]
  std::vector<std::string> algorithms;
};

/// rho_i(theta) = |{j : r[i][j] < theta}| / #problems (strict <), for each
/// theta in the strictly increasing grid (all >= 1). Nondecreasing in
/// theta; for theta beyond the largest finite ratio it reaches the
/// fraction of problems where the algorithm did not fail.
ProfileCurve performance_profile(const std::vector<std::vector<double>>& ratios,
                                 std::vector<double> thetas,
                                 std::vector<std::string> algorithms = {});

/// Tab-separated corpus reader: one series per row, first column is a
/// class label and is dropped, trailing NaN padding is trimmed. Malformed
/// cells raise ParseError with the row and column.
std::vector<Series> load_tsv(const std::filesystem::path& path);

/// `count` i.i.d. standard normal series of length n from the seeded
/// deterministic generator; a fixed seed reproduces identical values.
std::vector<Series> synth_gaussian(std::size_t n, std::size_t count,
                                   std::uint64_t seed);

enum class QuantRow { Len, Inc };

struct SweepRow {
  int bits;
  double mean_mse;
};

/// For each bit width: symbolize every series unquantized, requantize only
/// the chosen codebook row at that width (asymmetric grid over the row's
/// own range), reconstruct, and average the MSE against the source
/// (lenient lengths, since low-width length grids can change the
/// reconstruction length). Series are processed in parallel up to the
/// QABBA_THREADS budget; aggregation is order-independent.
std::vector<SweepRow> bitwidth_sweep(std::span<const Series> corpus,
                                     const PipelineConfig& cfg,
                                     std::span<const int> bits, QuantRow row);

/// Thread budget for corpus work: QABBA_THREADS when set (clamped to
/// >= 1), otherwise the hardware concurrency.
unsigned thread_budget();

std::string to_csv(const std::vector<SweepRow>& rows);
std::string to_csv(const ProfileCurve& curve);

}  // namespace qabba
