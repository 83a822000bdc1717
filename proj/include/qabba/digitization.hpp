#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "qabba/types.hpp"

namespace qabba {

struct Point2 {
  double x = 0.0;  // scaled length coordinate
  double y = 0.0;  // increment coordinate
};

/// Per-coordinate affine transform applied before clustering:
/// x = scl * (len - shift_len) / sigma_len, y = (inc - shift_inc) / sigma_inc.
/// MinMax uses shift = midpoint and sigma = half-range so values land in
/// [-1, 1]; StdDev uses shift = 0 and sigma = sample standard deviation.
/// A degenerate (all-equal) coordinate falls back to sigma = 1 with
/// shift = the common value.
struct NormalizationState {
  double sigma_len = 1.0;
  double sigma_inc = 1.0;
  double shift_len = 0.0;
  double shift_inc = 0.0;
  double scl = 1.0;
  NormKind kind = NormKind::MinMax;
};

std::pair<std::vector<Point2>, NormalizationState> normalize(
    std::span<const Piece> pieces, double scl, NormKind kind);

/// Symbol alphabet: per-cluster mean pieces in original (unnormalized)
/// units, plus the cluster cardinalities. Normalization only decides
/// membership; the stored centers are plain member means of the pieces.
struct Codebook {
  std::vector<double> lens;          // k entries
  std::vector<double> incs;          // k entries
  std::vector<std::size_t> counts;   // k entries, sums to N
  std::size_t size() const { return lens.size(); }
};

struct ClusterResult {
  std::vector<std::uint32_t> labels;  // one per input point
  std::vector<Point2> centers;        // k centers in the points' space
};

/// k-means++ seeded vector quantization, Lloyd iterations to convergence or
/// a 300-iteration cap. Nearest-center ties resolve to the lowest index; a
/// cluster left empty by an update is re-seeded with the point farthest
/// from its assigned center. Requires k <= number of distinct points.
ClusterResult digitize_vq(std::span<const Point2> points, std::size_t k,
                          std::uint64_t seed);

/// Greedy aggregation: points are swept in sorted order (first coordinate,
/// ties by second); the first unassigned point seeds a group and every
/// later unassigned point within Euclidean distance alpha of that seed
/// joins it. Centers are group means, so SSE <= alpha^2 * (N - k).
ClusterResult digitize_ga(std::span<const Point2> points, double alpha);

/// Cluster labels are the symbols; the mapping is the identity.
std::vector<std::uint32_t> assign_symbols(std::span<const std::uint32_t> labels);

/// Sum over points of the squared Euclidean distance to the labeled center.
double sse(std::span<const Point2> points, std::span<const std::uint32_t> labels,
           std::span<const Point2> centers);

/// Looks each symbol up in the codebook, yielding pieces with real-valued
/// (mean) lengths.
std::vector<ApproxPiece> inverse_digitize(std::span<const std::uint32_t> symbols,
                                          const Codebook& codebook);

/// Snaps real lengths back to integers while carrying the running rounding
/// error forward: len_j = round(real_j + e), e = (real_j + e) - len_j, with
/// round = nearest, ties away from zero. Lengths are clamped to >= 1 with
/// the carry absorbing the adjustment. When every real length is >= 1 the
/// cumulative rounded length stays within 0.5 of the cumulative real length
/// at every prefix. Increments pass through untouched.
std::vector<Piece> round_lengths_with_carry(std::span<const ApproxPiece> approx);

struct DigitizeResult {
  std::vector<std::uint32_t> symbols;
  Codebook codebook;
  NormalizationState norm;
};

/// Full digitization stage: normalize, cluster with the configured method,
/// then build the codebook as member means in original units.
DigitizeResult digitize(std::span<const Piece> pieces,
                        const DigitizationParams& params);

}  // namespace qabba
