#pragma once

#include <span>
#include <vector>

#include "qabba/types.hpp"

namespace qabba {

/// Half-open index pair denoting one candidate piece [start, end] of a
/// series, both ends inclusive sample indices.
struct Segment {
  std::size_t start = 0;
  std::size_t end = 0;
};

/// True iff the straight line from (start, t[start]) to (end, t[end]) stays
/// within the adaptive budget: the sum of squared deviations over the
/// segment's interior samples is at most (end - start - 1) * tol^2. The two
/// endpoint deviations vanish identically, so only interior samples are
/// accumulated (left to right).
bool check_piece_criterion(const Series& s, Segment seg, double tol);

/// Greedy left-to-right polygonal chain construction. Each piece starts at
/// the previous breakpoint and extends one sample at a time for as long as
/// check_piece_criterion holds, using O(1) incremental updates of the
/// running sums plus a direct O(len) re-check around the accepted end.
/// The result partitions indices 0..n-1: lens sum to n - 1.
std::vector<Piece> compress(const Series& s, const CompressionParams& params);

/// Exact inverse of compress up to floating-point chaining: starts at
/// `initial` and linearly interpolates each piece, landing exactly on the
/// chained breakpoint values. Output length is 1 + sum of lens.
Series inverse_compress(double initial, std::span<const Piece> pieces);

}  // namespace qabba
