#include "qabba/compression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qabba {

bool check_piece_criterion(const Series& s, Segment seg, double tol) {
  const auto& t = s.samples;
  if (seg.end >= t.size() || seg.start >= seg.end) {
    throw Error(Errc::IndexOutOfBounds,
                "segment [" + std::to_string(seg.start) + ", " +
                    std::to_string(seg.end) + ") out of bounds for " +
                    std::to_string(t.size()) + " samples");
  }
  const double len = static_cast<double>(seg.end - seg.start);
  const double inc = t[seg.end] - t[seg.start];
  double lhs = 0.0;
  for (std::size_t i = seg.start + 1; i < seg.end; ++i) {
    const double frac = static_cast<double>(i - seg.start) / len;
    const double dev = t[seg.start] + inc * frac - t[i];
    lhs += dev * dev;
  }
  return lhs <= (len - 1.0) * tol * tol;
}

std::vector<Piece> compress(const Series& s, const CompressionParams& params) {
  validate_series(s);
  if (!(params.tol > 0.0)) {
    throw Error(Errc::InvalidRange, "tol must be positive");
  }
  if (params.max_len && *params.max_len < 1) {
    throw Error(Errc::InvalidRange, "max_len must be at least 1");
  }

  const auto& t = s.samples;
  const std::size_t n = t.size();
  const std::size_t cap = params.max_len
                              ? static_cast<std::size_t>(*params.max_len)
                              : std::numeric_limits<std::size_t>::max();
  const double tol2 = params.tol * params.tol;

  std::vector<Piece> pieces;
  std::size_t a = 0;
  while (a + 1 < n) {
    const std::size_t limit = (n - 1 - a < cap) ? n - 1 : a + cap;

    // Incremental scan: with d_i = t[i] - t[a] and j = i - a, the deviation
    // sum for a candidate end b (length L) expands to
    //   s1 - 2*(inc/L)*s2 + (inc/L)^2 * L(L+1)(2L+1)/6
    // where s1 = sum d_i^2 and s2 = sum j*d_i over the scanned samples.
    double s1 = 0.0;
    double s2 = 0.0;
    {
      const double d = t[a + 1] - t[a];
      s1 = d * d;
      s2 = d;
    }
    std::size_t best = a + 1;  // length 1 always satisfies the criterion
    std::size_t b = a + 1;
    while (b < limit) {
      ++b;
      const double d = t[b] - t[a];
      const double L = static_cast<double>(b - a);
      s1 += d * d;
      s2 += L * d;
      const double slope = d / L;
      const double sumsq = L * (L + 1.0) * (2.0 * L + 1.0) / 6.0;
      const double err = s1 - 2.0 * slope * s2 + slope * slope * sumsq;
      if (err <= (L - 1.0) * tol2) {
        best = b;
      } else {
        break;
      }
    }

    // The expanded running sums can disagree with the direct criterion by a
    // few ulps right at the boundary; reconcile so every emitted piece
    // passes the direct check and is maximal under it.
    while (best > a + 1 && !check_piece_criterion(s, {a, best}, params.tol)) {
      --best;
    }
    while (best < limit &&
           check_piece_criterion(s, {a, best + 1}, params.tol)) {
      ++best;
    }

    pieces.push_back(
        {static_cast<std::int64_t>(best - a), t[best] - t[a]});
    a = best;
  }
  return pieces;
}

Series inverse_compress(double initial, std::span<const Piece> pieces) {
  if (pieces.empty()) {
    throw Error(Errc::EmptyPieces, "nothing to reconstruct");
  }
  std::size_t total = 0;
  for (const Piece& p : pieces) {
    if (p.len < 1) {
      throw Error(Errc::InvalidRange, "piece lengths must be >= 1");
    }
    total += static_cast<std::size_t>(p.len);
  }
  Series out;
  out.samples.reserve(total + 1);
  out.samples.push_back(initial);
  double v = initial;
  for (const Piece& p : pieces) {
    const double end = v + p.inc;
    const double len = static_cast<double>(p.len);
    for (std::int64_t i = 1; i < p.len; ++i) {
      out.samples.push_back(v + p.inc * (static_cast<double>(i) / len));
    }
    out.samples.push_back(end);  // land exactly on the chained breakpoint
    v = end;
  }
  return out;
}

}  // namespace qabba
