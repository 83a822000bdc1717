#include "qabba/digitization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qabba/rng.hpp"

namespace qabba {

namespace {

double dist2(const Point2& a, const Point2& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

struct CoordStats {
  double shift = 0.0;
  double sigma = 1.0;
};

CoordStats coord_stats(std::span<const Piece> pieces, bool use_len,
                       NormKind kind) {
  auto value = [&](const Piece& p) {
    return use_len ? static_cast<double>(p.len) : p.inc;
  };
  double lo = value(pieces.front());
  double hi = lo;
  for (const Piece& p : pieces) {
    lo = std::min(lo, value(p));
    hi = std::max(hi, value(p));
  }
  if (lo == hi) {
    return {lo, 1.0};  // degenerate coordinate: everything maps to 0
  }
  if (kind == NormKind::MinMax) {
    return {(lo + hi) / 2.0, (hi - lo) / 2.0};
  }
  // StdDev: no shift, divide by the sample standard deviation.
  const std::size_t n = pieces.size();
  double mean = 0.0;
  for (const Piece& p : pieces) mean += value(p);
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (const Piece& p : pieces) {
    const double d = value(p) - mean;
    ss += d * d;
  }
  const double sd =
      n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
  if (sd == 0.0) {
    return {lo, 1.0};
  }
  return {0.0, sd};
}

std::size_t distinct_points(std::span<const Point2> points) {
  std::vector<Point2> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end(), [](const Point2& a, const Point2& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  std::size_t count = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i == 0 || sorted[i].x != sorted[i - 1].x ||
        sorted[i].y != sorted[i - 1].y) {
      ++count;
    }
  }
  return count;
}

// Weighted pick proportional to `weights` via a cumulative scan of one
// uniform draw; deterministic for a fixed stream.
std::size_t weighted_pick(const std::vector<double>& weights, double total,
                          Rng& rng) {
  const double r = rng.uniform() * total;
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last = i;
    if (r < acc) return i;
  }
  return last;  // guard against accumulated rounding at the top end
}

}  // namespace

std::pair<std::vector<Point2>, NormalizationState> normalize(
    std::span<const Piece> pieces, double scl, NormKind kind) {
  if (pieces.empty()) {
    throw Error(Errc::EmptyInput, "no pieces to normalize");
  }
  if (!(scl >= 0.0)) {
    throw Error(Errc::InvalidRange, "scl must be >= 0");
  }
  const CoordStats len_stats = coord_stats(pieces, true, kind);
  const CoordStats inc_stats = coord_stats(pieces, false, kind);

  NormalizationState state;
  state.sigma_len = len_stats.sigma;
  state.sigma_inc = inc_stats.sigma;
  state.shift_len = len_stats.shift;
  state.shift_inc = inc_stats.shift;
  state.scl = scl;
  state.kind = kind;

  std::vector<Point2> points;
  points.reserve(pieces.size());
  for (const Piece& p : pieces) {
    points.push_back(
        {scl * (static_cast<double>(p.len) - state.shift_len) / state.sigma_len,
         (p.inc - state.shift_inc) / state.sigma_inc});
  }
  return {std::move(points), state};
}

ClusterResult digitize_vq(std::span<const Point2> points, std::size_t k,
                          std::uint64_t seed) {
  if (points.empty()) {
    throw Error(Errc::EmptyInput, "no points to cluster");
  }
  if (k < 1) {
    throw Error(Errc::InvalidRange, "k must be >= 1");
  }
  const std::size_t n = points.size();
  if (k > distinct_points(points)) {
    throw Error(Errc::TooManyClusters,
                "k = " + std::to_string(k) +
                    " exceeds the number of distinct points");
  }

  Rng rng(seed);
  std::vector<Point2> centers;
  centers.reserve(k);

  // k-means++ seeding: first center uniform, the rest sampled with
  // probability proportional to the squared distance to the nearest
  // already-chosen center.
  centers.push_back(points[rng.below(n)]);
  std::vector<double> mindist(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mindist[i] = dist2(points[i], centers[0]);
    total += mindist[i];
  }
  while (centers.size() < k) {
    const std::size_t pick = weighted_pick(mindist, total, rng);
    centers.push_back(points[pick]);
    total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      mindist[i] = std::min(mindist[i], dist2(points[i], centers.back()));
      total += mindist[i];
    }
  }

  std::vector<std::uint32_t> labels(n, 0);
  std::vector<double> sx(k), sy(k);
  std::vector<std::size_t> counts(k);

  auto assign = [&]() {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      std::uint32_t best = 0;
      double bd = dist2(points[i], centers[0]);
      for (std::size_t c = 1; c < k; ++c) {
        const double d = dist2(points[i], centers[c]);
        if (d < bd) {  // ties go to the lowest index
          bd = d;
          best = static_cast<std::uint32_t>(c);
        }
      }
      if (labels[i] != best) {
        labels[i] = best;
        changed = true;
      }
    }
    return changed;
  };
  auto tally = [&]() {
    std::fill(sx.begin(), sx.end(), 0.0);
    std::fill(sy.begin(), sy.end(), 0.0);
    std::fill(counts.begin(), counts.end(), std::size_t{0});
    for (std::size_t i = 0; i < n; ++i) {
      sx[labels[i]] += points[i].x;
      sy[labels[i]] += points[i].y;
      ++counts[labels[i]];
    }
  };

  constexpr int kMaxIterations = 300;
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    const bool changed = assign();
    if (!changed && iter > 0) break;
    tally();
    std::vector<std::size_t> reseeded;
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        // Re-seed an emptied cluster with the point farthest from its
        // center (lowest index on ties, skipping points already used to
        // re-seed in this pass) and keep iterating.
        std::size_t far = n;
        double fd = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (std::find(reseeded.begin(), reseeded.end(), i) !=
              reseeded.end())
            continue;
          const double d = dist2(points[i], centers[labels[i]]);
          if (d > fd) {
            fd = d;
            far = i;
          }
        }
        centers[c] = points[far];
        reseeded.push_back(far);
      } else {
        centers[c] = {sx[c] / static_cast<double>(counts[c]),
                      sy[c] / static_cast<double>(counts[c])};
      }
    }
  }

  // Final repair: guarantee every cluster keeps at least one member even
  // when the iteration cap interrupted an empty-cluster re-seed, then make
  // the returned centers the exact means of the returned membership.
  tally();
  for (std::size_t c = 0; c < k; ++c) {
    while (counts[c] == 0) {
      std::size_t far = n;
      double fd = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[labels[i]] < 2) continue;  // do not empty the donor
        const double d = dist2(points[i], centers[labels[i]]);
        if (d > fd) {
          fd = d;
          far = i;
        }
      }
      --counts[labels[far]];
      labels[far] = static_cast<std::uint32_t>(c);
      ++counts[c];
    }
  }
  tally();
  for (std::size_t c = 0; c < k; ++c) {
    centers[c] = {sx[c] / static_cast<double>(counts[c]),
                  sy[c] / static_cast<double>(counts[c])};
  }

  return {std::move(labels), std::move(centers)};
}

ClusterResult digitize_ga(std::span<const Point2> points, double alpha) {
  if (points.empty()) {
    throw Error(Errc::EmptyInput, "no points to cluster");
  }
  if (!(alpha > 0.0)) {
    throw Error(Errc::InvalidRange, "alpha must be positive");
  }
  const std::size_t n = points.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     if (points[a].x != points[b].x)
                       return points[a].x < points[b].x;
                     return points[a].y < points[b].y;
                   });

  constexpr std::uint32_t kUnassigned =
      std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> labels(n, kUnassigned);
  std::vector<Point2> centers;
  const double alpha2 = alpha * alpha;

  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t seed_idx = order[s];
    if (labels[seed_idx] != kUnassigned) continue;
    const Point2 seed = points[seed_idx];
    const auto group = static_cast<std::uint32_t>(centers.size());
    labels[seed_idx] = group;
    double sx = seed.x, sy = seed.y;
    std::size_t cnt = 1;
    for (std::size_t t = s + 1; t < n; ++t) {
      const std::size_t idx = order[t];
      // Sorted by the first coordinate: once the gap alone exceeds alpha,
      // no later point can be within reach of this seed.
      if (points[idx].x - seed.x > alpha) break;
      if (labels[idx] != kUnassigned) continue;
      if (dist2(points[idx], seed) <= alpha2) {
        labels[idx] = group;
        sx += points[idx].x;
        sy += points[idx].y;
        ++cnt;
      }
    }
    centers.push_back(
        {sx / static_cast<double>(cnt), sy / static_cast<double>(cnt)});
  }

  return {std::move(labels), std::move(centers)};
}

std::vector<std::uint32_t> assign_symbols(
    std::span<const std::uint32_t> labels) {
  return {labels.begin(), labels.end()};
}

double sse(std::span<const Point2> points, std::span<const std::uint32_t> labels,
           std::span<const Point2> centers) {
  if (labels.size() != points.size()) {
    throw Error(Errc::ShapeMismatch, "one label per point required");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (labels[i] >= centers.size()) {
      throw Error(Errc::ShapeMismatch,
                  "label " + std::to_string(labels[i]) + " has no center",
                  static_cast<std::ptrdiff_t>(i));
    }
    total += dist2(points[i], centers[labels[i]]);
  }
  return total;
}

std::vector<ApproxPiece> inverse_digitize(
    std::span<const std::uint32_t> symbols, const Codebook& codebook) {
  std::vector<ApproxPiece> out;
  out.reserve(symbols.size());
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (symbols[i] >= codebook.size()) {
      throw Error(Errc::SymbolOutOfRange,
                  "symbol " + std::to_string(symbols[i]) +
                      " outside codebook of size " +
                      std::to_string(codebook.size()),
                  static_cast<std::ptrdiff_t>(i));
    }
    out.push_back({codebook.lens[symbols[i]], codebook.incs[symbols[i]]});
  }
  return out;
}

std::vector<Piece> round_lengths_with_carry(
    std::span<const ApproxPiece> approx) {
  std::vector<Piece> out;
  out.reserve(approx.size());
  double carry = 0.0;
  for (const ApproxPiece& ap : approx) {
    const double target = ap.len + carry;
    double rounded = std::round(target);  // ties away from zero
    if (rounded < 1.0) rounded = 1.0;
    carry = target - rounded;
    out.push_back({static_cast<std::int64_t>(rounded), ap.inc});
  }
  return out;
}

DigitizeResult digitize(std::span<const Piece> pieces,
                        const DigitizationParams& params) {
  if (pieces.empty()) {
    throw Error(Errc::EmptyInput, "no pieces to digitize");
  }
  auto [points, state] = normalize(pieces, params.scl, params.norm);
  ClusterResult clusters =
      params.method == DigitizeMethod::VQ
          ? digitize_vq(points, params.k, params.seed)
          : digitize_ga(points, params.alpha);

  // Centers are member means in original units; the normalized geometry
  // only decided membership.
  const std::size_t k = clusters.centers.size();
  Codebook cb;
  cb.lens.assign(k, 0.0);
  cb.incs.assign(k, 0.0);
  cb.counts.assign(k, 0);
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const std::uint32_t c = clusters.labels[i];
    cb.lens[c] += static_cast<double>(pieces[i].len);
    cb.incs[c] += pieces[i].inc;
    ++cb.counts[c];
  }
  for (std::size_t c = 0; c < k; ++c) {
    cb.lens[c] /= static_cast<double>(cb.counts[c]);
    cb.incs[c] /= static_cast<double>(cb.counts[c]);
  }

  return {assign_symbols(clusters.labels), std::move(cb), state};
}

}  // namespace qabba
