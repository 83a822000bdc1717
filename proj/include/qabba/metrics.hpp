#pragma once

#include <cmath>
#include <vector>

#include "qabba/types.hpp"

namespace qabba {

/// Strict errors on unequal lengths; Lenient truncates both sides to the
/// shorter length (and the report records that it happened).
enum class LengthPolicy { Strict, Lenient };

double mse(const Series& a, const Series& b,
           LengthPolicy policy = LengthPolicy::Strict);
double rmse(const Series& a, const Series& b,
            LengthPolicy policy = LengthPolicy::Strict);
double euclidean(const Series& a, const Series& b,
                 LengthPolicy policy = LengthPolicy::Strict);

/// Dynamic time warping with squared pointwise costs and steps
/// (i-1,j), (i,j-1), (i-1,j-1); the square root is taken once at the end.
/// No warping window, so unequal lengths are fine. On equal-length input
/// dtw(a, b) <= euclidean(a, b).
double dtw(const Series& a, const Series& b);

/// First differences: d[i] = s[i+1] - s[i]. Input needs >= 2 samples.
Series diff(const Series& s);

/// Applies a metric to the first differences of both series, capturing
/// shape agreement independent of level.
template <typename Metric>
double differenced(Metric&& metric, const Series& a, const Series& b) {
  return metric(diff(a), diff(b));
}

struct MetricReport {
  double mse = 0.0;
  double rmse = 0.0;
  double euclidean = 0.0;
  double dtw = 0.0;
  double euclidean_diff = 0.0;
  double dtw_diff = 0.0;
  bool truncated = false;  // lengths differed and Lenient truncated them
};

MetricReport metric_report(const Series& a, const Series& b,
                           LengthPolicy policy = LengthPolicy::Strict);

}  // namespace qabba
