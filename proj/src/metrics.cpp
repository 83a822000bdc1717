#include "qabba/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qabba {

namespace {

std::size_t common_length(const Series& a, const Series& b,
                          LengthPolicy policy) {
  if (a.samples.size() == b.samples.size()) return a.samples.size();
  if (policy == LengthPolicy::Strict) {
    throw Error(Errc::LengthMismatch,
                "lengths differ: " + std::to_string(a.samples.size()) +
                    " vs " + std::to_string(b.samples.size()));
  }
  return std::min(a.samples.size(), b.samples.size());
}

double sum_sq_diff(const Series& a, const Series& b, std::size_t n) {
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a.samples[i] - b.samples[i];
    total += d * d;
  }
  return total;
}

}  // namespace

double mse(const Series& a, const Series& b, LengthPolicy policy) {
  const std::size_t n = common_length(a, b, policy);
  if (n == 0) {
    throw Error(Errc::EmptySeries, "cannot average over zero samples");
  }
  return sum_sq_diff(a, b, n) / static_cast<double>(n);
}

double rmse(const Series& a, const Series& b, LengthPolicy policy) {
  return std::sqrt(mse(a, b, policy));
}

double euclidean(const Series& a, const Series& b, LengthPolicy policy) {
  const std::size_t n = common_length(a, b, policy);
  return std::sqrt(sum_sq_diff(a, b, n));
}

double dtw(const Series& a, const Series& b) {
  const std::size_t n = a.samples.size();
  const std::size_t m = b.samples.size();
  if (n == 0 || m == 0) {
    throw Error(Errc::EmptySeries, "dtw needs nonempty series");
  }
  // Two rolling rows over the full (unwindowed) alignment table; each cell
  // adds the squared pointwise cost to the cheapest admissible predecessor.
  std::vector<double> prev(m), cur(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double d = a.samples[0] - b.samples[j];
    prev[j] = d * d + (j > 0 ? prev[j - 1] : 0.0);
  }
  for (std::size_t i = 1; i < n; ++i) {
    {
      const double d = a.samples[i] - b.samples[0];
      cur[0] = d * d + prev[0];
    }
    for (std::size_t j = 1; j < m; ++j) {
      const double d = a.samples[i] - b.samples[j];
      cur[j] = d * d + std::min({prev[j], cur[j - 1], prev[j - 1]});
    }
    std::swap(prev, cur);
  }
  return std::sqrt(prev[m - 1]);
}

Series diff(const Series& s) {
  if (s.samples.size() < 2) {
    throw Error(Errc::EmptySeries, "differencing needs at least two samples");
  }
  Series out;
  out.samples.reserve(s.samples.size() - 1);
  for (std::size_t i = 0; i + 1 < s.samples.size(); ++i) {
    out.samples.push_back(s.samples[i + 1] - s.samples[i]);
  }
  out.name = s.name;
  return out;
}

MetricReport metric_report(const Series& a, const Series& b,
                           LengthPolicy policy) {
  MetricReport r;
  r.truncated = a.samples.size() != b.samples.size();
  if (r.truncated && policy == LengthPolicy::Strict) {
    common_length(a, b, policy);  // throws LengthMismatch
  }
  r.mse = mse(a, b, policy);
  r.rmse = std::sqrt(r.mse);
  r.euclidean = euclidean(a, b, policy);
  r.dtw = dtw(a, b);
  const Series da = diff(a);
  const Series db = diff(b);
  r.euclidean_diff = euclidean(da, db, policy);
  r.dtw_diff = dtw(da, db);
  return r;
}

}  // namespace qabba
