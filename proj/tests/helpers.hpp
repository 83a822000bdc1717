#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "qabba/errors.hpp"
#include "qabba/rng.hpp"
#include "qabba/types.hpp"

namespace testutil {

// Runs fn and reports the qabba error code it threw, if any.
template <typename Fn>
std::optional<qabba::Errc> thrown_code(Fn&& fn) {
  try {
    fn();
  } catch (const qabba::Error& e) {
    return e.code();
  } catch (...) {
    return std::nullopt;
  }
  return std::nullopt;
}

// Direct evaluation of the piece criterion: interior deviations from the
// endpoint-to-endpoint line, summed left to right.
inline double piece_deviation(const std::vector<double>& t, std::size_t a,
                              std::size_t b) {
  const double len = static_cast<double>(b - a);
  const double inc = t[b] - t[a];
  double lhs = 0.0;
  for (std::size_t i = a + 1; i < b; ++i) {
    const double frac = static_cast<double>(i - a) / len;
    const double dev = t[a] + inc * frac - t[i];
    lhs += dev * dev;
  }
  return lhs;
}

inline bool piece_ok(const std::vector<double>& t, std::size_t a,
                     std::size_t b, double tol) {
  const double len = static_cast<double>(b - a);
  return piece_deviation(t, a, b) <= (len - 1.0) * tol * tol;
}

inline qabba::Series random_walk(std::size_t n, std::uint64_t seed) {
  qabba::Rng rng(seed);
  qabba::Series s;
  s.samples.reserve(n);
  double v = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    v += rng.normal();
    s.samples.push_back(v);
  }
  s.name = "walk" + std::to_string(seed);
  return s;
}

}  // namespace testutil
