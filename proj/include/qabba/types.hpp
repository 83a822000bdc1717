#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qabba/errors.hpp"

namespace qabba {

/// A univariate time series sampled at a uniform rate.
struct Series {
  std::vector<double> samples;
  std::string name;
};

/// One piece of the polygonal chain: an index distance and the value
/// increment accumulated over it.
struct Piece {
  std::int64_t len = 0;  // >= 1
  double inc = 0.0;
};

/// A piece whose length is real-valued (cluster mean), produced by
/// inverse digitization before carry rounding snaps it back to integers.
struct ApproxPiece {
  double len = 0.0;
  double inc = 0.0;
};

struct CompressionParams {
  double tol = 0.1;
  // Optional cap on piece length; unlimited when absent.
  std::optional<std::int64_t> max_len;
};

enum class DigitizeMethod { VQ, GA };
enum class NormKind { MinMax, StdDev };

struct DigitizationParams {
  DigitizeMethod method = DigitizeMethod::GA;
  std::size_t k = 8;       // cluster count (VQ only)
  double alpha = 0.4;      // aggregation tolerance (GA only)
  double scl = 1.0;        // weight of the length coordinate
  NormKind norm = NormKind::MinMax;
  std::uint64_t seed = 0;  // VQ seeding
};

enum class QuantMode { Asymmetric, Symmetric };

struct QuantSpec {
  int bits_len = 8;
  int bits_inc = 12;
  QuantMode mode = QuantMode::Asymmetric;
};

/// Throws EmptySeries when fewer than two samples are present and
/// NonFiniteSample (with the index) on NaN or infinity.
void validate_series(const Series& s);

/// Display-only rendering of symbol indices: 0..25 -> 'a'..'z',
/// 26..51 -> 'A'..'Z'; indices past 51 become two-character codes over the
/// same alphabet ("aa", "ab", ...); past 52 + 52^2 a "{index}" fallback.
std::string render_symbols(std::span<const std::uint32_t> symbols);

}  // namespace qabba
