#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qabba/digitization.hpp"
#include "qabba/types.hpp"

namespace qabba {

/// Affine quantization grid for one codebook row. The integer range is the
/// two's-complement one: qmin = -2^(bits-1), qmax = 2^(bits-1) - 1, and
/// scale = (hi - lo) / (qmax - qmin) exactly as constructed.
struct QuantParams {
  double scale = 1.0;
  std::int64_t zero_point = 0;
  int bits = 8;
  std::int64_t qmin = -128;
  std::int64_t qmax = 127;
  double lo = 0.0;
  double hi = 0.0;
};

/// Builds the grid over [lo, hi]. Asymmetric picks zero_point =
/// round(lo/scale) - qmin so that quantize(lo) = qmin and quantize(hi) =
/// qmax; Symmetric widens the range to +-max(|lo|, |hi|) and fixes
/// zero_point = 0. A degenerate hi == lo is widened by
/// eps = max(1e-8, |lo| * 1e-8) on both sides. bits must lie in [2, 32].
QuantParams make_params(double lo, double hi, int bits, QuantMode mode);

/// clip(round(x / scale - zero_point), qmin, qmax) with round = nearest,
/// ties away from zero. For x in [lo, hi] the round trip
/// |dequantize(quantize(x)) - x| stays within scale / 2.
std::int64_t quantize(double x, const QuantParams& p);

/// scale * (q + zero_point). q must lie in [qmin, qmax].
double dequantize(std::int64_t q, const QuantParams& p);

/// Codebook rows quantized independently: the length row over
/// [min len, max len] at bits_len, the increment row over [min inc, max inc]
/// at bits_inc.
struct QuantizedCodebookState {
  std::vector<std::int64_t> q_lens;
  std::vector<std::int64_t> q_incs;
  QuantParams params_len;
  QuantParams params_inc;
};

QuantizedCodebookState quantize_codebook(const Codebook& codebook,
                                         const QuantSpec& spec);

/// Codebook holding the dequantized row values (counts supplied by the
/// caller, typically the original cluster cardinalities).
Codebook dequantize_codebook(const QuantizedCodebookState& state,
                             std::span<const std::size_t> counts);

/// Worst-case SSE after replacing mean centers with their dequantized
/// values, for one row quantized at `bits` over [lo, hi]:
///   sse + 2 * n_points * (hi - lo)^2 / (2^(bits+1) - 2)^2.
/// Apply once per row, feeding each result into the next, to bound both
/// rows together.
double sse_quantization_bound(double sse, std::size_t n_points, double lo,
                              double hi, int bits);

}  // namespace qabba
