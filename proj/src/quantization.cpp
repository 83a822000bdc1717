#include "qabba/quantization.hpp"

#include <algorithm>
#include <cmath>

namespace qabba {

QuantParams make_params(double lo, double hi, int bits, QuantMode mode) {
  if (bits < 2 || bits > 32) {
    throw Error(Errc::InvalidBits,
                "bit width must lie in [2, 32], got " + std::to_string(bits));
  }
  if (!std::isfinite(lo) || !std::isfinite(hi) || hi < lo) {
    throw Error(Errc::InvalidRange, "need finite lo <= hi");
  }
  if (hi == lo) {
    const double eps = std::max(1e-8, std::abs(lo) * 1e-8);
    lo -= eps;
    hi += eps;
  }

  QuantParams p;
  p.bits = bits;
  p.qmin = -(std::int64_t{1} << (bits - 1));
  p.qmax = (std::int64_t{1} << (bits - 1)) - 1;
  if (mode == QuantMode::Symmetric) {
    const double m = std::max(std::abs(lo), std::abs(hi));
    p.lo = -m;
    p.hi = m;
    p.zero_point = 0;
    p.scale = (p.hi - p.lo) / static_cast<double>(p.qmax - p.qmin);
  } else {
    p.lo = lo;
    p.hi = hi;
    p.scale = (p.hi - p.lo) / static_cast<double>(p.qmax - p.qmin);
    const double z = std::round(p.lo / p.scale) - static_cast<double>(p.qmin);
    if (std::abs(z) > 9.0e18) {
      throw Error(Errc::InvalidRange,
                  "range too narrow relative to its magnitude for an "
                  "integer zero-point");
    }
    p.zero_point = static_cast<std::int64_t>(z);
  }
  return p;
}

std::int64_t quantize(double x, const QuantParams& p) {
  const double v =
      std::round(x / p.scale - static_cast<double>(p.zero_point));
  if (v <= static_cast<double>(p.qmin)) return p.qmin;
  if (v >= static_cast<double>(p.qmax)) return p.qmax;
  return static_cast<std::int64_t>(v);
}

double dequantize(std::int64_t q, const QuantParams& p) {
  if (q < p.qmin || q > p.qmax) {
    throw Error(Errc::CodeOutOfRange,
                "code " + std::to_string(q) + " outside [" +
                    std::to_string(p.qmin) + ", " + std::to_string(p.qmax) +
                    "]");
  }
  return p.scale * (static_cast<double>(q) + static_cast<double>(p.zero_point));
}

QuantizedCodebookState quantize_codebook(const Codebook& codebook,
                                         const QuantSpec& spec) {
  if (codebook.size() == 0) {
    throw Error(Errc::EmptyInput, "empty codebook");
  }
  const auto [len_lo, len_hi] =
      std::minmax_element(codebook.lens.begin(), codebook.lens.end());
  const auto [inc_lo, inc_hi] =
      std::minmax_element(codebook.incs.begin(), codebook.incs.end());

  QuantizedCodebookState state;
  state.params_len = make_params(*len_lo, *len_hi, spec.bits_len, spec.mode);
  state.params_inc = make_params(*inc_lo, *inc_hi, spec.bits_inc, spec.mode);
  state.q_lens.reserve(codebook.size());
  state.q_incs.reserve(codebook.size());
  for (std::size_t i = 0; i < codebook.size(); ++i) {
    state.q_lens.push_back(quantize(codebook.lens[i], state.params_len));
    state.q_incs.push_back(quantize(codebook.incs[i], state.params_inc));
  }
  return state;
}

Codebook dequantize_codebook(const QuantizedCodebookState& state,
                             std::span<const std::size_t> counts) {
  if (counts.size() != state.q_lens.size()) {
    throw Error(Errc::ShapeMismatch, "one count per codebook entry required");
  }
  Codebook cb;
  cb.lens.reserve(state.q_lens.size());
  cb.incs.reserve(state.q_incs.size());
  for (std::size_t i = 0; i < state.q_lens.size(); ++i) {
    cb.lens.push_back(dequantize(state.q_lens[i], state.params_len));
    cb.incs.push_back(dequantize(state.q_incs[i], state.params_inc));
  }
  cb.counts.assign(counts.begin(), counts.end());
  return cb;
}

double sse_quantization_bound(double sse, std::size_t n_points, double lo,
                              double hi, int bits) {
  if (bits < 2 || bits > 32) {
    throw Error(Errc::InvalidBits,
                "bit width must lie in [2, 32], got " + std::to_string(bits));
  }
  const double denom = std::ldexp(1.0, bits + 1) - 2.0;  // 2^(bits+1) - 2
  const double range = hi - lo;
  return sse + 2.0 * static_cast<double>(n_points) * range * range /
                   (denom * denom);
}

}  // namespace qabba
