#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qabba/pipeline.hpp"

namespace qabba {

/// Bit-level accounting model for the theoretical compression ratios.
/// Widths are bits per stored value; n_symbols is the piece count N, n the
/// raw series length. All fields must be positive and n_symbols <= n.
struct StorageModel {
  int b_t = 32;     // bits per raw sample
  int b_len = 32;   // bits per codebook length entry
  int b_inc = 32;   // bits per codebook increment entry
  int b_s = 32;     // bits per quantization parameter
  int b_sym = 8;    // bits per stored symbol (16 once k > 256)
  std::size_t p = 1;          // channels / initial values
  std::size_t n_symbols = 0;  // N
  std::size_t k = 0;
  std::size_t n = 0;
};

/// (b_sym*N + (b_len + b_inc)*k + p*b_t) / (b_t * n); with the 32-bit
/// defaults this is (8N + 64k + 32) / (32n) for p = 1.
double ratio_abba(const StorageModel& m);

/// Same numerator plus 2*b_s for the scale and zero-point; the 8/12-bit
/// defaults give (8N + 20k + 96) / (32n) for p = 1.
double ratio_qabba(const StorageModel& m);

/// StorageModel describing an artifact as the container stores it.
StorageModel model_for(const SymbolicArtifact& artifact);

// Container layout (all integers little-endian):
//   magic "QABA1" (5 bytes), version u8, flags u8
//     (bit 0: codebook quantized, bit 1: 16-bit symbols),
//   bits_len u8, bits_inc u8 (zero when unquantized),
//   k u16, N u32, n u32, p u16,
//   p * f32 initial values,
//   codebook:
//     quantized:  per row (length row first): scale f32, zero_point i32,
//                 then the row's codes packed most-significant-bit-first as
//                 bits-wide two's-complement fields, zero-padded to a byte
//                 boundary at the end of the row;
//     plain:      2k * f32 centers, length row then increment row,
//   symbols: N * u8 (u16 once k > 256),
//   CRC-32 (IEEE reflected) of all preceding bytes, u32.
//
// Fixed overhead beyond the ratio model numerator: header (168 bits) plus
// CRC (32 bits) = 200 bits for plain artifacts; quantized artifacts add 64
// bits because the container stores a (scale, zero_point) pair per row
// where the ratio model counts a single pair, plus each row's padding to a
// byte boundary.
inline constexpr std::size_t kHeaderBits = 168;
inline constexpr std::size_t kCrcBits = 32;
inline constexpr std::size_t kPlainOverheadBits = kHeaderBits + kCrcBits;
inline constexpr std::size_t kQuantizedOverheadBits = kPlainOverheadBits + 64;

std::vector<std::uint8_t> encode(const SymbolicArtifact& artifact);
SymbolicArtifact decode(std::span<const std::uint8_t> bytes);

}  // namespace qabba
