#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qabba/compression.hpp"
#include "qabba/digitization.hpp"
#include "qabba/quantization.hpp"
#include "qabba/types.hpp"

namespace qabba {

struct ParamsEcho {
  CompressionParams compression;
  DigitizationParams digitization;
  std::optional<QuantSpec> quant;
};

/// Everything needed to rebuild an approximation of the source series.
/// When `quant` is present the codebook holds the dequantized reals, so
/// reconstruction never needs the integer codes. `params_echo` is
/// in-memory provenance only; the storage container does not persist it.
struct SymbolicArtifact {
  std::vector<double> initial_values;   // one per channel (p entries)
  std::vector<std::uint32_t> symbols;   // N entries
  Codebook codebook;
  std::optional<QuantizedCodebookState> quant;
  std::size_t series_length = 0;        // n
  ParamsEcho params_echo;
};

struct PipelineConfig {
  CompressionParams compression;
  DigitizationParams digitization;
  std::optional<QuantSpec> quant;  // absent: keep the codebook in doubles
};

/// compress -> digitize -> (optionally) quantize the codebook.
/// Deterministic: the same series, config and seed produce an identical
/// artifact.
SymbolicArtifact symbolize(const Series& s, const PipelineConfig& cfg);

/// inverse digitize -> carry rounding -> inverse compress. Output length is
/// 1 + sum of the rounded lens, which tracks the source length to within
/// the carry bound.
Series reconstruct(const SymbolicArtifact& artifact);

/// Channels are processed independently under one config; errors are
/// re-thrown annotated with the channel index.
std::vector<SymbolicArtifact> symbolize_multichannel(
    std::span<const Series> channels, const PipelineConfig& cfg);

}  // namespace qabba
