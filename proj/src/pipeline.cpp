#include "qabba/pipeline.hpp"

#include <string>

namespace qabba {

SymbolicArtifact symbolize(const Series& s, const PipelineConfig& cfg) {
  validate_series(s);
  std::vector<Piece> pieces = compress(s, cfg.compression);
  DigitizeResult dg = digitize(pieces, cfg.digitization);

  SymbolicArtifact artifact;
  artifact.initial_values = {s.samples.front()};
  artifact.symbols = std::move(dg.symbols);
  artifact.series_length = s.samples.size();
  artifact.params_echo = {cfg.compression, cfg.digitization, cfg.quant};
  if (cfg.quant) {
    QuantizedCodebookState q = quantize_codebook(dg.codebook, *cfg.quant);
    artifact.codebook = dequantize_codebook(q, dg.codebook.counts);
    artifact.quant = std::move(q);
  } else {
    artifact.codebook = std::move(dg.codebook);
  }
  return artifact;
}

Series reconstruct(const SymbolicArtifact& artifact) {
  if (artifact.initial_values.empty()) {
    throw Error(Errc::CorruptArtifact, "artifact has no initial value");
  }
  if (artifact.codebook.size() == 0) {
    throw Error(Errc::CorruptArtifact, "artifact has an empty codebook");
  }
  std::vector<ApproxPiece> approx =
      inverse_digitize(artifact.symbols, artifact.codebook);
  std::vector<Piece> pieces = round_lengths_with_carry(approx);
  Series out = inverse_compress(artifact.initial_values.front(), pieces);
  out.name = "reconstructed";
  return out;
}

std::vector<SymbolicArtifact> symbolize_multichannel(
    std::span<const Series> channels, const PipelineConfig& cfg) {
  if (channels.empty()) {
    throw Error(Errc::EmptyInput, "no channels");
  }
  std::vector<SymbolicArtifact> out;
  out.reserve(channels.size());
  for (std::size_t c = 0; c < channels.size(); ++c) {
    try {
      out.push_back(symbolize(channels[c], cfg));
    } catch (const Error& e) {
      throw Error(e.code(),
                  "channel " + std::to_string(c) + ": " + e.what(),
                  static_cast<std::ptrdiff_t>(c));
    }
  }
  return out;
}

}  // namespace qabba
