#pragma once

#include <stdexcept>
#include <string>

namespace qabba {

enum class Errc {
  EmptySeries,
  NonFiniteSample,
  IndexOutOfBounds,
  EmptyPieces,
  EmptyInput,
  TooManyClusters,
  TooManySymbols,
  SymbolOutOfRange,
  ShapeMismatch,
  InvalidRange,
  InvalidBits,
  CodeOutOfRange,
  LengthMismatch,
  BadMagic,
  UnsupportedVersion,
  Truncated,
  ChecksumMismatch,
  CorruptArtifact,
  AllZeroColumn,
  ParseError,
};

constexpr const char* errc_name(Errc c) {
  switch (c) {
    case Errc::EmptySeries: return "EmptySeries";
    case Errc::NonFiniteSample: return "NonFiniteSample";
    case Errc::IndexOutOfBounds: return "IndexOutOfBounds";
    case Errc::EmptyPieces: return "EmptyPieces";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::TooManyClusters: return "TooManyClusters";
    case Errc::TooManySymbols: return "TooManySymbols";
    case Errc::SymbolOutOfRange: return "SymbolOutOfRange";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::InvalidRange: return "InvalidRange";
    case Errc::InvalidBits: return "InvalidBits";
    case Errc::CodeOutOfRange: return "CodeOutOfRange";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::BadMagic: return "BadMagic";
    case Errc::UnsupportedVersion: return "UnsupportedVersion";
    case Errc::Truncated: return "Truncated";
    case Errc::ChecksumMismatch: return "ChecksumMismatch";
    case Errc::CorruptArtifact: return "CorruptArtifact";
    case Errc::AllZeroColumn: return "AllZeroColumn";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Domain error carrying a machine-checkable code. `index` holds the
/// offending position (sample index, channel, row, ...) when one exists.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message, std::ptrdiff_t index = -1)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code),
        index_(index) {}

  Errc code() const noexcept { return code_; }
  std::ptrdiff_t index() const noexcept { return index_; }

 private:
  Errc code_;
  std::ptrdiff_t index_;
};

}  // namespace qabba
