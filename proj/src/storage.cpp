#include "qabba/storage.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <limits>
#include <string>

namespace qabba {

namespace {

constexpr std::array<char, 5> kMagic = {'Q', 'A', 'B', 'A', '1'};
constexpr std::uint8_t kVersion = 1;
constexpr std::uint8_t kFlagQuantized = 0x01;
constexpr std::uint8_t kFlagWideSymbols = 0x02;

std::uint32_t crc32(std::span<const std::uint8_t> bytes) {
  static const auto table = [] {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t i = 0; i < 256; ++i) {
      std::uint32_t c = i;
      for (int b = 0; b < 8; ++b) {
        c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      }
      t[i] = c;
    }
    return t;
  }();
  std::uint32_t crc = 0xFFFFFFFFu;
  for (std::uint8_t byte : bytes) {
    crc = table[(crc ^ byte) & 0xFFu] ^ (crc >> 8);
  }
  return crc ^ 0xFFFFFFFFu;
}

void put_u8(std::vector<std::uint8_t>& out, std::uint8_t v) {
  out.push_back(v);
}
void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}
void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
  }
}
void put_f32(std::vector<std::uint8_t>& out, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  put_u32(out, bits);
}
void put_i32(std::vector<std::uint8_t>& out, std::int32_t v) {
  put_u32(out, static_cast<std::uint32_t>(v));
}

// MSB-first bit packing of fixed-width fields, flushed (zero-padded) to a
// byte boundary at the end of each row.
struct BitWriter {
  std::vector<std::uint8_t>& out;
  std::uint64_t acc = 0;
  int nbits = 0;

  void put(std::uint64_t value, int bits) {
    const std::uint64_t mask =
        bits == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
    acc = (acc << bits) | (value & mask);
    nbits += bits;
    while (nbits >= 8) {
      out.push_back(static_cast<std::uint8_t>((acc >> (nbits - 8)) & 0xFF));
      nbits -= 8;
    }
  }
  void flush() {
    if (nbits > 0) {
      out.push_back(static_cast<std::uint8_t>((acc << (8 - nbits)) & 0xFF));
      nbits = 0;
    }
    acc = 0;
  }
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t pos() const { return pos_; }

  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) {
      throw Error(Errc::Truncated, "container ends after " +
                                       std::to_string(bytes_.size()) +
                                       " bytes");
    }
  }
  std::uint8_t u8() {
    need(1);
    return bytes_[pos_++];
  }
  std::uint16_t u16() {
    need(2);
    const std::uint16_t v = static_cast<std::uint16_t>(
        bytes_[pos_] | (std::uint16_t{bytes_[pos_ + 1]} << 8));
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= std::uint32_t{bytes_[pos_ + i]} << (8 * i);
    }
    pos_ += 4;
    return v;
  }
  float f32() {
    const std::uint32_t bits = u32();
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
  }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }

  // Reads `count` MSB-first fields of `bits` width, then skips the row's
  // padding to the next byte boundary.
  std::vector<std::int64_t> bit_row(std::size_t count, int bits) {
    const std::size_t row_bytes = (count * bits + 7) / 8;
    need(row_bytes);
    std::vector<std::int64_t> vals;
    vals.reserve(count);
    std::uint64_t acc = 0;
    int have = 0;
    std::size_t p = pos_;
    const std::uint64_t mask =
        bits == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
    for (std::size_t i = 0; i < count; ++i) {
      while (have < bits) {
        acc = (acc << 8) | bytes_[p++];
        have += 8;
      }
      std::uint64_t v = (acc >> (have - bits)) & mask;
      have -= bits;
      // sign-extend the two's-complement field
      if (v & (std::uint64_t{1} << (bits - 1))) {
        v |= ~mask;
      }
      vals.push_back(static_cast<std::int64_t>(v));
    }
    pos_ += row_bytes;
    return vals;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

QuantParams params_from_wire(float scale, std::int32_t zero_point, int bits) {
  QuantParams p;
  p.bits = bits;
  p.qmin = -(std::int64_t{1} << (bits - 1));
  p.qmax = (std::int64_t{1} << (bits - 1)) - 1;
  p.scale = static_cast<double>(scale);
  p.zero_point = zero_point;
  // lo/hi are reconstructed from the grid so that the scale invariant
  // holds; the encoder's exact endpoints are not persisted.
  p.lo = p.scale * static_cast<double>(p.qmin + p.zero_point);
  p.hi = p.lo + p.scale * static_cast<double>(p.qmax - p.qmin);
  return p;
}

}  // namespace

double ratio_abba(const StorageModel& m) {
  const double numerator =
      static_cast<double>(m.b_sym) * static_cast<double>(m.n_symbols) +
      static_cast<double>(m.b_len + m.b_inc) * static_cast<double>(m.k) +
      static_cast<double>(m.p) * static_cast<double>(m.b_t);
  return numerator /
         (static_cast<double>(m.b_t) * static_cast<double>(m.n));
}

double ratio_qabba(const StorageModel& m) {
  const double numerator =
      static_cast<double>(m.b_sym) * static_cast<double>(m.n_symbols) +
      static_cast<double>(m.b_len + m.b_inc) * static_cast<double>(m.k) +
      static_cast<double>(m.p) * static_cast<double>(m.b_t) +
      2.0 * static_cast<double>(m.b_s);
  return numerator /
         (static_cast<double>(m.b_t) * static_cast<double>(m.n));
}

StorageModel model_for(const SymbolicArtifact& artifact) {
  StorageModel m;
  m.b_t = 32;
  m.b_s = 32;
  m.b_sym = artifact.codebook.size() > 256 ? 16 : 8;
  if (artifact.quant) {
    m.b_len = artifact.quant->params_len.bits;
    m.b_inc = artifact.quant->params_inc.bits;
  }
  m.p = artifact.initial_values.size();
  m.n_symbols = artifact.symbols.size();
  m.k = artifact.codebook.size();
  m.n = artifact.series_length;
  return m;
}

std::vector<std::uint8_t> encode(const SymbolicArtifact& artifact) {
  const std::size_t k = artifact.codebook.size();
  const std::size_t n_sym = artifact.symbols.size();
  const std::size_t p = artifact.initial_values.size();
  if (k == 0 || p == 0) {
    throw Error(Errc::CorruptArtifact, "artifact missing codebook or initial");
  }
  if (k > 0xFFFF) {
    throw Error(Errc::TooManyClusters,
                "container stores at most 65535 codebook entries");
  }
  if (n_sym > 0xFFFFFFFFull) {
    throw Error(Errc::TooManySymbols,
                "container stores at most 2^32 - 1 symbols");
  }
  if (p > 0xFFFF || artifact.series_length > 0xFFFFFFFFull) {
    throw Error(Errc::CorruptArtifact, "artifact dimensions exceed container");
  }
  if (artifact.quant &&
      (artifact.quant->q_lens.size() != k || artifact.quant->q_incs.size() != k)) {
    throw Error(Errc::ShapeMismatch, "quantized rows must match codebook size");
  }
  for (std::uint32_t sym : artifact.symbols) {
    if (sym >= k) {
      throw Error(Errc::SymbolOutOfRange,
                  "symbol " + std::to_string(sym) + " outside codebook");
    }
  }

  const bool quantized = artifact.quant.has_value();
  const bool wide = k > 256;
  std::vector<std::uint8_t> out;
  for (char c : kMagic) out.push_back(static_cast<std::uint8_t>(c));
  put_u8(out, kVersion);
  put_u8(out, static_cast<std::uint8_t>((quantized ? kFlagQuantized : 0) |
                                        (wide ? kFlagWideSymbols : 0)));
  put_u8(out, quantized
                  ? static_cast<std::uint8_t>(artifact.quant->params_len.bits)
                  : 0);
  put_u8(out, quantized
                  ? static_cast<std::uint8_t>(artifact.quant->params_inc.bits)
                  : 0);
  put_u16(out, static_cast<std::uint16_t>(k));
  put_u32(out, static_cast<std::uint32_t>(n_sym));
  put_u32(out, static_cast<std::uint32_t>(artifact.series_length));
  put_u16(out, static_cast<std::uint16_t>(p));
  for (double v : artifact.initial_values) {
    put_f32(out, static_cast<float>(v));
  }

  if (quantized) {
    const auto& q = *artifact.quant;
    for (int row = 0; row < 2; ++row) {
      const QuantParams& params = row == 0 ? q.params_len : q.params_inc;
      const auto& codes = row == 0 ? q.q_lens : q.q_incs;
      if (params.zero_point < std::numeric_limits<std::int32_t>::min() ||
          params.zero_point > std::numeric_limits<std::int32_t>::max()) {
        throw Error(Errc::CorruptArtifact,
                    "zero-point does not fit the container's signed 32-bit "
                    "field; use a narrower bit width or symmetric mode");
      }
      put_f32(out, static_cast<float>(params.scale));
      put_i32(out, static_cast<std::int32_t>(params.zero_point));
      BitWriter bw{out};
      for (std::int64_t c : codes) {
        bw.put(static_cast<std::uint64_t>(c), params.bits);
      }
      bw.flush();
    }
  } else {
    for (double v : artifact.codebook.lens) put_f32(out, static_cast<float>(v));
    for (double v : artifact.codebook.incs) put_f32(out, static_cast<float>(v));
  }

  for (std::uint32_t sym : artifact.symbols) {
    if (wide) {
      put_u16(out, static_cast<std::uint16_t>(sym));
    } else {
      put_u8(out, static_cast<std::uint8_t>(sym));
    }
  }

  put_u32(out, crc32(out));
  return out;
}

SymbolicArtifact decode(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  r.need(kMagic.size());
  for (std::size_t i = 0; i < kMagic.size(); ++i) {
    if (r.u8() != static_cast<std::uint8_t>(kMagic[i])) {
      throw Error(Errc::BadMagic, "not a qabba container");
    }
  }
  const std::uint8_t version = r.u8();
  if (version != kVersion) {
    throw Error(Errc::UnsupportedVersion,
                "container version " + std::to_string(version));
  }
  const std::uint8_t flags = r.u8();
  const bool quantized = flags & kFlagQuantized;
  const bool wide = flags & kFlagWideSymbols;
  const int bits_len = r.u8();
  const int bits_inc = r.u8();
  const std::size_t k = r.u16();
  const std::size_t n_sym = r.u32();
  const std::size_t n = r.u32();
  const std::size_t p = r.u16();
  if (k == 0 || p == 0) {
    throw Error(Errc::CorruptArtifact, "container declares empty contents");
  }
  if (quantized && (bits_len < 2 || bits_len > 32 || bits_inc < 2 ||
                    bits_inc > 32)) {
    throw Error(Errc::CorruptArtifact, "invalid stored bit widths");
  }

  SymbolicArtifact artifact;
  artifact.series_length = n;
  artifact.initial_values.reserve(p);
  for (std::size_t i = 0; i < p; ++i) {
    artifact.initial_values.push_back(static_cast<double>(r.f32()));
  }

  std::vector<std::size_t> counts(k, 0);
  if (quantized) {
    QuantizedCodebookState q;
    {
      const float scale = r.f32();
      const std::int32_t zp = r.i32();
      q.params_len = params_from_wire(scale, zp, bits_len);
      q.q_lens = r.bit_row(k, bits_len);
    }
    {
      const float scale = r.f32();
      const std::int32_t zp = r.i32();
      q.params_inc = params_from_wire(scale, zp, bits_inc);
      q.q_incs = r.bit_row(k, bits_inc);
    }
    artifact.quant = std::move(q);
  } else {
    artifact.codebook.lens.reserve(k);
    artifact.codebook.incs.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
      artifact.codebook.lens.push_back(static_cast<double>(r.f32()));
    }
    for (std::size_t i = 0; i < k; ++i) {
      artifact.codebook.incs.push_back(static_cast<double>(r.f32()));
    }
  }

  artifact.symbols.reserve(n_sym);
  for (std::size_t i = 0; i < n_sym; ++i) {
    artifact.symbols.push_back(wide ? r.u16() : r.u8());
  }

  const std::size_t body_end = r.pos();
  const std::uint32_t stored_crc = r.u32();
  if (crc32(bytes.subspan(0, body_end)) != stored_crc) {
    throw Error(Errc::ChecksumMismatch, "container checksum does not match");
  }
  if (r.pos() != bytes.size()) {
    throw Error(Errc::CorruptArtifact, "trailing bytes after checksum");
  }

  for (std::size_t i = 0; i < n_sym; ++i) {
    if (artifact.symbols[i] >= k) {
      throw Error(Errc::CorruptArtifact,
                  "stored symbol outside the codebook",
                  static_cast<std::ptrdiff_t>(i));
    }
    ++counts[artifact.symbols[i]];
  }
  if (quantized) {
    artifact.codebook = dequantize_codebook(*artifact.quant, counts);
  } else {
    artifact.codebook.counts = std::move(counts);
  }
  return artifact;
}

}  // namespace qabba
