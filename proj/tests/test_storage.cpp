#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "qabba/pipeline.hpp"
#include "qabba/storage.hpp"

using namespace qabba;
using testutil::random_walk;
using testutil::thrown_code;

namespace {

// Independent bitwise CRC-32 (reflected 0xEDB88320), validated against the
// classic known answer below.
std::uint32_t crc_oracle(const std::uint8_t* data, std::size_t n) {
  std::uint32_t crc = 0xFFFFFFFFu;
  for (std::size_t i = 0; i < n; ++i) {
    crc ^= data[i];
    for (int b = 0; b < 8; ++b) {
      crc = (crc >> 1) ^ (0xEDB88320u & (0u - (crc & 1u)));
    }
  }
  return crc ^ 0xFFFFFFFFu;
}

SymbolicArtifact minimal_artifact() {
  SymbolicArtifact art;
  art.initial_values = {5.0};
  art.symbols = {0};
  art.codebook.lens = {10.0};
  art.codebook.incs = {0.0};
  art.codebook.counts = {1};
  art.series_length = 11;
  return art;
}

SymbolicArtifact plain_artifact(std::size_t k, std::size_t n_sym) {
  SymbolicArtifact art;
  art.initial_values = {1.5};
  qabba::Rng rng(k * 1000 + n_sym);
  for (std::size_t i = 0; i < k; ++i) {
    art.codebook.lens.push_back(1.0 + static_cast<double>(rng.below(30)));
    art.codebook.incs.push_back(rng.normal());
    art.codebook.counts.push_back(0);
  }
  for (std::size_t i = 0; i < n_sym; ++i) {
    const auto sym = static_cast<std::uint32_t>(rng.below(k));
    art.symbols.push_back(sym);
    ++art.codebook.counts[sym];
  }
  art.series_length = 40 * n_sym;
  return art;
}

SymbolicArtifact quantized_artifact(std::size_t k, std::size_t n_sym,
                                    int bits_len, int bits_inc,
                                    QuantMode mode = QuantMode::Asymmetric) {
  SymbolicArtifact art = plain_artifact(k, n_sym);
  QuantSpec spec;
  spec.bits_len = bits_len;
  spec.bits_inc = bits_inc;
  spec.mode = mode;
  art.quant = quantize_codebook(art.codebook, spec);
  auto deq = dequantize_codebook(*art.quant, art.codebook.counts);
  art.codebook = std::move(deq);
  return art;
}

std::uint32_t read_le32(const std::vector<std::uint8_t>& v, std::size_t at) {
  return static_cast<std::uint32_t>(v[at]) |
         (static_cast<std::uint32_t>(v[at + 1]) << 8) |
         (static_cast<std::uint32_t>(v[at + 2]) << 16) |
         (static_cast<std::uint32_t>(v[at + 3]) << 24);
}

}  // namespace

TEST_CASE("crc oracle known answer") {
  const char* s = "123456789";
  CHECK(crc_oracle(reinterpret_cast<const std::uint8_t*>(s), 9) == 0xCBF43926u);
}

TEST_CASE("theoretical ratio with plain 32-bit codebook entries") {
  StorageModel m;
  m.n_symbols = 10;
  m.k = 5;
  m.n = 1000;
  m.p = 1;
  CHECK(ratio_abba(m) == doctest::Approx(0.0135).epsilon(1e-12));
}

TEST_CASE("theoretical ratio with low-bit codebook entries") {
  StorageModel m;
  m.n_symbols = 10;
  m.k = 5;
  m.n = 1000;
  m.p = 1;
  m.b_len = 8;
  m.b_inc = 12;
  CHECK(ratio_qabba(m) == doctest::Approx(0.008625).epsilon(1e-12));
}

TEST_CASE("low-bit storage beats plain storage in the model") {
  StorageModel m;
  m.n_symbols = 200;
  m.k = 8;
  m.n = 10000;
  m.p = 1;
  const double plain = ratio_abba(m);
  m.b_len = 8;
  m.b_inc = 12;
  CHECK(ratio_qabba(m) < plain);
}

TEST_CASE("model_for mirrors the artifact dimensions") {
  auto art = quantized_artifact(5, 20, 8, 12);
  art.series_length = 500;
  auto m = model_for(art);
  CHECK(m.b_len == 8);
  CHECK(m.b_inc == 12);
  CHECK(m.b_sym == 8);
  CHECK(m.k == 5);
  CHECK(m.n_symbols == 20);
  CHECK(m.n == 500);
  CHECK(m.p == 1);

  auto plain = plain_artifact(300, 10);
  auto mp = model_for(plain);
  CHECK(mp.b_len == 32);
  CHECK(mp.b_inc == 32);
  CHECK(mp.b_sym == 16);
}

TEST_CASE("minimal container bytes are exactly as specified") {
  auto bytes = encode(minimal_artifact());
  const std::vector<std::uint8_t> want_prefix = {
      0x51, 0x41, 0x42, 0x41, 0x31,  // magic
      0x01,                          // version
      0x00,                          // flags: plain, narrow symbols
      0x00, 0x00,                    // stored bit widths (unused)
      0x01, 0x00,                    // k = 1
      0x01, 0x00, 0x00, 0x00,        // N = 1
      0x0B, 0x00, 0x00, 0x00,        // n = 11
      0x01, 0x00,                    // p = 1
      0x00, 0x00, 0xA0, 0x40,        // initial 5.0f
      0x00, 0x00, 0x20, 0x41,        // length center 10.0f
      0x00, 0x00, 0x00, 0x00,        // increment center 0.0f
      0x00,                          // symbol 0
  };
  REQUIRE(bytes.size() == want_prefix.size() + 4);
  for (std::size_t i = 0; i < want_prefix.size(); ++i) {
    CHECK(bytes[i] == want_prefix[i]);
  }
  CHECK(read_le32(bytes, want_prefix.size()) ==
        crc_oracle(bytes.data(), want_prefix.size()));
}

TEST_CASE("plain encode costs the model numerator plus fixed overhead") {
  for (std::size_t k : {1, 5, 9}) {
    auto art = plain_artifact(k, 33);
    const std::size_t bits = encode(art).size() * 8;
    const std::size_t numerator = 8 * 33 + 64 * k + 32 * 1;
    CHECK(bits == numerator + kPlainOverheadBits);
  }
}

TEST_CASE("quantized encode costs the numerator plus overhead plus padding") {
  // 6 codes at 8 and 12 bits both end on byte boundaries.
  {
    auto art = quantized_artifact(6, 50, 8, 12);
    const std::size_t bits = encode(art).size() * 8;
    const std::size_t numerator = 8 * 50 + (8 + 12) * 6 + 32 + 64;
    CHECK(bits == numerator + kQuantizedOverheadBits);
  }
  // 5 codes at 12 bits leave 60 bits, padded up to 64.
  {
    auto art = quantized_artifact(5, 50, 8, 12);
    const std::size_t bits = encode(art).size() * 8;
    const std::size_t numerator = 8 * 50 + (8 + 12) * 5 + 32 + 64;
    CHECK(bits == numerator + kQuantizedOverheadBits + 4);
  }
}

TEST_CASE("plain artifacts survive the round trip at single precision") {
  auto art = plain_artifact(7, 40);
  art.series_length = 1234;
  auto bytes = encode(art);
  auto back = decode(bytes);
  CHECK_FALSE(back.quant.has_value());
  CHECK(back.series_length == 1234);
  CHECK(back.symbols == art.symbols);
  CHECK(back.codebook.counts == art.codebook.counts);
  REQUIRE(back.initial_values.size() == 1);
  CHECK(back.initial_values[0] ==
        static_cast<double>(static_cast<float>(art.initial_values[0])));
  for (std::size_t i = 0; i < 7; ++i) {
    CHECK(back.codebook.lens[i] ==
          static_cast<double>(static_cast<float>(art.codebook.lens[i])));
    CHECK(back.codebook.incs[i] ==
          static_cast<double>(static_cast<float>(art.codebook.incs[i])));
  }
}

TEST_CASE("quantized artifacts round trip codes, grids and counts") {
  for (auto mode : {QuantMode::Asymmetric, QuantMode::Symmetric}) {
    auto art = quantized_artifact(9, 60, 7, 13, mode);
    auto bytes = encode(art);
    auto back = decode(bytes);
    REQUIRE(back.quant.has_value());
    CHECK(back.quant->q_lens == art.quant->q_lens);
    CHECK(back.quant->q_incs == art.quant->q_incs);
    CHECK(back.quant->params_len.bits == 7);
    CHECK(back.quant->params_inc.bits == 13);
    CHECK(back.quant->params_len.zero_point == art.quant->params_len.zero_point);
    CHECK(back.quant->params_inc.zero_point == art.quant->params_inc.zero_point);
    CHECK(back.quant->params_len.scale ==
          static_cast<double>(static_cast<float>(art.quant->params_len.scale)));
    CHECK(back.codebook.counts == art.codebook.counts);
    // The stored grid is single precision; values stay consistent with it.
    for (std::size_t i = 0; i < 9; ++i) {
      CHECK(back.codebook.lens[i] ==
            dequantize(back.quant->q_lens[i], back.quant->params_len));
      CHECK(back.codebook.lens[i] ==
            doctest::Approx(art.codebook.lens[i]).epsilon(1e-5));
      CHECK(back.codebook.incs[i] ==
            doctest::Approx(art.codebook.incs[i]).epsilon(1e-5));
    }
  }
}

TEST_CASE("negative codes pack and unpack as two's complement") {
  auto art = quantized_artifact(8, 30, 5, 11, QuantMode::Symmetric);
  bool has_negative = false;
  for (auto c : art.quant->q_incs) has_negative |= (c < 0);
  REQUIRE(has_negative);
  auto back = decode(encode(art));
  CHECK(back.quant->q_lens == art.quant->q_lens);
  CHECK(back.quant->q_incs == art.quant->q_incs);
}

TEST_CASE("wide symbol containers round trip") {
  auto art = plain_artifact(300, 64);
  bool has_wide = false;
  for (auto s : art.symbols) has_wide |= (s > 255);
  REQUIRE(has_wide);
  auto bytes = encode(art);
  CHECK((bytes[6] & 0x02) != 0);
  auto back = decode(bytes);
  CHECK(back.symbols == art.symbols);
  CHECK(back.codebook.counts == art.codebook.counts);
}

TEST_CASE("encode validates artifact shape") {
  SymbolicArtifact hollow;
  CHECK(thrown_code([&] { encode(hollow); }) == Errc::CorruptArtifact);

  auto art = minimal_artifact();
  art.symbols = {1};
  CHECK(thrown_code([&] { encode(art); }) == Errc::SymbolOutOfRange);

  auto mismatched = quantized_artifact(4, 10, 8, 8);
  mismatched.quant->q_lens.pop_back();
  CHECK(thrown_code([&] { encode(mismatched); }) == Errc::ShapeMismatch);
}

TEST_CASE("encode rejects zero-points beyond the stored field") {
  auto art = quantized_artifact(4, 10, 8, 8);
  art.quant->params_len.zero_point = std::int64_t{1} << 40;
  CHECK(thrown_code([&] { encode(art); }) == Errc::CorruptArtifact);
}

TEST_CASE("a wide grid far from zero cannot produce a storable zero-point") {
  Codebook cb;
  cb.lens = {1e9, 1e9 + 1.0};
  cb.incs = {0.0, 1.0};
  cb.counts = {1, 1};
  QuantSpec spec;
  spec.bits_len = 32;
  spec.bits_inc = 8;
  spec.mode = QuantMode::Asymmetric;
  auto state = quantize_codebook(cb, spec);
  SymbolicArtifact art;
  art.initial_values = {0.0};
  art.symbols = {0, 1};
  art.codebook = dequantize_codebook(state, cb.counts);
  art.quant = state;
  art.series_length = 10;
  CHECK(thrown_code([&] { encode(art); }) == Errc::CorruptArtifact);
}

TEST_CASE("decode rejects tampered containers") {
  auto art = quantized_artifact(5, 25, 8, 12);
  auto good = encode(art);

  auto bad_magic = good;
  bad_magic[0] = 'X';
  CHECK(thrown_code([&] { decode(bad_magic); }) == Errc::BadMagic);

  auto bad_version = good;
  bad_version[5] = 2;
  CHECK(thrown_code([&] { decode(bad_version); }) == Errc::UnsupportedVersion);

  auto truncated = good;
  truncated.resize(truncated.size() - 9);
  CHECK(thrown_code([&] { decode(truncated); }) == Errc::Truncated);

  auto flipped = good;
  flipped[25] ^= 0x10;
  CHECK(thrown_code([&] { decode(flipped); }) == Errc::ChecksumMismatch);

  auto trailing = good;
  trailing.push_back(0);
  CHECK(thrown_code([&] { decode(trailing); }) == Errc::CorruptArtifact);

  CHECK(thrown_code([&] {
          decode(std::vector<std::uint8_t>{});
        }) == Errc::Truncated);
}

TEST_CASE("decode rejects symbols outside the codebook after the crc passes") {
  auto bytes = encode(minimal_artifact());
  // Overwrite the symbol byte (last before the CRC) and refresh the CRC.
  bytes[bytes.size() - 5] = 5;
  const std::uint32_t crc = crc_oracle(bytes.data(), bytes.size() - 4);
  for (int i = 0; i < 4; ++i) {
    bytes[bytes.size() - 4 + i] = static_cast<std::uint8_t>(crc >> (8 * i));
  }
  try {
    decode(bytes);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::CorruptArtifact);
    CHECK(e.index() == 0);
  }
}

TEST_CASE("pipeline artifacts survive encode and decode end to end") {
  auto s = random_walk(700, 99);
  PipelineConfig cfg;
  cfg.compression.tol = 0.35;
  cfg.digitization.method = DigitizeMethod::VQ;
  cfg.digitization.k = 6;
  cfg.quant = QuantSpec{};
  auto art = symbolize(s, cfg);
  auto back = decode(encode(art));
  CHECK(back.symbols == art.symbols);
  CHECK(back.series_length == art.series_length);
  auto rebuilt = reconstruct(back);
  auto direct = reconstruct(art);
  // Reconstruction from the decoded artifact matches the in-memory one up
  // to the single-precision grid.
  REQUIRE(rebuilt.samples.size() == direct.samples.size());
  for (std::size_t i = 0; i < rebuilt.samples.size(); ++i) {
    CHECK(rebuilt.samples[i] == doctest::Approx(direct.samples[i]).epsilon(1e-4));
  }
}
