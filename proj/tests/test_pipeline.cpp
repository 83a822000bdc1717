#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "qabba/metrics.hpp"
#include "qabba/pipeline.hpp"
#include "qabba/storage.hpp"

using namespace qabba;
using testutil::random_walk;

namespace {

Series smooth_wave(std::size_t n) {
  Series s;
  s.samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / 40.0;
    s.samples.push_back(std::sin(t) + 0.3 * std::cos(3.1 * t));
  }
  s.name = "wave";
  return s;
}

PipelineConfig base_config() {
  PipelineConfig cfg;
  cfg.compression.tol = 0.05;
  cfg.digitization.method = DigitizeMethod::GA;
  cfg.digitization.alpha = 0.4;
  return cfg;
}

}  // namespace

TEST_CASE("a constant series symbolizes to a single piece and symbol") {
  Series s;
  s.samples.assign(11, 5.0);
  s.name = "flat";
  PipelineConfig cfg = base_config();
  auto art = symbolize(s, cfg);
  CHECK(art.series_length == 11);
  CHECK(art.initial_values == std::vector<double>{5.0});
  REQUIRE(art.symbols.size() == 1);
  CHECK(art.symbols[0] == 0);
  REQUIRE(art.codebook.size() == 1);
  CHECK(art.codebook.lens[0] == 10.0);
  CHECK(art.codebook.incs[0] == 0.0);

  auto back = reconstruct(art);
  REQUIRE(back.samples.size() == 11);
  for (double v : back.samples) CHECK(v == 5.0);
}

TEST_CASE("symbolize is deterministic, including its serialized form") {
  auto s = random_walk(400, 17);
  for (auto method : {DigitizeMethod::GA, DigitizeMethod::VQ}) {
    PipelineConfig cfg = base_config();
    cfg.compression.tol = 0.3;
    cfg.digitization.method = method;
    cfg.digitization.k = 5;
    cfg.digitization.seed = 9;
    cfg.quant = QuantSpec{};
    auto a = symbolize(s, cfg);
    auto b = symbolize(s, cfg);
    CHECK(a.symbols == b.symbols);
    CHECK(a.codebook.lens == b.codebook.lens);
    CHECK(a.codebook.incs == b.codebook.incs);
    CHECK(encode(a) == encode(b));
  }
}

TEST_CASE("round trip keeps the error commensurate with the tolerance") {
  auto s = smooth_wave(800);
  PipelineConfig cfg = base_config();
  auto art = symbolize(s, cfg);
  CHECK(art.symbols.size() < 200);
  auto back = reconstruct(art);
  const double err = mse(s, back, LengthPolicy::Lenient);
  CHECK(err < 0.5);
  const std::size_t n = back.samples.size();
  CHECK(n >= 795);
  CHECK(n <= 805);
}

TEST_CASE("quantized artifacts carry the dequantized codebook") {
  auto s = random_walk(500, 23);
  PipelineConfig cfg = base_config();
  cfg.compression.tol = 0.4;
  cfg.quant = QuantSpec{};
  auto art = symbolize(s, cfg);
  REQUIRE(art.quant.has_value());
  auto expected = dequantize_codebook(*art.quant, art.codebook.counts);
  CHECK(art.codebook.lens == expected.lens);
  CHECK(art.codebook.incs == expected.incs);
  for (std::size_t c = 0; c < art.codebook.size(); ++c) {
    CHECK(art.codebook.lens[c] ==
          dequantize(art.quant->q_lens[c], art.quant->params_len));
  }
}

TEST_CASE("unquantized reconstruction recovers the exact source length") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto s = random_walk(600, seed + 40);
    PipelineConfig cfg = base_config();
    cfg.compression.tol = 0.5;
    cfg.digitization.method = DigitizeMethod::VQ;
    cfg.digitization.k = 4;
    auto art = symbolize(s, cfg);
    auto back = reconstruct(art);
    CHECK(back.samples.size() == s.samples.size());
  }
}

TEST_CASE("multichannel processes channels independently") {
  std::vector<Series> channels = {random_walk(300, 1), random_walk(300, 1),
                                  random_walk(300, 2)};
  PipelineConfig cfg = base_config();
  cfg.compression.tol = 0.3;
  auto arts = symbolize_multichannel(channels, cfg);
  REQUIRE(arts.size() == 3);
  CHECK(arts[0].symbols == arts[1].symbols);
  CHECK(arts[0].codebook.lens == arts[1].codebook.lens);
  CHECK(encode(arts[0]) == encode(arts[1]));
}

TEST_CASE("multichannel errors name the offending channel") {
  std::vector<Series> channels = {random_walk(50, 1), Series{}};
  channels[1].samples = {0.0, std::numeric_limits<double>::quiet_NaN()};
  PipelineConfig cfg = base_config();
  try {
    symbolize_multichannel(channels, cfg);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("channel 1") != std::string::npos);
    CHECK(e.code() == Errc::NonFiniteSample);
  }
}

TEST_CASE("reconstruct rejects hollow artifacts") {
  SymbolicArtifact art;
  CHECK(testutil::thrown_code([&] { reconstruct(art); }) ==
        Errc::CorruptArtifact);
}
