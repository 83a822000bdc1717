#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "qabba/types.hpp"

using namespace qabba;
using testutil::thrown_code;

TEST_CASE("validate_series rejects empty and single-sample input") {
  Series s;
  CHECK(thrown_code([&] { validate_series(s); }) == Errc::EmptySeries);
  s.samples = {1.0};
  CHECK(thrown_code([&] { validate_series(s); }) == Errc::EmptySeries);
}

TEST_CASE("validate_series rejects non-finite samples with their index") {
  Series s;
  s.samples = {0.0, std::numeric_limits<double>::quiet_NaN(), 1.0};
  try {
    validate_series(s);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonFiniteSample);
    CHECK(e.index() == 1);
  }

  s.samples = {0.0, 1.0, std::numeric_limits<double>::infinity()};
  try {
    validate_series(s);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonFiniteSample);
    CHECK(e.index() == 2);
  }
}

TEST_CASE("validate_series accepts finite data") {
  Series s;
  s.samples = {0.0, -1.5, 3.25};
  CHECK_NOTHROW(validate_series(s));
}

TEST_CASE("render_symbols uses letters then pairs then bracketed indices") {
  std::vector<std::uint32_t> singles = {0, 1, 25, 26, 51};
  CHECK(render_symbols(singles) == "abzAZ");

  std::vector<std::uint32_t> pairs = {52, 53, 104};
  CHECK(render_symbols(pairs) == "aaabba");

  std::vector<std::uint32_t> last_pair = {52 + 52 * 52 - 1};
  CHECK(render_symbols(last_pair) == "ZZ");

  std::vector<std::uint32_t> big = {52 + 52 * 52};
  CHECK(render_symbols(big) == "{2756}");
}

TEST_CASE("error text starts with the code name") {
  try {
    validate_series(Series{});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("EmptySeries") == 0);
  }
}
