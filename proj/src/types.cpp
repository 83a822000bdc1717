#include "qabba/types.hpp"

#include <cmath>

namespace qabba {

void validate_series(const Series& s) {
  if (s.samples.size() < 2) {
    throw Error(Errc::EmptySeries, "series needs at least two samples, got " +
                                       std::to_string(s.samples.size()));
  }
  for (std::size_t i = 0; i < s.samples.size(); ++i) {
    if (!std::isfinite(s.samples[i])) {
      throw Error(Errc::NonFiniteSample,
                  "sample " + std::to_string(i) + " is not finite",
                  static_cast<std::ptrdiff_t>(i));
    }
  }
}

std::string render_symbols(std::span<const std::uint32_t> symbols) {
  static const char table[] =
      "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";
  std::string out;
  out.reserve(symbols.size());
  for (std::uint32_t sym : symbols) {
    if (sym < 52) {
      out.push_back(table[sym]);
    } else if (sym < 52 + 52 * 52) {
      const std::uint32_t v = sym - 52;
      out.push_back(table[v / 52]);
      out.push_back(table[v % 52]);
    } else {
      out += "{" + std::to_string(sym) + "}";
    }
  }
  return out;
}

}  // namespace qabba
