#include "loopoid/octonion.hpp"

#include <cctype>
#include <cstdlib>

namespace loopoid {

Octoniond parse_octonion(const std::string& text) {
  Octoniond out;
  std::size_t i = 0;
  const auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  const auto fail = [&](const char* why) {
    throw Error(ErrorCode::SchemaError, std::string("octonion expression: ") + why + " in '" + text + "'");
  };
  skip();
  if (i == text.size()) fail("empty");
  bool first = true;
  while (true) {
    skip();
    if (i == text.size()) break;
    double sign = 1.0;
    if (text[i] == '+' || text[i] == '-') {
      sign = text[i] == '-' ? -1.0 : 1.0;
      ++i;
      skip();
    } else if (!first) {
      fail("expected '+' or '-'");
    }
    double coef = 1.0;
    if (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.')) {
      // Digits and '.' only: "2e3" is 2 e3, not 2000.
      std::size_t j = i;
      while (j < text.size() && (std::isdigit(static_cast<unsigned char>(text[j])) || text[j] == '.')) ++j;
      const std::string digits = text.substr(i, j - i);
      char* end = nullptr;
      coef = std::strtod(digits.c_str(), &end);
      if (end != digits.c_str() + digits.size()) fail("bad coefficient");
      i = j;
      skip();
      if (i < text.size() && text[i] == '*') {
        ++i;
        skip();
      }
    }
    if (i >= text.size() || text[i] != 'e') fail("expected basis symbol e0..e7");
    ++i;
    if (i >= text.size() || text[i] < '0' || text[i] > '7') fail("basis index must be 0..7");
    const int k = text[i] - '0';
    ++i;
    out[k] += sign * coef;
    first = false;
  }
  return out;
}

CayleyTable octonion_basis_loop() {
  std::vector<std::vector<int>> rows(16, std::vector<int>(16));
  for (int a = 0; a < 16; ++a) {
    for (int b = 0; b < 16; ++b) {
      const auto p = octonion_basis_product(a % 8, b % 8);
      const int sign = p.sign * (a < 8 ? 1 : -1) * (b < 8 ? 1 : -1);
      rows[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = p.index + (sign < 0 ? 8 : 0);
    }
  }
  return CayleyTable(std::move(rows), 0);
}

}  // namespace loopoid
