#include "ctchoice/money.hpp"

#include <cctype>
#include <cstdlib>

#include "ctchoice/errors.hpp"

namespace ct {

money money::from_units(std::int64_t whole_units) {
  return money(whole_units * 100);
}

money money::from_minor_units(std::int64_t cents) { return money(cents); }

money money::parse(std::string_view text) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    negative = text[i] == '-';
    ++i;
  }
  std::int64_t whole = 0;
  std::size_t digits = 0;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    whole = whole * 10 + (text[i] - '0');
    ++i;
    ++digits;
  }
  std::int64_t frac = 0;
  std::size_t frac_digits = 0;
  if (i < text.size() && text[i] == '.') {
    ++i;
    while (i < text.size() &&
           std::isdigit(static_cast<unsigned char>(text[i]))) {
      if (frac_digits == 2) {
        throw parse_error("amount '" + std::string(text) +
                          "' has more than two decimal places");
      }
      frac = frac * 10 + (text[i] - '0');
      ++i;
      ++frac_digits;
    }
    if (frac_digits == 0) {
      throw parse_error("amount '" + std::string(text) +
                        "' has a bare decimal point");
    }
  }
  if (i != text.size() || digits == 0) {
    throw parse_error("amount '" + std::string(text) +
                      "' is not a decimal number");
  }
  if (frac_digits == 1) frac *= 10;
  std::int64_t cents = whole * 100 + frac;
  return money(negative ? -cents : cents);
}

money money::abs() const noexcept {
  return money(cents_ < 0 ? -cents_ : cents_);
}

money money::negated() const noexcept { return money(-cents_); }

std::string money::str() const {
  std::int64_t c = cents_ < 0 ? -cents_ : cents_;
  std::string out = cents_ < 0 ? "-" : "";
  out += std::to_string(c / 100);
  std::int64_t frac = c % 100;
  if (frac != 0) {
    out += '.';
    if (frac % 10 == 0) {
      out += static_cast<char>('0' + frac / 10);
    } else {
      out += static_cast<char>('0' + frac / 10);
      out += static_cast<char>('0' + frac % 10);
    }
  }
  return out;
}

}  // namespace ct
