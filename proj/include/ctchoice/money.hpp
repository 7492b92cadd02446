#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace ct {

// Monetary amount held as an exact count of minor currency units (cents).
// Keeping amounts integral makes datasets and fixtures bit-stable; the model
// layer only ever sees the real-valued magnitude via value().
class money {
 public:
  money() = default;

  static money from_units(std::int64_t whole_units);
  static money from_minor_units(std::int64_t cents);

  // Parses an exact decimal with at most two fraction digits ("3000",
  // "-12.5", "0.25"). Throws parse_error otherwise.
  static money parse(std::string_view text);

  std::int64_t minor_units() const noexcept { return cents_; }

  // Real-valued magnitude in whole currency units.
  double value() const noexcept { return static_cast<double>(cents_) / 100.0; }

  bool is_zero() const noexcept { return cents_ == 0; }
  bool is_positive() const noexcept { return cents_ > 0; }
  bool is_negative() const noexcept { return cents_ < 0; }

  money abs() const noexcept;
  money negated() const noexcept;

  // Canonical decimal rendering without trailing zeros: "3000", "-12.5".
  std::string str() const;

  friend auto operator<=>(const money&, const money&) = default;

 private:
  explicit money(std::int64_t cents) : cents_(cents) {}

  std::int64_t cents_ = 0;
};

}  // namespace ct
