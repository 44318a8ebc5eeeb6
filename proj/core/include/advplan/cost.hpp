#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>

namespace advplan {

// Plan cost: a non-negative integer or the infinite marker used for
// unsolvable instances. Infinite compares above every finite value.
class Cost {
 public:
  constexpr Cost() = default;
  constexpr explicit Cost(std::int64_t value) : value_(value) {}

  static constexpr Cost infinite() { return Cost(kInfinite); }

  constexpr bool is_infinite() const { return value_ == kInfinite; }
  constexpr bool is_finite() const { return value_ != kInfinite; }
  constexpr std::int64_t value() const { return value_; }

  constexpr Cost operator+(Cost other) const {
    if (is_infinite() || other.is_infinite()) return infinite();
    return Cost(value_ + other.value_);
  }
  constexpr Cost& operator+=(Cost other) { return *this = *this + other; }

  constexpr auto operator<=>(const Cost&) const = default;

  std::string to_string() const {
    return is_infinite() ? std::string("inf") : std::to_string(value_);
  }

  // Accepts "inf" or a decimal integer; throws std::invalid_argument.
  static Cost parse(const std::string& text);

 private:
  static constexpr std::int64_t kInfinite =
      std::numeric_limits<std::int64_t>::max();
  std::int64_t value_ = 0;
};

inline std::ostream& operator<<(std::ostream& os, Cost cost) {
  return os << cost.to_string();
}

}  // namespace advplan
