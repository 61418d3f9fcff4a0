#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace removal {

/// Exact rational with 64-bit numerator and denominator, always normalized
/// (gcd(num, den) == 1, den > 0). Arithmetic goes through 128-bit
/// intermediates and throws std::overflow_error if a result does not fit.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  [[nodiscard]] std::int64_t num() const { return num_; }
  [[nodiscard]] std::int64_t den() const { return den_; }

  [[nodiscard]] double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }
  [[nodiscard]] std::string str() const;

  /// floor(*this * k) for a non-negative integer k.
  [[nodiscard]] std::int64_t floor_times(std::int64_t k) const;
  /// ceil(*this * k) for a non-negative integer k.
  [[nodiscard]] std::int64_t ceil_times(std::int64_t k) const;

  /// Parses "p/q", "p" or a finite decimal such as "0.25".
  static Rational parse(const std::string& text);

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  static Rational from_wide(__int128 num, __int128 den);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace removal
