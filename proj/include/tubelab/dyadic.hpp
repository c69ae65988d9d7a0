#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include "tubelab/errors.hpp"

namespace tubelab {

using i128 = __int128;

// Finest supported working scale is 2^-kMaxScale.
inline constexpr int kMaxScale = 20;

// Dyadic scale delta = 2^-k.
struct Scale {
  int k = 0;

  constexpr Scale() = default;
  constexpr explicit Scale(int exponent) : k(exponent) {}

  // Throws ScaleError unless 0 <= k <= kMaxScale.
  static Scale checked(int exponent);

  double delta() const;
  // delta^(1/2) companion; requires even k.
  Scale half() const;
  bool is_even() const { return k % 2 == 0; }

  friend constexpr auto operator<=>(Scale, Scale) = default;
};

// Exact value numerator / 2^exponent in canonical form (numerator odd, or
// zero with exponent 0). Every operation either returns an exact result or
// throws RangeError.
class DyadicRational {
 public:
  static constexpr int kMaxExponent = 96;

  constexpr DyadicRational() = default;
  DyadicRational(i128 numerator, int exponent);

  static DyadicRational integer(std::int64_t v) { return {v, 0}; }
  // v * 2^-k
  static DyadicRational grid(std::int64_t v, int k) { return {v, k}; }

  i128 numerator() const { return num_; }
  int exponent() const { return exp_; }

  DyadicRational operator-() const;
  friend DyadicRational operator+(const DyadicRational& a, const DyadicRational& b);
  friend DyadicRational operator-(const DyadicRational& a, const DyadicRational& b);
  friend DyadicRational operator*(const DyadicRational& a, const DyadicRational& b);
  DyadicRational& operator+=(const DyadicRational& o) { return *this = *this + o; }
  DyadicRational& operator-=(const DyadicRational& o) { return *this = *this - o; }

  friend std::strong_ordering operator<=>(const DyadicRational& a, const DyadicRational& b);
  friend bool operator==(const DyadicRational& a, const DyadicRational& b) = default;

  // this * 2^shift (shift may be negative).
  DyadicRational scaled_pow2(int shift) const;

  // floor(x * 2^k) as an integer: index of the half-open cell [i 2^-k, (i+1) 2^-k).
  std::int64_t floor_index(int k) const;
  // True iff x is an integer multiple of 2^-k.
  bool on_grid(int k) const { return exp_ <= k; }
  // x * 2^k, requires on_grid(k).
  std::int64_t grid_value(int k) const;

  bool is_zero() const { return num_ == 0; }
  int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }
  DyadicRational abs() const { return num_ < 0 ? -*this : *this; }
  double to_double() const;
  std::string to_string() const;

 private:
  i128 num_ = 0;
  int exp_ = 0;
};

struct DyadicPoint {
  DyadicRational x;
  DyadicRational y;

  friend bool operator==(const DyadicPoint&, const DyadicPoint&) = default;
  friend auto operator<=>(const DyadicPoint& a, const DyadicPoint& b) {
    if (auto c = a.x <=> b.x; c != 0) return c;
    return a.y <=> b.y;
  }
};

namespace detail {
// a * 2^s with overflow detection (s >= 0).
i128 shl_checked(i128 a, int s);
i128 mul_checked(i128 a, i128 b);
i128 add_checked(i128 a, i128 b);
// floor(a / 2^s) for s >= 0.
inline i128 floor_shr(i128 a, int s) { return s >= 127 ? (a < 0 ? -1 : 0) : (a >> s); }
std::string to_string(i128 v);
}  // namespace detail

}  // namespace tubelab
