#include "tubelab/dyadic.hpp"

#include <cmath>
#include <limits>

namespace tubelab {

namespace detail {

namespace {
constexpr i128 kI128Max = static_cast<i128>((~static_cast<unsigned __int128>(0)) >> 1);
constexpr i128 kI128Min = -kI128Max - 1;
}  // namespace

i128 shl_checked(i128 a, int s) {
  if (a == 0 || s == 0) return a;
  if (s >= 126) throw RangeError("dyadic shift overflow");
  const i128 limit = kI128Max >> s;
  if (a > limit || a < -limit) throw RangeError("dyadic shift overflow");
  return a * (static_cast<i128>(1) << s);
}

i128 mul_checked(i128 a, i128 b) {
  i128 out;
  if (__builtin_mul_overflow(a, b, &out)) throw RangeError("dyadic multiplication overflow");
  return out;
}

i128 add_checked(i128 a, i128 b) {
  i128 out;
  if (__builtin_add_overflow(a, b, &out)) throw RangeError("dyadic addition overflow");
  return out;
}

std::string to_string(i128 v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1u
                            : static_cast<unsigned __int128>(v);
  std::string digits;
  while (u > 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) digits.push_back('-');
  return {digits.rbegin(), digits.rend()};
}

}  // namespace detail

Scale Scale::checked(int exponent) {
  if (exponent < 0 || exponent > kMaxScale) {
    throw ScaleError("scale exponent k=" + std::to_string(exponent) + " outside [0, " +
                     std::to_string(kMaxScale) + "]");
  }
  return Scale{exponent};
}

double Scale::delta() const { return std::ldexp(1.0, -k); }

Scale Scale::half() const {
  if (!is_even()) throw ScaleError("delta^(1/2) requires even k, got k=" + std::to_string(k));
  return Scale{k / 2};
}

DyadicRational::DyadicRational(i128 numerator, int exponent) : num_(numerator), exp_(exponent) {
  if (num_ == 0) {
    exp_ = 0;
    return;
  }
  while (exp_ > 0 && (num_ & 1) == 0) {
    num_ /= 2;
    --exp_;
  }
  if (exp_ < 0) {
    num_ = detail::shl_checked(num_, -exp_);
    exp_ = 0;
  }
  if (exp_ > kMaxExponent) throw RangeError("dyadic exponent exceeds supported precision");
}

DyadicRational DyadicRational::operator-() const {
  if (num_ == detail::kI128Min) throw RangeError("dyadic negation overflow");
  DyadicRational r;
  r.num_ = -num_;
  r.exp_ = exp_;
  return r;
}

DyadicRational operator+(const DyadicRational& a, const DyadicRational& b) {
  const int e = std::max(a.exp_, b.exp_);
  const i128 na = detail::shl_checked(a.num_, e - a.exp_);
  const i128 nb = detail::shl_checked(b.num_, e - b.exp_);
  return {detail::add_checked(na, nb), e};
}

DyadicRational operator-(const DyadicRational& a, const DyadicRational& b) { return a + (-b); }

DyadicRational operator*(const DyadicRational& a, const DyadicRational& b) {
  return {detail::mul_checked(a.num_, b.num_), a.exp_ + b.exp_};
}

std::strong_ordering operator<=>(const DyadicRational& a, const DyadicRational& b) {
  const int e = std::max(a.exp_, b.exp_);
  const i128 na = detail::shl_checked(a.num_, e - a.exp_);
  const i128 nb = detail::shl_checked(b.num_, e - b.exp_);
  return na <=> nb;
}

DyadicRational DyadicRational::scaled_pow2(int shift) const {
  if (num_ == 0) return {};
  return {num_, exp_ - shift};
}

std::int64_t DyadicRational::floor_index(int k) const {
  i128 v;
  if (k >= exp_) {
    v = detail::shl_checked(num_, k - exp_);
  } else {
    v = detail::floor_shr(num_, exp_ - k);
  }
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
    throw RangeError("cell index out of 64-bit range");
  }
  return static_cast<std::int64_t>(v);
}

std::int64_t DyadicRational::grid_value(int k) const {
  if (!on_grid(k)) throw PreconditionError("value " + to_string() + " is not on the 2^-" + std::to_string(k) + " grid");
  return floor_index(k);
}

double DyadicRational::to_double() const {
  return std::ldexp(static_cast<double>(num_), -exp_);
}

std::string DyadicRational::to_string() const {
  if (exp_ == 0) return detail::to_string(num_);
  return detail::to_string(num_) + "/2^" + std::to_string(exp_);
}

}  // namespace tubelab
