#pragma once

// Exact dyadic rationals (mantissa * 2^exponent) and the correctly rounded
// bridge from them to posits. Every posit value, every product of two
// posits, and every quire content is exactly representable here.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <sstream>
#include <string>

#include "posit.hpp"

namespace positron {

using big_int = boost::multiprecision::cpp_int;

class exact_real {
 public:
  exact_real() = default;
  exact_real(big_int mantissa, int exponent) : mant_(std::move(mantissa)), exp_(exponent) { normalize(); }
  explicit exact_real(std::int64_t v) : mant_(v), exp_(0) { normalize(); }

  static exact_real nar() {
    exact_real x;
    x.nar_ = true;
    return x;
  }
  static exact_real pow2(int k) { return exact_real(big_int(1), k); }

  bool is_nar() const { return nar_; }
  bool is_zero() const { return !nar_ && mant_ == 0; }
  int sign() const { return nar_ ? 0 : mant_.sign(); }
  const big_int& mantissa() const { return mant_; }
  int exponent() const { return exp_; }

  exact_real operator-() const {
    exact_real x = *this;
    x.mant_ = -x.mant_;
    return x;
  }

  friend exact_real operator+(const exact_real& a, const exact_real& b) {
    if (a.nar_ || b.nar_) return nar();
    if (a.mant_ == 0) return b;
    if (b.mant_ == 0) return a;
    if (a.exp_ <= b.exp_) return exact_real(a.mant_ + (b.mant_ << (b.exp_ - a.exp_)), a.exp_);
    return exact_real((a.mant_ << (a.exp_ - b.exp_)) + b.mant_, b.exp_);
  }
  friend exact_real operator-(const exact_real& a, const exact_real& b) { return a + (-b); }
  friend exact_real operator*(const exact_real& a, const exact_real& b) {
    if (a.nar_ || b.nar_) return nar();
    return exact_real(a.mant_ * b.mant_, a.exp_ + b.exp_);
  }
  exact_real& operator+=(const exact_real& o) { return *this = *this + o; }
  exact_real& operator-=(const exact_real& o) { return *this = *this - o; }

  friend bool operator==(const exact_real& a, const exact_real& b) {
    if (a.nar_ || b.nar_) return a.nar_ == b.nar_;
    return a.mant_ == b.mant_ && (a.mant_ == 0 || a.exp_ == b.exp_);
  }
  /// Numeric order; NaR compares below everything, matching posit order.
  friend std::strong_ordering operator<=>(const exact_real& a, const exact_real& b) {
    if (a.nar_ || b.nar_) {
      if (a.nar_ && b.nar_) return std::strong_ordering::equal;
      return a.nar_ ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    const int s = (a - b).sign();
    return s < 0 ? std::strong_ordering::less : s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

  /// floor(log2|x|); x must be finite and nonzero.
  int scale() const { return static_cast<int>(boost::multiprecision::msb(abs(mant_))) + exp_; }

  std::string to_string() const {
    if (nar_) return "NaR";
    std::ostringstream os;
    os << mant_;
    if (exp_ != 0) os << "*2^" << exp_;
    return os.str();
  }

 private:
  void normalize() {
    if (mant_ == 0) {
      exp_ = 0;
      return;
    }
    const auto tz = boost::multiprecision::lsb(abs(mant_));
    if (tz > 0) {
      mant_ >>= tz;
      exp_ += static_cast<int>(tz);
    }
  }

  big_int mant_{0};
  int exp_ = 0;
  bool nar_ = false;
};

/// Exact value of a decoded posit, straight from the field formula.
inline exact_real exact_value(const decoded_posit& d) {
  switch (d.kind) {
    case posit_class::zero:
      return exact_real();
    case posit_class::nar:
      return exact_real::nar();
    case posit_class::normal:
      break;
  }
  // ((1 - 3s) + F/2^m) * 2^((1-2s)(4r+e+s)) = ((1-3s)2^m + F) * 2^(that - m)
  const std::int64_t lead = 1 - 3 * d.s;
  big_int num = big_int(lead) << d.m;
  num += big_int(d.fraction);
  const int power = (1 - 2 * d.s) * (4 * d.r + d.e + d.s);
  return exact_real(num, power - d.m);
}

template <int N>
exact_real exact_value(posit<N> p) {
  return exact_value(decode(p));
}

namespace detail {

inline u128 to_u128(const big_int& v) {
  const big_int mask = (big_int(1) << 64) - 1;
  const auto lo = static_cast<std::uint64_t>(v & mask);
  const auto hi = static_cast<std::uint64_t>(v >> 64);
  return (u128(hi) << 64) | lo;
}

/// Normalized 128-bit significand plus sticky for a nonzero exact value.
struct wide_significand {
  bool neg;
  int scale;
  u128 sig;
  bool sticky;
};

inline wide_significand to_wide(const exact_real& v, bool extra_sticky) {
  big_int mag = abs(v.mantissa());
  const int msb = static_cast<int>(boost::multiprecision::msb(mag));
  wide_significand w{v.sign() < 0, msb + v.exponent(), 0, extra_sticky};
  if (msb > 127) {
    const unsigned drop = static_cast<unsigned>(msb - 127);
    if (boost::multiprecision::lsb(mag) < drop) w.sticky = true;
    mag >>= drop;
  } else {
    mag <<= (127 - msb);
  }
  w.sig = to_u128(mag);
  return w;
}

}  // namespace detail

/// Nearest posit to v (ties to even pattern), clamped to [minpos, maxpos]
/// in magnitude. `inexact` flags a value known only as a truncation toward
/// zero with a nonzero tail; the truncation must carry at least N+2 bits.
template <int N>
posit<N> encode_round(const exact_real& v, bool inexact = false) {
  if (v.is_nar()) return posit<N>::nar();
  if (v.is_zero()) return posit<N>::zero();
  const auto w = detail::to_wide(v, inexact);
  return detail::round_pack<N>(w.neg, w.scale, w.sig, w.sticky);
}

}  // namespace positron
