#pragma once

// Correctly rounded posit arithmetic: add, sub, mul, div, sqrt, plus the
// comparison, sign-injection, integer-conversion and move operations of the
// posit unit. All results are rounded exactly once from the true value.

#include <bit>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>

#include "posit.hpp"

namespace positron {

namespace detail {

inline int msb128(u128 x) {
  const auto hi = static_cast<std::uint64_t>(x >> 64);
  if (hi != 0) return 127 - std::countl_zero(hi);
  return 63 - std::countl_zero(static_cast<std::uint64_t>(x));
}

/// floor(sqrt(x)) by the bitwise digit recurrence; `inexact` is set when
/// the remainder is nonzero.
inline std::uint64_t isqrt128(u128 x, bool& inexact) {
  u128 rem = x;
  u128 root = 0;
  u128 bit = u128(1) << 126;
  while (bit > rem) bit >>= 2;
  while (bit != 0) {
    if (rem >= root + bit) {
      rem -= root + bit;
      root = (root >> 1) + bit;
    } else {
      root >>= 1;
    }
    bit >>= 2;
  }
  inexact = rem != 0;
  return static_cast<std::uint64_t>(root);
}

template <int N>
posit<N> add_magnitudes(unpacked a, unpacked b) {
  if (a.scale < b.scale || (a.scale == b.scale && a.sig < b.sig)) std::swap(a, b);
  const int d = a.scale - b.scale;
  // Hidden bit at position 125 leaves two bits of headroom for the carry.
  const u128 big = u128(a.sig) << 62;
  u128 small = u128(b.sig) << 62;
  if (d >= 126) {
    small = 1;  // entirely sticky
  } else if (d > 0) {
    const bool lost = (small << (128 - d)) != 0;
    small >>= d;
    if (lost) small |= 1;
  }
  u128 sum;
  bool neg = a.neg;
  if (a.neg == b.neg) {
    sum = big + small;
  } else {
    sum = big - small;  // big >= small by the ordering above
    if (sum == 0) return posit<N>::zero();
  }
  const int top = msb128(sum);
  return round_pack<N>(neg, a.scale + (top - 125), sum << (127 - top), false);
}

}  // namespace detail

template <int N>
posit<N> add(posit<N> a, posit<N> b) {
  if (a.is_nar() || b.is_nar()) return posit<N>::nar();
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return detail::add_magnitudes<N>(detail::unpack(a), detail::unpack(b));
}

template <int N>
posit<N> sub(posit<N> a, posit<N> b) {
  return add(a, -b);
}

template <int N>
posit<N> mul(posit<N> a, posit<N> b) {
  if (a.is_nar() || b.is_nar()) return posit<N>::nar();
  if (a.is_zero() || b.is_zero()) return posit<N>::zero();
  const auto ua = detail::unpack(a);
  const auto ub = detail::unpack(b);
  detail::u128 prod = detail::u128(ua.sig) * ub.sig;  // in [2^126, 2^128)
  int scale = ua.scale + ub.scale;
  if ((prod >> 127) != 0) {
    ++scale;
  } else {
    prod <<= 1;
  }
  return detail::round_pack<N>(ua.neg != ub.neg, scale, prod, false);
}

template <int N>
posit<N> div(posit<N> a, posit<N> b) {
  if (a.is_nar() || b.is_nar() || b.is_zero()) return posit<N>::nar();
  if (a.is_zero()) return posit<N>::zero();
  const auto ua = detail::unpack(a);
  const auto ub = detail::unpack(b);
  // 64+ quotient bits and a remainder flag: more than enough for N <= 64.
  const detail::u128 num = detail::u128(ua.sig) << 64;
  const detail::u128 q = num / ub.sig;
  const bool sticky = (num % ub.sig) != 0;
  const int top = detail::msb128(q);
  return detail::round_pack<N>(ua.neg != ub.neg, ua.scale - ub.scale + (top - 64), q << (127 - top), sticky);
}

template <int N>
posit<N> sqrt(posit<N> a) {
  if (a.is_nar() || a.sign_bit()) return posit<N>::nar();
  if (a.is_zero()) return a;
  const auto u = detail::unpack(a);
  // Odd scales borrow one factor of two into the radicand.
  const detail::u128 radicand = detail::u128(u.sig) << ((u.scale & 1) ? 64 : 63);
  bool inexact = false;
  const std::uint64_t root = detail::isqrt128(radicand, inexact);
  return detail::round_pack<N>(false, u.scale >> 1, detail::u128(root) << 64, inexact);
}

template <int N>
posit<N> operator+(posit<N> a, posit<N> b) { return add(a, b); }
template <int N>
posit<N> operator-(posit<N> a, posit<N> b) { return sub(a, b); }
template <int N>
posit<N> operator*(posit<N> a, posit<N> b) { return mul(a, b); }
template <int N>
posit<N> operator/(posit<N> a, posit<N> b) { return div(a, b); }

// ---- comparisons and selection ---------------------------------------

template <int N>
constexpr bool cmp_eq(posit<N> a, posit<N> b) { return a.bits() == b.bits(); }
template <int N>
constexpr bool cmp_lt(posit<N> a, posit<N> b) { return a.as_signed() < b.as_signed(); }
template <int N>
constexpr bool cmp_le(posit<N> a, posit<N> b) { return a.as_signed() <= b.as_signed(); }

template <int N>
constexpr posit<N> min(posit<N> a, posit<N> b) { return cmp_lt(b, a) ? b : a; }
template <int N>
constexpr posit<N> max(posit<N> a, posit<N> b) { return cmp_lt(a, b) ? b : a; }

// ---- sign injection ---------------------------------------------------

enum class sign_mode { copy, negate, exclusive_or };

/// |a| with the sign chosen from b per mode; realized by conditionally
/// negating the pattern of a.
template <int N>
constexpr posit<N> sign_inject(posit<N> a, posit<N> b, sign_mode mode) {
  bool want = b.sign_bit();
  if (mode == sign_mode::negate) want = !want;
  if (mode == sign_mode::exclusive_or) want = a.sign_bit() != b.sign_bit();
  return a.sign_bit() == want ? a : -a;
}

// ---- register moves ---------------------------------------------------

template <int N>
constexpr typename posit<N>::storage_type move_to_int(posit<N> p) { return p.bits(); }
template <int N>
constexpr posit<N> move_from_int(typename posit<N>::storage_type raw) { return posit<N>::from_bits(raw); }

// ---- integer conversions ----------------------------------------------

/// Nearest integer (ties to even), saturated to Int's range. NaR becomes
/// the most negative value of a signed Int and 0 of an unsigned one.
template <std::integral Int, int N>
Int to_integer(posit<N> p) {
  using lim = std::numeric_limits<Int>;
  if (p.is_nar()) return std::is_signed_v<Int> ? lim::min() : Int(0);
  if (p.is_zero()) return 0;
  const auto u = detail::unpack(p);
  constexpr int digits = lim::digits;  // 31/63 signed, 32/64 unsigned
  if (u.scale >= digits) {
    if (u.neg) return std::is_signed_v<Int> ? lim::min() : Int(0);
    return lim::max();
  }
  if (u.scale < -1) return 0;
  // value = sig * 2^(scale - 63); split off the integer part.
  const int shift = 63 - u.scale;  // 1..64 here
  detail::u128 q = detail::u128(u.sig) >> shift;
  const detail::u128 rem = detail::u128(u.sig) & ((detail::u128(1) << shift) - 1);
  const detail::u128 half = detail::u128(1) << (shift - 1);
  if (rem > half || (rem == half && (q & 1) != 0)) ++q;
  if (u.neg) {
    if constexpr (std::is_signed_v<Int>) {
      const detail::u128 limit = detail::u128(1) << digits;
      if (q >= limit) return lim::min();
      return static_cast<Int>(-static_cast<std::int64_t>(static_cast<std::uint64_t>(q)));
    } else {
      return 0;
    }
  }
  if (q > static_cast<detail::u128>(lim::max())) return lim::max();
  return static_cast<Int>(q);
}

template <int N, std::integral Int>
posit<N> from_integer(Int v) {
  if (v == 0) return posit<N>::zero();
  bool neg = false;
  std::uint64_t mag;
  if constexpr (std::is_signed_v<Int>) {
    neg = v < 0;
    mag = neg ? std::uint64_t(0) - static_cast<std::uint64_t>(static_cast<std::int64_t>(v)) : static_cast<std::uint64_t>(v);
  } else {
    mag = static_cast<std::uint64_t>(v);
  }
  const int lz = std::countl_zero(mag);
  return detail::round_pack<N>(neg, 63 - lz, detail::u128(mag) << (64 + lz), false);
}

// ---- IEEE double bridge (used for data I/O, not arithmetic) -------------

template <int N>
posit<N> from_double(double x) {
  if (!std::isfinite(x)) return posit<N>::nar();
  if (x == 0.0) return posit<N>::zero();
  int exp;
  const double frac = std::frexp(std::fabs(x), &exp);  // [0.5, 1)
  const auto mant = static_cast<std::uint64_t>(std::ldexp(frac, 64));
  return detail::round_pack<N>(x < 0, exp - 1, detail::u128(mant) << 64, false);
}

/// Nearest double, ties to even. NaR maps to quiet NaN.
template <int N>
double to_double(posit<N> p) {
  if (p.is_nar()) return std::numeric_limits<double>::quiet_NaN();
  if (p.is_zero()) return 0.0;
  const auto u = detail::unpack(p);
  std::uint64_t q = u.sig >> 11;
  const std::uint64_t rem = u.sig & 0x7FF;
  int scale = u.scale;
  if (rem > 0x400 || (rem == 0x400 && (q & 1) != 0)) ++q;
  if (q == (std::uint64_t(1) << 53)) {
    q >>= 1;
    ++scale;
  }
  const double mag = std::ldexp(static_cast<double>(q), scale - 52);
  return u.neg ? -mag : mag;
}

}  // namespace positron
