#pragma once

// Logarithm-approximate multiply, divide and square root (Mitchell's
// method). Each operand |x| = (1 + f) * 2^m is treated as log2|x| ~ m + f;
// the log-domain result is mapped back linearly and then rounded through
// the ordinary posit encoder, so special values behave like the exact units.

#include <cstdint>

#include "ops.hpp"
#include "posit.hpp"

namespace positron {

namespace detail {

// Fractions are carried with 63 bits after the binary point.
constexpr std::uint64_t frac_one = std::uint64_t(1) << 63;

inline std::uint64_t fraction_of(const unpacked& u) { return u.sig - frac_one; }

/// Encodes (1 + f) * 2^scale with f given in 63-bit fixed point, f in [0,1).
template <int N>
posit<N> pack_log_result(bool neg, int scale, std::uint64_t f) {
  return round_pack<N>(neg, scale, u128(frac_one | f) << 64, false);
}

}  // namespace detail

template <int N>
posit<N> approx_mul(posit<N> a, posit<N> b) {
  if (a.is_nar() || b.is_nar()) return posit<N>::nar();
  if (a.is_zero() || b.is_zero()) return posit<N>::zero();
  const auto ua = detail::unpack(a);
  const auto ub = detail::unpack(b);
  const bool neg = ua.neg != ub.neg;
  const detail::u128 sum = detail::u128(detail::fraction_of(ua)) + detail::fraction_of(ub);
  int scale = ua.scale + ub.scale;
  std::uint64_t f;
  if (sum >= detail::frac_one) {
    ++scale;
    f = static_cast<std::uint64_t>(sum - detail::frac_one);
  } else {
    f = static_cast<std::uint64_t>(sum);
  }
  return detail::pack_log_result<N>(neg, scale, f);
}

template <int N>
posit<N> approx_div(posit<N> a, posit<N> b) {
  if (a.is_nar() || b.is_nar() || b.is_zero()) return posit<N>::nar();
  if (a.is_zero()) return posit<N>::zero();
  const auto ua = detail::unpack(a);
  const auto ub = detail::unpack(b);
  const bool neg = ua.neg != ub.neg;
  const std::uint64_t fa = detail::fraction_of(ua);
  const std::uint64_t fb = detail::fraction_of(ub);
  int scale = ua.scale - ub.scale;
  std::uint64_t f;
  if (fa >= fb) {
    f = fa - fb;
  } else {
    // borrow: 1 + (fa - fb) in [0, 1)
    --scale;
    f = detail::frac_one - (fb - fa);
  }
  return detail::pack_log_result<N>(neg, scale, f);
}

template <int N>
posit<N> approx_sqrt(posit<N> a) {
  if (a.is_nar() || a.sign_bit()) return posit<N>::nar();
  if (a.is_zero()) return a;
  const auto u = detail::unpack(a);
  const std::uint64_t f = detail::fraction_of(u);
  // Even scale: (1 + f/2) 2^(m/2). Odd: (1 + (1 + f)/2) 2^((m-1)/2).
  const std::uint64_t half = (u.scale & 1) ? (detail::frac_one + f) >> 1 : f >> 1;
  return detail::pack_log_result<N>(false, u.scale >> 1, half);
}

}  // namespace positron
