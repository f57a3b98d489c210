#pragma once

// Standard posit format with es = 2 for the byte-aligned widths 8, 16, 32
// and 64. A posit<N> is a thin value wrapper around its raw bit pattern;
// arithmetic lives in ops.hpp, exact values in exact_real.hpp.

#include <bit>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

namespace positron {

template <int N>
concept supported_width = (N == 8 || N == 16 || N == 32 || N == 64);

namespace detail {

using u128 = unsigned __int128;

template <int N>
struct storage;
template <>
struct storage<8> {
  using type = std::uint8_t;
  using signed_type = std::int8_t;
};
template <>
struct storage<16> {
  using type = std::uint16_t;
  using signed_type = std::int16_t;
};
template <>
struct storage<32> {
  using type = std::uint32_t;
  using signed_type = std::int32_t;
};
template <>
struct storage<64> {
  using type = std::uint64_t;
  using signed_type = std::int64_t;
};

}  // namespace detail

template <int N>
  requires supported_width<N>
class posit {
 public:
  using storage_type = typename detail::storage<N>::type;
  using signed_type = typename detail::storage<N>::signed_type;

  static constexpr int width = N;
  static constexpr int es = 2;
  /// log2(maxpos); minpos is 2^-max_scale.
  static constexpr int max_scale = 4 * N - 8;

  constexpr posit() = default;

  static constexpr posit from_bits(storage_type bits) {
    posit p;
    p.bits_ = bits;
    return p;
  }

  static constexpr posit zero() { return from_bits(0); }
  static constexpr posit nar() { return from_bits(storage_type(storage_type(1) << (N - 1))); }
  static constexpr posit one() { return from_bits(storage_type(storage_type(1) << (N - 2))); }
  static constexpr posit maxpos() { return from_bits(storage_type(~nar().bits_)); }
  static constexpr posit minpos() { return from_bits(1); }

  constexpr storage_type bits() const { return bits_; }
  constexpr signed_type as_signed() const { return static_cast<signed_type>(bits_); }

  constexpr bool is_zero() const { return bits_ == 0; }
  constexpr bool is_nar() const { return bits_ == nar().bits_; }
  constexpr bool sign_bit() const { return (bits_ >> (N - 1)) != 0; }

  /// Two's complement of the pattern, which is exact negation. NaR and zero
  /// are fixed points.
  constexpr posit operator-() const { return from_bits(storage_type(-bits_)); }

  friend constexpr bool operator==(posit, posit) = default;
  /// Total order: patterns compare as N-bit signed integers, NaR least.
  friend constexpr std::strong_ordering operator<=>(posit a, posit b) {
    return a.as_signed() <=> b.as_signed();
  }

 private:
  storage_type bits_{0};
};

using posit8 = posit<8>;
using posit16 = posit<16>;
using posit32 = posit<32>;
using posit64 = posit<64>;

enum class posit_class { zero, nar, normal };

template <int N>
constexpr posit_class classify(posit<N> p) {
  if (p.is_zero()) return posit_class::zero;
  if (p.is_nar()) return posit_class::nar;
  return posit_class::normal;
}

/// Field view of a posit read straight off the pattern. For negative
/// posits the fields are NOT complemented first; the value is
///   ((1 - 3s) + F / 2^m) * 2^((1 - 2s) * (4r + e + s)).
struct decoded_posit {
  posit_class kind = posit_class::zero;
  int s = 0;                  ///< sign bit
  int k = 0;                  ///< regime run length
  int r = 0;                  ///< regime value
  int e = 0;                  ///< exponent, 0..3
  std::uint64_t fraction = 0; ///< F
  int m = 0;                  ///< number of fraction bits
};

template <int N>
constexpr decoded_posit decode(posit<N> p) {
  decoded_posit d;
  d.kind = classify(p);
  if (d.kind != posit_class::normal) return d;

  const std::uint64_t raw = p.bits();
  d.s = static_cast<int>(raw >> (N - 1));
  constexpr int body_bits = N - 1;
  // Body left-aligned in a 64-bit word, sign dropped.
  const std::uint64_t body = (raw << (64 - N)) << 1;
  const bool r0 = (body >> 63) != 0;
  int k = r0 ? std::countl_one(body) : std::countl_zero(body);
  if (k > body_bits) k = body_bits;
  d.k = k;
  d.r = r0 ? k - 1 : -k;

  int remaining = body_bits - k - 1;
  if (remaining < 0) remaining = 0;
  const std::uint64_t tail = remaining == 0 ? 0 : (raw & ((std::uint64_t(1) << remaining) - 1));
  if (remaining >= 2) {
    d.e = static_cast<int>(tail >> (remaining - 2));
    d.m = remaining - 2;
    d.fraction = d.m == 0 ? 0 : (tail & ((std::uint64_t(1) << d.m) - 1));
  } else {
    // Exponent bits past the end of the pattern read as zero.
    d.e = static_cast<int>(tail << (2 - remaining));
    d.m = 0;
    d.fraction = 0;
  }
  return d;
}

namespace detail {

/// Magnitude of a normal posit as sig * 2^(scale - 63), sig in [2^63, 2^64).
struct unpacked {
  bool neg = false;
  int scale = 0;
  std::uint64_t sig = 0;
};

inline constexpr unpacked unpack(const decoded_posit& d) {
  unpacked u;
  u.neg = d.s != 0;
  const int t = 4 * d.r + d.e;
  if (!u.neg) {
    u.scale = t;
    u.sig = (std::uint64_t(1) << 63) | (d.fraction << (63 - d.m));
  } else if (d.fraction == 0) {
    // (-2 + 0) * 2^-(t + 1) = -1 * 2^-t
    u.scale = -t;
    u.sig = std::uint64_t(1) << 63;
  } else {
    // |(-2 + f)| = (2^(m+1) - F) / 2^m, which lies in (1, 2).
    u.scale = -(t + 1);
    u.sig = ((std::uint64_t(2) << d.m) - d.fraction) << (63 - d.m);
  }
  return u;
}

template <int N>
constexpr unpacked unpack(posit<N> p) {
  return unpack(decode(p));
}

/// Encodes sign * sig * 2^(scale - 127) (sig normalized, bit 127 set; sticky
/// marks nonzero bits below sig) into the nearest posit, ties to even
/// pattern. Magnitudes outside [minpos, maxpos] clamp; never yields zero
/// or NaR.
template <int N>
constexpr posit<N> round_pack(bool neg, int scale, u128 sig, bool sticky) {
  using P = posit<N>;
  using S = typename P::storage_type;
  if (scale >= P::max_scale) return neg ? -P::maxpos() : P::maxpos();
  if (scale < -P::max_scale) return neg ? -P::minpos() : P::minpos();

  const int r = scale >> 2;  // floor
  const int e = scale & 3;
  int len;
  u128 regime;
  if (r >= 0) {
    len = r + 2;
    regime = ((u128(1) << (r + 1)) - 1) << 1;
  } else {
    len = -r + 1;
    regime = 1;
  }
  u128 w = regime << (128 - len);
  w |= u128(e) << (128 - len - 2);
  const u128 frac = sig << 1;  // hidden bit dropped
  const int pos = len + 2;
  w |= frac >> pos;
  if ((frac << (128 - pos)) != 0) sticky = true;

  u128 kept = w >> (128 - (N - 1));
  const bool guard = ((w >> (128 - N)) & 1) != 0;
  if ((w << N) != 0) sticky = true;
  if (guard && (sticky || (kept & 1) != 0)) ++kept;

  const S bits = static_cast<S>(kept);
  return neg ? P::from_bits(S(-bits)) : P::from_bits(bits);
}

}  // namespace detail

// ---- textual form: p16:0xFA96 ------------------------------------------

template <int N>
std::string to_string(posit<N> p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "p%d:0x%0*llX", N, N / 4,
                static_cast<unsigned long long>(p.bits()));
  return buf;
}

/// Parses "pN:0xHEX" for the matching width. Returns nullopt on a width
/// mismatch, malformed text, or bits above position N-1.
template <int N>
std::optional<posit<N>> parse_posit(std::string_view text) {
  const std::string prefix = "p" + std::to_string(N) + ":";
  if (text.substr(0, prefix.size()) != prefix) return std::nullopt;
  text.remove_prefix(prefix.size());
  if (text.size() < 3 || text[0] != '0' || (text[1] != 'x' && text[1] != 'X')) return std::nullopt;
  text.remove_prefix(2);
  if (text.size() > 16) return std::nullopt;
  std::uint64_t v = 0;
  for (char c : text) {
    int digit;
    if (c >= '0' && c <= '9') digit = c - '0';
    else if (c >= 'a' && c <= 'f') digit = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') digit = c - 'A' + 10;
    else return std::nullopt;
    v = (v << 4) | static_cast<std::uint64_t>(digit);
  }
  if constexpr (N < 64) {
    if ((v >> N) != 0) return std::nullopt;
  }
  return posit<N>::from_bits(static_cast<typename posit<N>::storage_type>(v));
}

}  // namespace positron
