#pragma once

// The 16N-bit quire: a two's-complement fixed-point register with 8N-16
// fraction bits, 8N-16 integer bits, 31 carry bits and a sign bit. Sums of
// up to 2^31-1 posit products are held exactly and rounded once.

#include <array>
#include <cstdint>
#include <stdexcept>

#include "exact_real.hpp"
#include "posit.hpp"

namespace positron {

template <int N>
  requires supported_width<N>
class quire {
 public:
  static constexpr int total_bits = 16 * N;
  static constexpr int fraction_bits = 8 * N - 16;
  static constexpr int limb_count = total_bits / 64 > 0 ? total_bits / 64 : 1;
  static constexpr std::uint64_t capacity = (std::uint64_t(1) << 31) - 1;

  quire() = default;

  void clear() {
    acc_.fill(0);
    nar_ = false;
    count_ = 0;
  }

  void negate() {
    for (auto& limb : acc_) limb = ~limb;
    add_at(1, 0, false);
  }

  /// acc += a * b, exactly.
  void madd(posit<N> a, posit<N> b) { accumulate(a, b, false); }
  /// acc -= a * b, exactly.
  void msub(posit<N> a, posit<N> b) { accumulate(a, b, true); }

  /// Loads p exactly; realized as clear followed by madd(p, 1).
  void init(posit<N> p) {
    clear();
    madd(p, posit<N>::one());
  }

  posit<N> round() const {
    if (nar_) return posit<N>::nar();
    const bool neg = (acc_.back() >> 63) != 0;
    std::array<std::uint64_t, limb_count> mag = acc_;
    if (neg) {
      std::uint64_t carry = 1;
      for (auto& limb : mag) {
        limb = ~limb + carry;
        carry = (carry != 0 && limb == 0) ? 1 : 0;
      }
    }
    int top_limb = limb_count - 1;
    while (top_limb >= 0 && mag[top_limb] == 0) --top_limb;
    if (top_limb < 0) return posit<N>::zero();

    const int top = top_limb * 64 + 63 - std::countl_zero(mag[top_limb]);
    // Gather bits [top-127, top] into a normalized 128-bit significand.
    detail::u128 sig = 0;
    bool sticky = false;
    for (int i = 0; i < 128; ++i) {
      const int bit = top - i;
      if (bit < 0) break;
      if ((mag[bit / 64] >> (bit % 64)) & 1) sig |= detail::u128(1) << (127 - i);
    }
    const int lowest_kept = top - 127;
    if (lowest_kept > 0) {
      for (int i = 0; i < lowest_kept / 64 && !sticky; ++i) sticky = mag[i] != 0;
      const int partial = lowest_kept % 64;
      if (partial != 0 && (mag[lowest_kept / 64] & ((std::uint64_t(1) << partial) - 1)) != 0) sticky = true;
    }
    return detail::round_pack<N>(neg, top - fraction_bits, sig, sticky);
  }

  bool is_nar() const { return nar_; }
  bool is_zero() const {
    if (nar_) return false;
    for (auto limb : acc_) {
      if (limb != 0) return false;
    }
    return true;
  }
  /// Multiply-accumulate operations since the last clear.
  std::uint64_t count() const { return count_; }
  const std::array<std::uint64_t, limb_count>& limbs() const { return acc_; }

  /// Exact content; NaR when the NaR state is set.
  exact_real value() const {
    if (nar_) return exact_real::nar();
    big_int v = 0;
    for (int i = limb_count - 1; i >= 0; --i) v = (v << 64) | big_int(acc_[i]);
    if ((acc_.back() >> 63) != 0) v -= big_int(1) << total_bits;
    return exact_real(v, -fraction_bits);
  }

  friend bool operator==(const quire&, const quire&) = default;

 private:
  void accumulate(posit<N> a, posit<N> b, bool subtract) {
    if (count_ >= capacity) throw std::overflow_error("quire capacity of 2^31-1 accumulations exceeded");
    ++count_;
    if (a.is_nar() || b.is_nar()) {
      nar_ = true;
      return;
    }
    if (nar_ || a.is_zero() || b.is_zero()) return;
    const auto ua = detail::unpack(a);
    const auto ub = detail::unpack(b);
    detail::u128 prod = detail::u128(ua.sig) * ub.sig;
    // prod * 2^(sa + sb - 126); bit 0 of the quire weighs 2^-fraction_bits.
    int offset = ua.scale + ub.scale - 126 + fraction_bits;
    if (offset < 0) {
      // Products of posits never have bits below minpos^2, so this is exact.
      prod >>= -offset;
      offset = 0;
    }
    add_at(prod, offset, (ua.neg != ub.neg) != subtract);
  }

  /// acc += value << offset (or -= when subtract), modulo 2^total_bits.
  void add_at(detail::u128 value, int offset, bool subtract) {
    const int shift = offset % 64;
    const int first = offset / 64;
    std::array<std::uint64_t, 3> parts{};
    parts[0] = static_cast<std::uint64_t>(value << shift);
    parts[1] = static_cast<std::uint64_t>(shift == 0 ? value >> 64 : value >> (64 - shift));
    parts[2] = shift == 0 ? 0 : static_cast<std::uint64_t>(value >> (128 - shift));
    std::uint64_t carry = 0;
    for (int i = first; i < limb_count; ++i) {
      const int j = i - first;
      const std::uint64_t operand = j < 3 ? parts[j] : 0;
      if (j >= 3 && carry == 0) break;
      const std::uint64_t limb = acc_[i];
      if (!subtract) {
        const std::uint64_t s = limb + operand;
        const std::uint64_t c1 = s < limb ? 1 : 0;
        const std::uint64_t s2 = s + carry;
        const std::uint64_t c2 = s2 < s ? 1 : 0;
        acc_[i] = s2;
        carry = c1 | c2;
      } else {
        const std::uint64_t d = limb - operand;
        const std::uint64_t b1 = limb < operand ? 1 : 0;
        const std::uint64_t d2 = d - carry;
        const std::uint64_t b2 = d < carry ? 1 : 0;
        acc_[i] = d2;
        carry = b1 | b2;
      }
    }
  }

  std::array<std::uint64_t, limb_count> acc_{};
  bool nar_ = false;
  std::uint64_t count_ = 0;
};

}  // namespace positron
