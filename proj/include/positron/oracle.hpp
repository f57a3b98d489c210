#pragma once

// Ground truth. exact_op evaluates one arithmetic operation on exact values
// (division and square root as a long truncation plus a remainder flag),
// and high_prec is the extended-precision reference float for kernel runs.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "exact_real.hpp"
#include "posit.hpp"

namespace positron {

/// 128-bit significand reference float (x87 extended carries 64).
using high_prec = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<128, boost::multiprecision::digit_base_2, void, std::int32_t>,
    boost::multiprecision::et_off>;
/// Wider twin used to check that results have converged in precision.
using high_prec_192 = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<192, boost::multiprecision::digit_base_2, void, std::int32_t>,
    boost::multiprecision::et_off>;

enum class exact_opcode { add, sub, mul, div, sqrt };

/// An exact value, or a truncation toward zero of one with `inexact` set.
struct rounding_witness {
  exact_real value;
  bool inexact = false;
};

/// Significant bits carried by truncated quotients and roots.
inline constexpr int witness_bits = 160;

inline rounding_witness exact_quotient(const exact_real& a, const exact_real& b) {
  if (a.is_nar() || b.is_nar() || b.is_zero()) return {exact_real::nar(), false};
  if (a.is_zero()) return {exact_real(), false};
  const big_int na = abs(a.mantissa());
  const big_int nb = abs(b.mantissa());
  const int shift = witness_bits + static_cast<int>(boost::multiprecision::msb(nb)) -
                    static_cast<int>(boost::multiprecision::msb(na));
  big_int q, r;
  if (shift >= 0) {
    boost::multiprecision::divide_qr(big_int(na << shift), nb, q, r);
  } else {
    boost::multiprecision::divide_qr(na, big_int(nb << -shift), q, r);
  }
  if (a.sign() != b.sign()) q = -q;
  return {exact_real(q, a.exponent() - b.exponent() - shift), r != 0};
}

inline rounding_witness exact_root(const exact_real& a) {
  if (a.is_nar() || a.sign() < 0) return {exact_real::nar(), false};
  if (a.is_zero()) return {exact_real(), false};
  big_int m = a.mantissa();
  int e = a.exponent();
  // Scale the radicand to ~2*witness_bits bits with an even exponent.
  int shift = 2 * witness_bits - static_cast<int>(boost::multiprecision::msb(m));
  if (shift < 0) shift = 0;
  if ((e - shift) % 2 != 0) ++shift;
  m <<= shift;
  e -= shift;
  big_int r;
  const big_int root = boost::multiprecision::sqrt(m, r);
  return {exact_real(root, e / 2), r != 0};
}

inline rounding_witness exact_op(exact_opcode op, const exact_real& a, const exact_real& b = exact_real()) {
  switch (op) {
    case exact_opcode::add:
      return {a + b, false};
    case exact_opcode::sub:
      return {a - b, false};
    case exact_opcode::mul:
      return {a * b, false};
    case exact_opcode::div:
      return exact_quotient(a, b);
    case exact_opcode::sqrt:
      return exact_root(a);
  }
  throw std::invalid_argument("exact_op: unknown opcode");
}

template <int N>
posit<N> encode_round(const rounding_witness& w) {
  return encode_round<N>(w.value, w.inexact);
}

/// Reference posit operation: exact evaluation rounded once.
template <int N>
posit<N> oracle_op(exact_opcode op, posit<N> a, posit<N> b = posit<N>::zero()) {
  return encode_round<N>(exact_op(op, exact_value(a), exact_value(b)));
}

/// Nearest double (ties to even) to a witness; no subnormal handling, the
/// values involved stay far from the double range limits.
inline double round_to_double(const rounding_witness& w) {
  if (w.value.is_nar()) return std::numeric_limits<double>::quiet_NaN();
  if (w.value.is_zero()) return 0.0;
  const auto wide = detail::to_wide(w.value, w.inexact);
  auto q = static_cast<std::uint64_t>(wide.sig >> 75);  // 53 bits
  const detail::u128 rest = wide.sig & ((detail::u128(1) << 75) - 1);
  const detail::u128 half = detail::u128(1) << 74;
  int scale = wide.scale;
  if (rest > half || (rest == half && (wide.sticky || (q & 1) != 0))) ++q;
  if (q == (std::uint64_t(1) << 53)) {
    q >>= 1;
    ++scale;
  }
  const double mag = std::ldexp(static_cast<double>(q), scale - 52);
  return wide.neg ? -mag : mag;
}

/// num/den rounded once into each representation.
template <int N>
posit<N> rational_to_posit(std::int64_t num, std::int64_t den) {
  return encode_round<N>(exact_quotient(exact_real(num), exact_real(den)));
}
inline double rational_to_double(std::int64_t num, std::int64_t den) {
  return round_to_double(exact_quotient(exact_real(num), exact_real(den)));
}
template <class Float = high_prec>
Float rational_to_high_prec(std::int64_t num, std::int64_t den) {
  return Float(num) / Float(den);
}

/// Exact conversion; the reference significand is wide enough for every
/// posit64 and double value.
template <class Float = high_prec>
Float to_high_prec(const exact_real& x) {
  if (x.is_nar()) return std::numeric_limits<Float>::quiet_NaN();
  Float m(x.mantissa());
  return ldexp(m, x.exponent());
}

}  // namespace positron
