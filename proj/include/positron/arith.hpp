#pragma once

// Arithmetic policies the kernels are written against. Each policy owns its
// operation counters and supplies an accumulator for inner dot-product
// loops: sequential fused MACs for doubles, rounded mul+add for posits
// without quire, the quire for posits with quire, and high-precision
// per-statement rounding for the reference.

#include <bit>
#include <cmath>
#include <cstdint>
#include <string_view>

#include "positron/approx.hpp"
#include "positron/exact_real.hpp"
#include "positron/ops.hpp"
#include "positron/oracle.hpp"
#include "positron/quire.hpp"

namespace positron {

struct op_counters {
  std::uint64_t muls = 0;
  std::uint64_t adds = 0;  // additions and subtractions
  std::uint64_t divs = 0;
  std::uint64_t sqrts = 0;
  std::uint64_t qmadds = 0;  // qmadd, qmsub and the qmadd inside a quire init
  std::uint64_t qrounds = 0;

  friend bool operator==(const op_counters&, const op_counters&) = default;
};

enum class arith_mode { double_fma, posit64_quire, posit64_no_quire, reference };

inline constexpr std::string_view mode_name(arith_mode m) {
  switch (m) {
    case arith_mode::double_fma: return "double-fma";
    case arith_mode::posit64_quire: return "posit64-quire";
    case arith_mode::posit64_no_quire: return "posit64-no-quire";
    case arith_mode::reference: return "reference";
  }
  return "?";
}

/// Selects the log-domain approximate units instead of the exact ones.
struct unit_options {
  bool approx_mul = false;
  bool approx_div_sqrt = false;
};

// Fused multiply-accumulate helpers are spelled mac(c, a, b) = c + a*b and
// msc(c, a, b) = c - a*b, with the mode's fusion convention.

class double_arith {
 public:
  using value_type = double;
  op_counters counters;

  value_type from_rational(std::int64_t num, std::int64_t den) const { return rational_to_double(num, den); }

  value_type add(value_type a, value_type b) { ++counters.adds; return a + b; }
  value_type sub(value_type a, value_type b) { ++counters.adds; return a - b; }
  value_type mul(value_type a, value_type b) { ++counters.muls; return a * b; }
  value_type div(value_type a, value_type b) { ++counters.divs; return a / b; }
  value_type sqrt(value_type a) { ++counters.sqrts; return std::sqrt(a); }
  static value_type neg(value_type a) { return -a; }

  value_type mac(value_type c, value_type a, value_type b) {
    ++counters.muls;
    ++counters.adds;
    return std::fma(a, b, c);
  }
  value_type msc(value_type c, value_type a, value_type b) {
    ++counters.muls;
    ++counters.adds;
    return std::fma(-a, b, c);
  }

  class accumulator {
   public:
    explicit accumulator(double_arith& ar) : ar_(&ar) {}
    void init(value_type v) { acc_ = v; }
    void madd(value_type a, value_type b) { acc_ = ar_->mac(acc_, a, b); }
    void msub(value_type a, value_type b) { acc_ = ar_->msc(acc_, a, b); }
    value_type result() const { return acc_; }

   private:
    double_arith* ar_;
    value_type acc_ = 0;
  };
  accumulator make_accumulator() { return accumulator(*this); }

  static high_prec to_high(value_type v) { return high_prec(v); }
  static bool invalid(value_type v) { return !std::isfinite(v); }
  static std::uint64_t raw(value_type v) { return std::bit_cast<std::uint64_t>(v); }
};

template <bool UseQuire>
class posit64_arith {
 public:
  using value_type = posit64;
  op_counters counters;
  unit_options units;

  posit64_arith() = default;
  explicit posit64_arith(unit_options u) : units(u) {}

  value_type from_rational(std::int64_t num, std::int64_t den) const { return rational_to_posit<64>(num, den); }

  value_type add(value_type a, value_type b) { ++counters.adds; return positron::add(a, b); }
  value_type sub(value_type a, value_type b) { ++counters.adds; return positron::sub(a, b); }
  value_type mul(value_type a, value_type b) {
    ++counters.muls;
    return units.approx_mul ? approx_mul(a, b) : positron::mul(a, b);
  }
  value_type div(value_type a, value_type b) {
    ++counters.divs;
    return units.approx_div_sqrt ? approx_div(a, b) : positron::div(a, b);
  }
  value_type sqrt(value_type a) {
    ++counters.sqrts;
    return units.approx_div_sqrt ? approx_sqrt(a) : positron::sqrt(a);
  }
  static value_type neg(value_type a) { return -a; }

  value_type mac(value_type c, value_type a, value_type b) {
    if constexpr (UseQuire) {
      quire<64> q;
      q.init(c);
      q.madd(a, b);
      counters.qmadds += 2;
      ++counters.qrounds;
      return q.round();
    } else {
      return add(c, mul(a, b));
    }
  }
  value_type msc(value_type c, value_type a, value_type b) {
    if constexpr (UseQuire) {
      quire<64> q;
      q.init(c);
      q.msub(a, b);
      counters.qmadds += 2;
      ++counters.qrounds;
      return q.round();
    } else {
      return sub(c, mul(a, b));
    }
  }

  class accumulator {
   public:
    explicit accumulator(posit64_arith& ar) : ar_(&ar) {}
    void init(value_type v) {
      if constexpr (UseQuire) {
        q_.init(v);
        ++ar_->counters.qmadds;
      } else {
        acc_ = v;
      }
    }
    void madd(value_type a, value_type b) {
      if constexpr (UseQuire) {
        q_.madd(a, b);
        ++ar_->counters.qmadds;
      } else {
        acc_ = ar_->mac(acc_, a, b);
      }
    }
    void msub(value_type a, value_type b) {
      if constexpr (UseQuire) {
        q_.msub(a, b);
        ++ar_->counters.qmadds;
      } else {
        acc_ = ar_->msc(acc_, a, b);
      }
    }
    value_type result() {
      if constexpr (UseQuire) {
        ++ar_->counters.qrounds;
        return q_.round();
      } else {
        return acc_;
      }
    }

   private:
    posit64_arith* ar_;
    quire<64> q_;
    value_type acc_ = value_type::zero();
  };
  accumulator make_accumulator() { return accumulator(*this); }

  static high_prec to_high(value_type v) { return v.is_nar() ? high_prec(0) : to_high_prec(exact_value(v)); }
  static bool invalid(value_type v) { return v.is_nar(); }
  static std::uint64_t raw(value_type v) { return v.bits(); }
};

using posit64_quire_arith = posit64_arith<true>;
using posit64_plain_arith = posit64_arith<false>;

/// Per-statement rounding at the precision of Float.
template <class Float = high_prec>
class reference_arith {
 public:
  using value_type = Float;
  op_counters counters;

  value_type from_rational(std::int64_t num, std::int64_t den) const { return rational_to_high_prec<Float>(num, den); }

  value_type add(const value_type& a, const value_type& b) { ++counters.adds; return a + b; }
  value_type sub(const value_type& a, const value_type& b) { ++counters.adds; return a - b; }
  value_type mul(const value_type& a, const value_type& b) { ++counters.muls; return a * b; }
  value_type div(const value_type& a, const value_type& b) { ++counters.divs; return a / b; }
  value_type sqrt(const value_type& a) { ++counters.sqrts; return boost::multiprecision::sqrt(a); }
  static value_type neg(const value_type& a) { return -a; }

  value_type mac(const value_type& c, const value_type& a, const value_type& b) { return add(c, mul(a, b)); }
  value_type msc(const value_type& c, const value_type& a, const value_type& b) { return sub(c, mul(a, b)); }

  class accumulator {
   public:
    explicit accumulator(reference_arith& ar) : ar_(&ar) {}
    void init(const value_type& v) { acc_ = v; }
    void madd(const value_type& a, const value_type& b) { acc_ = ar_->mac(acc_, a, b); }
    void msub(const value_type& a, const value_type& b) { acc_ = ar_->msc(acc_, a, b); }
    value_type result() const { return acc_; }

   private:
    reference_arith* ar_;
    value_type acc_ = 0;
  };
  accumulator make_accumulator() { return accumulator(*this); }

  static high_prec to_high(const value_type& v) { return high_prec(v); }
  static bool invalid(const value_type& v) { return !boost::multiprecision::isfinite(v); }
  static std::uint64_t raw(const value_type&) { return 0; }
};

}  // namespace positron
