#pragma once

// Cross-checks of the posit operations against the exact oracle, used by
// `positron verify` and the acceptance suite.

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "positron/oracle.hpp"
#include "positron/ops.hpp"
#include "positron/test_vectors.hpp"

namespace positron {

struct verify_stats {
  std::string op;
  int width = 0;
  std::uint64_t cases = 0;
  std::uint64_t mismatches = 0;
  std::optional<test_vector> first_failure;  // expected holds the oracle result
};

inline constexpr std::array<const char*, 10> verified_ops{"add", "sub", "mul", "div", "sqrt", "min", "max", "eq", "lt", "le"};

namespace detail {

/// Oracle answer for one vector op, derived from exact values only.
template <int N>
std::uint64_t oracle_answer(const std::string& op, posit<N> a, posit<N> b) {
  if (op == "add") return oracle_op(exact_opcode::add, a, b).bits();
  if (op == "sub") return oracle_op(exact_opcode::sub, a, b).bits();
  if (op == "mul") return oracle_op(exact_opcode::mul, a, b).bits();
  if (op == "div") return oracle_op(exact_opcode::div, a, b).bits();
  if (op == "sqrt") return oracle_op(exact_opcode::sqrt, a).bits();
  const exact_real va = exact_value(a), vb = exact_value(b);
  if (op == "min") return (vb < va ? b : a).bits();
  if (op == "max") return (va < vb ? b : a).bits();
  if (op == "eq") return va == vb ? 1 : 0;
  if (op == "lt") return va < vb ? 1 : 0;
  return va <= vb ? 1 : 0;  // le
}

template <int N>
void check_case(verify_stats& s, std::uint64_t x, std::uint64_t y) {
  using P = posit<N>;
  using S = typename P::storage_type;
  const P a = P::from_bits(static_cast<S>(x)), b = P::from_bits(static_cast<S>(y));
  const test_vector v{s.op, N, x, y, oracle_answer<N>(s.op, a, b)};
  ++s.cases;
  if (evaluate(v) != v.expected) {
    if (s.mismatches++ == 0) s.first_failure = v;
  }
}

/// Uniform bit patterns with some extra weight on zero, NaR and the extremes.
inline std::uint64_t sample_pattern(std::mt19937_64& rng, int n) {
  const std::uint64_t mask = n == 64 ? ~std::uint64_t(0) : (std::uint64_t(1) << n) - 1;
  const std::uint64_t sign = std::uint64_t(1) << (n - 1);
  switch (rng() % 32) {
    case 0: return 0;
    case 1: return sign;
    case 2: return (rng() % 8 + 1) & mask;                          // near minpos
    case 3: return (sign - 1 - rng() % 8) & mask;                   // near maxpos
    case 4: return (~(rng() % 8 + 1) + 1) & mask;                   // near -minpos
    default: return rng() & mask;
  }
}

}  // namespace detail

/// Every operand pair (or operand, for sqrt) of width N.
template <int N>
std::vector<verify_stats> verify_exhaustive() {
  static_assert(N <= 16, "exhaustive pairs beyond 16 bits are out of reach");
  const std::uint64_t count = std::uint64_t(1) << N;
  std::vector<verify_stats> out;
  for (const char* op : verified_ops) {
    verify_stats s{op, N};
    const bool unary = std::string(op) == "sqrt";
    for (std::uint64_t x = 0; x < count; ++x)
      for (std::uint64_t y = 0; y < (unary ? 1 : count); ++y) detail::check_case<N>(s, x, y);
    out.push_back(std::move(s));
  }
  return out;
}

template <int N>
std::vector<verify_stats> verify_sampled(std::uint64_t samples, std::uint64_t seed) {
  std::vector<verify_stats> out;
  for (const char* op : verified_ops) {
    std::mt19937_64 rng(seed);
    verify_stats s{op, N};
    const bool unary = std::string(op) == "sqrt";
    for (std::uint64_t i = 0; i < samples; ++i) {
      const std::uint64_t x = detail::sample_pattern(rng, N);
      const std::uint64_t y = unary ? 0 : detail::sample_pattern(rng, N);
      detail::check_case<N>(s, x, y);
    }
    out.push_back(std::move(s));
  }
  return out;
}

/// Oracle-labelled vectors for writing test-vector files.
template <int N>
std::vector<test_vector> generate_vectors(const std::string& op, std::uint64_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<test_vector> out;
  using P = posit<N>;
  using S = typename P::storage_type;
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint64_t x = detail::sample_pattern(rng, N);
    const std::uint64_t y = op == "sqrt" ? 0 : detail::sample_pattern(rng, N);
    out.push_back({op, N, x, y, detail::oracle_answer<N>(op, P::from_bits(static_cast<S>(x)), P::from_bits(static_cast<S>(y)))});
  }
  return out;
}

}  // namespace positron
