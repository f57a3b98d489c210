// Acceptance suite: one PASS/FAIL line per criterion.
//
//   positron_acceptance              run all criteria
//   positron_acceptance --criterion 6
//
// Exit status is 0 only when every selected criterion passes.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "positron/approx.hpp"
#include "positron/harness.hpp"
#include "positron/quire.hpp"
#include "positron/verify.hpp"
#include "positron/xposit.hpp"
#include "support/oracle_checks.hpp"
#include "support/reference_posit.hpp"

namespace {

using namespace positron;

struct outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      note("FAILED " + what);
    }
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) { return std::chrono::duration<double>(clock_type::now() - t0).count(); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string sci(const high_prec& v) { return fmt("%.3e", static_cast<double>(v)); }

std::uint64_t total_mismatches(const std::vector<verify_stats>& stats, outcome& out) {
  std::uint64_t bad = 0;
  for (const auto& s : stats) {
    bad += s.mismatches;
    if (s.mismatches) out.check(false, s.op + " posit" + std::to_string(s.width) + ": " + std::to_string(s.mismatches) + " mismatches");
  }
  return bad;
}

// 1 -----------------------------------------------------------------------

outcome criterion_1() {
  outcome out;
  const auto t0 = clock_type::now();
  std::uint64_t cases = 0;
  const auto stats = verify_exhaustive<8>();
  for (const auto& s : stats) cases += s.cases;
  total_mismatches(stats, out);

  std::uint64_t bad = 0;
  for (std::uint32_t x = 0; x < 256; ++x) {
    const auto a = posit8::from_bits(static_cast<std::uint8_t>(x));
    for (std::uint32_t y = 0; y < 256; ++y) {
      const auto b = posit8::from_bits(static_cast<std::uint8_t>(y));
      const sign_mode modes[] = {sign_mode::copy, sign_mode::negate, sign_mode::exclusive_or};
      for (int m = 0; m < 3; ++m) {
        ++cases;
        bad += sign_inject(a, b, modes[m]) != testing::oracle_sign_inject(a, b, m);
      }
    }
    const exact_real v = exact_value(a);
    cases += 6;
    bad += to_integer<std::int32_t>(a) != testing::oracle_to_integer<std::int32_t>(v);
    bad += to_integer<std::uint32_t>(a) != testing::oracle_to_integer<std::uint32_t>(v);
    bad += to_integer<std::int64_t>(a) != testing::oracle_to_integer<std::int64_t>(v);
    bad += to_integer<std::uint64_t>(a) != testing::oracle_to_integer<std::uint64_t>(v);
    bad += move_from_int<8>(move_to_int(a)) != a || move_to_int(a) != x;
    const double d = to_double(a);
    bad += a.is_nar() ? !std::isnan(d) : (d != round_to_double(rounding_witness{v}));
  }
  out.check(bad == 0, "sign injection / posit-to-int / moves: " + std::to_string(bad) + " mismatches");

  std::uint64_t int_bad = 0;
  for (std::int64_t v = -70000; v <= 70000; ++v) {
    ++cases;
    int_bad += from_integer<8>(static_cast<std::int32_t>(v)) != rational_to_posit<8>(v, 1);
  }
  for (std::uint64_t v : {std::uint64_t(0), std::uint64_t(1), ~std::uint64_t(0), std::uint64_t(1) << 63}) {
    ++cases;
    int_bad += from_integer<8>(v) != encode_round<8>(exact_real(big_int(v), 0));
  }
  out.check(int_bad == 0, "int-to-posit: " + std::to_string(int_bad) + " mismatches");
  const double secs = seconds_since(t0);
  out.check(secs < 60, "runtime " + fmt("%.1fs", secs) + " over 1 minute");
  out.note(std::to_string(cases) + " cases in " + fmt("%.1fs", secs));
  return out;
}

// 2 -----------------------------------------------------------------------

outcome criterion_2() {
  outcome out;
  const auto t0 = clock_type::now();
  constexpr std::uint64_t samples = 1'000'000;
  std::uint64_t cases = 0;
  for (const auto& stats : {verify_sampled<16>(samples, 16), verify_sampled<32>(samples, 32), verify_sampled<64>(samples, 64)}) {
    for (const auto& s : stats) {
      cases += s.cases;
      out.check(s.cases >= samples, s.op + " sample count");
    }
    total_mismatches(stats, out);
  }
  const double secs = seconds_since(t0);
  out.check(secs < 300, "runtime " + fmt("%.1fs", secs) + " over 5 minutes");
  out.note(std::to_string(cases) + " cases (10 ops x 3 widths x 1e6) in " + fmt("%.1fs", secs));
  return out;
}

// 3 -----------------------------------------------------------------------

outcome criterion_3() {
  outcome out;
  const auto p = posit16::from_bits(0xFA96);
  const exact_real v = exact_value(p);
  // -1.4140625 * 2^-15 = -181 * 2^-22
  out.check(v == exact_real(big_int(-181), -22), "value " + v.to_string());
  out.check(v == testing::reference_value(0xFA96, 16), "independent decode");
  const auto d = decode(p);
  char printed[32];
  std::snprintf(printed, sizeof printed, "%.5g", to_double(p));
  out.check(std::string(printed) == "-4.3154e-05", std::string("printed ") + printed);
  out.note("0xFA96 = " + v.to_string() + " ~ " + printed + ", regime r=" + std::to_string(d.r) + " e=" + std::to_string(d.e));
  return out;
}

// 4 -----------------------------------------------------------------------

template <int N>
bool quire_program(std::mt19937_64& rng, std::size_t length) {
  quire<N> q;
  exact_real sum;
  for (std::size_t i = 0; i < length; ++i) {
    const auto r = rng() % 16;
    if (r == 0) {
      q.negate();
      sum = -sum;
      continue;
    }
    auto a = posit<N>::from_bits(static_cast<typename posit<N>::storage_type>(testing::random_pattern(rng, N)));
    auto b = posit<N>::from_bits(static_cast<typename posit<N>::storage_type>(testing::random_pattern(rng, N)));
    if (a.is_nar()) a = posit<N>::one();
    if (b.is_nar()) b = -posit<N>::minpos();
    const exact_real prod = exact_value(a) * exact_value(b);
    if (r < 9) {
      q.madd(a, b);
      sum += prod;
    } else {
      q.msub(a, b);
      sum -= prod;
    }
  }
  return q.round() == encode_round<N>(sum) && q.value() == sum;
}

outcome criterion_4() {
  outcome out;
  std::mt19937_64 rng(4);
  int failures = 0;
  std::size_t total_ops = 0;
  for (int prog = 0; prog < 1000; ++prog) {
    // Lengths spread over 1..10^4 on a log scale.
    const auto length = static_cast<std::size_t>(std::pow(10.0, 4.0 * (rng() % 10001) / 10000.0));
    total_ops += length;
    const bool ok = prog % 2 ? quire_program<64>(rng, length) : quire_program<32>(rng, length);
    failures += !ok;
  }
  out.check(failures == 0, std::to_string(failures) + " programs disagree with the exact sum");
  out.note("1000 programs (500 posit32, 500 posit64), " + std::to_string(total_ops) + " quire ops");
  return out;
}

// 5 -----------------------------------------------------------------------

outcome criterion_5() {
  outcome out;
  // Rank every pattern by exact value, NaR below everything.
  std::vector<std::uint32_t> order(1u << 16);
  std::iota(order.begin(), order.end(), 0u);
  std::vector<exact_real> values(order.size());
  for (std::uint32_t b = 0; b < values.size(); ++b) values[b] = testing::reference_value(b, 16);
  std::sort(order.begin(), order.end(), [&](std::uint32_t x, std::uint32_t y) {
    if (values[x].is_nar() || values[y].is_nar()) return values[x].is_nar() && !values[y].is_nar();
    return values[x] < values[y];
  });
  std::vector<std::uint32_t> rank(order.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) rank[order[i]] = i;
  out.check(order.front() == 0x8000, "NaR is not the least element");

  std::uint64_t bad = 0;
  for (std::uint32_t x = 0; x < (1u << 16); ++x) {
    const auto a = posit16::from_bits(static_cast<std::uint16_t>(x));
    const auto sa = static_cast<std::int16_t>(x);
    const std::uint32_t ra = rank[x];
    for (std::uint32_t y = 0; y < (1u << 16); ++y) {
      const auto b = posit16::from_bits(static_cast<std::uint16_t>(y));
      const auto sb = static_cast<std::int16_t>(y);
      const std::uint32_t rb = rank[y];
      const bool lt = cmp_lt(a, b), le = cmp_le(a, b), eq = cmp_eq(a, b);
      bad += (lt != (ra < rb)) | (le != (ra <= rb)) | (eq != (ra == rb)) | (lt != (sa < sb)) | (le != (sa <= sb));
    }
  }
  out.check(bad == 0, std::to_string(bad) + " pairs disagree");
  out.note("2^32 ordered pairs; lt/le/eq vs value rank and vs signed-integer compare");
  return out;
}

// 6 -----------------------------------------------------------------------

outcome criterion_6() {
  using namespace positron::xposit;
  outcome out;
  std::uint64_t words = 0, bad = 0;
  for (const auto& row : opcode_table) {
    const bool rd = xposit::detail::uses_rd(row.form), rs1 = xposit::detail::uses_rs1(row.form), rs2 = xposit::detail::uses_rs2(row.form);
    const bool imm = xposit::detail::uses_imm(row.form);
    for (int a = 0; a < (rd ? 32 : 1); ++a)
      for (int b = 0; b < (rs1 ? 32 : 1); ++b)
        for (int c = 0; c < (rs2 ? 32 : 1); ++c) {
          instruction in;
          in.op = row.op;
          if (rd) in.rd = static_cast<std::uint8_t>(a);
          if (rs1) in.rs1 = static_cast<std::uint8_t>(b);
          if (rs2) in.rs2 = static_cast<std::uint8_t>(c);
          if (imm) in.imm = 0;
          const std::uint32_t w = encode(in);
          ++words;
          bad += !(decode(w) == in) || assemble(disassemble(w)) != w;
        }
  }
  std::uint64_t imm_words = 0;
  for (auto op : {mnemonic::psw, mnemonic::psd}) {
    for (std::int32_t imm = -2048; imm <= 2047; ++imm) {
      instruction in;
      in.op = op;
      in.rs1 = 5;
      in.rs2 = 17;
      in.imm = imm;
      ++imm_words;
      bad += !(decode(encode(in)) == in);
    }
  }
  out.check(bad == 0, std::to_string(bad) + " round-trip failures");

  auto word_check = [&](const char* text, std::uint32_t expected) {
    const std::uint32_t got = assemble(text);
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s -> 0x%08X (expected 0x%08X)", text, got, expected);
    out.check(got == expected, buf);
    if (got == expected) out.note(buf);
  };
  word_check("padd.s p3, p1, p2", 0x0420818B);
  word_check("pld p2, 8(x10)", 0x0085510B);
  word_check("qclr.s", 0x1240000B);
  out.note(std::to_string(opcode_table.size()) + " mnemonics in the table, " + std::to_string(words) +
           " register-field words, " + std::to_string(imm_words) + " store immediates");
  return out;
}

// 7 / 8 -------------------------------------------------------------------

outcome criterion_7() {
  outcome out;
  const auto t0 = clock_type::now();
  for (auto size : {dataset::mini, dataset::small}) {
    for (auto k : all_kernels) {
      const auto ref = run_kernel(k, size, arith_mode::reference);
      const auto dbl = compute_metrics(run_kernel(k, size, arith_mode::double_fma), ref);
      const auto q = compute_metrics(run_kernel(k, size, arith_mode::posit64_quire), ref);
      const std::string tag = std::string(kernel_name(k)) + "/" + std::string(dataset_name(size));
      out.check(q.excluded == 0 && dbl.excluded == 0, tag + " invalid elements");
      out.check(q.mse < dbl.mse, tag + " MSE quire " + sci(q.mse) + " vs double " + sci(dbl.mse));
      out.check(q.max_abs_e < dbl.max_abs_e, tag + " MaxAbsE quire " + sci(q.max_abs_e) + " vs double " + sci(dbl.max_abs_e));
      if (k == kernel_id::gemm || k == kernel_id::three_mm) {
        const high_prec ratio = dbl.mse / q.mse;
        out.check(ratio >= 10, tag + " MSE ratio " + sci(ratio) + " below 10");
        out.note(tag + " MSE ratio " + sci(ratio));
      }
    }
  }
  const double secs = seconds_since(t0);
  out.check(secs < 600, "runtime over 10 minutes");
  out.note("8 kernels x {mini, small} in " + fmt("%.1fs", secs));
  return out;
}

outcome criterion_8() {
  outcome out;
  high_prec worst = 0;
  for (auto k : all_kernels) {
    const auto ref = run_kernel(k, dataset::mini, arith_mode::reference);
    const auto dbl = compute_metrics(run_kernel(k, dataset::mini, arith_mode::double_fma), ref);
    const auto nq = compute_metrics(run_kernel(k, dataset::mini, arith_mode::posit64_no_quire), ref);
    out.check(nq.mse < dbl.mse, std::string(kernel_name(k)) + " MSE no-quire " + sci(nq.mse) + " vs double " + sci(dbl.mse));
    worst = std::max(worst, high_prec(nq.mse / dbl.mse));
  }
  out.note("worst MSE(no-quire)/MSE(double) = " + sci(worst));
  return out;
}

// 9 -----------------------------------------------------------------------

outcome criterion_9() {
  outcome out;
  for (auto size : {dataset::mini, dataset::small}) {
    const std::string tag(dataset_name(size));
    const auto d = gemm_size(size);
    const auto ref = run_kernel(kernel_id::gemm, size, arith_mode::reference);
    const auto full = run_kernel(kernel_id::gemm, size, arith_mode::posit64_quire);
    const auto none = run_kernel(kernel_id::gemm, size, arith_mode::posit64_no_quire);
    for (std::size_t nt : {std::size_t(d.nk), std::size_t(d.nk + 1), std::size_t(2 * d.nk)}) {
      out.check(run_gemm_tiled(size, nt).raw == full.raw, tag + " nt=" + std::to_string(nt) + " differs from gemm_quire");
    }
    const high_prec m_full = compute_metrics(full, ref).mse, m_none = compute_metrics(none, ref).mse;
    const high_prec m5 = compute_metrics(run_gemm_tiled(size, 5), ref).mse;
    const high_prec m40 = compute_metrics(run_gemm_tiled(size, 40), ref).mse;
    out.check(m40 <= m5, tag + " MSE(nt=40) " + sci(m40) + " > MSE(nt=5) " + sci(m5));
    std::size_t inside = 0;
    const auto sweep = default_tile_sweep();
    for (auto nt : sweep) {
      const high_prec m = compute_metrics(run_gemm_tiled(size, nt), ref).mse;
      inside += m_full <= m && m <= m_none;
    }
    const double frac = double(inside) / double(sweep.size());
    out.check(frac >= 0.9, tag + " sandwich holds for " + fmt("%.0f%%", 100 * frac));
    out.note(tag + ": sandwich " + std::to_string(inside) + "/" + std::to_string(sweep.size()) + ", nt=5 " + sci(m5) +
             ", nt=40 " + sci(m40));
  }
  return out;
}

// 10 ----------------------------------------------------------------------

/// Positive posit64 with regime k in [-8, 7] and random remaining bits.
posit64 random_positive(std::mt19937_64& rng) {
  const int k = static_cast<int>(rng() % 16) - 8;
  const int run = k >= 0 ? k + 1 : -k;
  const std::uint64_t regime = k >= 0 ? ((std::uint64_t(1) << run) - 1) << 1 : 1;  // run+1 bits
  const int rest = 63 - (run + 1);
  const std::uint64_t bits = (regime << rest) | (rng() & ((std::uint64_t(1) << rest) - 1));
  return posit64::from_bits(bits);
}

outcome criterion_10() {
  outcome out;
  std::mt19937_64 rng(10);
  double mul_worst = 0, div_worst = 0, sqrt_worst = 0;
  auto hp = [](posit64 p) { return to_high_prec<high_prec>(exact_value(p)); };
  for (int i = 0; i < 1'000'000; ++i) {
    const auto a = random_positive(rng), b = random_positive(rng);
    const high_prec va = hp(a), vb = hp(b);
    mul_worst = std::max(mul_worst, std::fabs(static_cast<double>((hp(approx_mul(a, b)) - va * vb) / (va * vb))));
    div_worst = std::max(div_worst, std::fabs(static_cast<double>((hp(approx_div(a, b)) - va / vb) / (va / vb))));
    const high_prec root = boost::multiprecision::sqrt(va);
    sqrt_worst = std::max(sqrt_worst, std::fabs(static_cast<double>((hp(approx_sqrt(a)) - root) / root)));
  }
  out.check(mul_worst <= 0.125, "mul error " + fmt("%.4f", mul_worst));
  out.check(div_worst <= 0.125, "div error " + fmt("%.4f", div_worst));
  out.check(sqrt_worst <= 0.065, "sqrt error " + fmt("%.4f", sqrt_worst));

  std::uint64_t pow2_bad = 0;
  for (int e = -200; e <= 200; ++e) {
    const auto p = encode_round<64>(exact_real::pow2(e));
    for (int i = 0; i < 50; ++i) {
      const auto x = posit64::from_bits(testing::random_pattern(rng, 64));
      pow2_bad += approx_mul(p, x) != mul(p, x);
      pow2_bad += approx_mul(x, p) != mul(x, p);
      pow2_bad += approx_div(x, p) != div(x, p);
    }
    if (e % 2 == 0) pow2_bad += approx_sqrt(p) != sqrt(p);
  }
  out.check(pow2_bad == 0, std::to_string(pow2_bad) + " power-of-two mismatches");

  std::uint64_t special_bad = 0;
  auto same_class = [](auto x, auto y) { return x.is_nar() == y.is_nar() && x.is_zero() == y.is_zero() && x.sign_bit() == y.sign_bit(); };
  for (std::uint32_t x = 0; x < 256; ++x) {
    const auto a = posit8::from_bits(static_cast<std::uint8_t>(x));
    special_bad += !same_class(approx_sqrt(a), sqrt(a));
    for (std::uint32_t y = 0; y < 256; ++y) {
      const auto b = posit8::from_bits(static_cast<std::uint8_t>(y));
      special_bad += !same_class(approx_mul(a, b), mul(a, b));
      special_bad += !same_class(approx_div(a, b), div(a, b));
    }
  }
  for (auto s : {posit64::zero(), posit64::nar(), posit64::maxpos(), posit64::minpos(), -posit64::one()}) {
    for (auto t : {posit64::zero(), posit64::nar(), posit64::one(), -posit64::maxpos()}) {
      special_bad += !same_class(approx_mul(s, t), mul(s, t));
      special_bad += !same_class(approx_div(s, t), div(s, t));
    }
    special_bad += !same_class(approx_sqrt(s), sqrt(s));
  }
  out.check(special_bad == 0, std::to_string(special_bad) + " special-value mismatches");
  out.note("1e6 inputs; worst |rel err| mul " + fmt("%.4f", mul_worst) + ", div " + fmt("%.4f", div_worst) + ", sqrt " +
           fmt("%.4f", sqrt_worst));
  return out;
}

// 11 ----------------------------------------------------------------------

outcome criterion_11() {
  outcome out;
  out.note("wall-clock seconds and LUT/FF/DSP counts not reproduced (no FPGA); operation counters asserted instead");
  for (auto size : {dataset::mini, dataset::small}) {
    const auto d = gemm_size(size);
    const std::uint64_t elems = std::uint64_t(d.ni) * d.nj;
    for (auto nt : default_tile_sweep()) {
      const auto c = run_gemm_tiled(size, nt).counters;
      const std::uint64_t tiles = (d.nk + nt - 1) / nt;
      out.check(c.qrounds == elems * tiles, std::string(dataset_name(size)) + " nt=" + std::to_string(nt) + " qrounds " +
                                                std::to_string(c.qrounds));
      out.check(c.qmadds == elems * (tiles + d.nk), "qmadds for nt=" + std::to_string(nt));
    }
    const auto q = run_kernel(kernel_id::gemm, size, arith_mode::posit64_quire).counters;
    const auto n = run_kernel(kernel_id::gemm, size, arith_mode::posit64_no_quire).counters;
    const auto f = run_kernel(kernel_id::gemm, size, arith_mode::double_fma).counters;
    const std::uint64_t macs = elems * d.nk;
    out.check(q.qrounds == elems && q.qmadds == macs + elems, "gemm_quire counters");
    out.check(n.adds == macs && n.muls == 2 * macs + elems, "no-quire counters");
    out.check(f == n, "double and no-quire counters differ");
    out.note(std::string(dataset_name(size)) + " gemm: quire qmadds=" + std::to_string(q.qmadds) + " qrounds=" +
             std::to_string(q.qrounds) + ", no-quire muls=" + std::to_string(n.muls) + " adds=" + std::to_string(n.adds));
  }
  return out;
}

struct criterion {
  int id;
  const char* title;
  outcome (*run)();
};

const criterion criteria[] = {
    {1, "exhaustive posit8 ops and conversions vs oracle", criterion_1},
    {2, "sampled posit16/32/64 ops vs oracle", criterion_2},
    {3, "posit16 0xFA96 decodes to -1.4140625*2^-15", criterion_3},
    {4, "quire programs round to the exact sum", criterion_4},
    {5, "posit16 ordering is signed-integer order, NaR least", criterion_5},
    {6, "Xposit codec round trip and reference words", criterion_6},
    {7, "posit64+quire beats double on all kernels (mini, small)", criterion_7},
    {8, "posit64 without quire beats double (mini)", criterion_8},
    {9, "tiled GEMM degenerate tile, tile trend, sandwich", criterion_9},
    {10, "approximate unit error bounds and special values", criterion_10},
    {11, "operation-counter substitutes for timing/area tables", criterion_11},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> selected;
  app.add_option("--criterion", selected, "Criteria to run (default all)")->check(CLI::Range(1, 11));
  CLI11_PARSE(app, argc, argv);
  if (selected.empty())
    for (const auto& c : criteria) selected.push_back(c.id);

  bool all_pass = true;
  for (int id : selected) {
    const auto& c = criteria[id - 1];
    outcome o;
    const auto t0 = clock_type::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    all_pass = all_pass && o.pass;
    std::cout << "criterion " << c.id << ": " << (o.pass ? "PASS" : "FAIL") << " - " << c.title << " [" << o.detail << "] ("
              << fmt("%.1fs", seconds_since(t0)) << ")" << std::endl;
  }
  return all_pass ? 0 : 1;
}
