#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "positron/exact_real.hpp"
#include "positron/oracle.hpp"
#include "positron/posit.hpp"
#include "support/reference_posit.hpp"

namespace positron {
namespace {

using testing::reference_value;

TEST(Decode, Posit16WorkedExample) {
  const auto p = posit16::from_bits(0b1111101010010110);
  const auto d = decode(p);
  EXPECT_EQ(d.kind, posit_class::normal);
  EXPECT_EQ(d.s, 1);
  EXPECT_EQ(d.k, 4);
  EXPECT_EQ(d.r, 3);
  EXPECT_EQ(d.e, 2);
  EXPECT_EQ(d.fraction, 150u);
  EXPECT_EQ(d.m, 8);
  // -1.4140625 * 2^-15 = -181 * 2^-22
  EXPECT_EQ(exact_value(p), exact_real(-181, -22));
  EXPECT_NEAR(to_high_prec(exact_value(p)).convert_to<double>(), -0.000043154, 5e-10);
}

TEST(Decode, OneMinposMaxpos) {
  EXPECT_EQ(exact_value(posit64::from_bits(0x4000000000000000ull)), exact_real(1));
  const auto d = decode(posit64::one());
  EXPECT_EQ(d.r, 0);
  EXPECT_EQ(d.e, 0);
  EXPECT_EQ(d.fraction, 0u);

  const auto minpos8 = decode(posit8::from_bits(0b00000001));
  EXPECT_EQ(minpos8.k, 6);
  EXPECT_EQ(minpos8.r, -6);
  EXPECT_EQ(minpos8.e, 0);
  EXPECT_EQ(exact_value(posit8::minpos()), exact_real::pow2(-24));
  EXPECT_EQ(exact_value(posit8::from_bits(0b01111111)), exact_real::pow2(24));
  EXPECT_EQ(exact_value(posit64::maxpos()), exact_real::pow2(248));
  EXPECT_EQ(exact_value(posit32::minpos()), exact_real::pow2(-120));
}

TEST(Classify, SpecialPatterns) {
  EXPECT_EQ(classify(posit16::from_bits(0x0000)), posit_class::zero);
  EXPECT_EQ(classify(posit64::from_bits(0x8000000000000000ull)), posit_class::nar);
  EXPECT_EQ(classify(posit16::from_bits(0x4000)), posit_class::normal);
  EXPECT_TRUE(exact_value(posit16::nar()).is_nar());
}

TEST(Decode, AgreesWithComplementThenDecodeExhaustive) {
  for (std::uint32_t b = 0; b < 0x10000; ++b) {
    ASSERT_EQ(exact_value(posit16::from_bits(static_cast<std::uint16_t>(b))), reference_value(b, 16)) << b;
  }
  std::mt19937_64 rng(7);
  for (int i = 0; i < 20000; ++i) {
    const auto b32 = testing::random_pattern(rng, 32);
    ASSERT_EQ(exact_value(posit32::from_bits(static_cast<std::uint32_t>(b32))), reference_value(b32, 32));
    const auto b64 = testing::random_pattern(rng, 64);
    ASSERT_EQ(exact_value(posit64::from_bits(b64)), reference_value(b64, 64));
  }
}

TEST(EncodeRound, Examples) {
  EXPECT_EQ(encode_round<64>(exact_real(1)).bits(), 0x4000000000000000ull);
  EXPECT_EQ(encode_round<64>(exact_real::pow2(400)), posit64::maxpos());
  EXPECT_EQ(encode_round<64>(-exact_real::pow2(400)), -posit64::maxpos());
  EXPECT_EQ(encode_round<64>(exact_real::pow2(-400)), posit64::minpos());
  EXPECT_EQ(encode_round<8>(exact_real::nar()), posit8::nar());
  EXPECT_EQ(encode_round<8>(exact_real()), posit8::zero());
}

template <int N>
void expect_round_trip(std::uint64_t raw) {
  const auto p = posit<N>::from_bits(static_cast<typename posit<N>::storage_type>(raw));
  if (p.is_nar()) return;
  ASSERT_EQ(encode_round<N>(exact_value(p)), p) << to_string(p);
}

TEST(EncodeRound, RoundTripExhaustive8And16) {
  for (std::uint32_t b = 0; b < 0x100; ++b) expect_round_trip<8>(b);
  for (std::uint32_t b = 0; b < 0x10000; ++b) expect_round_trip<16>(b);
}

TEST(EncodeRound, RoundTripSampled32And64) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100000; ++i) {
    expect_round_trip<32>(testing::random_pattern(rng, 32));
    expect_round_trip<64>(testing::random_pattern(rng, 64));
  }
}

TEST(EncodeRound, MatchesBruteForceNearest) {
  const testing::value_table table8(8);
  const testing::value_table table16(16);
  std::mt19937_64 rng(3);
  // Adjacent-pair midpoints and random dyadics spanning beyond the range.
  for (std::size_t i = 0; i + 1 < table8.entries.size(); ++i) {
    const auto mid = (table8.entries[i].first + table8.entries[i + 1].first) * exact_real::pow2(-1);
    ASSERT_EQ(encode_round<8>(mid).bits(), table8.round(mid)) << mid.to_string();
  }
  for (int i = 0; i < 200000; ++i) {
    const std::int64_t mant = static_cast<std::int64_t>(rng() % (1u << 20)) - (1 << 19);
    const int exp = static_cast<int>(rng() % 140) - 90;
    const exact_real v(mant, exp);
    ASSERT_EQ(encode_round<8>(v).bits(), table8.round(v)) << v.to_string();
    ASSERT_EQ(encode_round<16>(v).bits(), table16.round(v)) << v.to_string();
  }
}

TEST(EncodeRound, TiesGoToEvenPattern) {
  // Halfway between 1 (0x40) and its successor 0x41 = 1 + 1/8 in posit8.
  const exact_real half_way = exact_real(17, -4);
  EXPECT_EQ(encode_round<8>(half_way).bits(), 0x40);
  // Halfway between 0x41 and 0x42 rounds up to the even pattern.
  EXPECT_EQ(encode_round<8>(exact_real(19, -4)).bits(), 0x42);
}

TEST(EncodeRound, NeverProducesZeroOrNaRFromNonzero) {
  for (int k = -600; k <= 600; k += 7) {
    for (int sign : {1, -1}) {
      const exact_real v(sign * 3, k);
      EXPECT_FALSE(encode_round<32>(v).is_zero());
      EXPECT_FALSE(encode_round<32>(v).is_nar());
      EXPECT_FALSE(encode_round<8>(v).is_zero());
    }
  }
}

TEST(EncodeRound, Monotone) {
  std::mt19937_64 rng(5);
  std::vector<exact_real> values;
  for (int i = 0; i < 4000; ++i) {
    values.emplace_back(static_cast<std::int64_t>(rng() >> 1) - (std::int64_t(1) << 62),
                        static_cast<int>(rng() % 600) - 330);
  }
  std::sort(values.begin(), values.end());
  for (std::size_t i = 1; i < values.size(); ++i) {
    ASSERT_LE(encode_round<64>(values[i - 1]).as_signed(), encode_round<64>(values[i]).as_signed());
    ASSERT_LE(encode_round<16>(values[i - 1]).as_signed(), encode_round<16>(values[i]).as_signed());
  }
}

TEST(Negation, TwosComplementNegatesExhaustive) {
  for (std::uint32_t b = 0; b < 0x10000; ++b) {
    const auto p = posit16::from_bits(static_cast<std::uint16_t>(b));
    if (p.is_nar()) {
      EXPECT_EQ(-p, p);
      continue;
    }
    ASSERT_EQ(exact_value(-p), -exact_value(p));
  }
  for (std::uint32_t b = 0; b < 0x100; ++b) {
    const auto p = posit8::from_bits(static_cast<std::uint8_t>(b));
    if (!p.is_nar()) ASSERT_EQ(exact_value(-p), -exact_value(p));
  }
  EXPECT_EQ(-posit8::zero(), posit8::zero());
}

TEST(TextForm, FormatAndParse) {
  EXPECT_EQ(to_string(posit16::from_bits(0xFA96)), "p16:0xFA96");
  EXPECT_EQ(to_string(posit8::one()), "p8:0x40");
  EXPECT_EQ(to_string(posit64::nar()), "p64:0x8000000000000000");
  EXPECT_EQ(parse_posit<16>("p16:0xfa96"), posit16::from_bits(0xFA96));
  EXPECT_FALSE(parse_posit<16>("p32:0xFA96").has_value());
  EXPECT_FALSE(parse_posit<8>("p8:0x1FF").has_value());
  EXPECT_FALSE(parse_posit<8>("p8:12").has_value());
}

}  // namespace
}  // namespace positron
