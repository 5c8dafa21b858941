// Copyright 2026 The ablcert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ablcert/exact_prob.h"

#include <gtest/gtest.h>

#include "ablcert/errors.h"
#include "ablcert/rng.h"
#include "testing/oracles.h"

namespace ablcert {
namespace {

TEST(BinomialTest, SmallValues) {
  EXPECT_EQ(Binomial(10, 2), 45);
  EXPECT_EQ(Binomial(1, 2), 0);
  EXPECT_EQ(Binomial(7, 0), 1);
  EXPECT_EQ(Binomial(0, 0), 1);
}

TEST(BinomialTest, MatchesPascalTriangle) {
  for (unsigned m = 0; m <= 62; ++m) {
    for (unsigned e = 0; e <= m + 1; ++e) {
      EXPECT_EQ(Binomial(m, e), BigInt(testing::PascalBinomial(m, e)))
          << m << " choose " << e;
    }
  }
}

TEST(BinomialTest, LargeValueIsExact) {
  // C(3072, 16) has more than 64 bits; check the defining recurrence.
  EXPECT_EQ(Binomial(3072, 16), Binomial(3071, 16) + Binomial(3071, 15));
  EXPECT_GT(Binomial(3072, 16), BigInt(1) << 64);
}

TEST(ExactProbTest, NormalizesAndCompares) {
  EXPECT_EQ(ExactProb(6, 10), ExactProb(3, 5));
  EXPECT_EQ(ExactProb(6, 10).ToString(), "3/5");
  EXPECT_LT(ExactProb(1, 3), ExactProb(1, 2));
  EXPECT_EQ(ExactProb(1, 3) + ExactProb(1, 6), ExactProb(1, 2));
  EXPECT_EQ(ExactProb(1, 2) - ExactProb(1, 3), ExactProb(1, 6));
  EXPECT_EQ(ExactProb(1, 4).Complement(), ExactProb(3, 4));
}

TEST(ExactProbTest, RejectsOutOfRange) {
  EXPECT_THROW(ExactProb(3, 2), InvariantError);
  EXPECT_THROW(ExactProb(-1, 2), InvariantError);
  EXPECT_THROW(ExactProb(1, 0), InvariantError);
  EXPECT_THROW(ExactProb(1, 3) - ExactProb(1, 2), InvariantError);
}

TEST(ExactProbTest, ParseAndFromDouble) {
  EXPECT_EQ(ExactProb::Parse("42/45"), ExactProb(42, 45));
  EXPECT_EQ(ExactProb::Parse("0"), ExactProb::Zero());
  EXPECT_EQ(ExactProb::Parse("1"), ExactProb::One());
  EXPECT_THROW(ExactProb::Parse("a/3"), InputError);
  EXPECT_EQ(ExactProb::FromDouble(0.375), ExactProb(3, 8));
  EXPECT_EQ(ExactProb::FromDouble(0.1).ToDouble(), 0.1);
}

TEST(ExactProbTest, LatticeCount) {
  EXPECT_EQ(ExactProb(2, 3).LatticeCount(45), 30);
  EXPECT_TRUE(ExactProb(2, 3).IsOnLattice(45));
  EXPECT_FALSE(ExactProb(1, 7).IsOnLattice(45));
  EXPECT_THROW(ExactProb(1, 7).LatticeCount(45), InvariantError);
}

TEST(RatioToDoubleTest, HugeOperands) {
  const BigInt big = Binomial(3072, 16);
  EXPECT_DOUBLE_EQ(RatioToDouble(big, big * 4), 0.25);
  EXPECT_DOUBLE_EQ(RatioToDouble(big - 1, big), 1.0);
}

TEST(QuantizeTest, LowerRoundsUp) {
  EXPECT_EQ(QuantizeLower("0.61", 5, 2), ExactProb(7, 10));
  EXPECT_EQ(QuantizeLower(0.61, 5, 2), ExactProb(7, 10));
  EXPECT_EQ(QuantizeLower(0.0, 5, 2), ExactProb::Zero());
  EXPECT_EQ(QuantizeLower(0.0, 30, 7), ExactProb::Zero());
  EXPECT_EQ(QuantizeLower("0.3", 5, 2), ExactProb(3, 10));
}

TEST(QuantizeTest, UpperRoundsDown) {
  EXPECT_EQ(QuantizeUpper("0.61", 5, 2), ExactProb(6, 10));
  EXPECT_EQ(QuantizeUpper(0.61, 5, 2), ExactProb(6, 10));
  EXPECT_EQ(QuantizeUpper(1.0, 5, 2), ExactProb::One());
  EXPECT_EQ(QuantizeUpper(1.0, 30, 7), ExactProb::One());
  EXPECT_EQ(QuantizeUpper(0.05, 5, 2), ExactProb::Zero());
  EXPECT_EQ(QuantizeUpper("0.3", 5, 2), ExactProb(3, 10));
  EXPECT_EQ(QuantizeUpper("3e-1", 5, 2), ExactProb(3, 10));
}

TEST(QuantizeTest, DecimalVersusBinaryAtLatticePoint) {
  // 0.3 as a double sits just below 3/10, so the binary reading of the
  // upper bound rounds down one step while the decimal reading does not.
  EXPECT_EQ(QuantizeUpper(0.3, 5, 2), ExactProb(2, 10));
  EXPECT_EQ(QuantizeLower(0.3, 5, 2), ExactProb(3, 10));
}

TEST(QuantizeTest, RejectsBadInput) {
  EXPECT_THROW(QuantizeLower(1.5, 5, 2), InputError);
  EXPECT_THROW(QuantizeLower(-0.1, 5, 2), InputError);
  EXPECT_THROW(QuantizeUpper(0.5, 5, 0), InputError);
  EXPECT_THROW(QuantizeUpper(0.5, 5, 6), InputError);
  EXPECT_THROW(QuantizeUpper("abc", 5, 2), InputError);
}

TEST(QuantizeTest, PropertyBracketsValueWithinOneStep) {
  SampleStream stream(11, 0);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto d = 1 + stream.Below(60);
    const auto e = 1 + stream.Below(d);
    const double p = stream.Unit();
    const BigInt n = Binomial(d, e);
    const ExactProb exact = ExactProb::FromDouble(p);
    const ExactProb lo = QuantizeLower(p, d, e);
    const ExactProb hi = QuantizeUpper(p, d, e);
    ASSERT_TRUE(lo.IsOnLattice(n));
    ASSERT_TRUE(hi.IsOnLattice(n));
    ASSERT_GE(lo, exact);
    ASSERT_LE(hi, exact);
    ASSERT_LE(lo.LatticeCount(n) - hi.LatticeCount(n), 1);
  }
}

TEST(DeltaTest, Examples) {
  EXPECT_EQ(Delta(4, 2, 1), ExactProb(1, 2));
  EXPECT_EQ(Delta(10, 2, 0), ExactProb::Zero());
  EXPECT_EQ(Delta(4, 2, 3), ExactProb::One());
  EXPECT_EQ(Delta(10, 2, 2), ExactProb(17, 45));
  EXPECT_EQ(Delta(10, 2, 3), ExactProb(24, 45));
}

TEST(DeltaTest, MatchesSubsetEnumeration) {
  for (unsigned d = 1; d <= 14; ++d) {
    for (unsigned e = 1; e <= d; ++e) {
      const BinomialTable t(d, e);
      for (unsigned r = 0; r <= d; ++r) {
        ASSERT_EQ(t.DeltaCount(r), BigInt(testing::BruteDeltaCount(d, e, r)))
            << "d=" << d << " e=" << e << " r=" << r;
      }
    }
  }
}

TEST(DeltaTest, PropertyMonotoneInRadius) {
  SampleStream stream(12, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto d = 1 + stream.Below(200);
    const auto e = 1 + stream.Below(d);
    const BinomialTable table(d, e);
    EXPECT_EQ(table.Delta(0), ExactProb::Zero());
    for (std::uint64_t r = 1; r <= d; ++r) {
      ASSERT_LE(table.Delta(r - 1), table.Delta(r));
    }
    EXPECT_EQ(table.Delta(d - e + 1), ExactProb::One());
  }
}

TEST(BinomialTableTest, RejectsDegenerateShapes) {
  EXPECT_THROW(BinomialTable(5, 0), InputError);
  EXPECT_THROW(BinomialTable(5, 6), InputError);
  EXPECT_THROW(BinomialTable(4, 2).DeltaCount(5), InputError);
}

}  // namespace
}  // namespace ablcert
