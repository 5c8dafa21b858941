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

#include "ablcert/radius.h"

#include <gtest/gtest.h>

#include "ablcert/errors.h"
#include "ablcert/rng.h"
#include "testing/oracles.h"

namespace ablcert {
namespace {

// Bounds in lattice units; entry `target` is ignored.
QuantizedBounds Lattice(std::uint64_t n, std::uint64_t lower,
                        const std::vector<std::uint64_t>& uppers) {
  QuantizedBounds bounds;
  bounds.p_l_lower = ExactProb::OnLattice(lower, n);
  for (auto u : uppers) bounds.p_upper.push_back(ExactProb::OnLattice(u, n));
  return bounds;
}

testing::LatticeInstance ToInstance(const ProblemSpec& spec,
                                    const QuantizedBounds& bounds) {
  const BigInt n = Binomial(spec.d, spec.e);
  testing::LatticeInstance instance;
  instance.d = static_cast<unsigned>(spec.d);
  instance.e = static_cast<unsigned>(spec.e);
  instance.k = spec.k;
  instance.lower =
      bounds.p_l_lower.LatticeCount(n).convert_to<std::uint64_t>();
  for (Label j = 0; j < spec.c; ++j) {
    if (j != spec.target) {
      instance.competitor_uppers.push_back(
          bounds.p_upper[j].LatticeCount(n).convert_to<std::uint64_t>());
    }
  }
  return instance;
}

TEST(OrderTest, SortsTopKAscending) {
  const ProblemSpec spec{10, 2, 4, 2, 0};
  QuantizedBounds bounds;
  bounds.p_l_lower = ExactProb(1, 2);
  bounds.p_upper = {ExactProb::Zero(), ExactProb(3, 10), ExactProb(5, 10),
                    ExactProb(1, 10)};
  EXPECT_EQ(OrderTopBounds(bounds, spec).labels, (std::vector<Label>{1, 2}));
}

TEST(OrderTest, TiesBreakBySmallerLabel) {
  const ProblemSpec spec{10, 2, 6, 3, 2};
  const QuantizedBounds bounds = Lattice(45, 20, {5, 5, 0, 5, 5, 5});
  EXPECT_EQ(OrderTopBounds(bounds, spec).labels,
            (std::vector<Label>{0, 1, 3}));
}

TEST(OrderTest, TopOneIsArgmax) {
  const ProblemSpec spec{10, 2, 5, 1, 0};
  const QuantizedBounds bounds = Lattice(45, 20, {0, 3, 9, 9, 1});
  EXPECT_EQ(OrderTopBounds(bounds, spec).labels, (std::vector<Label>{2}));
}

TEST(UpsilonSumTest, CapApplies) {
  const ProblemSpec spec{5, 2, 3, 2, 0};
  const QuantizedBounds bounds = Lattice(10, 4, {0, 3, 5});
  const TopKOrder order = OrderTopBounds(bounds, spec);
  EXPECT_EQ(UpsilonSum(order, bounds, 2), ExactProb(6, 10));
  EXPECT_EQ(UpsilonSum(order, bounds, 1), ExactProb(3, 10));
  const QuantizedBounds full = Lattice(10, 10, {0, 3, 5});
  EXPECT_EQ(UpsilonSum(order, full, 1), ExactProb::Zero());
  EXPECT_EQ(UpsilonSum(order, full, 2), ExactProb::Zero());
}

TEST(ConstraintTest, Examples) {
  const ProblemSpec spec{10, 2, 2, 1, 0};
  const QuantizedBounds bounds = Lattice(45, 45, {0, 0});
  const TopKOrder order = OrderTopBounds(bounds, spec);
  EXPECT_TRUE(ConstraintHolds(spec, bounds, order, 2));
  EXPECT_FALSE(ConstraintHolds(spec, bounds, order, 3));
  const QuantizedBounds zero = Lattice(45, 0, {0, 0});
  for (std::uint64_t r = 0; r <= 10; ++r) {
    EXPECT_FALSE(ConstraintHolds(spec, zero, OrderTopBounds(zero, spec), r));
  }
}

TEST(RadiusTest, Examples) {
  EXPECT_EQ(SolveCertifiedRadius({10, 2, 2, 1, 0}, Lattice(45, 45, {0, 0})),
            CertifiedRadius::Of(2));
  EXPECT_EQ(SolveCertifiedRadius({8, 2, 4, 2, 0}, Lattice(28, 20, {0, 4, 4, 0})),
            CertifiedRadius::Of(1));
  EXPECT_EQ(SolveCertifiedRadius({5, 2, 2, 1, 0}, Lattice(10, 3, {0, 4})),
            CertifiedRadius::Abstain());
}

TEST(RadiusTest, ConstraintValuesAtBoundary) {
  const ProblemSpec spec{8, 2, 4, 2, 0};
  const QuantizedBounds bounds = Lattice(28, 20, {0, 4, 4, 0});
  const TopKOrder order = OrderTopBounds(bounds, spec);
  EXPECT_TRUE(ConstraintHolds(spec, bounds, order, 1));
  EXPECT_FALSE(ConstraintHolds(spec, bounds, order, 2));
}

TEST(RadiusTest, MinOverTCapMatters) {
  // Near-uniform bounds with k = c - 1: only the capped sum at t = k
  // certifies anything.
  const ProblemSpec spec{20, 3, 4, 3, 0};
  const std::uint64_t n = 1140;
  const QuantizedBounds bounds = Lattice(n, 400, {0, 380, 380, 380});
  const testing::LatticeInstance instance = ToInstance(spec, bounds);
  const auto expected = testing::ScanRadius(instance);
  ASSERT_TRUE(expected.has_value());
  EXPECT_EQ(SolveCertifiedRadius(spec, bounds), CertifiedRadius::Of(*expected));
}

TEST(RadiusTest, SpecValidation) {
  EXPECT_THROW((ProblemSpec{4, 0, 3, 1, 0}.Validate()), InputError);
  EXPECT_THROW((ProblemSpec{4, 5, 3, 1, 0}.Validate()), InputError);
  EXPECT_THROW((ProblemSpec{4, 2, 1, 1, 0}.Validate()), InputError);
  EXPECT_THROW((ProblemSpec{4, 2, 3, 3, 0}.Validate()), InputError);
  EXPECT_THROW((ProblemSpec{4, 2, 3, 1, 3}.Validate()), InputError);
}

TEST(RadiusTest, PropertyAgreesWithLinearScan) {
  SampleStream stream(31, 0);
  for (int trial = 0; trial < 400; ++trial) {
    const auto d = 1 + stream.Below(30);
    const auto e = 1 + stream.Below(std::min<std::uint64_t>(d, 6));
    const std::size_t c = 2 + stream.Below(7);
    const std::size_t k = 1 + stream.Below(c - 1);
    const auto target = static_cast<Label>(stream.Below(c));
    const auto n = Binomial(d, e).convert_to<std::uint64_t>();
    std::vector<std::uint64_t> uppers(c);
    for (auto& u : uppers) u = stream.Below(n / 2 + 1);
    const ProblemSpec spec{d, e, c, k, target};
    const QuantizedBounds bounds = Lattice(n, stream.Below(n + 1), uppers);
    const auto expected = testing::ScanRadius(ToInstance(spec, bounds));
    const CertifiedRadius got = SolveCertifiedRadius(spec, bounds);
    ASSERT_EQ(got, expected ? CertifiedRadius::Of(*expected)
                            : CertifiedRadius::Abstain());
  }
}

TEST(RadiusTest, PropertyMonotoneInBounds) {
  SampleStream stream(32, 0);
  for (int trial = 0; trial < 300; ++trial) {
    const auto d = 2 + stream.Below(30);
    const auto e = 1 + stream.Below(std::min<std::uint64_t>(d, 5));
    const std::size_t c = 3 + stream.Below(5);
    const std::size_t k = 1 + stream.Below(c - 1);
    const auto n = Binomial(d, e).convert_to<std::uint64_t>();
    std::vector<std::uint64_t> uppers(c);
    for (auto& u : uppers) u = stream.Below(n / 3 + 1);
    const auto lower = stream.Below(n + 1);
    const ProblemSpec spec{d, e, c, k, 0};
    const CertifiedRadius base = SolveCertifiedRadius(spec, Lattice(n, lower, uppers));
    // Raising the lower bound or lowering an upper bound never hurts.
    const auto raised = std::min<std::uint64_t>(n, lower + 1 + stream.Below(3));
    const CertifiedRadius better_lower =
        SolveCertifiedRadius(spec, Lattice(n, raised, uppers));
    auto lowered = uppers;
    const auto j = 1 + stream.Below(c - 1);
    lowered[j] -= std::min<std::uint64_t>(lowered[j], 1 + stream.Below(3));
    const CertifiedRadius better_upper =
        SolveCertifiedRadius(spec, Lattice(n, lower, lowered));
    for (std::uint64_t r = 0; r <= d; ++r) {
      if (base.Covers(r)) {
        ASSERT_TRUE(better_lower.Covers(r));
        ASSERT_TRUE(better_upper.Covers(r));
      }
    }
  }
}

TEST(LevineTest, Examples) {
  RawBounds raw;
  raw.target = 0;
  raw.p_l_lower = 1.0;
  raw.p_upper = {std::nan(""), 0.0};
  EXPECT_EQ(LevineRadiusTop1(raw, {10, 2, 2, 1, 0}), CertifiedRadius::Of(2));
  raw.p_l_lower = 0.4;
  raw.p_upper = {std::nan(""), 0.4};
  EXPECT_EQ(LevineRadiusTop1(raw, {10, 2, 2, 1, 0}),
            CertifiedRadius::Abstain());
  raw.p_l_lower = 0.95;
  raw.p_upper = {std::nan(""), 0.05};
  const auto expected = testing::ScanLevine(0.95, 0.05, 10, 2);
  ASSERT_TRUE(expected.has_value());
  EXPECT_EQ(LevineRadiusTop1(raw, {10, 2, 2, 1, 0}),
            CertifiedRadius::Of(*expected));
  EXPECT_THROW(LevineRadiusTop1(raw, {10, 2, 3, 2, 0}), InputError);
}

TEST(CertifiedRadiusTest, Formatting) {
  EXPECT_EQ(CertifiedRadius::Abstain().ToString(), "abstain");
  EXPECT_EQ(CertifiedRadius::Of(7).ToString(), "7");
  EXPECT_TRUE(CertifiedRadius::Of(3).Covers(3));
  EXPECT_FALSE(CertifiedRadius::Of(3).Covers(4));
  EXPECT_FALSE(CertifiedRadius::Abstain().Covers(0));
  EXPECT_THROW(CertifiedRadius::Abstain().value(), InvariantError);
}

}  // namespace
}  // namespace ablcert
