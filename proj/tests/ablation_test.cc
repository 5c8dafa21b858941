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

#include "ablcert/ablation.h"

#include <gtest/gtest.h>

#include <cstdlib>
#include <map>
#include <set>

#include "ablcert/errors.h"
#include "testing/oracles.h"

namespace ablcert {
namespace {

InputVector Zeros(std::size_t d, Feature domain = 2) {
  return InputVector(std::vector<Feature>(d, 0), domain);
}

// Sets the guard variable for the lifetime of the object.
class ScopedGuard {
 public:
  explicit ScopedGuard(const char* value) {
    setenv(kEnumerationGuardEnv, value, 1);
  }
  ~ScopedGuard() { unsetenv(kEnumerationGuardEnv); }
};

// d = 4, e = 2: four subsets go to label 0 and two to label 1.
TableClassifier FourTwoTable(const InputVector& x) {
  TableClassifier table(3, 0);
  int assigned = 0;
  ForEachSubset(4, 2, [&](std::span<const std::uint32_t> subset) {
    table.Assign(Ablate(x, subset), assigned++ < 4 ? 0 : 1);
  });
  return table;
}

TEST(InputVectorTest, Validates) {
  EXPECT_NO_THROW(InputVector({0, 1, 2}, 3));
  EXPECT_THROW(InputVector({0, 3}, 3), InputError);
  EXPECT_THROW(InputVector({-1}, 3), InputError);
  EXPECT_THROW(InputVector({}, 3), InputError);
  EXPECT_THROW(InputVector({0}, 0), InputError);
}

TEST(SubsetTest, LexicographicEnumeration) {
  std::vector<std::vector<std::uint32_t>> seen;
  ForEachSubset(4, 2, [&](std::span<const std::uint32_t> s) {
    seen.emplace_back(s.begin(), s.end());
  });
  const std::vector<std::vector<std::uint32_t>> expected{
      {0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  EXPECT_EQ(seen, expected);
}

TEST(SubsetTest, CountsMatchBinomial) {
  for (unsigned d = 1; d <= 12; ++d) {
    for (unsigned e = 1; e <= d; ++e) {
      std::uint64_t count = 0;
      ForEachSubset(d, e, [&](std::span<const std::uint32_t>) { ++count; });
      ASSERT_EQ(count, testing::PascalBinomial(d, e));
    }
  }
}

TEST(EnumerateTest, Sizes) {
  EXPECT_EQ(EnumerateAblations(Zeros(4), 2).size(), 6u);
  EXPECT_EQ(EnumerateAblations(Zeros(3), 3).size(), 1u);
  const auto singles = EnumerateAblations(Zeros(5), 1);
  ASSERT_EQ(singles.size(), 5u);
  for (std::uint32_t i = 0; i < 5; ++i) {
    EXPECT_EQ(singles[i].retained, (std::vector<std::uint32_t>{i}));
  }
}

TEST(EnumerateTest, GuardTrips) {
  ScopedGuard guard("10");
  EXPECT_THROW(EnumerateAblations(Zeros(6), 3), GuardError);
  EXPECT_NO_THROW(EnumerateAblations(Zeros(5), 1));
}

TEST(EnumerateTest, GuardRejectsGarbage) {
  ScopedGuard guard("ten");
  EXPECT_THROW(EnumerationLimit(), InputError);
}

TEST(AblateTest, MaterializeMasksOthers) {
  const InputVector x({3, 1, 4, 1, 5}, 6);
  const std::vector<std::uint32_t> subset{1, 3};
  const AblatedInput s = Ablate(x, subset);
  EXPECT_EQ(s.values, (std::vector<Feature>{1, 1}));
  EXPECT_EQ(s.Materialize(),
            (std::vector<Feature>{kMask, 1, kMask, 1, kMask}));
}

TEST(SampleAblationTest, SingleFeature) {
  const InputVector x({7}, 8);
  SampleStream stream(1, 0);
  for (int i = 0; i < 10; ++i) {
    const AblatedInput s = SampleAblation(x, 1, stream);
    EXPECT_EQ(s.retained, (std::vector<std::uint32_t>{0}));
    EXPECT_EQ(s.values, (std::vector<Feature>{7}));
  }
}

TEST(SampleAblationTest, FullRetentionIsIdentity) {
  const InputVector x({2, 0, 1, 1}, 3);
  SampleStream stream(2, 0);
  const AblatedInput s = SampleAblation(x, 4, stream);
  EXPECT_EQ(s.Materialize(), std::vector<Feature>(x.features().begin(),
                                                  x.features().end()));
}

TEST(SampleAblationTest, UniformOverSubsets) {
  const InputVector x = Zeros(4);
  std::map<std::vector<std::uint32_t>, int> freq;
  const int trials = 60000;
  for (int i = 0; i < trials; ++i) {
    SampleStream stream(3, static_cast<std::uint64_t>(i));
    ++freq[SampleAblation(x, 2, stream).retained];
  }
  ASSERT_EQ(freq.size(), 6u);
  double chi2 = 0.0;
  for (const auto& [subset, count] : freq) {
    EXPECT_NEAR(count / static_cast<double>(trials), 1.0 / 6, 0.01);
    const double expected = trials / 6.0;
    chi2 += (count - expected) * (count - expected) / expected;
  }
  // 5 degrees of freedom, 0.999 quantile.
  EXPECT_LT(chi2, 20.52);
}

TEST(SampleAblationTest, LargeRetentionStaysValid) {
  const InputVector x = Zeros(300);
  SampleStream stream(4, 0);
  for (int i = 0; i < 20; ++i) {
    const AblatedInput s = SampleAblation(x, 150, stream);
    ASSERT_EQ(s.retained.size(), 150u);
    ASSERT_TRUE(std::is_sorted(s.retained.begin(), s.retained.end()));
    ASSERT_EQ(std::set<std::uint32_t>(s.retained.begin(), s.retained.end())
                  .size(),
              150u);
    ASSERT_LT(s.retained.back(), 300u);
  }
}

TEST(PerturbationTest, Apply) {
  const InputVector x = Zeros(4);
  EXPECT_EQ(ApplyPerturbation(x, {}), x);
  const InputVector y = ApplyPerturbation(x, {{2}, {1}});
  EXPECT_EQ(std::vector<Feature>(y.features().begin(), y.features().end()),
            (std::vector<Feature>{0, 0, 1, 0}));
}

TEST(PerturbationTest, RejectsInvalid) {
  const InputVector x = Zeros(4);
  EXPECT_THROW(ApplyPerturbation(x, {{2, 2}, {1, 1}}), InputError);
  EXPECT_THROW(ApplyPerturbation(x, {{4}, {1}}), InputError);
  EXPECT_THROW(ApplyPerturbation(x, {{1}, {2}}), InputError);
  EXPECT_THROW(ApplyPerturbation(x, {{1}, {0}}), InputError);
  EXPECT_THROW(ApplyPerturbation(x, {{1, 2}, {1}}), InputError);
}

TEST(ClassifierTest, PrototypeMatchesAndTies) {
  const PrototypeClassifier f({{0, 0, 0, 0}, {1, 1, 1, 1}});
  const InputVector x({1, 1, 0, 0}, 2);
  const std::vector<std::uint32_t> both{0, 1};
  const std::vector<std::uint32_t> tie{1, 2};
  EXPECT_EQ(f.Classify(Ablate(x, both)), 1u);
  EXPECT_EQ(f.Classify(Ablate(x, tie)), 0u);
}

TEST(ClassifierTest, PrototypeSymmetry) {
  // Swapping positions 0<->2 and 1<->3 exchanges the prototypes and fixes
  // x; e = 3 makes ties impossible.
  const PrototypeClassifier f({{0, 0, 1, 1}, {1, 1, 0, 0}});
  const InputVector x({0, 1, 0, 1}, 2);
  const SmoothedPrediction p = SmoothedTopKExact(f, x, 3, 1);
  EXPECT_EQ(p.probabilities[0], p.probabilities[1]);
  EXPECT_EQ(p.probabilities[0], ExactProb(1, 2));
}

TEST(SmoothedTest, ConstantClassifier) {
  const ConstantClassifier f(2, 5);
  const SmoothedPrediction p = SmoothedTopKExact(f, Zeros(6), 2, 3);
  EXPECT_EQ(p.probabilities[2], ExactProb::One());
  EXPECT_EQ(p.probabilities[0], ExactProb::Zero());
  EXPECT_EQ(p.top_k, (std::vector<Label>{2, 0, 1}));
}

TEST(SmoothedTest, TableClassifierFourTwo) {
  const InputVector x = Zeros(4);
  const TableClassifier f = FourTwoTable(x);
  const SmoothedPrediction p = SmoothedTopKExact(f, x, 2, 1);
  EXPECT_EQ(p.probabilities[0], ExactProb(2, 3));
  EXPECT_EQ(p.probabilities[1], ExactProb(1, 3));
  EXPECT_EQ(p.probabilities[2], ExactProb::Zero());
  EXPECT_EQ(p.top_k, (std::vector<Label>{0}));
}

TEST(SmoothedTest, KEqualsCReturnsAll) {
  const InputVector x = Zeros(4);
  const SmoothedPrediction p = SmoothedTopKExact(FourTwoTable(x), x, 2, 3);
  EXPECT_EQ(p.top_k, (std::vector<Label>{0, 1, 2}));
}

TEST(TopKLabelsTest, OrderAndTies) {
  const std::vector<std::uint64_t> scores{5, 9, 5, 1};
  EXPECT_EQ(TopKLabels(scores, 3), (std::vector<Label>{1, 0, 2}));
  EXPECT_EQ(TopKLabels(scores, 0), (std::vector<Label>{}));
}

}  // namespace
}  // namespace ablcert
