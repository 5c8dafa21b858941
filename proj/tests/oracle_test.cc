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

#include "ablcert/oracle.h"

#include <gtest/gtest.h>

#include "ablcert/errors.h"

namespace ablcert {
namespace {

InputVector Zeros(std::size_t d, Feature domain = 2) {
  return InputVector(std::vector<Feature>(d, 0), domain);
}

Perturbation FirstIndices(std::size_t r) {
  Perturbation p;
  for (std::size_t i = 0; i < r; ++i) {
    p.indices.push_back(i);
    p.new_values.push_back(1);
  }
  return p;
}

QuantizedBounds Lattice(std::uint64_t n, std::uint64_t lower,
                        const std::vector<std::uint64_t>& uppers) {
  QuantizedBounds bounds;
  bounds.p_l_lower = ExactProb::OnLattice(lower, n);
  for (auto u : uppers) bounds.p_upper.push_back(ExactProb::OnLattice(u, n));
  return bounds;
}

TEST(RegionsTest, AnalyticExamples) {
  const auto one = RegionProbabilitiesAnalytic(4, 2, 1);
  EXPECT_EQ(one.pr_u_c, ExactProb(1, 2));
  EXPECT_EQ(one.pr_u_a, ExactProb(1, 2));
  EXPECT_EQ(one.pr_u_b, ExactProb::Zero());
  EXPECT_EQ(one.pr_v_b, ExactProb(1, 2));
  const auto none = RegionProbabilitiesAnalytic(4, 2, 0);
  EXPECT_EQ(none.pr_u_c, ExactProb::One());
  EXPECT_EQ(none.pr_u_a, ExactProb::Zero());
  EXPECT_EQ(RegionProbabilitiesAnalytic(4, 2, 3).pr_u_c, ExactProb::Zero());
}

TEST(RegionsTest, EnumerationMatchesAnalytic) {
  EXPECT_EQ(RegionProbabilitiesEnum(Zeros(4), {}, 2).pr_u_c,
            ExactProb::One());
  EXPECT_EQ(RegionProbabilitiesEnum(Zeros(4), FirstIndices(1), 2),
            RegionProbabilitiesAnalytic(4, 2, 1));
  const auto five = RegionProbabilitiesEnum(Zeros(5), FirstIndices(2), 2);
  EXPECT_EQ(five.pr_u_c, ExactProb(3, 10));
  EXPECT_EQ(five, RegionProbabilitiesAnalytic(5, 2, 2));
}

TEST(RegionsTest, ScatteredPerturbationAgrees) {
  const InputVector x({2, 0, 1, 1, 0, 2, 1}, 3);
  const Perturbation p{{1, 4, 6}, {2, 1, 0}};
  EXPECT_EQ(RegionProbabilitiesEnum(x, p, 3),
            RegionProbabilitiesAnalytic(7, 3, 3));
}

TEST(ExactLabelProbsTest, Constant) {
  const ConstantClassifier f(1, 3);
  const auto p = ExactLabelProbs(f, Zeros(5), 2);
  EXPECT_EQ(p, (std::vector<ExactProb>{ExactProb::Zero(), ExactProb::One(),
                                       ExactProb::Zero()}));
}

TEST(ExactLabelProbsTest, FourTwoTable) {
  const InputVector x = Zeros(4);
  TableClassifier table(4, 0);
  int assigned = 0;
  ForEachSubset(4, 2, [&](std::span<const std::uint32_t> subset) {
    table.Assign(Ablate(x, subset), assigned++ < 4 ? 0 : 1);
  });
  const auto p = ExactLabelProbs(table, x, 2);
  EXPECT_EQ(p[0], ExactProb(2, 3));
  EXPECT_EQ(p[1], ExactProb(1, 3));
  EXPECT_EQ(p[2], ExactProb::Zero());
  EXPECT_EQ(p[3], ExactProb::Zero());
}

TEST(StrictlyInTopKTest, Boundaries) {
  const std::vector<std::uint64_t> counts{5, 7, 5, 1};
  EXPECT_FALSE(StrictlyInTopK(counts, 0, 1));
  EXPECT_FALSE(StrictlyInTopK(counts, 0, 2));
  EXPECT_TRUE(StrictlyInTopK(counts, 0, 3));
  EXPECT_TRUE(StrictlyInTopK(counts, 1, 1));
}

TEST(RandomTableTest, IsTotal) {
  SampleStream stream(1, 0);
  const TableClassifier f = RandomTableClassifier(5, 2, 3, 4, 1, 0.5, stream);
  EXPECT_EQ(f.size(), 10u * 9u);
  EXPECT_THROW(RandomTableClassifier(40, 20, 2, 4, 1, 0.5, stream),
               GuardError);
}

TEST(SoundnessTest, ZeroRadiusChecksOnlyOriginal) {
  SampleStream stream(2, 0);
  const TableClassifier f = RandomTableClassifier(6, 2, 2, 4, 0, 0.9, stream);
  const InputVector x = Zeros(6);
  const auto exact = SmoothedTopKExact(f, x, 2, 4);
  const Label top = exact.top_k[0];
  const Label bottom = exact.top_k[3];
  const auto good = SoundnessCheck(f, x, top, 2, 1, CertifiedRadius::Of(0));
  EXPECT_EQ(good.perturbations_checked, 1u);
  EXPECT_EQ(good.sound, StrictlyInTopK(exact.counts, top, 1));
  const auto bad = SoundnessCheck(f, x, bottom, 2, 1, CertifiedRadius::Of(0));
  EXPECT_FALSE(bad.sound);
  EXPECT_TRUE(bad.counterexample.has_value());
  EXPECT_EQ(bad.counterexample->size(), 0u);
  EXPECT_TRUE(
      SoundnessCheck(f, x, bottom, 2, 1, CertifiedRadius::Abstain()).sound);
}

TEST(SoundnessTest, RandomTablesAreSound) {
  for (std::uint64_t trial = 0; trial < 40; ++trial) {
    SampleStream stream(3, trial);
    const Label favored = static_cast<Label>(stream.Below(4));
    const TableClassifier f =
        RandomTableClassifier(6, 2, 2, 4, favored, 0.85, stream);
    std::vector<Feature> features(6);
    for (auto& v : features) v = static_cast<Feature>(stream.Below(2));
    const InputVector x(features, 2);
    const std::size_t k = 1 + trial % 2;
    const auto exact = SmoothedTopKExact(f, x, 2, 1);
    const Label target = exact.top_k[0];
    QuantizedBounds bounds{exact.probabilities[target], exact.probabilities};
    bounds.p_upper[target] = ExactProb::Zero();
    const CertifiedRadius radius =
        SolveCertifiedRadius({6, 2, 4, k, target}, bounds);
    const auto verdict = SoundnessCheck(f, x, target, 2, k, radius);
    ASSERT_TRUE(verdict.sound) << "trial " << trial;
  }
}

TEST(SoundnessTest, InflatedRadiusIsCaught) {
  const ProblemSpec spec{10, 2, 2, 1, 0};
  const QuantizedBounds bounds = Lattice(45, 45, {0, 0});
  const InputVector x = Zeros(10);
  const WorstCaseConstruction plan = ConstructWorstCase(spec, bounds, x);
  ASSERT_EQ(plan.radius, CertifiedRadius::Of(2));
  const auto verdict = SoundnessCheck(plan.classifier, x, 0, 2, 1,
                                      CertifiedRadius::Of(2 + 3));
  EXPECT_FALSE(verdict.sound);
  ASSERT_TRUE(verdict.counterexample.has_value());
  EXPECT_GT(verdict.counterexample->size(), 2u);
  EXPECT_TRUE(
      SoundnessCheck(plan.classifier, x, 0, 2, 1, CertifiedRadius::Of(2))
          .sound);
}

TEST(SoundnessTest, GuardTrips) {
  const ConstantClassifier f(0, 2);
  setenv(kEnumerationGuardEnv, "100", 1);
  EXPECT_THROW(
      SoundnessCheck(f, Zeros(12), 0, 3, 1, CertifiedRadius::Of(4)),
      GuardError);
  unsetenv(kEnumerationGuardEnv);
}

TEST(TightnessTest, AssumptionsNamed) {
  const ProblemSpec spec{10, 2, 3, 1, 0};
  EXPECT_EQ(CheckTightnessAssumptions(spec, Lattice(45, 45, {0, 0, 0})),
            std::nullopt);
  EXPECT_EQ(CheckTightnessAssumptions(spec, Lattice(45, 40, {0, 20, 20})),
            TightnessAssumption::kTopKMass);
  EXPECT_EQ(CheckTightnessAssumptions(spec, Lattice(45, 40, {0, 1, 1})),
            TightnessAssumption::kTotalMass);
  EXPECT_EQ(CheckTightnessAssumptions(spec, Lattice(45, 10, {0, 20, 15})),
            TightnessAssumption::kCertified);
  // e = d: C(d - r - 2, e - 1) vanishes.
  EXPECT_EQ(CheckTightnessAssumptions({4, 4, 2, 1, 0}, Lattice(1, 1, {0, 0})),
            TightnessAssumption::kBinomialSlack);
}

TEST(TightnessTest, RefusesWithNamedAssumption) {
  const ProblemSpec spec{10, 2, 3, 1, 0};
  try {
    ConstructWorstCase(spec, Lattice(45, 40, {0, 20, 20}), Zeros(10));
    FAIL() << "expected a refusal";
  } catch (const AssumptionViolation& error) {
    EXPECT_EQ(error.assumption(), TightnessAssumption::kTopKMass);
    EXPECT_NE(std::string(error.what()).find(
                  ToString(TightnessAssumption::kTopKMass)),
              std::string::npos);
  }
}

TEST(TightnessTest, TopOneAttackOneStepPastRadius) {
  const ProblemSpec spec{10, 2, 2, 1, 0};
  const QuantizedBounds bounds = Lattice(45, 45, {0, 0});
  const TightnessVerdict v = TightnessCheck(spec, bounds, Zeros(10));
  EXPECT_EQ(v.attack_size, 3u);
  EXPECT_TRUE(v.consistent);
  EXPECT_TRUE(v.attack_succeeded);
  EXPECT_TRUE(v.holds_within_certificate);
}

TEST(TightnessTest, TopTwoAttackTwoStepsPastRadius) {
  const ProblemSpec spec{8, 2, 4, 2, 1};
  const QuantizedBounds bounds = Lattice(28, 20, {4, 0, 3, 1});
  ASSERT_EQ(CheckTightnessAssumptions(spec, bounds), std::nullopt);
  const CertifiedRadius r = SolveCertifiedRadius(spec, bounds);
  const TightnessVerdict v = TightnessCheck(spec, bounds, Zeros(8));
  EXPECT_EQ(v.attack_size, r.value() + 2);
  EXPECT_TRUE(v.consistent);
  EXPECT_TRUE(v.attack_succeeded);
  EXPECT_TRUE(v.holds_within_certificate);
}

TEST(TightnessTest, PropertyRandomInstances) {
  std::size_t checked = 0;
  for (std::uint64_t trial = 0; trial < 90; ++trial) {
    SampleStream stream(4, trial);
    const std::size_t k = 1 + trial % 3;
    const std::uint64_t d = 5 + stream.Below(4);
    const std::uint64_t e = 1 + stream.Below(3);
    const auto instance = RandomTightnessInstance(d, e, 5, k, stream);
    if (CheckTightnessAssumptions(instance.spec, instance.bounds)) continue;
    std::vector<Feature> features(d);
    for (auto& v : features) v = static_cast<Feature>(stream.Below(3));
    const TightnessVerdict v =
        TightnessCheck(instance.spec, instance.bounds, InputVector(features, 3));
    ASSERT_TRUE(v.consistent) << "trial " << trial;
    ASSERT_TRUE(v.attack_succeeded) << "trial " << trial;
    ASSERT_TRUE(v.holds_within_certificate) << "trial " << trial;
    ++checked;
  }
  EXPECT_GE(checked, 30u);
}

TEST(RandomTightnessInstanceTest, MassesSumToOne) {
  SampleStream stream(5, 0);
  for (int i = 0; i < 50; ++i) {
    const auto instance = RandomTightnessInstance(9, 3, 6, 2, stream);
    ExactProb total = instance.bounds.p_l_lower;
    for (Label j = 0; j < 6; ++j) {
      if (j != instance.spec.target) total = total + instance.bounds.p_upper[j];
    }
    ASSERT_EQ(total, ExactProb::One());
    ASSERT_GE(instance.bounds.p_l_lower, ExactProb(1, 2));
  }
}

}  // namespace
}  // namespace ablcert
