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

#ifndef ABLCERT_ORACLE_H_
#define ABLCERT_ORACLE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ablcert/ablation.h"
#include "ablcert/errors.h"
#include "ablcert/exact_prob.h"
#include "ablcert/radius.h"
#include "ablcert/rng.h"

namespace ablcert {

// Masses of the joint ablation space of x (U) and x + delta (V), split
// into A (derivable only from x), B (only from x + delta) and C (both).
struct RegionProbabilities {
  ExactProb pr_u_a;
  ExactProb pr_u_b;
  ExactProb pr_u_c;
  ExactProb pr_v_a;
  ExactProb pr_v_b;
  ExactProb pr_v_c;

  friend bool operator==(const RegionProbabilities&,
                         const RegionProbabilities&) = default;
};

RegionProbabilities RegionProbabilitiesAnalytic(std::uint64_t d,
                                                std::uint64_t e,
                                                std::uint64_t r);

// Enumerates both ablation supports and classifies every element by
// testing which of x and x + delta it can be derived from.
RegionProbabilities RegionProbabilitiesEnum(const InputVector& x,
                                            const Perturbation& delta,
                                            std::size_t e);

// Exact p_j = #{ablations classified j} / C(d, e).
std::vector<ExactProb> ExactLabelProbs(const BaseClassifier& f,
                                       const InputVector& x, std::size_t e);

// True when `target` strictly beats the k-th largest probability among the
// other labels, i.e. it sits in the top-k with no tie at the boundary.
bool StrictlyInTopK(std::span<const std::uint64_t> counts, Label target,
                    std::size_t k);

struct SoundnessVerdict {
  bool sound = true;
  std::uint64_t perturbations_checked = 0;
  // First perturbation under which the target left the top-k.
  std::optional<Perturbation> counterexample;
  std::vector<std::uint64_t> counterexample_counts;
};

// Tries every perturbation of at most `radius` features (all index subsets
// and all differing value assignments) and checks that `target` stays
// strictly in the exact smoothed top-k. An abstained radius is vacuously
// sound.
SoundnessVerdict SoundnessCheck(const BaseClassifier& f, const InputVector& x,
                                Label target, std::size_t e, std::size_t k,
                                const CertifiedRadius& radius);

// The three preconditions of the worst-case construction.
enum class TightnessAssumption {
  // C(d - r - 2, e - 1) >= 1.
  kBinomialSlack,
  // p_l + sum of the top-k competitor bounds <= 1.
  kTopKMass,
  // p_l + sum of all competitor bounds >= 1.
  kTotalMass,
  // The certificate abstained, so there is no radius to exceed.
  kCertified,
};

std::string ToString(TightnessAssumption assumption);

// The first assumption that does not hold, if any.
std::optional<TightnessAssumption> CheckTightnessAssumptions(
    const ProblemSpec& spec, const QuantizedBounds& bounds);

class AssumptionViolation : public InputError {
 public:
  explicit AssumptionViolation(TightnessAssumption assumption);
  TightnessAssumption assumption() const { return assumption_; }

 private:
  TightnessAssumption assumption_;
};

struct WorstCaseConstruction {
  TableClassifier classifier;
  // Changes features 0 .. size - 1 of x.
  Perturbation attack;
  CertifiedRadius radius = CertifiedRadius::Abstain();
  // 1 when p_l is below Pr(U in A) (the target lives entirely in A),
  // 2 otherwise.
  int case_id = 0;
  ExactProb nu;
  // Minimizing index (case 2 only, 0 otherwise).
  std::size_t w = 0;
  // tau in units of nu: tau_numerator / w (case 2 only).
  BigInt tau_lattice_numerator = 0;
  // Mass plan in lattice units: |D_j intersect (A + C)| and |D_j intersect B|.
  std::vector<BigInt> u_mass;
  std::vector<BigInt> b_mass;
};

// Builds a classifier consistent with the bounds on x for which the target
// drops out of the top-k (or ties) under a perturbation of
// radius + 1 + [k != 1] features. Throws AssumptionViolation when a
// precondition fails and GuardError when the joint space is too large.
WorstCaseConstruction ConstructWorstCase(const ProblemSpec& spec,
                                         const QuantizedBounds& bounds,
                                         const InputVector& x);

struct TightnessVerdict {
  bool attack_succeeded = false;
  bool dethroned = false;
  bool tie = false;
  std::uint64_t attack_size = 0;
  // Exact smoothed probabilities of the constructed classifier on x + delta.
  ExactProb target_probability;
  ExactProb kth_competitor_probability;
  // kth competitor minus target, in lattice units (negative means the
  // target still wins).
  BigInt gap_lattice = 0;
  // The constructed classifier honours the bounds on x.
  bool consistent = false;
  // Perturbing only the first `radius` attacked features leaves the target
  // strictly in the top-k.
  bool holds_within_certificate = false;
};

TightnessVerdict TightnessCheck(const ProblemSpec& spec,
                                const QuantizedBounds& bounds,
                                const InputVector& x);

// A total table over every e-subset and every value tuple in [0, V)^e.
// Each entry is `favored` with probability `bias`, otherwise a uniform
// label. Subject to the enumeration guard.
TableClassifier RandomTableClassifier(std::size_t d, std::size_t e,
                                      Feature domain_size, std::size_t c,
                                      Label favored, double bias,
                                      SampleStream& stream);

struct TightnessInstance {
  ProblemSpec spec;
  QuantizedBounds bounds;
};

// Random lattice bounds on the 1/C(d, e) grid: the target lower bound is
// drawn from [N/2, N] and the remaining mass N - p_l is split at random
// over the other labels. The result may still violate an assumption.
TightnessInstance RandomTightnessInstance(std::uint64_t d, std::uint64_t e,
                                          std::size_t c, std::size_t k,
                                          SampleStream& stream);

}  // namespace ablcert

#endif  // ABLCERT_ORACLE_H_
