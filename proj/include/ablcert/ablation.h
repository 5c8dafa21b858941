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

#ifndef ABLCERT_ABLATION_H_
#define ABLCERT_ABLATION_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ablcert/beta_bounds.h"
#include "ablcert/exact_prob.h"
#include "ablcert/rng.h"

namespace ablcert {

using Feature = std::int32_t;

// Value of every position an ablation does not retain. Lies outside every
// feature domain [0, V).
inline constexpr Feature kMask = -1;

// Environment variable that overrides the default enumeration limit.
inline constexpr const char* kEnumerationGuardEnv = "ABLCERT_ENUM_GUARD";
inline constexpr std::uint64_t kDefaultEnumerationGuard = 1'000'000;

// Current limit on exhaustively enumerated elements.
std::uint64_t EnumerationLimit();
// Throws GuardError naming `what` when size exceeds EnumerationLimit().
void CheckEnumerationSize(const BigInt& size, std::string_view what);

// A flat input of d features, each in [0, domain_size).
class InputVector {
 public:
  InputVector(std::vector<Feature> features, Feature domain_size);

  std::size_t d() const { return features_.size(); }
  Feature domain_size() const { return domain_size_; }
  std::span<const Feature> features() const { return features_; }
  Feature operator[](std::size_t i) const { return features_[i]; }

  friend bool operator==(const InputVector&, const InputVector&) = default;

 private:
  std::vector<Feature> features_;
  Feature domain_size_;
};

// Retained positions (strictly increasing) and their values. Every other
// position holds kMask. This pair is also the canonical encoding that
// table classifiers key on.
struct AblatedInput {
  std::vector<std::uint32_t> retained;
  std::vector<Feature> values;
  std::size_t d = 0;

  std::vector<Feature> Materialize() const;
  friend bool operator==(const AblatedInput&, const AblatedInput&) = default;
};

struct AblatedInputHash {
  std::size_t operator()(const AblatedInput& input) const;
};

// Replacement values at a set of distinct positions.
struct Perturbation {
  std::vector<std::size_t> indices;
  std::vector<Feature> new_values;

  std::size_t size() const { return indices.size(); }
};

// A deterministic map from ablated inputs to labels in [0, num_labels()).
// Implementations must be safe to call concurrently.
class BaseClassifier {
 public:
  virtual ~BaseClassifier() = default;
  virtual Label Classify(const AblatedInput& input) const = 0;
  virtual std::size_t num_labels() const = 0;
};

// Explicit lookup table with a fallback label for unlisted inputs.
class TableClassifier : public BaseClassifier {
 public:
  TableClassifier(std::size_t num_labels, Label fallback);

  void Assign(AblatedInput input, Label label);
  std::size_t size() const { return table_.size(); }
  Label fallback() const { return fallback_; }

  Label Classify(const AblatedInput& input) const override;
  std::size_t num_labels() const override { return num_labels_; }

 private:
  std::size_t num_labels_;
  Label fallback_;
  std::unordered_map<AblatedInput, Label, AblatedInputHash> table_;
};

// One prototype per class; the score of a class is the number of retained
// positions whose value matches its prototype. Highest score wins, ties go
// to the smaller label.
class PrototypeClassifier : public BaseClassifier {
 public:
  explicit PrototypeClassifier(std::vector<std::vector<Feature>> prototypes);

  const std::vector<std::vector<Feature>>& prototypes() const {
    return prototypes_;
  }
  Label Classify(const AblatedInput& input) const override;
  std::size_t num_labels() const override { return prototypes_.size(); }

 private:
  std::vector<std::vector<Feature>> prototypes_;
};

class ConstantClassifier : public BaseClassifier {
 public:
  ConstantClassifier(Label label, std::size_t num_labels);

  Label Classify(const AblatedInput&) const override { return label_; }
  std::size_t num_labels() const override { return num_labels_; }

 private:
  Label label_;
  std::size_t num_labels_;
};

// Visits every e-subset of [0, d) in lexicographic order.
void ForEachSubset(std::size_t d, std::size_t e,
                   const std::function<void(std::span<const std::uint32_t>)>&
                       visit);

// The ablated input of x that retains exactly `subset` (sorted).
AblatedInput Ablate(const InputVector& x,
                    std::span<const std::uint32_t> subset);

// Retains a uniformly random e-subset of the features of x.
AblatedInput SampleAblation(const InputVector& x, std::size_t e,
                            SampleStream& stream);

// All C(d, e) ablations of x in lexicographic subset order. Subject to the
// enumeration guard.
std::vector<AblatedInput> EnumerateAblations(const InputVector& x,
                                             std::size_t e);

// x with the perturbation applied. Indices must be distinct and in range,
// and every new value must lie in the domain and differ from x.
InputVector ApplyPerturbation(const InputVector& x, const Perturbation& p);

// The k labels with the largest scores, largest first; equal scores are
// ordered by ascending label.
std::vector<Label> TopKLabels(std::span<const std::uint64_t> scores,
                              std::size_t k);

struct SmoothedPrediction {
  // Number of ablations (out of C(d, e)) classified as each label.
  std::vector<std::uint64_t> counts;
  std::vector<ExactProb> probabilities;
  std::vector<Label> top_k;
};

// Exact smoothed prediction by enumerating every ablation of x.
SmoothedPrediction SmoothedTopKExact(const BaseClassifier& f,
                                     const InputVector& x, std::size_t e,
                                     std::size_t k);

}  // namespace ablcert

#endif  // ABLCERT_ABLATION_H_
