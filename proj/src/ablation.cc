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

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <numeric>
#include <string>
#include <unordered_set>

#include "ablcert/errors.h"

namespace ablcert {

std::uint64_t EnumerationLimit() {
  const char* raw = std::getenv(kEnumerationGuardEnv);
  if (raw == nullptr || *raw == '\0') return kDefaultEnumerationGuard;
  errno = 0;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(raw, &end, 10);
  if (errno != 0 || *end != '\0' || value == 0 || raw[0] == '-') {
    throw InputError(std::string(kEnumerationGuardEnv) +
                     " must be a positive integer, got '" + raw + "'");
  }
  return value;
}

void CheckEnumerationSize(const BigInt& size, std::string_view what) {
  const std::uint64_t limit = EnumerationLimit();
  if (size > limit) {
    throw GuardError(std::string(what) + " = " + size.str() +
                     " exceeds the enumeration guard " +
                     std::to_string(limit) + " (set " +
                     kEnumerationGuardEnv + " to raise it)");
  }
}

InputVector::InputVector(std::vector<Feature> features, Feature domain_size)
    : features_(std::move(features)), domain_size_(domain_size) {
  if (features_.empty()) throw InputError("input must have d >= 1 features");
  if (domain_size_ < 1) throw InputError("feature domain size must be >= 1");
  for (std::size_t i = 0; i < features_.size(); ++i) {
    if (features_[i] < 0 || features_[i] >= domain_size_) {
      throw InputError("feature " + std::to_string(i) + " = " +
                       std::to_string(features_[i]) + " outside [0, " +
                       std::to_string(domain_size_) + ")");
    }
  }
}

std::vector<Feature> AblatedInput::Materialize() const {
  std::vector<Feature> out(d, kMask);
  for (std::size_t i = 0; i < retained.size(); ++i) {
    out[retained[i]] = values[i];
  }
  return out;
}

std::size_t AblatedInputHash::operator()(const AblatedInput& input) const {
  std::uint64_t h = Mix64(input.d);
  for (std::size_t i = 0; i < input.retained.size(); ++i) {
    h = Mix64(h ^ input.retained[i]);
    h = Mix64(h ^ static_cast<std::uint32_t>(input.values[i]));
  }
  return static_cast<std::size_t>(h);
}

TableClassifier::TableClassifier(std::size_t num_labels, Label fallback)
    : num_labels_(num_labels), fallback_(fallback) {
  if (fallback >= num_labels) {
    throw InputError("fallback label outside the label range");
  }
}

void TableClassifier::Assign(AblatedInput input, Label label) {
  if (label >= num_labels_) {
    throw InputError("table label " + std::to_string(label + 1) +
                     " outside [1, " + std::to_string(num_labels_) + "]");
  }
  table_[std::move(input)] = label;
}

Label TableClassifier::Classify(const AblatedInput& input) const {
  const auto it = table_.find(input);
  return it == table_.end() ? fallback_ : it->second;
}

PrototypeClassifier::PrototypeClassifier(
    std::vector<std::vector<Feature>> prototypes)
    : prototypes_(std::move(prototypes)) {
  if (prototypes_.empty()) throw InputError("need at least one prototype");
  for (const auto& proto : prototypes_) {
    if (proto.size() != prototypes_.front().size()) {
      throw InputError("prototypes must all have the same length");
    }
  }
}

Label PrototypeClassifier::Classify(const AblatedInput& input) const {
  Label best = 0;
  std::size_t best_score = 0;
  for (Label label = 0; label < prototypes_.size(); ++label) {
    const auto& proto = prototypes_[label];
    std::size_t score = 0;
    for (std::size_t i = 0; i < input.retained.size(); ++i) {
      score += proto[input.retained[i]] == input.values[i];
    }
    if (label == 0 || score > best_score) {
      best = label;
      best_score = score;
    }
  }
  return best;
}

ConstantClassifier::ConstantClassifier(Label label, std::size_t num_labels)
    : label_(label), num_labels_(num_labels) {
  if (label >= num_labels) {
    throw InputError("constant label outside the label range");
  }
}

void ForEachSubset(
    std::size_t d, std::size_t e,
    const std::function<void(std::span<const std::uint32_t>)>& visit) {
  if (e > d) return;
  std::vector<std::uint32_t> subset(e);
  std::iota(subset.begin(), subset.end(), 0u);
  while (true) {
    visit(subset);
    // Advance the rightmost position that still has room.
    std::size_t i = e;
    while (i > 0 && subset[i - 1] == d - e + (i - 1)) --i;
    if (i == 0) return;
    ++subset[i - 1];
    for (std::size_t j = i; j < e; ++j) subset[j] = subset[j - 1] + 1;
  }
}

AblatedInput Ablate(const InputVector& x,
                    std::span<const std::uint32_t> subset) {
  AblatedInput out;
  out.d = x.d();
  out.retained.assign(subset.begin(), subset.end());
  out.values.reserve(subset.size());
  for (std::uint32_t index : subset) out.values.push_back(x[index]);
  return out;
}

AblatedInput SampleAblation(const InputVector& x, std::size_t e,
                            SampleStream& stream) {
  const std::size_t d = x.d();
  if (e > d) {
    throw InputError("cannot retain e=" + std::to_string(e) +
                     " of d=" + std::to_string(d) + " features");
  }
  // Floyd's subset sampling.
  std::vector<std::uint32_t> subset;
  subset.reserve(e);
  if (e <= 64) {
    for (std::size_t j = d - e; j < d; ++j) {
      auto pick = static_cast<std::uint32_t>(stream.Below(j + 1));
      if (std::find(subset.begin(), subset.end(), pick) != subset.end()) {
        pick = static_cast<std::uint32_t>(j);
      }
      subset.push_back(pick);
    }
  } else {
    std::unordered_set<std::uint32_t> chosen;
    chosen.reserve(2 * e);
    for (std::size_t j = d - e; j < d; ++j) {
      auto pick = static_cast<std::uint32_t>(stream.Below(j + 1));
      if (!chosen.insert(pick).second) {
        pick = static_cast<std::uint32_t>(j);
        chosen.insert(pick);
      }
      subset.push_back(pick);
    }
  }
  std::sort(subset.begin(), subset.end());
  return Ablate(x, subset);
}

std::vector<AblatedInput> EnumerateAblations(const InputVector& x,
                                             std::size_t e) {
  if (e > x.d()) {
    throw InputError("cannot retain e=" + std::to_string(e) +
                     " of d=" + std::to_string(x.d()) + " features");
  }
  CheckEnumerationSize(Binomial(x.d(), e), "C(d, e)");
  std::vector<AblatedInput> out;
  ForEachSubset(x.d(), e, [&](std::span<const std::uint32_t> subset) {
    out.push_back(Ablate(x, subset));
  });
  return out;
}

InputVector ApplyPerturbation(const InputVector& x, const Perturbation& p) {
  if (p.indices.size() != p.new_values.size()) {
    throw InputError("perturbation needs one new value per index");
  }
  std::vector<Feature> out(x.features().begin(), x.features().end());
  std::vector<bool> touched(x.d(), false);
  for (std::size_t i = 0; i < p.indices.size(); ++i) {
    const std::size_t index = p.indices[i];
    const Feature value = p.new_values[i];
    if (index >= x.d()) {
      throw InputError("perturbed index " + std::to_string(index) +
                       " outside [0, " + std::to_string(x.d()) + ")");
    }
    if (touched[index]) {
      throw InputError("perturbed index " + std::to_string(index) +
                       " appears twice");
    }
    if (value < 0 || value >= x.domain_size()) {
      throw InputError("perturbed value " + std::to_string(value) +
                       " outside [0, " + std::to_string(x.domain_size()) +
                       ")");
    }
    if (value == x[index]) {
      throw InputError("perturbed value at index " + std::to_string(index) +
                       " equals the original value");
    }
    touched[index] = true;
    out[index] = value;
  }
  return InputVector(std::move(out), x.domain_size());
}

std::vector<Label> TopKLabels(std::span<const std::uint64_t> scores,
                              std::size_t k) {
  if (k > scores.size()) {
    throw InputError("k=" + std::to_string(k) + " exceeds the " +
                     std::to_string(scores.size()) + " labels");
  }
  std::vector<Label> labels(scores.size());
  std::iota(labels.begin(), labels.end(), Label{0});
  std::stable_sort(labels.begin(), labels.end(),
                   [&](Label a, Label b) { return scores[a] > scores[b]; });
  labels.resize(k);
  return labels;
}

SmoothedPrediction SmoothedTopKExact(const BaseClassifier& f,
                                     const InputVector& x, std::size_t e,
                                     std::size_t k) {
  if (e < 1 || e > x.d()) {
    throw InputError("need 1 <= e <= d (d=" + std::to_string(x.d()) +
                     ", e=" + std::to_string(e) + ")");
  }
  const BigInt total = Binomial(x.d(), e);
  CheckEnumerationSize(total, "C(d, e)");
  SmoothedPrediction out;
  out.counts.assign(f.num_labels(), 0);
  ForEachSubset(x.d(), e, [&](std::span<const std::uint32_t> subset) {
    const Label label = f.Classify(Ablate(x, subset));
    if (label >= out.counts.size()) {
      throw InvariantError("classifier returned label outside its range");
    }
    ++out.counts[label];
  });
  out.probabilities.reserve(out.counts.size());
  for (std::uint64_t count : out.counts) {
    out.probabilities.push_back(ExactProb::OnLattice(count, total));
  }
  out.top_k = TopKLabels(out.counts, k);
  return out;
}

}  // namespace ablcert
