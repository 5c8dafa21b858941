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

#ifndef ABLCERT_RADIUS_H_
#define ABLCERT_RADIUS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ablcert/beta_bounds.h"
#include "ablcert/exact_prob.h"

namespace ablcert {

// Sizes of one certification problem. `target` is the label whose
// membership in the top-k set is being certified.
struct ProblemSpec {
  std::uint64_t d = 0;
  std::uint64_t e = 0;
  std::size_t c = 0;
  std::size_t k = 1;
  Label target = 0;

  // Requires 1 <= e <= d, c >= 2, 1 <= k <= c - 1 and target < c.
  void Validate() const;
};

// Lattice-rounded bounds: a lower bound for the target and an upper bound
// for every other label. p_upper[target] is ignored.
struct QuantizedBounds {
  ExactProb p_l_lower;
  std::vector<ExactProb> p_upper;
};

// Rounds raw bounds onto the 1/C(d, e) lattice (ceiling for the lower
// bound, floor for the upper bounds). The unused target entry becomes 0.
QuantizedBounds Quantize(const RawBounds& raw, std::uint64_t d,
                         std::uint64_t e);

// The k competing labels with the largest upper bounds, listed from the
// smallest bound to the largest (a_1 ... a_k). Ties are broken by ascending
// label index, both when selecting and when ordering.
struct TopKOrder {
  std::vector<Label> labels;
};

// Either a non-negative number of perturbed features, or an abstention.
class CertifiedRadius {
 public:
  static CertifiedRadius Abstain() { return CertifiedRadius(); }
  static CertifiedRadius Of(std::uint64_t r) { return CertifiedRadius(r); }

  bool abstain() const { return !value_.has_value(); }
  std::uint64_t value() const;
  // True when the certificate covers a perturbation of size r.
  bool Covers(std::uint64_t r) const { return value_ && *value_ >= r; }
  std::string ToString() const;

  friend bool operator==(const CertifiedRadius&,
                         const CertifiedRadius&) = default;

 private:
  CertifiedRadius() = default;
  explicit CertifiedRadius(std::uint64_t r) : value_(r) {}
  std::optional<std::uint64_t> value_;
};

TopKOrder OrderTopBounds(const QuantizedBounds& bounds,
                         const ProblemSpec& spec);

// min(sum of the t smallest of the top-k upper bounds, 1 - p_l_lower),
// for t in [1, k].
ExactProb UpsilonSum(const TopKOrder& order, const QuantizedBounds& bounds,
                     std::size_t t);

// Exact evaluation of the certification condition at perturbation size r:
//   p_l - D(r) > min_t (U_t + D(r)) / t,
// with D(r) = 1 - C(d - r, e) / C(d, e) and U_t the capped upsilon sum.
bool ConstraintHolds(const ProblemSpec& spec, const QuantizedBounds& bounds,
                     const TopKOrder& order, std::uint64_t r);

// Precomputes the binomial column and lattice counts so repeated
// constraint evaluations are integer comparisons.
class RadiusSolver {
 public:
  RadiusSolver(const ProblemSpec& spec, const QuantizedBounds& bounds);

  const ProblemSpec& spec() const { return spec_; }
  const TopKOrder& order() const { return order_; }
  const BinomialTable& table() const { return table_; }

  bool Holds(std::uint64_t r) const;
  // Largest r in [0, d] where Holds(r), by binary search over the monotone
  // predicate; Abstain when Holds(0) is false.
  CertifiedRadius Solve() const;

 private:
  ProblemSpec spec_;
  BinomialTable table_;
  TopKOrder order_;
  BigInt lower_count_;
  // Capped upsilon sums in lattice units, index t - 1.
  std::vector<BigInt> upsilon_counts_;
};

CertifiedRadius SolveCertifiedRadius(const ProblemSpec& spec,
                                     const QuantizedBounds& bounds);

// Top-1 radius on un-rounded bounds: the largest r with
//   p_l - max_{j != l} p_j > 2 D(r).
// Requires spec.k == 1.
CertifiedRadius LevineRadiusTop1(const RawBounds& raw,
                                 const ProblemSpec& spec);

}  // namespace ablcert

#endif  // ABLCERT_RADIUS_H_
