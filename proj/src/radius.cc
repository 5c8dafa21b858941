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

#include <algorithm>
#include <cmath>
#include <functional>

#include "ablcert/errors.h"

namespace ablcert {
namespace {

// Largest r in [0, d] with holds(r), for a predicate that is true on a
// prefix of [0, d]. nullopt when holds(0) is false.
std::optional<std::uint64_t> LastTrue(
    std::uint64_t d, const std::function<bool(std::uint64_t)>& holds) {
  if (!holds(0)) return std::nullopt;
  std::uint64_t lo = 0;  // holds(lo)
  std::uint64_t hi = d;
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo + 1) / 2;
    if (holds(mid)) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return lo;
}

void CheckBoundsShape(const QuantizedBounds& bounds, const ProblemSpec& spec) {
  if (bounds.p_upper.size() != spec.c) {
    throw InputError("expected " + std::to_string(spec.c) +
                     " upper bounds, got " +
                     std::to_string(bounds.p_upper.size()));
  }
}

}  // namespace

void ProblemSpec::Validate() const {
  if (e < 1 || e > d) {
    throw InputError("need 1 <= e <= d (d=" + std::to_string(d) +
                     ", e=" + std::to_string(e) + ")");
  }
  if (c < 2) throw InputError("need at least two labels");
  if (k < 1 || k > c - 1) {
    throw InputError("need 1 <= k <= c - 1 (k=" + std::to_string(k) +
                     ", c=" + std::to_string(c) + ")");
  }
  if (target >= c) {
    throw InputError("target label " + std::to_string(target + 1) +
                     " outside [1, " + std::to_string(c) + "]");
  }
}

std::uint64_t CertifiedRadius::value() const {
  if (!value_) throw InvariantError("abstained certificate has no radius");
  return *value_;
}

std::string CertifiedRadius::ToString() const {
  return value_ ? std::to_string(*value_) : "abstain";
}

QuantizedBounds Quantize(const RawBounds& raw, std::uint64_t d,
                         std::uint64_t e) {
  QuantizedBounds out;
  out.p_l_lower = QuantizeLower(raw.p_l_lower, d, e);
  out.p_upper.reserve(raw.p_upper.size());
  for (Label j = 0; j < raw.p_upper.size(); ++j) {
    out.p_upper.push_back(j == raw.target
                              ? ExactProb::Zero()
                              : QuantizeUpper(raw.p_upper[j], d, e));
  }
  return out;
}

TopKOrder OrderTopBounds(const QuantizedBounds& bounds,
                         const ProblemSpec& spec) {
  spec.Validate();
  CheckBoundsShape(bounds, spec);
  std::vector<Label> others;
  others.reserve(spec.c - 1);
  for (Label j = 0; j < spec.c; ++j) {
    if (j != spec.target) others.push_back(j);
  }
  // Largest bounds first; equal bounds keep ascending label order.
  std::stable_sort(others.begin(), others.end(), [&](Label a, Label b) {
    return bounds.p_upper[a] > bounds.p_upper[b];
  });
  others.resize(spec.k);
  std::stable_sort(others.begin(), others.end(), [&](Label a, Label b) {
    if (bounds.p_upper[a] != bounds.p_upper[b]) {
      return bounds.p_upper[a] < bounds.p_upper[b];
    }
    return a < b;
  });
  return TopKOrder{std::move(others)};
}

ExactProb UpsilonSum(const TopKOrder& order, const QuantizedBounds& bounds,
                     std::size_t t) {
  if (t < 1 || t > order.labels.size()) {
    throw InputError("upsilon index t=" + std::to_string(t) +
                     " outside [1, " + std::to_string(order.labels.size()) +
                     "]");
  }
  const ExactProb cap = bounds.p_l_lower.Complement();
  ExactProb sum;
  for (std::size_t i = 0; i < t; ++i) {
    const ExactProb& term = bounds.p_upper[order.labels[i]];
    // sum <= cap holds here, so cap - sum stays in [0, 1].
    if (term > cap - sum) return cap;
    sum = sum + term;
  }
  return std::min(sum, cap);
}

bool ConstraintHolds(const ProblemSpec& spec, const QuantizedBounds& bounds,
                     const TopKOrder& order, std::uint64_t r) {
  spec.Validate();
  if (r > spec.d) {
    throw InputError("perturbation size r=" + std::to_string(r) +
                     " exceeds d=" + std::to_string(spec.d));
  }
  const BinomialTable table(spec.d, spec.e);
  const ExactProb delta = table.Delta(r);
  const BigInt& lattice_den = delta.denominator();
  // p_l - D > (U_t + D) / t  <=>  t (p_l - D) > U_t + D, over a common
  // denominator.
  const BigInt lhs_num = bounds.p_l_lower.numerator() * lattice_den -
                         delta.numerator() * bounds.p_l_lower.denominator();
  const BigInt lhs_den = bounds.p_l_lower.denominator() * lattice_den;
  for (std::size_t t = 1; t <= order.labels.size(); ++t) {
    const ExactProb upsilon = UpsilonSum(order, bounds, t);
    const BigInt rhs_num = upsilon.numerator() * lattice_den +
                           delta.numerator() * upsilon.denominator();
    const BigInt rhs_den = upsilon.denominator() * lattice_den;
    if (BigInt(t) * lhs_num * rhs_den > rhs_num * lhs_den) return true;
  }
  return false;
}

RadiusSolver::RadiusSolver(const ProblemSpec& spec,
                           const QuantizedBounds& bounds)
    : spec_(spec),
      table_(spec.d, spec.e),
      order_(OrderTopBounds(bounds, spec)) {
  const BigInt& lattice = table_.Total();
  lower_count_ = bounds.p_l_lower.LatticeCount(lattice);
  const BigInt cap = lattice - lower_count_;
  BigInt running = 0;
  upsilon_counts_.reserve(spec.k);
  for (Label j : order_.labels) {
    running += bounds.p_upper[j].LatticeCount(lattice);
    upsilon_counts_.push_back(std::min(running, cap));
  }
}

bool RadiusSolver::Holds(std::uint64_t r) const {
  const BigInt delta = table_.DeltaCount(r);
  const BigInt margin = lower_count_ - delta;
  for (std::size_t t = 1; t <= upsilon_counts_.size(); ++t) {
    if (BigInt(t) * margin > upsilon_counts_[t - 1] + delta) return true;
  }
  return false;
}

CertifiedRadius RadiusSolver::Solve() const {
  const auto r =
      LastTrue(spec_.d, [this](std::uint64_t m) { return Holds(m); });
  return r ? CertifiedRadius::Of(*r) : CertifiedRadius::Abstain();
}

CertifiedRadius SolveCertifiedRadius(const ProblemSpec& spec,
                                     const QuantizedBounds& bounds) {
  return RadiusSolver(spec, bounds).Solve();
}

CertifiedRadius LevineRadiusTop1(const RawBounds& raw,
                                 const ProblemSpec& spec) {
  spec.Validate();
  if (spec.k != 1) throw InputError("the top-1 radius requires k = 1");
  if (raw.p_upper.size() != spec.c || raw.target != spec.target) {
    throw InputError("raw bounds do not match the problem spec");
  }
  std::optional<Label> runner_up;
  for (Label j = 0; j < spec.c; ++j) {
    if (j == spec.target) continue;
    if (!runner_up || raw.p_upper[j] > raw.p_upper[*runner_up]) runner_up = j;
  }
  const ExactProb lower = ExactProb::FromDouble(raw.p_l_lower);
  const ExactProb upper = ExactProb::FromDouble(raw.p_upper[*runner_up]);
  const BinomialTable table(spec.d, spec.e);
  const BigInt& lattice = table.Total();
  // lower - upper > 2 D(r), cross-multiplied.
  const BigInt gap_num = lower.numerator() * upper.denominator() -
                         upper.numerator() * lower.denominator();
  const BigInt gap_den = lower.denominator() * upper.denominator();
  const auto r = LastTrue(spec.d, [&](std::uint64_t m) {
    return gap_num * lattice > 2 * table.DeltaCount(m) * gap_den;
  });
  return r ? CertifiedRadius::Of(*r) : CertifiedRadius::Abstain();
}

}  // namespace ablcert
