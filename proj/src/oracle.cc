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

#include <algorithm>
#include <functional>

#include "ablcert/errors.h"

namespace ablcert {
namespace {

// True when `s` can be produced by ablating y.
bool DerivableFrom(const AblatedInput& s, const InputVector& y) {
  for (std::size_t i = 0; i < s.retained.size(); ++i) {
    if (y[s.retained[i]] != s.values[i]) return false;
  }
  return true;
}

std::uint64_t ToU64(const BigInt& value) {
  return value.convert_to<std::uint64_t>();
}

// Visits every perturbation of exactly `size` features: each index subset
// paired with each assignment of differing values.
void ForEachPerturbation(const InputVector& x, std::size_t size,
                         const std::function<void(const Perturbation&)>& visit) {
  const Feature alternatives = x.domain_size() - 1;
  if (size > 0 && alternatives < 1) return;
  ForEachSubset(x.d(), size, [&](std::span<const std::uint32_t> subset) {
    Perturbation p;
    p.indices.assign(subset.begin(), subset.end());
    std::vector<Feature> offset(size, 0);
    while (true) {
      p.new_values.resize(size);
      for (std::size_t i = 0; i < size; ++i) {
        p.new_values[i] =
            (x[p.indices[i]] + 1 + offset[i]) % x.domain_size();
      }
      visit(p);
      std::size_t i = 0;
      while (i < size && ++offset[i] == alternatives) offset[i++] = 0;
      if (i == size) return;
    }
  });
}

std::vector<std::uint64_t> ExactCounts(const BaseClassifier& f,
                                       const InputVector& x, std::size_t e) {
  return SmoothedTopKExact(f, x, e, 0).counts;
}

BigInt SumUpper(const QuantizedBounds& bounds, std::span<const Label> labels,
                const BigInt& lattice) {
  BigInt sum = 0;
  for (Label j : labels) sum += bounds.p_upper[j].LatticeCount(lattice);
  return sum;
}

}  // namespace

RegionProbabilities RegionProbabilitiesAnalytic(std::uint64_t d,
                                                std::uint64_t e,
                                                std::uint64_t r) {
  const BinomialTable table(d, e);
  const ExactProb touched = table.Delta(r);
  const ExactProb shared = touched.Complement();
  return RegionProbabilities{touched, ExactProb::Zero(), shared,
                             ExactProb::Zero(), touched, shared};
}

RegionProbabilities RegionProbabilitiesEnum(const InputVector& x,
                                            const Perturbation& delta,
                                            std::size_t e) {
  const InputVector moved = ApplyPerturbation(x, delta);
  const BigInt total = Binomial(x.d(), e);
  CheckEnumerationSize(2 * total, "joint ablation space 2*C(d, e)");

  // Index 0 = A, 1 = B, 2 = C.
  auto region_of = [&](const AblatedInput& s) {
    const bool from_x = DerivableFrom(s, x);
    const bool from_moved = DerivableFrom(s, moved);
    if (from_x && from_moved) return 2;
    if (from_x) return 0;
    if (from_moved) return 1;
    throw InvariantError("ablated input derivable from neither input");
  };
  std::uint64_t u[3] = {0, 0, 0};
  std::uint64_t v[3] = {0, 0, 0};
  ForEachSubset(x.d(), e, [&](std::span<const std::uint32_t> subset) {
    ++u[region_of(Ablate(x, subset))];
    ++v[region_of(Ablate(moved, subset))];
  });
  auto prob = [&](std::uint64_t count) {
    return ExactProb::OnLattice(count, total);
  };
  return RegionProbabilities{prob(u[0]), prob(u[1]), prob(u[2]),
                             prob(v[0]), prob(v[1]), prob(v[2])};
}

std::vector<ExactProb> ExactLabelProbs(const BaseClassifier& f,
                                       const InputVector& x, std::size_t e) {
  return SmoothedTopKExact(f, x, e, 0).probabilities;
}

bool StrictlyInTopK(std::span<const std::uint64_t> counts, Label target,
                    std::size_t k) {
  std::vector<std::uint64_t> others;
  others.reserve(counts.size());
  for (Label j = 0; j < counts.size(); ++j) {
    if (j != target) others.push_back(counts[j]);
  }
  if (k > others.size()) return true;
  std::nth_element(others.begin(), others.begin() + (k - 1), others.end(),
                   std::greater<>());
  return counts[target] > others[k - 1];
}

SoundnessVerdict SoundnessCheck(const BaseClassifier& f, const InputVector& x,
                                Label target, std::size_t e, std::size_t k,
                                const CertifiedRadius& radius) {
  SoundnessVerdict verdict;
  if (radius.abstain()) return verdict;
  const std::uint64_t r = radius.value();
  if (r > x.d()) throw InputError("radius exceeds the number of features");
  BigInt perturbations = 0;
  BigInt per_size = 1;
  for (std::uint64_t s = 0; s <= r; ++s) {
    perturbations += Binomial(x.d(), s) * per_size;
    per_size *= (x.domain_size() - 1);
  }
  CheckEnumerationSize(perturbations * Binomial(x.d(), e),
                       "perturbations x C(d, e)");

  for (std::uint64_t s = 0; s <= r && verdict.sound; ++s) {
    ForEachPerturbation(x, s, [&](const Perturbation& p) {
      if (!verdict.sound) return;
      ++verdict.perturbations_checked;
      const auto counts = ExactCounts(f, ApplyPerturbation(x, p), e);
      if (!StrictlyInTopK(counts, target, k)) {
        verdict.sound = false;
        verdict.counterexample = p;
        verdict.counterexample_counts = counts;
      }
    });
  }
  return verdict;
}

std::string ToString(TightnessAssumption assumption) {
  switch (assumption) {
    case TightnessAssumption::kBinomialSlack:
      return "C(d - r - 2, e - 1) >= 1";
    case TightnessAssumption::kTopKMass:
      return "p_l + sum of top-k competitor bounds <= 1";
    case TightnessAssumption::kTotalMass:
      return "p_l + sum of all competitor bounds >= 1";
    case TightnessAssumption::kCertified:
      return "certificate must not abstain";
  }
  return "unknown assumption";
}

AssumptionViolation::AssumptionViolation(TightnessAssumption assumption)
    : InputError("tightness assumption violated: " + ToString(assumption)),
      assumption_(assumption) {}

std::optional<TightnessAssumption> CheckTightnessAssumptions(
    const ProblemSpec& spec, const QuantizedBounds& bounds) {
  const RadiusSolver solver(spec, bounds);
  const CertifiedRadius radius = solver.Solve();
  if (radius.abstain()) return TightnessAssumption::kCertified;
  const std::uint64_t r = radius.value();
  if (spec.d < r + 2 || Binomial(spec.d - r - 2, spec.e - 1) < 1) {
    return TightnessAssumption::kBinomialSlack;
  }
  const BigInt& lattice = solver.table().Total();
  const BigInt lower = bounds.p_l_lower.LatticeCount(lattice);
  if (lower + SumUpper(bounds, solver.order().labels, lattice) > lattice) {
    return TightnessAssumption::kTopKMass;
  }
  std::vector<Label> others;
  for (Label j = 0; j < spec.c; ++j) {
    if (j != spec.target) others.push_back(j);
  }
  if (lower + SumUpper(bounds, others, lattice) < lattice) {
    return TightnessAssumption::kTotalMass;
  }
  return std::nullopt;
}

WorstCaseConstruction ConstructWorstCase(const ProblemSpec& spec,
                                         const QuantizedBounds& bounds,
                                         const InputVector& x) {
  spec.Validate();
  if (x.d() != spec.d) {
    throw InputError("input has " + std::to_string(x.d()) +
                     " features, spec says d=" + std::to_string(spec.d));
  }
  if (x.domain_size() < 2) {
    throw InputError("a feature domain of size 1 admits no perturbation");
  }
  if (const auto failed = CheckTightnessAssumptions(spec, bounds)) {
    throw AssumptionViolation(*failed);
  }
  const RadiusSolver solver(spec, bounds);
  const std::uint64_t r = solver.Solve().value();
  const std::uint64_t attack_size = r + 1 + (spec.k != 1 ? 1 : 0);
  const BigInt& lattice = solver.table().Total();
  CheckEnumerationSize(2 * lattice, "joint ablation space 2*C(d, e)");

  const Label target = spec.target;
  const std::vector<Label>& upsilon = solver.order().labels;

  Perturbation attack;
  for (std::size_t i = 0; i < attack_size; ++i) {
    attack.indices.push_back(i);
    attack.new_values.push_back((x[i] + 1) % x.domain_size());
  }
  const InputVector moved = ApplyPerturbation(x, attack);

  // Regions in lexicographic subset order.
  std::vector<AblatedInput> region_a;
  std::vector<AblatedInput> region_b;
  std::vector<AblatedInput> region_c;
  ForEachSubset(x.d(), spec.e, [&](std::span<const std::uint32_t> subset) {
    AblatedInput from_x = Ablate(x, subset);
    if (DerivableFrom(from_x, moved)) {
      region_c.push_back(std::move(from_x));
    } else {
      region_a.push_back(std::move(from_x));
      region_b.push_back(Ablate(moved, subset));
    }
  });

  const std::uint64_t lower = ToU64(bounds.p_l_lower.LatticeCount(lattice));
  std::vector<std::uint64_t> upper(spec.c, 0);
  for (Label j = 0; j < spec.c; ++j) {
    if (j != target) upper[j] = ToU64(bounds.p_upper[j].LatticeCount(lattice));
  }
  const std::uint64_t mass_a = region_a.size();

  WorstCaseConstruction out{TableClassifier(spec.c, upsilon.front()),
                            attack,
                            solver.Solve(),
                            0,
                            ExactProb::OnLattice(1, lattice),
                            0,
                            0,
                            std::vector<BigInt>(spec.c, 0),
                            std::vector<BigInt>(spec.c, 0)};

  std::size_t a_next = 0;
  std::size_t b_next = 0;
  std::size_t c_next = 0;
  auto take_a = [&](std::uint64_t count, Label label) {
    for (std::uint64_t i = 0; i < count; ++i) {
      out.classifier.Assign(region_a.at(a_next++), label);
    }
    out.u_mass[label] += count;
  };
  auto take_c = [&](std::uint64_t count, Label label) {
    if (c_next + count > region_c.size()) {
      throw InvariantError("region C exhausted while building the plan");
    }
    for (std::uint64_t i = 0; i < count; ++i) {
      out.classifier.Assign(region_c[c_next++], label);
    }
    out.u_mass[label] += count;
  };
  auto take_b = [&](std::uint64_t count, Label label) {
    if (b_next + count > region_b.size()) {
      throw InvariantError("region B exhausted while building the plan");
    }
    for (std::uint64_t i = 0; i < count; ++i) {
      out.classifier.Assign(region_b[b_next++], label);
    }
    out.b_mass[label] += count;
  };
  // Spreads whatever is left of A and C over `labels`, each up to its
  // upper bound.
  auto fill_rest = [&](const std::vector<Label>& labels) {
    for (Label j : labels) {
      std::uint64_t room = upper[j] - ToU64(out.u_mass[j]);
      const std::uint64_t from_a =
          std::min<std::uint64_t>(room, region_a.size() - a_next);
      take_a(from_a, j);
      room -= from_a;
      take_c(std::min<std::uint64_t>(room, region_c.size() - c_next), j);
    }
    if (a_next != region_a.size() || c_next != region_c.size()) {
      throw InvariantError("upper bounds cannot absorb the remaining mass");
    }
  };

  std::vector<Label> rest;
  if (lower < mass_a) {
    // The target's mass fits inside A, which x + delta never produces.
    out.case_id = 1;
    take_a(lower, target);
    for (Label j = 0; j < spec.c; ++j) {
      if (j != target) rest.push_back(j);
    }
    fill_rest(rest);
  } else {
    out.case_id = 2;
    take_a(mass_a, target);
    take_c(lower - mass_a, target);

    // w = argmin_t (S_t - t + |A|) / t, smallest t on ties.
    const BigInt touched = mass_a;
    BigInt running = 0;
    BigInt best_num = 0;
    std::size_t best_t = 0;
    std::vector<BigInt> prefix;
    for (std::size_t t = 1; t <= upsilon.size(); ++t) {
      running += upper[upsilon[t - 1]];
      prefix.push_back(running);
      const BigInt num = running - BigInt(t) + touched;
      if (best_t == 0 || num * BigInt(best_t) < best_num * BigInt(t)) {
        best_num = num;
        best_t = t;
      }
    }
    out.w = best_t;
    const BigInt tau_num = prefix[best_t - 1] + touched;  // tau = tau_num / w
    out.tau_lattice_numerator = tau_num;

    for (std::size_t i = 0; i < best_t; ++i) {
      const Label j = upsilon[i];
      take_c(upper[j], j);
      const BigInt slack = tau_num - BigInt(best_t) * upper[j];
      if (slack < 0) {
        throw InvariantError("upsilon bound exceeds tau in the worst case");
      }
      take_b(ToU64(slack / best_t), j);
    }
    for (std::size_t i = best_t; i < upsilon.size(); ++i) {
      take_c(upper[upsilon[i]], upsilon[i]);
    }
    for (Label j = 0; j < spec.c; ++j) {
      if (j != target &&
          std::find(upsilon.begin(), upsilon.end(), j) == upsilon.end()) {
        rest.push_back(j);
      }
    }
    fill_rest(rest);
  }
  // Any B left over goes to a_1; B carries no mass under x.
  take_b(region_b.size() - b_next, upsilon.front());
  return out;
}

TightnessVerdict TightnessCheck(const ProblemSpec& spec,
                                const QuantizedBounds& bounds,
                                const InputVector& x) {
  const WorstCaseConstruction plan = ConstructWorstCase(spec, bounds, x);
  const BigInt& lattice = Binomial(spec.d, spec.e);
  const Label target = spec.target;

  TightnessVerdict verdict;
  verdict.attack_size = plan.attack.size();

  const auto on_x = ExactCounts(plan.classifier, x, spec.e);
  verdict.consistent =
      BigInt(on_x[target]) >= bounds.p_l_lower.LatticeCount(lattice);
  for (Label j = 0; j < spec.c; ++j) {
    if (j != target &&
        BigInt(on_x[j]) > bounds.p_upper[j].LatticeCount(lattice)) {
      verdict.consistent = false;
    }
  }

  const auto on_moved =
      ExactCounts(plan.classifier, ApplyPerturbation(x, plan.attack), spec.e);
  std::vector<std::uint64_t> others;
  for (Label j = 0; j < spec.c; ++j) {
    if (j != target) others.push_back(on_moved[j]);
  }
  std::sort(others.begin(), others.end(), std::greater<>());
  const std::uint64_t kth = others[spec.k - 1];
  verdict.target_probability = ExactProb::OnLattice(on_moved[target], lattice);
  verdict.kth_competitor_probability = ExactProb::OnLattice(kth, lattice);
  verdict.gap_lattice = BigInt(kth) - BigInt(on_moved[target]);
  verdict.dethroned = verdict.gap_lattice > 0;
  verdict.tie = verdict.gap_lattice == 0;
  verdict.attack_succeeded = verdict.dethroned || verdict.tie;

  Perturbation within;
  const std::uint64_t r = plan.radius.value();
  within.indices.assign(plan.attack.indices.begin(),
                        plan.attack.indices.begin() + r);
  within.new_values.assign(plan.attack.new_values.begin(),
                           plan.attack.new_values.begin() + r);
  const auto on_within =
      ExactCounts(plan.classifier, ApplyPerturbation(x, within), spec.e);
  verdict.holds_within_certificate =
      StrictlyInTopK(on_within, target, spec.k);
  return verdict;
}

TableClassifier RandomTableClassifier(std::size_t d, std::size_t e,
                                      Feature domain_size, std::size_t c,
                                      Label favored, double bias,
                                      SampleStream& stream) {
  if (e < 1 || e > d) throw InputError("random table needs 1 <= e <= d");
  if (c < 2 || favored >= c) throw InputError("random table needs c >= 2");
  if (domain_size < 1) throw InputError("random table needs V >= 1");
  BigInt size = Binomial(d, e);
  for (std::size_t i = 0; i < e; ++i) size *= domain_size;
  CheckEnumerationSize(size, "random table entries C(d, e) * V^e");

  TableClassifier table(c, favored);
  ForEachSubset(d, e, [&](std::span<const std::uint32_t> subset) {
    std::vector<Feature> values(e, 0);
    while (true) {
      const Label label = stream.Unit() < bias
                              ? favored
                              : static_cast<Label>(stream.Below(c));
      table.Assign(AblatedInput{{subset.begin(), subset.end()}, values, d},
                   label);
      std::size_t pos = 0;
      while (pos < e && ++values[pos] == domain_size) values[pos++] = 0;
      if (pos == e) break;
    }
  });
  return table;
}

TightnessInstance RandomTightnessInstance(std::uint64_t d, std::uint64_t e,
                                          std::size_t c, std::size_t k,
                                          SampleStream& stream) {
  TightnessInstance out;
  out.spec = ProblemSpec{d, e, c, k, 0};
  out.spec.Validate();
  out.spec.target = static_cast<Label>(stream.Below(c));
  const BigInt lattice = Binomial(d, e);
  if (lattice > BigInt(1) << 62) {
    throw GuardError("random tightness instance: C(d, e) exceeds 2^62");
  }
  const auto n = ToU64(lattice);
  const std::uint64_t p = n / 2 + stream.Below(n - n / 2 + 1);
  // Split the remaining mass with c - 2 uniform cut points.
  const std::uint64_t rest = n - p;
  std::vector<std::uint64_t> cuts{0, rest};
  for (std::size_t i = 0; i + 2 < c; ++i) cuts.push_back(stream.Below(rest + 1));
  std::sort(cuts.begin(), cuts.end());
  out.bounds.p_l_lower = ExactProb::OnLattice(p, lattice);
  out.bounds.p_upper.assign(c, ExactProb::Zero());
  std::size_t slot = 0;
  for (Label j = 0; j < c; ++j) {
    if (j == out.spec.target) continue;
    out.bounds.p_upper[j] =
        ExactProb::OnLattice(cuts[slot + 1] - cuts[slot], lattice);
    ++slot;
  }
  return out;
}

}  // namespace ablcert
