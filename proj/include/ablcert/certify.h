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

#ifndef ABLCERT_CERTIFY_H_
#define ABLCERT_CERTIFY_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ablcert/ablation.h"
#include "ablcert/beta_bounds.h"
#include "ablcert/radius.h"

namespace ablcert {

struct CertificationParams {
  std::size_t e = 1;
  std::size_t k = 3;
  std::uint64_t n = 100000;
  double alpha = 0.001;
  std::uint64_t seed = 0;
  // Examples certified concurrently. Results do not depend on this.
  unsigned threads = 1;

  void Validate() const;
};

enum class TargetMode {
  // Certify the supplied ground-truth label.
  kTrueLabel,
  // Certify the most frequent label among the Monte Carlo samples.
  kEmpiricalTop1,
};

struct CertificationRecord {
  std::string id;
  Label true_label = 0;
  Label certified_label = 0;
  SampleCounts counts;
  RawBounds raw;
  QuantizedBounds quantized;
  CertifiedRadius radius = CertifiedRadius::Abstain();
  std::vector<Label> empirical_top_k;
};

struct Example {
  std::string id;
  Label label = 0;
  InputVector x;
};

// Tallies f over n ablations of x. Sample i uses stream (stream_seed, i).
std::vector<std::uint64_t> MonteCarloCounts(const BaseClassifier& f,
                                            const InputVector& x,
                                            std::size_t e, std::uint64_t n,
                                            std::uint64_t stream_seed);

// Counts -> simultaneous bounds -> lattice rounding -> radius. Also used to
// re-derive a stored record from its counts.
struct DerivedCertificate {
  RawBounds raw;
  QuantizedBounds quantized;
  CertifiedRadius radius = CertifiedRadius::Abstain();
};
DerivedCertificate CertifyFromCounts(const SampleCounts& counts,
                                     std::uint64_t d, std::uint64_t e,
                                     std::size_t k, double alpha);

CertificationRecord CertifyExample(const BaseClassifier& f,
                                   const Example& example,
                                   const CertificationParams& params,
                                   TargetMode mode = TargetMode::kTrueLabel);

// Certifies every example; records come back in input order. `progress`
// (optional) is called once per finished example, possibly from worker
// threads.
std::vector<CertificationRecord> CertifyDataset(
    const BaseClassifier& f, std::span<const Example> examples,
    const CertificationParams& params, TargetMode mode,
    const std::function<void(const CertificationRecord&)>& progress = {});

// Fraction of records whose true label is certified with radius >= r.
double CertifiedAccuracy(std::span<const CertificationRecord> records,
                         std::uint64_t r);

struct CurvePoint {
  std::uint64_t r = 0;
  double accuracy = 0.0;
};
using AccuracyCurve = std::vector<CurvePoint>;

// CertifiedAccuracy for r = 0 .. largest certified radius (just r = 0 when
// nothing is certified).
AccuracyCurve BuildAccuracyCurve(std::span<const CertificationRecord> records);

}  // namespace ablcert

#endif  // ABLCERT_CERTIFY_H_
