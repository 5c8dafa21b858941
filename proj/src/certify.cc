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

#include "ablcert/certify.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "ablcert/errors.h"
#include "ablcert/rng.h"

namespace ablcert {

void CertificationParams::Validate() const {
  if (e < 1) throw InputError("e must be >= 1");
  if (k < 1) throw InputError("k must be >= 1");
  if (n < 1) throw InputError("n must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InputError("alpha must lie in (0, 1)");
  }
  if (threads < 1) throw InputError("threads must be >= 1");
}

std::vector<std::uint64_t> MonteCarloCounts(const BaseClassifier& f,
                                            const InputVector& x,
                                            std::size_t e, std::uint64_t n,
                                            std::uint64_t stream_seed) {
  std::vector<std::uint64_t> counts(f.num_labels(), 0);
  for (std::uint64_t i = 0; i < n; ++i) {
    SampleStream stream(stream_seed, i);
    const Label label = f.Classify(SampleAblation(x, e, stream));
    if (label >= counts.size()) {
      throw InvariantError("classifier returned label outside its range");
    }
    ++counts[label];
  }
  return counts;
}

DerivedCertificate CertifyFromCounts(const SampleCounts& counts,
                                     std::uint64_t d, std::uint64_t e,
                                     std::size_t k, double alpha) {
  const ProblemSpec spec{d, e, counts.num_labels(), k, counts.target};
  spec.Validate();
  DerivedCertificate out;
  out.raw = SimuEmBounds(counts, alpha);
  out.quantized = Quantize(out.raw, d, e);
  out.radius = SolveCertifiedRadius(spec, out.quantized);
  return out;
}

CertificationRecord CertifyExample(const BaseClassifier& f,
                                   const Example& example,
                                   const CertificationParams& params,
                                   TargetMode mode) {
  params.Validate();
  if (example.label >= f.num_labels()) {
    throw InputError("example '" + example.id + "' has label " +
                     std::to_string(example.label + 1) +
                     " outside the classifier's " +
                     std::to_string(f.num_labels()) + " labels");
  }
  CertificationRecord record;
  record.id = example.id;
  record.true_label = example.label;
  const auto counts =
      MonteCarloCounts(f, example.x, params.e, params.n,
                       DeriveSeed(params.seed, example.id));
  record.certified_label = mode == TargetMode::kTrueLabel
                               ? example.label
                               : TopKLabels(counts, 1).front();
  record.counts = SampleCounts{counts, record.certified_label};
  DerivedCertificate derived = CertifyFromCounts(
      record.counts, example.x.d(), params.e, params.k, params.alpha);
  record.raw = std::move(derived.raw);
  record.quantized = std::move(derived.quantized);
  record.radius = derived.radius;
  record.empirical_top_k = TopKLabels(counts, params.k);
  return record;
}

std::vector<CertificationRecord> CertifyDataset(
    const BaseClassifier& f, std::span<const Example> examples,
    const CertificationParams& params, TargetMode mode,
    const std::function<void(const CertificationRecord&)>& progress) {
  params.Validate();
  std::vector<CertificationRecord> records(examples.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex mutex;

  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= examples.size()) return;
      try {
        records[i] = CertifyExample(f, examples[i], params, mode);
        if (progress) {
          std::lock_guard<std::mutex> lock(mutex);
          progress(records[i]);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(mutex);
        if (!failure) failure = std::current_exception();
        next = examples.size();
        return;
      }
    }
  };

  const unsigned workers =
      std::min<std::size_t>(params.threads, std::max<std::size_t>(1, examples.size()));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return records;
}

double CertifiedAccuracy(std::span<const CertificationRecord> records,
                         std::uint64_t r) {
  if (records.empty()) throw InputError("no records to score");
  const auto certified = std::count_if(
      records.begin(), records.end(), [r](const CertificationRecord& rec) {
        return rec.certified_label == rec.true_label && rec.radius.Covers(r);
      });
  return static_cast<double>(certified) /
         static_cast<double>(records.size());
}

AccuracyCurve BuildAccuracyCurve(
    std::span<const CertificationRecord> records) {
  std::uint64_t max_radius = 0;
  for (const auto& rec : records) {
    if (!rec.radius.abstain()) {
      max_radius = std::max(max_radius, rec.radius.value());
    }
  }
  AccuracyCurve curve;
  curve.reserve(max_radius + 1);
  for (std::uint64_t r = 0; r <= max_radius; ++r) {
    curve.push_back({r, CertifiedAccuracy(records, r)});
  }
  return curve;
}

}  // namespace ablcert
