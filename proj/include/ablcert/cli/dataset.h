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

#ifndef ABLCERT_CLI_DATASET_H_
#define ABLCERT_CLI_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "ablcert/ablation.h"
#include "ablcert/certify.h"

namespace ablcert::cli {

// Dataset file layout:
//
//   # ablcert-dataset v1 d=<d> c=<c> V=<V>
//   id,label,x0,x1,...,x<d-1>
//   <id>,<label in [1, c]>,<d integers in [0, V)>
//   ...
//
// Labels are 1-based in the file and 0-based in memory. Data rows are
// numbered from 1 in diagnostics.
struct Dataset {
  std::size_t d = 0;
  std::size_t c = 0;
  Feature domain_size = 0;
  std::vector<Example> examples;
};

Dataset ParseDataset(std::istream& in, std::string_view source);
Dataset LoadDataset(const std::string& path);
void WriteDataset(std::ostream& out, const Dataset& dataset);

// Prototype file layout:
//
//   # ablcert-prototypes v1 d=<d> c=<c> V=<V>
//   label,x0,...,x<d-1>
//   <label>,<d integers>     (one row per label, any order)
using Prototypes = std::vector<std::vector<Feature>>;

Prototypes ParsePrototypes(std::istream& in, std::string_view source,
                           const Dataset& dataset);
Prototypes LoadPrototypes(const std::string& path, const Dataset& dataset);
void WritePrototypes(std::ostream& out, const Prototypes& prototypes,
                     Feature domain_size);

// Per-class, per-feature most frequent value (smallest value on ties;
// zeros for a class with no examples).
Prototypes FitPrototypes(const Dataset& dataset);

struct SynthOptions {
  std::size_t examples = 200;
  std::size_t d = 64;
  std::size_t c = 5;
  Feature domain_size = 2;
  // Each example resamples every feature with a probability drawn
  // uniformly from [noise_min, noise_max].
  double noise_min = 0.05;
  double noise_max = 0.45;
  std::uint64_t seed = 0;
};

struct SynthResult {
  Dataset dataset;
  Prototypes prototypes;
};

// Noisy copies of random class prototypes.
SynthResult Synthesize(const SynthOptions& options);

}  // namespace ablcert::cli

#endif  // ABLCERT_CLI_DATASET_H_
