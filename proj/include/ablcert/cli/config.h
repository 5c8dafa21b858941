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

#ifndef ABLCERT_CLI_CONFIG_H_
#define ABLCERT_CLI_CONFIG_H_

#include <istream>
#include <string>
#include <string_view>

#include "ablcert/certify.h"

namespace ablcert::cli {

struct ClassifierSpec {
  // "prototype" or "constant".
  std::string name = "prototype";
  // Path to a prototype file (relative paths resolve against the config
  // file's directory), or "fit" to derive prototypes from the dataset.
  std::string prototypes = "fit";
  // For "constant", 0-based.
  Label constant_label = 0;
};

struct RunConfig {
  CertificationParams params;
  ClassifierSpec classifier;
  TargetMode mode = TargetMode::kTrueLabel;
};

// Flat "key = value" lines; '#' starts a comment. Keys: e (required), k,
// n, alpha, seed, threads, classifier, prototypes, constant_label, mode.
// Defaults: k = 3, n = 100000, alpha = 0.001, seed = 0.
RunConfig ParseConfig(std::istream& in, std::string_view source,
                      const std::string& base_dir = ".");
RunConfig LoadConfig(const std::string& path);

std::string ToString(TargetMode mode);
TargetMode ParseTargetMode(std::string_view text);

}  // namespace ablcert::cli

#endif  // ABLCERT_CLI_CONFIG_H_
