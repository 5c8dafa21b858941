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

#ifndef ABLCERT_CLI_COMMANDS_H_
#define ABLCERT_CLI_COMMANDS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "ablcert/cli/config.h"

namespace ablcert::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitGuardViolation = 2;
inline constexpr int kExitInvariantFailure = 3;

struct CertifyOptions {
  std::string dataset;
  std::string config;
  std::string out;
  // Defaults to `out` with its extension replaced by ".csv".
  std::string csv;
  std::optional<TargetMode> mode;
  bool progress = false;
};

struct RadiusOptions {
  // Comma-separated n_1..n_c.
  std::string counts;
  // 1-based.
  std::size_t l = 0;
  std::uint64_t d = 0;
  std::uint64_t e = 0;
  std::size_t k = 1;
  double alpha = 0.001;
  // When set, must equal the sum of the counts.
  std::optional<std::uint64_t> n;
};

struct RegionsOptions {
  std::uint64_t d = 0;
  std::uint64_t e = 0;
  // Every r in [0, d] when unset.
  std::optional<std::uint64_t> r;
  Feature domain_size = 2;
};

struct SoundnessOptions {
  std::size_t trials = 200;
  std::size_t d = 6;
  std::size_t e = 2;
  std::size_t c = 4;
  // Trials alternate k = 1, 2 when unset.
  std::optional<std::size_t> k;
  Feature domain_size = 2;
  std::uint64_t seed = 0;
};

struct TightnessOptions {
  std::size_t trials = 100;
  std::size_t d = 8;
  std::size_t e = 3;
  std::size_t c = 5;
  // Trials cycle through k = 1, 2, 3 (capped at c - 1) when unset.
  std::optional<std::size_t> k;
  Feature domain_size = 2;
  std::uint64_t seed = 0;
  // Explicit instance instead of random trials: a lower bound for label l
  // and comma-separated upper bounds for all c labels (entry l ignored).
  // Values are decimals or "n/d" fractions and get rounded onto the
  // lattice.
  std::optional<std::string> p_lower;
  std::string p_upper;
  std::size_t l = 1;
};

struct SynthCommandOptions {
  std::string dataset_out;
  std::string prototypes_out;
  std::size_t examples = 200;
  std::size_t d = 64;
  std::size_t c = 5;
  Feature domain_size = 2;
  double noise_min = 0.05;
  double noise_max = 0.45;
  std::uint64_t seed = 0;
};

struct VerifyOptions {
  std::string report;
};

// Each command writes human-readable results to `out` and returns an exit
// code. Input problems throw InputError, guard trips throw GuardError.
int CmdCertify(const CertifyOptions& options, std::ostream& out,
               std::ostream& err);
int CmdRadius(const RadiusOptions& options, std::ostream& out);
int CmdRegions(const RegionsOptions& options, std::ostream& out);
int CmdSoundness(const SoundnessOptions& options, std::ostream& out);
int CmdTightness(const TightnessOptions& options, std::ostream& out);
int CmdSynth(const SynthCommandOptions& options, std::ostream& out);
int CmdVerify(const VerifyOptions& options, std::ostream& out);

// Parses argv, dispatches, and maps exceptions to exit codes:
// 0 success, 1 input error, 2 guard violation, 3 invariant failure.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace ablcert::cli

#endif  // ABLCERT_CLI_COMMANDS_H_
