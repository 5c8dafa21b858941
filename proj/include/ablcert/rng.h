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

#ifndef ABLCERT_RNG_H_
#define ABLCERT_RNG_H_

#include <cstdint>
#include <limits>
#include <string_view>

namespace ablcert {

// SplitMix64 finalizer.
std::uint64_t Mix64(std::uint64_t x);

// Derives a per-example seed from the master seed and a stable key
// (FNV-1a of the key, then mixed).
std::uint64_t DeriveSeed(std::uint64_t master, std::string_view key);

// Counter-based stream: the i-th draw of stream (seed, index) is a pure
// function of (seed, index, i), so draws never depend on evaluation order.
// Satisfies UniformRandomBitGenerator.
class SampleStream {
 public:
  using result_type = std::uint64_t;

  SampleStream(std::uint64_t seed, std::uint64_t stream_index);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() { return Next(); }

  std::uint64_t Next();
  // Uniform integer in [0, bound). Lemire's multiply-shift with rejection.
  std::uint64_t Below(std::uint64_t bound);
  // Uniform double in [0, 1) with 53 random bits.
  double Unit();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace ablcert

#endif  // ABLCERT_RNG_H_
