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

#include "ablcert/rng.h"

#include "ablcert/errors.h"

namespace ablcert {

std::uint64_t Mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t DeriveSeed(std::uint64_t master, std::string_view key) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char ch : key) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  return Mix64(master ^ Mix64(hash));
}

SampleStream::SampleStream(std::uint64_t seed, std::uint64_t stream_index)
    : key_(Mix64(seed ^ Mix64(stream_index ^ 0x5851f42d4c957f2dULL))) {}

std::uint64_t SampleStream::Next() {
  ++counter_;
  return Mix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
}

std::uint64_t SampleStream::Below(std::uint64_t bound) {
  if (bound == 0) throw InputError("SampleStream::Below needs bound > 0");
  unsigned __int128 product =
      static_cast<unsigned __int128>(Next()) * bound;
  auto low = static_cast<std::uint64_t>(product);
  if (low < bound) {
    const std::uint64_t threshold = -bound % bound;
    while (low < threshold) {
      product = static_cast<unsigned __int128>(Next()) * bound;
      low = static_cast<std::uint64_t>(product);
    }
  }
  return static_cast<std::uint64_t>(product >> 64);
}

double SampleStream::Unit() {
  return static_cast<double>(Next() >> 11) * 0x1.0p-53;
}

}  // namespace ablcert
