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

#ifndef ABLCERT_BETA_BOUNDS_H_
#define ABLCERT_BETA_BOUNDS_H_

#include <cstddef>
#include <cstdint>
#include <vector>

namespace ablcert {

// Labels are 0-based indices inside the library; the CLI and file formats
// present them 1-based.
using Label = std::size_t;

// I_x(a, b), the regularized incomplete beta function.
double RegularizedIncompleteBeta(double x, double a, double b);

// The q-th quantile of Beta(a, b): the x with I_x(a, b) = q, to an
// absolute tolerance of 1e-12. q = 0 maps to 0 and q = 1 to 1.
double BetaQuantile(double q, double a, double b);

// Per-label Monte Carlo prediction frequencies.
struct SampleCounts {
  std::vector<std::uint64_t> counts;
  Label target = 0;

  std::size_t num_labels() const { return counts.size(); }
  std::uint64_t total() const;
  // Requires at least two labels, at least one sample and a target label
  // in range.
  void Validate() const;
};

// One-sided simultaneous bounds before lattice rounding. p_upper[target]
// is NaN.
struct RawBounds {
  double p_l_lower = 0.0;
  std::vector<double> p_upper;
  double alpha = 0.0;
  Label target = 0;

  std::size_t num_labels() const { return p_upper.size(); }
};

// Lower bound for the target and upper bounds for every other label from
// Beta quantiles with the confidence budget alpha split evenly over the c
// labels:
//   lower = B(alpha / c; n_l, n - n_l + 1)
//   upper_j = B(1 - alpha / c; n_j + 1, n - n_j)
// with lower = 0 when n_l = 0 and upper_j = 1 when n_j = n.
RawBounds SimuEmBounds(const SampleCounts& counts, double alpha);

}  // namespace ablcert

#endif  // ABLCERT_BETA_BOUNDS_H_
