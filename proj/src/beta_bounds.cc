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

#include "ablcert/beta_bounds.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ablcert/errors.h"

namespace ablcert {
namespace {

constexpr double kLogSqrtTwoPi = 0.91893853320467274178;

// lgamma(x) - [(x - 1/2) ln x - x + ln sqrt(2 pi)] for x >= 10.
double StirlingCorrection(double x) {
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  return inv * (1.0 / 12.0 -
                inv2 * (1.0 / 360.0 -
                        inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0))));
}

// log(x^a (1 - x)^b / B(a, b)). For large shapes the Stirling form keeps
// the O(a ln a) terms from cancelling.
double LogPrefactor(double x, double a, double b) {
  if (a >= 10.0 && b >= 10.0) {
    const double t = x * (a + b) - a;
    return a * std::log1p(t / a) + b * std::log1p(-t / b) +
           0.5 * std::log(a * b / (a + b)) - kLogSqrtTwoPi -
           (StirlingCorrection(a) + StirlingCorrection(b) -
            StirlingCorrection(a + b));
  }
  double log_beta;
  if (a == 1.0) {
    log_beta = -std::log(b);
  } else if (b == 1.0) {
    log_beta = -std::log(a);
  } else {
    log_beta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  }
  return a * std::log(x) + b * std::log1p(-x) - log_beta;
}

// Continued fraction for I_x(a, b), modified Lentz evaluation.
double BetaContinuedFraction(double x, double a, double b) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;
  constexpr int kMaxIterations = 200000;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw InvariantError("incomplete beta continued fraction did not converge");
}

void CheckShapes(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw InputError("beta shape parameters must be positive and finite (" +
                     std::to_string(a) + ", " + std::to_string(b) + ")");
  }
}

// Solves I_x(a, b) = q for q in (0, 1/2]. Newton steps on the CDF, kept
// inside a shrinking bisection bracket.
double LowerQuantile(double q, double a, double b) {
  double lo = 0.0;
  double hi = 1.0;
  double x = a / (a + b);
  for (int iter = 0; iter < 400; ++iter) {
    const double f = RegularizedIncompleteBeta(x, a, b) - q;
    if (f == 0.0) return x;
    if (f < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    if (hi - lo <= 1e-17 || hi <= std::nextafter(lo, 2.0)) break;
    const double log_density = LogPrefactor(x, a, b) - std::log(x) -
                               std::log1p(-x);
    const double density = std::exp(log_density);
    double next = (lo + hi) / 2.0;
    if (density > 0.0 && std::isfinite(density)) {
      const double newton = x - f / density;
      if (newton > lo && newton < hi) next = newton;
    }
    if (std::fabs(next - x) <= 1e-16 * std::max(1.0, x)) {
      x = next;
      break;
    }
    x = next;
  }
  return x;
}

}  // namespace

double RegularizedIncompleteBeta(double x, double a, double b) {
  CheckShapes(a, b);
  if (std::isnan(x)) throw InputError("incomplete beta argument is NaN");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return std::exp(LogPrefactor(x, a, b)) * BetaContinuedFraction(x, a, b) /
           a;
  }
  return 1.0 - std::exp(LogPrefactor(1.0 - x, b, a)) *
                   BetaContinuedFraction(1.0 - x, b, a) / b;
}

double BetaQuantile(double q, double a, double b) {
  CheckShapes(a, b);
  if (std::isnan(q) || q < 0.0 || q > 1.0) {
    throw InputError("beta quantile level must lie in [0, 1]");
  }
  if (q == 0.0) return 0.0;
  if (q == 1.0) return 1.0;
  // 1 - q is exact for q in [1/2, 1].
  if (q > 0.5) return 1.0 - LowerQuantile(1.0 - q, b, a);
  return LowerQuantile(q, a, b);
}

std::uint64_t SampleCounts::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

void SampleCounts::Validate() const {
  if (counts.size() < 2) {
    throw InputError("need at least two labels, got " +
                     std::to_string(counts.size()));
  }
  if (target >= counts.size()) {
    throw InputError("target label " + std::to_string(target + 1) +
                     " outside [1, " + std::to_string(counts.size()) + "]");
  }
  if (total() == 0) throw InputError("sample counts are all zero");
}

RawBounds SimuEmBounds(const SampleCounts& counts, double alpha) {
  counts.Validate();
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InputError("alpha must lie in (0, 1)");
  }
  const double n = static_cast<double>(counts.total());
  const double c = static_cast<double>(counts.num_labels());
  const double tail = alpha / c;

  RawBounds out;
  out.alpha = alpha;
  out.target = counts.target;
  out.p_upper.assign(counts.num_labels(),
                     std::numeric_limits<double>::quiet_NaN());

  const double n_l = static_cast<double>(counts.counts[counts.target]);
  out.p_l_lower = n_l == 0.0 ? 0.0 : BetaQuantile(tail, n_l, n - n_l + 1.0);

  for (Label j = 0; j < counts.num_labels(); ++j) {
    if (j == counts.target) continue;
    const double n_j = static_cast<double>(counts.counts[j]);
    // B(1 - t; n_j + 1, n - n_j) = 1 - B(t; n - n_j, n_j + 1)
    out.p_upper[j] =
        n_j == n ? 1.0 : 1.0 - BetaQuantile(tail, n - n_j, n_j + 1.0);
  }
  return out;
}

}  // namespace ablcert
