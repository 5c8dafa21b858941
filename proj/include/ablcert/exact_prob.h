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

#ifndef ABLCERT_EXACT_PROB_H_
#define ABLCERT_EXACT_PROB_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace ablcert {

using BigInt = boost::multiprecision::cpp_int;

// C(m, e). Zero when m < e, one when e == 0.
BigInt Binomial(std::uint64_t m, std::uint64_t e);

// A probability held as an exact fraction in lowest terms. The value is
// always in [0, 1]; any operation that would leave that range throws
// InvariantError.
class ExactProb {
 public:
  ExactProb() : numerator_(0), denominator_(1) {}
  ExactProb(BigInt numerator, BigInt denominator);

  static ExactProb Zero() { return ExactProb(); }
  static ExactProb One() { return ExactProb(1, 1); }
  // count / lattice, i.e. `count` steps on the grid of multiples of
  // 1/lattice.
  static ExactProb OnLattice(const BigInt& count, const BigInt& lattice) {
    return ExactProb(count, lattice);
  }

  // The exact binary value of a double in [0, 1].
  static ExactProb FromDouble(double p);
  // Parses "n/d", or a bare integer 0 or 1.
  static ExactProb Parse(std::string_view text);

  const BigInt& numerator() const { return numerator_; }
  const BigInt& denominator() const { return denominator_; }

  bool IsOnLattice(const BigInt& lattice) const;
  // Number of 1/lattice steps this value represents. Throws InvariantError
  // when the value is not a lattice point.
  BigInt LatticeCount(const BigInt& lattice) const;

  ExactProb Complement() const;
  double ToDouble() const;
  // "numerator/denominator".
  std::string ToString() const;

  friend ExactProb operator+(const ExactProb& a, const ExactProb& b);
  friend ExactProb operator-(const ExactProb& a, const ExactProb& b);
  friend bool operator==(const ExactProb& a, const ExactProb& b) = default;
  friend std::strong_ordering operator<=>(const ExactProb& a,
                                          const ExactProb& b);

 private:
  BigInt numerator_;
  BigInt denominator_;
};

// Converts num/den (arbitrarily large) to the nearest double without
// overflowing the intermediate conversions.
double RatioToDouble(const BigInt& num, const BigInt& den);

// Cached column C(m, e) for m in [0, d], plus the ablation-space size
// C(d, e) that defines the probability lattice.
class BinomialTable {
 public:
  BinomialTable(std::uint64_t d, std::uint64_t e);

  std::uint64_t d() const { return d_; }
  std::uint64_t e() const { return e_; }
  // C(m, e) for m <= d.
  const BigInt& At(std::uint64_t m) const;
  // C(d, e).
  const BigInt& Total() const { return column_.back(); }

  // Number of e-subsets of [0, d) touching a fixed r-subset:
  // C(d, e) - C(d - r, e).
  BigInt DeltaCount(std::uint64_t r) const;
  // DeltaCount(r) / C(d, e).
  ExactProb Delta(std::uint64_t r) const;

 private:
  std::uint64_t d_;
  std::uint64_t e_;
  std::vector<BigInt> column_;
};

// 1 - C(d - r, e) / C(d, e): probability that a uniform e-subset of d
// features meets at least one of r perturbed features.
ExactProb Delta(std::uint64_t d, std::uint64_t e, std::uint64_t r);

// Smallest lattice point >= p on the grid of multiples of 1/C(d, e).
// Exact with respect to the binary value of `p`.
ExactProb QuantizeLower(double p, std::uint64_t d, std::uint64_t e);
// Largest lattice point <= p.
ExactProb QuantizeUpper(double p, std::uint64_t d, std::uint64_t e);

// Same as above for a decimal literal such as "0.61" or "6.1e-1", which is
// parsed as an exact rational before rounding.
ExactProb QuantizeLower(std::string_view decimal, std::uint64_t d,
                        std::uint64_t e);
ExactProb QuantizeUpper(std::string_view decimal, std::uint64_t d,
                        std::uint64_t e);

}  // namespace ablcert

#endif  // ABLCERT_EXACT_PROB_H_
