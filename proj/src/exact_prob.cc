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

#include "ablcert/exact_prob.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "ablcert/errors.h"

namespace ablcert {
namespace {

using boost::multiprecision::gcd;
using boost::multiprecision::msb;

struct Fraction {
  BigInt num;
  BigInt den;
};

BigInt Pow10(std::uint64_t k) {
  BigInt out = 1;
  for (std::uint64_t i = 0; i < k; ++i) out *= 10;
  return out;
}

Fraction CheckedUnit(Fraction f, std::string_view what) {
  if (f.num < 0 || f.num > f.den) {
    throw InputError(std::string(what) + " must lie in [0, 1]");
  }
  return f;
}

// Exact binary value of a finite double in [0, 1].
Fraction BinaryFraction(double p) {
  if (std::isnan(p) || p < 0.0 || p > 1.0) {
    throw InputError("probability must lie in [0, 1], got " +
                     std::to_string(p));
  }
  if (p == 0.0) return {0, 1};
  int exponent = 0;
  const double mantissa = std::frexp(p, &exponent);
  const auto bits = static_cast<std::uint64_t>(std::ldexp(mantissa, 53));
  const int shift = 53 - exponent;
  BigInt den = 1;
  den <<= shift;
  return {BigInt(bits), den};
}

Fraction FromDecimal(std::string_view text) {
  std::size_t pos = 0;
  BigInt digits = 0;
  std::int64_t scale = 0;
  bool seen_digit = false;
  bool seen_point = false;
  for (; pos < text.size(); ++pos) {
    const char ch = text[pos];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      digits = digits * 10 + (ch - '0');
      seen_digit = true;
      if (seen_point) ++scale;
    } else if (ch == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) {
    throw InputError("malformed decimal probability '" + std::string(text) +
                     "'");
  }
  if (pos < text.size()) {
    if (text[pos] != 'e' && text[pos] != 'E') {
      throw InputError("malformed decimal probability '" +
                       std::string(text) + "'");
    }
    ++pos;
    bool negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      negative = text[pos] == '-';
      ++pos;
    }
    if (pos == text.size()) {
      throw InputError("malformed exponent in '" + std::string(text) + "'");
    }
    std::int64_t exponent = 0;
    for (; pos < text.size(); ++pos) {
      if (!std::isdigit(static_cast<unsigned char>(text[pos])) ||
          exponent > 100000) {
        throw InputError("malformed exponent in '" + std::string(text) +
                         "'");
      }
      exponent = exponent * 10 + (text[pos] - '0');
    }
    scale += negative ? exponent : -exponent;
  }
  Fraction f{digits, 1};
  if (scale >= 0) {
    f.den = Pow10(static_cast<std::uint64_t>(scale));
  } else {
    f.num *= Pow10(static_cast<std::uint64_t>(-scale));
  }
  return CheckedUnit(std::move(f), "probability");
}

BigInt CeilDiv(const BigInt& num, const BigInt& den) {
  BigInt q = num / den;
  if (q * den != num) q += 1;
  return q;
}

ExactProb RoundUp(const Fraction& p, std::uint64_t d, std::uint64_t e) {
  const BigInt lattice = Binomial(d, e);
  return ExactProb::OnLattice(CeilDiv(p.num * lattice, p.den), lattice);
}

ExactProb RoundDown(const Fraction& p, std::uint64_t d, std::uint64_t e) {
  const BigInt lattice = Binomial(d, e);
  return ExactProb::OnLattice((p.num * lattice) / p.den, lattice);
}

void CheckLatticeParams(std::uint64_t d, std::uint64_t e) {
  if (e == 0 || e > d) {
    throw InputError("need 1 <= e <= d (d=" + std::to_string(d) +
                     ", e=" + std::to_string(e) + ")");
  }
}

}  // namespace

BigInt Binomial(std::uint64_t m, std::uint64_t e) {
  if (e > m) return 0;
  const std::uint64_t k = std::min(e, m - e);
  BigInt out = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    out *= (m - k + i);
    out /= i;
  }
  return out;
}

ExactProb::ExactProb(BigInt numerator, BigInt denominator)
    : numerator_(std::move(numerator)), denominator_(std::move(denominator)) {
  if (denominator_ <= 0) {
    throw InvariantError("ExactProb denominator must be positive");
  }
  if (numerator_ < 0 || numerator_ > denominator_) {
    throw InvariantError("ExactProb value outside [0, 1]: " +
                         numerator_.str() + "/" + denominator_.str());
  }
  if (numerator_ == 0) {
    denominator_ = 1;
    return;
  }
  const BigInt g = gcd(numerator_, denominator_);
  if (g != 1) {
    numerator_ /= g;
    denominator_ /= g;
  }
}

ExactProb ExactProb::FromDouble(double p) {
  Fraction f = BinaryFraction(p);
  return ExactProb(std::move(f.num), std::move(f.den));
}

ExactProb ExactProb::Parse(std::string_view text) {
  const auto slash = text.find('/');
  auto parse_int = [&](std::string_view part) {
    if (part.empty() ||
        !std::all_of(part.begin(), part.end(), [](char ch) {
          return std::isdigit(static_cast<unsigned char>(ch));
        })) {
      throw InputError("malformed fraction '" + std::string(text) + "'");
    }
    return BigInt(std::string(part));
  };
  if (slash == std::string_view::npos) {
    const BigInt value = parse_int(text);
    if (value > 1) {
      throw InputError("probability must lie in [0, 1]: '" +
                       std::string(text) + "'");
    }
    return ExactProb(value, 1);
  }
  BigInt num = parse_int(text.substr(0, slash));
  BigInt den = parse_int(text.substr(slash + 1));
  if (den == 0 || num > den) {
    throw InputError("probability must lie in [0, 1]: '" +
                     std::string(text) + "'");
  }
  return ExactProb(std::move(num), std::move(den));
}

bool ExactProb::IsOnLattice(const BigInt& lattice) const {
  return lattice > 0 && lattice % denominator_ == 0;
}

BigInt ExactProb::LatticeCount(const BigInt& lattice) const {
  if (!IsOnLattice(lattice)) {
    throw InvariantError(ToString() + " is not a multiple of 1/" +
                         lattice.str());
  }
  return numerator_ * (lattice / denominator_);
}

ExactProb ExactProb::Complement() const {
  return ExactProb(denominator_ - numerator_, denominator_);
}

double ExactProb::ToDouble() const {
  return RatioToDouble(numerator_, denominator_);
}

std::string ExactProb::ToString() const {
  return numerator_.str() + "/" + denominator_.str();
}

ExactProb operator+(const ExactProb& a, const ExactProb& b) {
  return ExactProb(a.numerator_ * b.denominator_ + b.numerator_ * a.denominator_,
                   a.denominator_ * b.denominator_);
}

ExactProb operator-(const ExactProb& a, const ExactProb& b) {
  return ExactProb(a.numerator_ * b.denominator_ - b.numerator_ * a.denominator_,
                   a.denominator_ * b.denominator_);
}

std::strong_ordering operator<=>(const ExactProb& a, const ExactProb& b) {
  const BigInt lhs = a.numerator_ * b.denominator_;
  const BigInt rhs = b.numerator_ * a.denominator_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

double RatioToDouble(const BigInt& num, const BigInt& den) {
  if (num == 0) return 0.0;
  const bool negative = num < 0;
  const BigInt abs_num = negative ? BigInt(-num) : num;
  const long num_shift = std::max<long>(0, long(msb(abs_num)) - 62);
  const long den_shift = std::max<long>(0, long(msb(den)) - 62);
  const double top = static_cast<double>(BigInt(abs_num >> num_shift));
  const double bottom = static_cast<double>(BigInt(den >> den_shift));
  const double value =
      std::ldexp(top / bottom, static_cast<int>(num_shift - den_shift));
  return negative ? -value : value;
}

BinomialTable::BinomialTable(std::uint64_t d, std::uint64_t e)
    : d_(d), e_(e) {
  CheckLatticeParams(d, e);
  column_.reserve(d + 1);
  for (std::uint64_t m = 0; m <= d; ++m) {
    if (m < e) {
      column_.emplace_back(0);
    } else if (m == e) {
      column_.emplace_back(1);
    } else {
      // C(m, e) = C(m - 1, e) * m / (m - e)
      column_.push_back(column_.back() * m / (m - e));
    }
  }
}

const BigInt& BinomialTable::At(std::uint64_t m) const {
  if (m > d_) {
    throw InputError("binomial table index " + std::to_string(m) +
                     " exceeds d=" + std::to_string(d_));
  }
  return column_[m];
}

BigInt BinomialTable::DeltaCount(std::uint64_t r) const {
  if (r > d_) {
    throw InputError("perturbation size r=" + std::to_string(r) +
                     " exceeds d=" + std::to_string(d_));
  }
  return Total() - column_[d_ - r];
}

ExactProb BinomialTable::Delta(std::uint64_t r) const {
  return ExactProb::OnLattice(DeltaCount(r), Total());
}

ExactProb Delta(std::uint64_t d, std::uint64_t e, std::uint64_t r) {
  return BinomialTable(d, e).Delta(r);
}

ExactProb QuantizeLower(double p, std::uint64_t d, std::uint64_t e) {
  CheckLatticeParams(d, e);
  return RoundUp(BinaryFraction(p), d, e);
}

ExactProb QuantizeUpper(double p, std::uint64_t d, std::uint64_t e) {
  CheckLatticeParams(d, e);
  return RoundDown(BinaryFraction(p), d, e);
}

ExactProb QuantizeLower(std::string_view decimal, std::uint64_t d,
                        std::uint64_t e) {
  CheckLatticeParams(d, e);
  return RoundUp(FromDecimal(decimal), d, e);
}

ExactProb QuantizeUpper(std::string_view decimal, std::uint64_t d,
                        std::uint64_t e) {
  CheckLatticeParams(d, e);
  return RoundDown(FromDecimal(decimal), d, e);
}

}  // namespace ablcert
