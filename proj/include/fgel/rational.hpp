// Copyright 2026 The fgel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "fgel/error.hpp"

namespace fgel {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend, boost::multiprecision::et_off>;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  return Rational(BigInt(num), BigInt(den));
}

namespace detail {

inline BigInt parse_integer(std::string_view text, std::string_view whole) {
  if (text.empty()) fail(ErrorKind::parse_error, "malformed rational '" + std::string(whole) + "'");
  bool negative = false;
  std::size_t pos = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    pos = 1;
  }
  if (pos == text.size()) fail(ErrorKind::parse_error, "malformed rational '" + std::string(whole) + "'");
  BigInt value = 0;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (c < '0' || c > '9') fail(ErrorKind::parse_error, "malformed rational '" + std::string(whole) + "'");
    value = value * 10 + (c - '0');
  }
  return negative ? BigInt(-value) : value;
}

}  // namespace detail

/// Parses "p/q", "p" or a plain decimal such as "0.05" into an exact rational.
inline Rational parse_rational(std::string_view text) {
  auto trimmed = text;
  while (!trimmed.empty() && trimmed.front() == ' ') trimmed.remove_prefix(1);
  while (!trimmed.empty() && trimmed.back() == ' ') trimmed.remove_suffix(1);
  if (auto slash = trimmed.find('/'); slash != std::string_view::npos) {
    BigInt num = detail::parse_integer(trimmed.substr(0, slash), text);
    BigInt den = detail::parse_integer(trimmed.substr(slash + 1), text);
    if (den == 0) fail(ErrorKind::parse_error, "zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }
  if (auto dot = trimmed.find('.'); dot != std::string_view::npos) {
    std::string digits(trimmed.substr(0, dot));
    std::string frac(trimmed.substr(dot + 1));
    bool negative = false;
    if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) {
      negative = digits[0] == '-';
      digits.erase(0, 1);
    }
    if (digits.empty()) digits = "0";
    if (frac.find_first_of("+-") != std::string::npos || (frac.empty() && digits == "0" && dot == 0))
      fail(ErrorKind::parse_error, "malformed rational '" + std::string(text) + "'");
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    BigInt num = detail::parse_integer(digits, text) * scale +
                 (frac.empty() ? BigInt(0) : detail::parse_integer(frac, text));
    return Rational(negative ? BigInt(-num) : num, scale);
  }
  return Rational(detail::parse_integer(trimmed, text));
}

/// Canonical "p/q" form; q >= 1 always, so the text round-trips exactly.
inline std::string to_string(const Rational& q) {
  return boost::multiprecision::numerator(q).str() + "/" + boost::multiprecision::denominator(q).str();
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline BigInt big_gcd(BigInt a, BigInt b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    BigInt t = a % b;
    a = std::move(b);
    b = std::move(t);
  }
  return a;
}

inline BigInt big_lcm(const BigInt& a, const BigInt& b) {
  if (a == 0 || b == 0) return 0;
  BigInt l = a / big_gcd(a, b) * b;
  return l < 0 ? BigInt(-l) : l;
}

/// floor(n * q) for q >= 0.
inline BigInt floor_scaled(const Rational& q, std::int64_t n) {
  BigInt num = boost::multiprecision::numerator(q) * n;
  const BigInt& den = boost::multiprecision::denominator(q);
  BigInt quotient = num / den;
  if (num < 0 && quotient * den != num) quotient -= 1;
  return quotient;
}

inline BigInt factorial(std::uint64_t m) {
  BigInt out = 1;
  for (std::uint64_t k = 2; k <= m; ++k) out *= k;
  return out;
}

/// log(m!) by direct summation of log k, accumulated in long double.
inline long double log_factorial(std::uint64_t m) {
  static std::mutex guard;
  static std::vector<long double> table{0.0L, 0.0L};
  std::lock_guard lock(guard);
  while (table.size() <= m) {
    std::size_t k = table.size();
    table.push_back(table.back() + std::log(static_cast<long double>(k)));
  }
  return table[m];
}

}  // namespace fgel
