#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace entrolen {

/// Exact arbitrary-precision rational. Always kept in lowest terms.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  return Rational(BigInt(num), BigInt(den));
}

/// Reduced fraction "p/q"; integers keep the "/1" so CSV columns stay uniform.
inline std::string to_fraction_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto trim = [](std::string& t) {
    const auto b = t.find_first_not_of(" \t");
    const auto e = t.find_last_not_of(" \t");
    t = (b == std::string::npos) ? std::string() : t.substr(b, e - b + 1);
  };
  trim(s);
  if (s.empty()) throw std::invalid_argument("empty rational");
  auto parse_int = [](const std::string& t) {
    if (t.empty()) throw std::invalid_argument("malformed rational");
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) throw std::invalid_argument("malformed rational '" + t + "'");
    for (; i < t.size(); ++i) {
      if (t[i] < '0' || t[i] > '9') throw std::invalid_argument("malformed rational '" + t + "'");
    }
    return BigInt(t[0] == '+' ? t.substr(1) : t);
  };
  const auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(parse_int(s));
  const BigInt den = parse_int(s.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  return Rational(parse_int(s.substr(0, slash)), den);
}

}  // namespace entrolen
