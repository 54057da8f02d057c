#pragma once

// Coefficient fields. Each field is a small runtime object (it knows p and,
// for GF(p^2), its modulus) with a value_type for elements:
//
//   PrimeField       GF(p), elements 0..p-1
//   QuadraticField   GF(p^2) = GF(p)[w]/(w^2 + a w + b), elements a0 + a1 w,
//                    Frobenius x -> x^p is the nontrivial automorphism
//   RationalField    Q with arbitrary-precision rationals
//
// frobenius(x, k) applies the k-th power of Frobenius (identity except on
// GF(p^2), where only k mod 2 matters).

#include <entrolen/rational.hpp>

#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace entrolen {

template <class F>
concept CoefficientField = requires(const F& f, const typename F::value_type& a, int k, std::string_view s) {
  { f.zero() } -> std::same_as<typename F::value_type>;
  { f.one() } -> std::same_as<typename F::value_type>;
  { f.add(a, a) } -> std::same_as<typename F::value_type>;
  { f.sub(a, a) } -> std::same_as<typename F::value_type>;
  { f.neg(a) } -> std::same_as<typename F::value_type>;
  { f.mul(a, a) } -> std::same_as<typename F::value_type>;
  { f.inv(a) } -> std::same_as<typename F::value_type>;
  { f.is_zero(a) } -> std::same_as<bool>;
  { f.frobenius(a, k) } -> std::same_as<typename F::value_type>;
  { f.format(a) } -> std::same_as<std::string>;
  { f.parse(s) } -> std::same_as<typename F::value_type>;
  { f.name() } -> std::same_as<std::string>;
  { f.sample_elements(k) } -> std::same_as<std::vector<typename F::value_type>>;
  { f == f } -> std::same_as<bool>;
  { a == a } -> std::same_as<bool>;
};

class FieldMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

inline std::int64_t parse_int(std::string_view text) {
  const std::string s = trim(text);
  if (s.empty()) throw std::invalid_argument("expected integer, got empty string");
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) throw std::invalid_argument("malformed integer '" + s + "'");
  for (std::size_t j = i; j < s.size(); ++j) {
    if (s[j] < '0' || s[j] > '9') throw std::invalid_argument("malformed integer '" + s + "'");
  }
  return std::stoll(s);
}

}  // namespace detail

class PrimeField {
 public:
  using value_type = std::uint32_t;

  explicit PrimeField(std::uint32_t p) : p_(p) {
    if (!detail::is_prime(p) || p > 46337u) {
      throw std::invalid_argument("GF(p) needs a prime p below 46337, got " + std::to_string(p));
    }
  }

  std::uint32_t characteristic() const { return p_; }
  std::string name() const { return "gf" + std::to_string(p_); }
  friend bool operator==(const PrimeField&, const PrimeField&) = default;

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(std::int64_t v) const {
    const std::int64_t p = p_;
    return static_cast<value_type>(((v % p) + p) % p);
  }
  value_type add(value_type a, value_type b) const { return (a + b) % p_; }
  value_type sub(value_type a, value_type b) const { return (a + p_ - b) % p_; }
  value_type neg(value_type a) const { return a == 0 ? 0 : p_ - a; }
  value_type mul(value_type a, value_type b) const {
    return static_cast<value_type>((static_cast<std::uint64_t>(a) * b) % p_);
  }
  value_type pow(value_type a, std::uint64_t e) const {
    value_type r = 1;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  value_type inv(value_type a) const {
    if (a == 0) throw std::domain_error("inverse of zero");
    return pow(a, p_ - 2);
  }
  bool is_zero(value_type a) const { return a == 0; }
  value_type frobenius(value_type a, int) const { return a; }

  std::string format(value_type a) const { return std::to_string(a); }
  value_type parse(std::string_view s) const { return from_int(detail::parse_int(s)); }

  /// All elements when the field is small, otherwise 0..count-1.
  std::vector<value_type> sample_elements(int count) const {
    std::vector<value_type> out;
    const std::uint32_t n = std::min<std::uint32_t>(p_, static_cast<std::uint32_t>(count));
    for (std::uint32_t i = 0; i < n; ++i) out.push_back(i);
    return out;
  }

 private:
  std::uint32_t p_;
};

struct QuadraticElement {
  std::uint32_t c0 = 0;  // constant term
  std::uint32_t c1 = 0;  // coefficient of w
  friend bool operator==(const QuadraticElement&, const QuadraticElement&) = default;
};

class QuadraticField {
 public:
  using value_type = QuadraticElement;

  /// Modulus: lexicographically smallest irreducible monic w^2 + a w + b.
  explicit QuadraticField(std::uint32_t p) : base_(p) {
    for (std::uint32_t a = 0; a < p && !found_; ++a) {
      for (std::uint32_t b = 0; b < p && !found_; ++b) {
        bool has_root = false;
        for (std::uint32_t x = 0; x < p; ++x) {
          const auto v = base_.add(base_.add(base_.mul(x, x), base_.mul(a, x)), b);
          if (v == 0) {
            has_root = true;
            break;
          }
        }
        if (!has_root) {
          a_ = a;
          b_ = b;
          found_ = true;
        }
      }
    }
  }

  std::uint32_t characteristic() const { return base_.characteristic(); }
  std::uint32_t modulus_a() const { return a_; }
  std::uint32_t modulus_b() const { return b_; }
  std::string name() const {
    const std::uint64_t p = base_.characteristic();
    return "gf" + std::to_string(p * p);
  }
  friend bool operator==(const QuadraticField& x, const QuadraticField& y) {
    return x.characteristic() == y.characteristic();
  }

  value_type zero() const { return {0, 0}; }
  value_type one() const { return {1, 0}; }
  /// The class of w, a root of the modulus (omega for GF(4)).
  value_type generator() const { return {0, 1}; }
  value_type from_int(std::int64_t v) const { return {base_.from_int(v), 0}; }

  value_type add(value_type x, value_type y) const { return {base_.add(x.c0, y.c0), base_.add(x.c1, y.c1)}; }
  value_type sub(value_type x, value_type y) const { return {base_.sub(x.c0, y.c0), base_.sub(x.c1, y.c1)}; }
  value_type neg(value_type x) const { return {base_.neg(x.c0), base_.neg(x.c1)}; }
  value_type mul(value_type x, value_type y) const {
    // (x0 + x1 w)(y0 + y1 w) with w^2 = -a w - b
    const auto k = base_.mul(x.c1, y.c1);
    const auto c0 = base_.sub(base_.mul(x.c0, y.c0), base_.mul(k, b_));
    const auto c1 =
        base_.sub(base_.add(base_.mul(x.c0, y.c1), base_.mul(x.c1, y.c0)), base_.mul(k, a_));
    return {c0, c1};
  }
  value_type pow(value_type x, std::uint64_t e) const {
    value_type r = one();
    while (e) {
      if (e & 1) r = mul(r, x);
      x = mul(x, x);
      e >>= 1;
    }
    return r;
  }
  value_type inv(value_type x) const {
    if (is_zero(x)) throw std::domain_error("inverse of zero");
    const std::uint64_t p = characteristic();
    return pow(x, p * p - 2);
  }
  bool is_zero(value_type x) const { return x.c0 == 0 && x.c1 == 0; }
  value_type frobenius(value_type x, int k) const {
    return (k % 2 == 0) ? x : pow(x, characteristic());
  }

  /// "a+b*w".
  std::string format(value_type x) const { return std::to_string(x.c0) + "+" + std::to_string(x.c1) + "*w"; }

  /// Accepts "a+b*w", "a", "w", "b*w", "-w" and similar.
  value_type parse(std::string_view text) const {
    std::string s;
    for (char ch : text) {
      if (ch != ' ' && ch != '\t') s += ch;
    }
    if (s.empty()) throw std::invalid_argument("empty field element");
    value_type acc = zero();
    std::size_t i = 0;
    while (i < s.size()) {
      std::size_t j = i + 1;
      while (j < s.size() && s[j] != '+' && s[j] != '-') ++j;
      std::string term = s.substr(i, j - i);
      i = j;
      bool negative = false;
      if (!term.empty() && (term[0] == '+' || term[0] == '-')) {
        negative = term[0] == '-';
        term = term.substr(1);
      }
      if (term.empty()) throw std::invalid_argument("malformed GF(p^2) element '" + std::string(text) + "'");
      value_type t;
      if (term.back() == 'w') {
        std::string coeff = term.substr(0, term.size() - 1);
        if (!coeff.empty() && coeff.back() == '*') coeff.pop_back();
        t = {0, coeff.empty() ? 1u : base_.parse(coeff)};
      } else {
        t = {base_.parse(term), 0};
      }
      acc = negative ? sub(acc, t) : add(acc, t);
    }
    return acc;
  }

  std::vector<value_type> sample_elements(int count) const {
    std::vector<value_type> out;
    const std::uint32_t p = characteristic();
    for (std::uint32_t c1 = 0; c1 < p; ++c1) {
      for (std::uint32_t c0 = 0; c0 < p; ++c0) {
        if (static_cast<int>(out.size()) >= count) return out;
        out.push_back({c0, c1});
      }
    }
    return out;
  }

 private:
  PrimeField base_;
  std::uint32_t a_ = 0;
  std::uint32_t b_ = 0;
  bool found_ = false;
};

class RationalField {
 public:
  using value_type = Rational;

  std::string name() const { return "Q"; }
  friend bool operator==(const RationalField&, const RationalField&) { return true; }

  value_type zero() const { return Rational(0); }
  value_type one() const { return Rational(1); }
  value_type from_int(std::int64_t v) const { return Rational(v); }
  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type neg(const value_type& a) const { return -a; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  value_type inv(const value_type& a) const {
    if (a == 0) throw std::domain_error("inverse of zero");
    return 1 / a;
  }
  bool is_zero(const value_type& a) const { return a == 0; }
  value_type frobenius(const value_type& a, int) const { return a; }
  std::string format(const value_type& a) const { return to_fraction_string(a); }
  value_type parse(std::string_view s) const { return parse_rational(s); }

  /// 0, 1, -1, 2, -2, 1/2, -1/2, 3, ...
  std::vector<value_type> sample_elements(int count) const {
    std::vector<value_type> out{Rational(0)};
    for (int k = 1; static_cast<int>(out.size()) < count; ++k) {
      out.push_back(Rational(k));
      out.push_back(Rational(-k));
      out.push_back(Rational(1, k + 1));
      out.push_back(Rational(-1, k + 1));
    }
    out.resize(static_cast<std::size_t>(count));
    return out;
  }
};

static_assert(CoefficientField<PrimeField>);
static_assert(CoefficientField<QuadraticField>);
static_assert(CoefficientField<RationalField>);

using AnyField = std::variant<PrimeField, QuadraticField, RationalField>;

/// "gf<q>" for q = p or p^2 (e.g. gf2, gf3, gf4, gf9), or "Q".
inline AnyField parse_field(std::string_view name) {
  if (name == "Q" || name == "rationals") return RationalField{};
  if (name.size() > 2 && (name.substr(0, 2) == "gf" || name.substr(0, 2) == "GF")) {
    const std::string digits(name.substr(2));
    for (char c : digits) {
      if (c < '0' || c > '9') throw std::invalid_argument("unknown field '" + std::string(name) + "'");
    }
    const std::uint64_t q = std::stoull(digits);
    if (detail::is_prime(q)) return PrimeField(static_cast<std::uint32_t>(q));
    for (std::uint64_t p = 2; p * p <= q; ++p) {
      if (p * p == q && detail::is_prime(p)) return QuadraticField(static_cast<std::uint32_t>(p));
    }
    throw std::invalid_argument("field order must be p or p^2: '" + std::string(name) + "'");
  }
  throw std::invalid_argument("unknown field '" + std::string(name) + "'");
}

}  // namespace entrolen
