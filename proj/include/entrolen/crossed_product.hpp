#pragma once

// Crossed products K*G: finite formal sums sum_g r_g g with
//
//     (r g)(s h) = r s^{sigma(g)} rho(g, h) gh
//
// where sigma(g) is a power of Frobenius (identity unless K = GF(p^2)) and
// rho: G x G -> K^x is a normalized 2-cocycle.

#include <entrolen/fields.hpp>
#include <entrolen/groups.hpp>
#include <entrolen/linalg.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <type_traits>
#include <vector>

namespace entrolen {

template <CoefficientField F>
class CocycleData {
 public:
  using value_type = typename F::value_type;
  using SigmaMap = std::function<int(const GroupElement&)>;
  using RhoMap = std::function<value_type(const GroupElement&, const GroupElement&)>;

  CocycleData(F field, GroupSpec group, SigmaMap sigma, RhoMap rho, std::string sigma_name, std::string rho_name)
      : field_(std::move(field)),
        group_(group),
        sigma_(std::move(sigma)),
        rho_(std::move(rho)),
        sigma_name_(std::move(sigma_name)),
        rho_name_(std::move(rho_name)) {}

  /// Group ring K[G].
  static CocycleData trivial(const F& field, const GroupSpec& G) {
    return CocycleData(
        field, G, [](const GroupElement&) { return 0; },
        [field](const GroupElement&, const GroupElement&) { return field.one(); }, "trivial", "trivial");
  }

  /// sigma(g) = Frobenius^{g_0}: the first coordinate is a homomorphism
  /// onto Z for every shipped group, and Frobenius has order 2.
  static CocycleData frobenius(const F& field, const GroupSpec& G) {
    if constexpr (!std::is_same_v<F, QuadraticField>) {
      throw std::invalid_argument("Frobenius twisting needs a GF(p^2) coefficient field, got " + field.name());
    }
    return CocycleData(
        field, G, [](const GroupElement& g) { return static_cast<int>(((g[0] % 2) + 2) % 2); },
        [field](const GroupElement&, const GroupElement&) { return field.one(); }, "frobenius", "trivial");
  }

  /// rho(g, h) = q^{g_1 h_0}, the pullback of a bilinear form through
  /// (g_0, g_1); needs at least two coordinates and q nonzero.
  CocycleData with_bilinear_rho(const value_type& q) const {
    if (group_.arity() < 2) throw std::invalid_argument("bilinear rho needs a group with two coordinates");
    if (field_.is_zero(q)) throw std::invalid_argument("bilinear rho needs a nonzero base");
    const F field = field_;
    auto power = [field](value_type base, std::int64_t k) {
      if (k < 0) {
        base = field.inv(base);
        k = -k;
      }
      value_type r = field.one();
      for (std::int64_t i = 0; i < k; ++i) r = field.mul(r, base);
      return r;
    };
    return CocycleData(
        field_, group_, sigma_, [q, power](const GroupElement& g, const GroupElement& h) { return power(q, g[1] * h[0]); },
        sigma_name_, "bilinear:" + field_.format(q));
  }

  /// Copy with rho(e, target) overwritten.
  CocycleData with_mutated_rho(const GroupElement& target, const value_type& value) const {
    const GroupElement e = group_.identity();
    RhoMap base = rho_;
    return CocycleData(
        field_, group_, sigma_,
        [base, e, target, value](const GroupElement& g, const GroupElement& h) {
          return (g == e && h == target) ? value : base(g, h);
        },
        sigma_name_, rho_name_ + "+mutated");
  }

  const F& field() const { return field_; }
  const GroupSpec& group() const { return group_; }
  int sigma(const GroupElement& g) const { return sigma_(g); }
  value_type rho(const GroupElement& g, const GroupElement& h) const { return rho_(g, h); }
  value_type twist(const GroupElement& g, const value_type& a) const { return field_.frobenius(a, sigma_(g)); }
  const std::string& sigma_name() const { return sigma_name_; }
  const std::string& rho_name() const { return rho_name_; }
  bool is_trivial() const { return sigma_name_ == "trivial" && rho_name_ == "trivial"; }

 private:
  F field_;
  GroupSpec group_;
  SigmaMap sigma_;
  RhoMap rho_;
  std::string sigma_name_;
  std::string rho_name_;
};

/// Finite formal sum; zero coefficients are never stored.
template <CoefficientField F>
class CrossedElement {
 public:
  using value_type = typename F::value_type;

  CrossedElement() = default;

  static CrossedElement from_terms(const F& field, const std::vector<std::pair<GroupElement, value_type>>& terms) {
    CrossedElement x;
    for (const auto& [g, r] : terms) x.accumulate(field, g, r);
    return x;
  }

  static CrossedElement monomial(const F& field, const GroupElement& g, const value_type& r) {
    return from_terms(field, {{g, r}});
  }

  void accumulate(const F& field, const GroupElement& g, const value_type& r) {
    auto it = terms_.find(g);
    if (it == terms_.end()) {
      if (!field.is_zero(r)) terms_.emplace(g, r);
      return;
    }
    it->second = field.add(it->second, r);
    if (field.is_zero(it->second)) terms_.erase(it);
  }

  const std::map<GroupElement, value_type>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  value_type coefficient(const F& field, const GroupElement& g) const {
    auto it = terms_.find(g);
    return it == terms_.end() ? field.zero() : it->second;
  }

  std::vector<GroupElement> support() const {
    std::vector<GroupElement> out;
    for (const auto& [g, r] : terms_) out.push_back(g);
    return out;
  }

  friend bool operator==(const CrossedElement& a, const CrossedElement& b) { return a.terms_ == b.terms_; }

 private:
  std::map<GroupElement, value_type> terms_;
};

template <CoefficientField F>
CrossedElement<F> add(const F& field, const CrossedElement<F>& x, const CrossedElement<F>& y) {
  CrossedElement<F> out = x;
  for (const auto& [g, r] : y.terms()) out.accumulate(field, g, r);
  return out;
}

template <CoefficientField F>
CrossedElement<F> subtract(const F& field, const CrossedElement<F>& x, const CrossedElement<F>& y) {
  CrossedElement<F> out = x;
  for (const auto& [g, r] : y.terms()) out.accumulate(field, g, field.neg(r));
  return out;
}

template <CoefficientField F>
CrossedElement<F> multiply(const CrossedElement<F>& x, const CrossedElement<F>& y, const CocycleData<F>& c) {
  const F& field = c.field();
  const GroupSpec& G = c.group();
  CrossedElement<F> out;
  for (const auto& [g, r] : x.terms()) {
    for (const auto& [h, s] : y.terms()) {
      out.accumulate(field, G.mul(g, h), field.mul(field.mul(r, c.twist(g, s)), c.rho(g, h)));
    }
  }
  return out;
}

template <CoefficientField F>
CrossedElement<F> unit_element(const CocycleData<F>& c) {
  return CrossedElement<F>::monomial(c.field(), c.group().identity(), c.field().one());
}

/// "1*(0) + 2*(1,1)"; the zero element is "0".
template <CoefficientField F>
std::string format_crossed(const F& field, const CrossedElement<F>& x) {
  if (x.is_zero()) return "0";
  std::string out;
  for (const auto& [g, r] : x.terms()) {
    if (!out.empty()) out += " + ";
    out += field.format(r) + "*" + g.to_string();
  }
  return out;
}

/// Inverse of format_crossed; duplicate group elements are summed.
template <CoefficientField F>
CrossedElement<F> parse_crossed(const F& field, const GroupSpec& G, std::string_view text) {
  const std::string s = detail::trim(text);
  if (s == "0") return {};
  CrossedElement<F> x;
  std::size_t i = 0;
  bool any = false;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    const auto star = s.find("*(", i);
    if (star == std::string::npos) {
      throw std::invalid_argument("expected 'coeff*(g)' at offset " + std::to_string(i) + " in '" + s + "'");
    }
    const auto close = s.find(')', star);
    if (close == std::string::npos) throw std::invalid_argument("unterminated group element in '" + s + "'");
    const auto coeff = field.parse(std::string_view(s).substr(i, star - i));
    const auto g = G.parse_element(std::string_view(s).substr(star + 1, close - star));
    x.accumulate(field, g, coeff);
    any = true;
    i = close + 1;
    while (i < s.size() && s[i] == ' ') ++i;
    if (i < s.size()) {
      if (s[i] != '+') throw std::invalid_argument("expected ' + ' between terms in '" + s + "'");
      ++i;
    }
  }
  if (!any) throw std::invalid_argument("empty crossed-product element");
  return x;
}

/// Free-module vectors in (K*G)^r are SparseVectors keyed by (h, coordinate).
template <CoefficientField F>
using FreeVector = SparseVector<F>;

/// g acting on the left: coefficient a at (h, j) becomes a^{sigma(g)} rho(g, h) at (gh, j).
template <CoefficientField F>
FreeVector<F> act(const GroupElement& g, const FreeVector<F>& v, const CocycleData<F>& c) {
  const F& field = c.field();
  const GroupSpec& G = c.group();
  std::vector<typename FreeVector<F>::Entry> entries;
  entries.reserve(v.support_size());
  for (const auto& [label, a] : v.entries()) {
    entries.emplace_back(ColumnLabel{G.mul(g, label.g), label.coord}, field.mul(c.twist(g, a), c.rho(g, label.g)));
  }
  return FreeVector<F>::from_entries(field, std::move(entries));
}

/// Left multiplication x * v on the free module.
template <CoefficientField F>
FreeVector<F> left_multiply(const CrossedElement<F>& x, const FreeVector<F>& v, const CocycleData<F>& c) {
  const F& field = c.field();
  std::vector<typename FreeVector<F>::Entry> entries;
  for (const auto& [g, r] : x.terms()) {
    const FreeVector<F> moved = act(g, v, c);
    for (const auto& e : moved.entries()) entries.emplace_back(e.first, field.mul(r, e.second));
  }
  return FreeVector<F>::from_entries(field, std::move(entries));
}

/// x placed in coordinate `coord` of the free module.
template <CoefficientField F>
FreeVector<F> embed(const F& field, const CrossedElement<F>& x, std::uint32_t coord) {
  std::vector<typename FreeVector<F>::Entry> entries;
  for (const auto& [g, r] : x.terms()) entries.emplace_back(ColumnLabel{g, coord}, r);
  return FreeVector<F>::from_entries(field, std::move(entries));
}

struct CocycleReport {
  bool pass = true;
  std::string failed_condition;           // "Cross.1", "Cross.2", "Cross.3", "associativity"
  std::vector<GroupElement> witness;      // group elements of the first violation
  std::string witness_scalar;             // field element involved, if any
  std::size_t sampled_radius = 2;
  std::size_t triples_checked = 0;
  std::size_t associativity_checked = 0;
};

namespace detail {

template <CoefficientField F>
std::vector<CrossedElement<F>> sample_crossed_elements(const CocycleData<F>& c, const std::vector<GroupElement>& support,
                                                       std::size_t count, std::uint64_t seed) {
  const F& field = c.field();
  const auto scalars = field.sample_elements(16);
  std::mt19937_64 rng(seed);
  std::vector<CrossedElement<F>> out;
  while (out.size() < count) {
    CrossedElement<F> x;
    const std::size_t nterms = 1 + rng() % 3;
    for (std::size_t t = 0; t < nterms; ++t) {
      x.accumulate(field, support[rng() % support.size()], scalars[rng() % scalars.size()]);
    }
    if (!x.is_zero()) out.push_back(std::move(x));
  }
  return out;
}

}  // namespace detail

/// Checks Cross.1-3 on triples from ball(radius)^3 (in canonical order,
/// at most `sample_budget` triples), then associativity of multiply on
/// monomial triples and seeded random multi-term triples. Sample-based.
template <CoefficientField F>
CocycleReport validate_cocycle(const CocycleData<F>& c, std::size_t sample_budget, std::uint64_t seed = 0,
                               std::size_t radius = 2) {
  const F& field = c.field();
  const GroupSpec& G = c.group();
  const GroupElement e = G.identity();
  const auto S = ball(G, radius).elements();
  const auto scalars = field.sample_elements(8);
  CocycleReport rep;
  rep.sampled_radius = radius;

  auto fail = [&](std::string cond, std::vector<GroupElement> w, std::string scalar = {}) {
    rep.pass = false;
    rep.failed_condition = std::move(cond);
    rep.witness = std::move(w);
    rep.witness_scalar = std::move(scalar);
    return rep;
  };

  // Cross.3
  for (const auto& r : scalars) {
    if (!(c.twist(e, r) == r)) return fail("Cross.3", {e}, field.format(r));
  }
  for (const auto& g : S) {
    if (!(c.rho(g, e) == field.one())) return fail("Cross.3", {g, e}, field.format(c.rho(g, e)));
    if (!(c.rho(e, g) == field.one())) return fail("Cross.3", {e, g}, field.format(c.rho(e, g)));
  }

  // Cross.1 and Cross.2
  std::size_t triples = 0;
  for (const auto& g1 : S) {
    for (const auto& g2 : S) {
      const auto g12 = G.mul(g1, g2);
      const auto r12 = c.rho(g1, g2);
      for (const auto& r : scalars) {
        const auto lhs = field.frobenius(r, c.sigma(g1) + c.sigma(g2));
        const auto rhs = field.mul(field.mul(r12, c.twist(g12, r)), field.inv(r12));
        if (!(lhs == rhs)) return fail("Cross.2", {g1, g2}, field.format(r));
      }
      for (const auto& g3 : S) {
        if (triples >= sample_budget) break;
        ++triples;
        const auto lhs = field.mul(r12, c.rho(g12, g3));
        const auto rhs = field.mul(c.twist(g1, c.rho(g2, g3)), c.rho(g1, G.mul(g2, g3)));
        if (!(lhs == rhs)) return fail("Cross.1", {g1, g2, g3});
      }
    }
  }
  rep.triples_checked = triples;

  // associativity on monomials with nontrivial coefficients
  std::vector<typename F::value_type> units;
  for (const auto& r : field.sample_elements(8)) {
    if (!field.is_zero(r)) units.push_back(r);
  }
  std::size_t assoc = 0;
  std::size_t k = 0;
  for (const auto& g1 : S) {
    for (const auto& g2 : S) {
      for (const auto& g3 : S) {
        if (assoc >= sample_budget) break;
        const auto x = CrossedElement<F>::monomial(field, g1, units[k++ % units.size()]);
        const auto y = CrossedElement<F>::monomial(field, g2, units[k++ % units.size()]);
        const auto z = CrossedElement<F>::monomial(field, g3, units[k++ % units.size()]);
        ++assoc;
        if (!(multiply(multiply(x, y, c), z, c) == multiply(x, multiply(y, z, c), c))) {
          return fail("associativity", {g1, g2, g3});
        }
      }
    }
  }
  const auto samples = detail::sample_crossed_elements(c, S, 6, seed);
  for (const auto& x : samples) {
    for (const auto& y : samples) {
      for (const auto& z : samples) {
        ++assoc;
        if (!(multiply(multiply(x, y, c), z, c) == multiply(x, multiply(y, z, c), c))) {
          auto w = x.support();
          return fail("associativity", w);
        }
      }
    }
  }
  rep.associativity_checked = assoc;
  return rep;
}

/// Searches for y != 0 supported on ball(window_radius) with y x = 0 by
/// computing the left kernel of the vectors {b x : b in the ball}. Among the
/// kernel basis, the vector with the smallest support (ties: support nearest
/// the identity, then canonical order) is returned, scaled to a monic
/// leading coefficient and verified by multiplication.
template <CoefficientField F>
std::optional<CrossedElement<F>> find_annihilator(const CrossedElement<F>& x, std::size_t window_radius,
                                                  const CocycleData<F>& c) {
  if (x.is_zero()) throw std::invalid_argument("find_annihilator: x must be nonzero");
  const F& field = c.field();
  const GroupSpec& G = c.group();
  const auto window = ball(G, window_radius).elements();

  std::vector<FreeVector<F>> products;
  products.reserve(window.size());
  for (const auto& b : window) {
    products.push_back(embed(field, multiply(CrossedElement<F>::monomial(field, b, field.one()), x, c), 0));
  }
  const ColumnIndex cols = ColumnIndex::covering(products);
  const auto n = static_cast<std::uint32_t>(cols.size());
  EchelonForm<F> ech(field, n + window.size());
  for (std::size_t i = 0; i < window.size(); ++i) {
    auto row = cols.to_row<F>(products[i]);
    row.emplace_back(n + static_cast<std::uint32_t>(i), field.one());
    ech.insert(std::move(row));
  }
  EchelonForm<F> kernel(field, window.size());
  for (const auto& row : ech.rows()) {
    if (row.front().first < n) continue;
    IndexRow<F> k;
    for (const auto& [col, a] : row) k.emplace_back(col - n, a);
    kernel.insert(std::move(k));
  }
  if (kernel.rank() == 0) return std::nullopt;

  auto norm = [](const GroupElement& g) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < g.arity(); ++i) s += g[i] < 0 ? -g[i] : g[i];
    return s;
  };
  const auto basis = kernel.reduced_rows();
  const IndexRow<F>* best = nullptr;
  std::tuple<std::size_t, std::int64_t, std::vector<std::uint32_t>> best_key;
  for (const auto& row : basis) {
    std::int64_t nearest = std::numeric_limits<std::int64_t>::max();
    std::vector<std::uint32_t> cols_used;
    for (const auto& [col, a] : row) {
      nearest = std::min(nearest, norm(window[col]));
      cols_used.push_back(col);
    }
    auto key = std::make_tuple(row.size(), nearest, cols_used);
    if (!best || key < best_key) {
      best = &row;
      best_key = std::move(key);
    }
  }
  CrossedElement<F> y;
  for (const auto& [col, a] : *best) y.accumulate(field, window[col], a);
  if (!multiply(y, x, c).is_zero()) throw std::logic_error("annihilator failed verification");
  return y;
}

/// sigma in {"trivial", "frobenius"}; rho in {"trivial", "bilinear:<q>"}.
template <CoefficientField F>
CocycleData<F> make_cocycle(const F& field, const GroupSpec& G, std::string_view sigma, std::string_view rho) {
  CocycleData<F> c = CocycleData<F>::trivial(field, G);
  if (sigma == "frobenius") {
    c = CocycleData<F>::frobenius(field, G);
  } else if (sigma != "trivial") {
    throw std::invalid_argument("unknown sigma '" + std::string(sigma) + "' (expected trivial or frobenius)");
  }
  if (rho.substr(0, 9) == "bilinear:") {
    c = c.with_bilinear_rho(field.parse(rho.substr(9)));
  } else if (rho != "trivial") {
    throw std::invalid_argument("unknown rho '" + std::string(rho) + "' (expected trivial or bilinear:<q>)");
  }
  return c;
}

enum class DirectFinitenessVerdict { NotAWitness, Consistent, Violation };

inline std::string to_string(DirectFinitenessVerdict v) {
  switch (v) {
    case DirectFinitenessVerdict::NotAWitness:
      return "not a witness";
    case DirectFinitenessVerdict::Consistent:
      return "consistent";
    case DirectFinitenessVerdict::Violation:
      return "violation";
  }
  return "?";
}

/// If xy = 1, reports whether yx = 1 as well.
template <CoefficientField F>
DirectFinitenessVerdict check_direct_finiteness_witness(const CrossedElement<F>& x, const CrossedElement<F>& y,
                                                        const CocycleData<F>& c) {
  const auto one = unit_element(c);
  if (!(multiply(x, y, c) == one)) return DirectFinitenessVerdict::NotAWitness;
  return multiply(y, x, c) == one ? DirectFinitenessVerdict::Consistent : DirectFinitenessVerdict::Violation;
}

}  // namespace entrolen
