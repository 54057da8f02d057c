#pragma once

// Seeded property suites shared by the unit tests and the acceptance binary.

#include "oracle.hpp"

#include <entrolen/entrolen.hpp>

#include <random>
#include <string>
#include <vector>

namespace props {

using namespace entrolen;

struct SuiteResult {
  explicit SuiteResult(std::string n) : name(std::move(n)) {}

  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;

  void fail(const std::string& what) {
    if (failures++ == 0) first_failure = what;
  }
  bool ok() const { return failures == 0 && cases > 0; }
};

inline std::int64_t pick(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

inline GroupElement random_element(const GroupSpec& G, std::mt19937_64& rng, std::int64_t r) {
  std::vector<std::int64_t> c(G.arity());
  for (auto& x : c) x = pick(rng, -r, r);
  if (G.kind() == GroupKind::ZCrossZ2) c[1] = oracle::mod(c[1], 2);
  return G.element(c);
}

inline std::vector<GroupSpec> sample_groups() {
  return {GroupSpec::free_abelian(1), GroupSpec::free_abelian(2), GroupSpec::free_abelian(3), GroupSpec::z_cross_z2(),
          GroupSpec::heisenberg()};
}

inline oracle::Point coords(const GroupElement& g) {
  oracle::Point p;
  for (std::size_t i = 0; i < g.arity(); ++i) p.push_back(g[i]);
  return p;
}

inline SuiteResult group_axioms(std::uint64_t seed, std::size_t cases) {
  SuiteResult res{"group axioms"};
  std::mt19937_64 rng(seed);
  const auto groups = sample_groups();
  for (std::size_t k = 0; k < cases; ++k) {
    const GroupSpec& G = groups[k % groups.size()];
    const auto a = random_element(G, rng, 6), b = random_element(G, rng, 6), c = random_element(G, rng, 6);
    ++res.cases;
    const auto e = G.identity();
    if (!(G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c)))) res.fail(G.name() + " associativity at " + a.to_string());
    if (!(G.mul(a, e) == a) || !(G.mul(e, a) == a)) res.fail(G.name() + " identity at " + a.to_string());
    if (!(G.mul(a, G.inverse(a)) == e) || !(G.mul(G.inverse(a), a) == e)) {
      res.fail(G.name() + " inverse at " + a.to_string());
    }
    oracle::Point expect;
    if (G.kind() == GroupKind::Heisenberg) {
      expect = oracle::heisenberg_mul(coords(a), coords(b));
    } else {
      expect = oracle::abelian_mul(coords(a), coords(b), G.kind() == GroupKind::ZCrossZ2);
    }
    if (coords(G.mul(a, b)) != expect) res.fail(G.name() + " product disagrees with oracle");
  }
  return res;
}

template <CoefficientField F>
SparseVector<F> random_vector(const F& field, const GroupSpec& G, std::mt19937_64& rng, std::size_t terms,
                              std::int64_t r, std::uint32_t rank) {
  const auto scalars = field.sample_elements(16);
  std::vector<typename SparseVector<F>::Entry> entries;
  for (std::size_t t = 0; t < terms; ++t) {
    entries.emplace_back(ColumnLabel{random_element(G, rng, r), static_cast<std::uint32_t>(pick(rng, 1, rank))},
                         scalars[pick(rng, 0, static_cast<std::int64_t>(scalars.size()) - 1)]);
  }
  return SparseVector<F>::from_entries(field, std::move(entries));
}

template <CoefficientField F>
std::vector<SparseVector<F>> random_vectors(const F& field, const GroupSpec& G, std::mt19937_64& rng, std::size_t n) {
  std::vector<SparseVector<F>> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_vector(field, G, rng, 1 + pick(rng, 0, 3), 2, 1));
  return out;
}

template <CoefficientField F>
bool same_subspace(const Subspace<F>& A, const Subspace<F>& B) {
  if (A.dim() != B.dim()) return false;
  for (const auto& v : A.basis()) {
    if (!membership(v, B)) return false;
  }
  return true;
}

template <CoefficientField F>
oracle::SparseMap to_map(const F& field, const SparseVector<F>& v) {
  oracle::SparseMap m;
  for (const auto& [label, a] : v.entries()) m[{coords(label.g), static_cast<int>(label.coord)}] = std::stoll(field.format(a));
  return m;
}

/// U + (V ∩ W) = (U + V) ∩ W whenever U ⊆ W, plus the dimension formula
/// and dense-rank agreement for prime fields.
inline SuiteResult subspace_modular(std::uint64_t seed, std::size_t cases) {
  SuiteResult res{"subspace modular identity"};
  std::mt19937_64 rng(seed);
  const GroupSpec G = GroupSpec::free_abelian(2);
  const std::vector<std::uint32_t> primes = {2, 3, 5, 7};
  for (std::size_t k = 0; k < cases; ++k) {
    ++res.cases;
    auto check = [&](const auto& field, bool dense) {
      const auto u = random_vectors(field, G, rng, 1 + pick(rng, 0, 4));
      auto w = u;
      for (const auto& x : random_vectors(field, G, rng, pick(rng, 0, 4))) w.push_back(x);
      const auto v = random_vectors(field, G, rng, 1 + pick(rng, 0, 5));
      const auto U = span(field, u), V = span(field, v), W = span(field, w);
      const auto lhs = sum(U, intersect(V, W));
      const auto rhs = intersect(sum(U, V), W);
      if (!same_subspace(lhs, rhs)) res.fail("modular identity over " + field.name());
      if (intersect(V, W).dim() + sum(V, W).dim() != V.dim() + W.dim()) res.fail("dimension formula over " + field.name());
      if (quotient_dim(V, W) != sum(V, W).dim() - W.dim()) res.fail("quotient dim over " + field.name());
      if (dense) {
        std::vector<oracle::SparseMap> maps;
        for (const auto& x : v) maps.push_back(to_map(field, x));
        for (const auto& x : w) maps.push_back(to_map(field, x));
        if (oracle::rank_of_maps(maps, field.characteristic()) != sum(V, W).dim()) {
          res.fail("rank disagrees with dense elimination over " + field.name());
        }
      }
    };
    if (k % 5 == 4) {
      check(QuadraticField(k % 2 ? 2 : 3), false);
    } else {
      check(PrimeField(primes[k % primes.size()]), true);
    }
  }
  return res;
}

inline FiniteSubset random_window(const GroupSpec& G, std::mt19937_64& rng, std::size_t size, std::int64_t r) {
  std::vector<GroupElement> out;
  for (std::size_t i = 0; i < size; ++i) out.push_back(random_element(G, rng, r));
  return FiniteSubset(std::move(out));
}

inline SubshiftPresentation<PrimeField> random_presentation(const GroupSpec& G, const PrimeField& field,
                                                             std::mt19937_64& rng, std::uint32_t rank,
                                                             std::size_t ngens) {
  const auto c = CocycleData<PrimeField>::trivial(field, G);
  std::vector<FreeVector<PrimeField>> gens;
  while (gens.size() < ngens) {
    auto v = random_vector(field, G, rng, 1 + pick(rng, 0, 2), 1, rank);
    if (!v.is_zero()) gens.push_back(std::move(v));
  }
  return SubshiftPresentation<PrimeField>(c, rank, std::move(gens));
}

/// Monotonicity, sub-additivity, left-invariance of dim T_F, and agreement
/// with a dense-rank oracle.
inline SuiteResult trajectory_properties(std::uint64_t seed, std::size_t cases) {
  SuiteResult res{"trajectory monotonicity/subadditivity/equivariance"};
  std::mt19937_64 rng(seed);
  const std::vector<GroupSpec> groups = {GroupSpec::free_abelian(1), GroupSpec::free_abelian(2),
                                         GroupSpec::z_cross_z2(), GroupSpec::heisenberg()};
  for (std::size_t k = 0; k < cases; ++k) {
    ++res.cases;
    const GroupSpec& G = groups[k % groups.size()];
    const PrimeField field(k % 2 ? 2 : 3);
    const auto p = random_presentation(G, field, rng, 1 + static_cast<std::uint32_t>(pick(rng, 0, 1)), 1 + pick(rng, 0, 2));
    const auto F1 = random_window(G, rng, 1 + pick(rng, 0, 5), 2);
    const auto F2 = random_window(G, rng, 1 + pick(rng, 0, 5), 2);
    const auto U = set_union(F1, F2);
    const std::size_t d1 = trajectory_dim(p, F1), d2 = trajectory_dim(p, F2), du = trajectory_dim(p, U);
    if (d1 > du || d2 > du) res.fail("monotonicity on " + G.name());
    if (du > d1 + d2) res.fail("subadditivity on " + G.name());
    const auto g = random_element(G, rng, 3);
    if (trajectory_dim(p, translate(G, g, F1)) != d1) res.fail("equivariance on " + G.name());

    std::vector<oracle::Point> window;
    for (const auto& x : U) window.push_back(coords(x));
    std::vector<oracle::SparseMap> gens;
    for (const auto& v : p.generators()) gens.push_back(to_map(field, v));
    const bool heis = G.kind() == GroupKind::Heisenberg;
    const bool z2 = G.kind() == GroupKind::ZCrossZ2;
    const auto mul = [&](const oracle::Point& a, const oracle::Point& b) {
      return heis ? oracle::heisenberg_mul(a, b) : oracle::abelian_mul(a, b, z2);
    };
    if (oracle::trajectory_dim(window, gens, mul, field.characteristic()) != du) {
      res.fail("trajectory dim disagrees with dense oracle on " + G.name());
    }
  }
  return res;
}

/// g.(h.v) = rho(g,h) (gh).v exactly, hence equal spans, for twisted actions.
inline SuiteResult lambda_composition(std::uint64_t seed, std::size_t cases) {
  SuiteResult res{"lambda composition"};
  std::mt19937_64 rng(seed);
  const GroupSpec Z2 = GroupSpec::free_abelian(2);
  const GroupSpec H = GroupSpec::heisenberg();
  const QuadraticField gf4(2), gf9(3);
  const PrimeField gf5(5);
  const auto c1 = CocycleData<QuadraticField>::frobenius(gf4, Z2);
  const auto c2 = CocycleData<QuadraticField>::frobenius(gf9, H).with_bilinear_rho(gf9.parse("2"));
  const auto c3 = CocycleData<PrimeField>::trivial(gf5, Z2).with_bilinear_rho(2);
  auto check = [&](const auto& c) {
    const auto& field = c.field();
    const GroupSpec& G = c.group();
    const auto g = random_element(G, rng, 3), h = random_element(G, rng, 3);
    const auto v = random_vector(field, G, rng, 1 + pick(rng, 0, 3), 2, 2);
    const auto lhs = act(g, act(h, v, c), c);
    const auto rhs = scale(field, c.rho(g, h), act(G.mul(g, h), v, c));
    if (!(lhs == rhs)) res.fail("composition g=" + g.to_string() + " h=" + h.to_string() + " over " + field.name());
    if (!same_subspace(span(field, std::vector{lhs}), span(field, std::vector{act(G.mul(g, h), v, c)}))) {
      res.fail("span composition over " + field.name());
    }
  };
  for (std::size_t k = 0; k < cases; ++k) {
    ++res.cases;
    switch (k % 3) {
      case 0:
        check(c1);
        break;
      case 1:
        check(c2);
        break;
      default:
        check(c3);
    }
  }
  return res;
}

/// For N generated by part of M's generators: dim T_F(N) <= dim T_F(M);
/// the quotient dimension never exceeds dim T_F(M); the per-window SES
/// identity holds.
inline SuiteResult estimate_monotonicity(std::uint64_t seed, std::size_t cases) {
  SuiteResult res{"estimate monotonicity under submodule/quotient"};
  std::mt19937_64 rng(seed);
  const std::vector<GroupSpec> groups = {GroupSpec::free_abelian(1), GroupSpec::free_abelian(2),
                                         GroupSpec::z_cross_z2()};
  for (std::size_t k = 0; k < cases; ++k) {
    ++res.cases;
    const GroupSpec& G = groups[k % groups.size()];
    const PrimeField field(k % 2 ? 2 : 3);
    const auto M = random_presentation(G, field, rng, 1, 2 + pick(rng, 0, 1));
    std::vector<FreeVector<PrimeField>> sub(M.generators().begin(), M.generators().begin() + 1);
    const SubshiftPresentation<PrimeField> N(M.cocycle(), M.rank(), sub);
    const FolnerScheme scheme = FolnerScheme::standard(G);
    const auto Fn = scheme.set(1 + k % 3);
    const std::size_t dM = trajectory_dim(M, Fn), dN = trajectory_dim(N, Fn);
    if (dN > dM) res.fail("submodule exceeds module on " + G.name());
    const auto ses = ses_dims(M, N, Fn, StabilizationConfig{});
    if (!ses.exact()) res.fail("SES identity on " + G.name());
    if (ses.dim_image > dM || ses.dim_T_cap_N > dM) res.fail("quotient exceeds module on " + G.name());
    if (ses.dim_T_cap_N < dN) res.fail("T_F(N) not inside T_F(M) ∩ N on " + G.name());
  }
  return res;
}

inline std::vector<SuiteResult> all_suites(std::uint64_t seed, std::size_t cases) {
  return {group_axioms(seed, cases), subspace_modular(seed + 1, cases), trajectory_properties(seed + 2, cases),
          lambda_composition(seed + 3, cases), estimate_monotonicity(seed + 4, cases)};
}

}  // namespace props
