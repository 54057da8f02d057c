#pragma once

#include <entrolen/groups.hpp>
#include <entrolen/rational.hpp>

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace entrolen {

/// In_C(A) = {x : xC is contained in A}.
inline FiniteSubset interior(const GroupSpec& G, const FiniteSubset& A, const FiniteSubset& C) {
  if (C.empty()) throw std::invalid_argument("interior: C must be nonempty");
  // Any x with xC inside A satisfies x = a c0^{-1} for the first c0 in C.
  const GroupElement c0_inv = G.inverse(C.elements().front());
  std::vector<GroupElement> out;
  for (const auto& a : A) {
    const GroupElement x = G.mul(a, c0_inv);
    bool inside = true;
    for (const auto& c : C) {
      if (!A.contains(G.mul(x, c))) {
        inside = false;
        break;
      }
    }
    if (inside) out.push_back(x);
  }
  return FiniteSubset(std::move(out));
}

/// Out_C(A) = {x : xC meets A}.
inline FiniteSubset exterior(const GroupSpec& G, const FiniteSubset& A, const FiniteSubset& C) {
  if (C.empty()) throw std::invalid_argument("exterior: C must be nonempty");
  return set_product(G, A, set_inverse(G, C));
}

/// C-boundary: Out_C(A) \ In_C(A).
inline FiniteSubset boundary(const GroupSpec& G, const FiniteSubset& A, const FiniteSubset& C) {
  return set_difference(exterior(G, A, C), interior(G, A, C));
}

enum class SchemeKind { Boxes, BoxTimesZ2, WordBalls, Custom };

/// A nested sequence F_0, F_1, ... of finite sets.
class FolnerScheme {
 public:
  /// The natural scheme per group: centered boxes on Z^d, [-n,n] x {0,1}
  /// on ZxZ2, word balls on the Heisenberg group.
  static FolnerScheme standard(const GroupSpec& G) {
    switch (G.kind()) {
      case GroupKind::FreeAbelian:
        return FolnerScheme(G, SchemeKind::Boxes);
      case GroupKind::ZCrossZ2:
        return FolnerScheme(G, SchemeKind::BoxTimesZ2);
      case GroupKind::Heisenberg:
        return FolnerScheme(G, SchemeKind::WordBalls);
    }
    throw std::logic_error("unreachable");
  }
  static FolnerScheme boxes(const GroupSpec& G) {
    if (G.kind() != GroupKind::FreeAbelian) throw std::invalid_argument("box scheme needs Z^d");
    return FolnerScheme(G, SchemeKind::Boxes);
  }
  static FolnerScheme box_times_z2(const GroupSpec& G) {
    if (G.kind() != GroupKind::ZCrossZ2) throw std::invalid_argument("box x Z/2 scheme needs ZxZ2");
    return FolnerScheme(G, SchemeKind::BoxTimesZ2);
  }
  static FolnerScheme word_balls(const GroupSpec& G) { return FolnerScheme(G, SchemeKind::WordBalls); }
  static FolnerScheme custom(const GroupSpec& G, std::string label,
                             std::function<FiniteSubset(std::size_t)> sets) {
    FolnerScheme s(G, SchemeKind::Custom);
    s.label_ = std::move(label);
    s.custom_ = std::move(sets);
    return s;
  }

  /// "boxes", "balls" or "standard".
  static FolnerScheme parse(const GroupSpec& G, std::string_view name) {
    if (name == "standard" || name.empty()) return standard(G);
    if (name == "boxes") {
      return G.kind() == GroupKind::ZCrossZ2 ? box_times_z2(G) : boxes(G);
    }
    if (name == "balls") return word_balls(G);
    throw std::invalid_argument("unknown Folner scheme '" + std::string(name) + "'");
  }

  const GroupSpec& group() const { return group_; }
  SchemeKind kind() const { return kind_; }

  std::string name() const {
    switch (kind_) {
      case SchemeKind::Boxes:
        return "boxes";
      case SchemeKind::BoxTimesZ2:
        return "boxes";
      case SchemeKind::WordBalls:
        return "balls";
      case SchemeKind::Custom:
        return label_;
    }
    return "?";
  }

  FiniteSubset set(std::size_t n) const {
    const auto r = static_cast<std::int64_t>(n);
    switch (kind_) {
      case SchemeKind::Boxes: {
        const std::size_t d = group_.arity();
        std::vector<GroupElement> out;
        std::vector<std::int64_t> c(d, -r);
        while (true) {
          out.push_back(group_.element(c));
          std::size_t i = d;
          while (i > 0) {
            --i;
            if (c[i] < r) {
              ++c[i];
              break;
            }
            c[i] = -r;
            if (i == 0) return FiniteSubset(std::move(out));
          }
        }
      }
      case SchemeKind::BoxTimesZ2: {
        std::vector<GroupElement> out;
        for (std::int64_t k = -r; k <= r; ++k) {
          out.push_back(group_.element({k, 0}));
          out.push_back(group_.element({k, 1}));
        }
        return FiniteSubset(std::move(out));
      }
      case SchemeKind::WordBalls:
        return ball(group_, n);
      case SchemeKind::Custom:
        return custom_(n);
    }
    throw std::logic_error("unreachable");
  }

 private:
  FolnerScheme(const GroupSpec& G, SchemeKind kind) : group_(G), kind_(kind) {}

  GroupSpec group_;
  SchemeKind kind_;
  std::string label_;
  std::function<FiniteSubset(std::size_t)> custom_;
};

inline FiniteSubset folner_set(const FolnerScheme& scheme, std::size_t n) { return scheme.set(n); }

/// |boundary_C(F_n)| / |F_n|, exact.
inline Rational boundary_ratio(const FolnerScheme& scheme, const FiniteSubset& C, std::size_t n) {
  const FiniteSubset F = scheme.set(n);
  if (F.empty()) throw std::invalid_argument("boundary_ratio: empty Folner set");
  const FiniteSubset dC = boundary(scheme.group(), F, C);
  return Rational(BigInt(dC.size()), BigInt(F.size()));
}

struct ExhaustionReport {
  bool pass = true;
  std::string violation;  // empty on pass
  std::size_t n_max = 0;
  /// smallest m with ball(r) inside F_m, per radius r = 0..n_max.
  std::vector<std::size_t> coverage_index;
};

/// Bounded check of: e in F_0, F_n inside F_{n+1}, and ball(r) inside some
/// F_m with m <= n_max for every r <= n_max.
inline ExhaustionReport verify_exhaustion(const FolnerScheme& scheme, std::size_t n_max) {
  ExhaustionReport rep;
  rep.n_max = n_max;
  const GroupSpec& G = scheme.group();
  std::vector<FiniteSubset> sets;
  sets.reserve(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) sets.push_back(scheme.set(n));

  if (!sets[0].contains(G.identity())) {
    rep.pass = false;
    rep.violation = "e \xE2\x88\x89 F_0";
    return rep;
  }
  for (std::size_t n = 0; n < n_max; ++n) {
    if (!sets[n].is_subset_of(sets[n + 1])) {
      rep.pass = false;
      rep.violation = "F_" + std::to_string(n) + " not contained in F_" + std::to_string(n + 1);
      return rep;
    }
  }
  std::size_t m = 0;
  for (std::size_t r = 0; r <= n_max; ++r) {
    const FiniteSubset B = ball(G, r);
    while (m <= n_max && !B.is_subset_of(sets[m])) ++m;
    if (m > n_max) {
      rep.pass = false;
      rep.violation = "ball(" + std::to_string(r) + ") not covered by F_m for m <= " + std::to_string(n_max);
      return rep;
    }
    rep.coverage_index.push_back(m);
  }
  return rep;
}

}  // namespace entrolen
