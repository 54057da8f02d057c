#pragma once

// Ornstein-Weiss quasi-tiling combinatorics on finite subsets of a group:
// epsilon-disjoint families, alpha-covers, quasi-tilings (checker plus a
// greedy constructor whose output is always re-checked), (E, F)-nets and
// the tiling upper bound M*eps + max_i ratio_i / (1 - eps).

#include <entrolen/folner.hpp>
#include <entrolen/groups.hpp>
#include <entrolen/rational.hpp>

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace entrolen {

struct DisjointnessResult {
  bool disjoint = false;
  std::vector<FiniteSubset> witnesses;  // A'_i, present when disjoint
};

namespace detail {

/// Smallest k with k / |A| > 1 - eps.
inline std::size_t required_share(std::size_t size, const Rational& eps) {
  const Rational bound = (Rational(1) - eps) * Rational(BigInt(size));
  const BigInt fl = boost::multiprecision::numerator(bound) / boost::multiprecision::denominator(bound);
  return static_cast<std::size_t>(fl) + 1;
}

/// Exact decision by bipartite b-matching: set i must receive need[i]
/// distinct elements it contains, each element going to at most one set.
inline std::optional<std::vector<FiniteSubset>> match_shares(const std::vector<FiniteSubset>& family,
                                                             const std::vector<std::size_t>& need) {
  std::vector<GroupElement> elements;
  for (const auto& A : family) elements.insert(elements.end(), A.begin(), A.end());
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  std::unordered_map<GroupElement, std::size_t, GroupElementHash> idx;
  for (std::size_t i = 0; i < elements.size(); ++i) idx.emplace(elements[i], i);

  // one slot per unit of demand; augmenting paths (Kuhn) from each slot
  std::vector<std::size_t> slot_set;
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t k = 0; k < need[i]; ++k) slot_set.push_back(i);
  }
  if (slot_set.size() > elements.size()) return std::nullopt;
  std::vector<std::vector<std::size_t>> adj(family.size());
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (const auto& g : family[i]) adj[i].push_back(idx.at(g));
  }
  std::vector<long> owner(elements.size(), -1);  // element -> slot
  std::vector<char> visited;
  std::function<bool(std::size_t)> augment = [&](std::size_t slot) -> bool {
    for (std::size_t el : adj[slot_set[slot]]) {
      if (visited[el]) continue;
      visited[el] = 1;
      if (owner[el] < 0 || augment(static_cast<std::size_t>(owner[el]))) {
        owner[el] = static_cast<long>(slot);
        return true;
      }
    }
    return false;
  };
  for (std::size_t s = 0; s < slot_set.size(); ++s) {
    visited.assign(elements.size(), 0);
    if (!augment(s)) return std::nullopt;
  }
  std::vector<std::vector<GroupElement>> shares(family.size());
  for (std::size_t el = 0; el < elements.size(); ++el) {
    if (owner[el] >= 0) shares[slot_set[static_cast<std::size_t>(owner[el])]].push_back(elements[el]);
  }
  std::vector<FiniteSubset> out;
  for (auto& s : shares) out.emplace_back(std::move(s));
  return out;
}

}  // namespace detail

/// Decides whether pairwise disjoint A'_i inside A_i with |A'_i|/|A_i| > 1 - eps
/// exist. Greedy overlap removal in family order is tried first (it yields
/// the natural witness); if it fails, an exact matching decides.
inline DisjointnessResult check_epsilon_disjoint(const std::vector<FiniteSubset>& family, const Rational& eps) {
  if (eps <= 0 || eps >= 1) throw std::invalid_argument("eps must lie in (0, 1)");
  std::vector<std::size_t> need;
  for (const auto& A : family) {
    if (A.empty()) throw std::invalid_argument("epsilon-disjointness needs nonempty sets");
    need.push_back(detail::required_share(A.size(), eps));
  }

  DisjointnessResult res;
  std::unordered_set<GroupElement, GroupElementHash> claimed;
  bool greedy_ok = true;
  for (std::size_t i = 0; i < family.size(); ++i) {
    std::vector<GroupElement> mine;
    for (const auto& g : family[i]) {
      if (!claimed.count(g)) mine.push_back(g);
    }
    if (mine.size() < need[i]) {
      greedy_ok = false;
      break;
    }
    claimed.insert(mine.begin(), mine.end());
    res.witnesses.emplace_back(std::move(mine));
  }
  if (greedy_ok) {
    res.disjoint = true;
    return res;
  }
  res.witnesses.clear();
  if (auto shares = detail::match_shares(family, need)) {
    res.disjoint = true;
    res.witnesses = std::move(*shares);
  }
  return res;
}

/// |A ∩ ∪ family| / |A|.
inline Rational cover_ratio(const FiniteSubset& A, const std::vector<FiniteSubset>& family) {
  if (A.empty()) throw std::invalid_argument("cover ratio of an empty set");
  std::size_t hit = 0;
  for (const auto& a : A) {
    if (std::any_of(family.begin(), family.end(), [&](const FiniteSubset& S) { return S.contains(a); })) ++hit;
  }
  return Rational(BigInt(hit), BigInt(A.size()));
}

inline bool check_alpha_cover(const FiniteSubset& A, const std::vector<FiniteSubset>& family, const Rational& alpha) {
  if (alpha <= 0 || alpha > 1) throw std::invalid_argument("alpha must lie in (0, 1]");
  return cover_ratio(A, family) >= alpha;
}

struct QuasiTiling {
  std::vector<FiniteSubset> tiles;    // A_1..A_k
  std::vector<FiniteSubset> centers;  // C_1..C_k
  Rational eps;
};

struct TilingCondition {
  std::string name;
  bool pass = false;
  Rational ratio;
};

/// Three rows:
///   containment_eps_disjoint  C_iA_i inside A, {cA_i} eps-disjoint;
///                             ratio = largest pairwise overlap |cA ∩ c'A|/|A|
///   cross_tile_disjoint       C_iA_i pairwise disjoint;
///                             ratio = |elements in two or more C_iA_i| / |A|
///   cover                     (1 - eps)-cover; ratio = cover ratio
struct TilingReport {
  std::vector<TilingCondition> conditions;
  bool pass() const {
    return !conditions.empty() &&
           std::all_of(conditions.begin(), conditions.end(), [](const TilingCondition& c) { return c.pass; });
  }
};

inline TilingReport check_quasi_tiling(const GroupSpec& G, const FiniteSubset& A, const QuasiTiling& t) {
  if (t.tiles.size() != t.centers.size()) throw std::invalid_argument("tiles and centers differ in length");
  if (t.eps <= 0 || t.eps >= 1) throw std::invalid_argument("eps must lie in (0, 1)");
  TilingReport rep;

  bool cond1 = true;
  Rational worst_overlap(0);
  std::vector<FiniteSubset> blocks;  // C_iA_i
  for (std::size_t i = 0; i < t.tiles.size(); ++i) {
    std::vector<FiniteSubset> translates;
    for (const auto& c : t.centers[i]) translates.push_back(translate(G, c, t.tiles[i]));
    for (const auto& T : translates) {
      if (!T.is_subset_of(A)) cond1 = false;
    }
    for (std::size_t a = 0; a < translates.size(); ++a) {
      for (std::size_t b = a + 1; b < translates.size(); ++b) {
        const Rational ov(BigInt(set_intersection(translates[a], translates[b]).size()), BigInt(t.tiles[i].size()));
        worst_overlap = std::max(worst_overlap, ov);
      }
    }
    if (!translates.empty() && !check_epsilon_disjoint(translates, t.eps).disjoint) cond1 = false;
    blocks.push_back(set_product(G, t.centers[i], t.tiles[i]));
  }
  rep.conditions.push_back({"containment_eps_disjoint", cond1, worst_overlap});

  std::unordered_map<GroupElement, std::size_t, GroupElementHash> hits;
  for (const auto& B : blocks) {
    for (const auto& g : B) ++hits[g];
  }
  std::size_t shared = 0;
  for (const auto& [g, k] : hits) {
    if (k > 1) ++shared;
  }
  rep.conditions.push_back(
      {"cross_tile_disjoint", shared == 0, A.empty() ? Rational(0) : Rational(BigInt(shared), BigInt(A.size()))});

  const Rational cover = cover_ratio(A, blocks);
  rep.conditions.push_back({"cover", cover >= Rational(1) - t.eps, cover});
  return rep;
}

/// Greedy construction: tiles are placed largest first. For each tile the
/// admissible centers In_T(A) are scanned in canonical order twice, first
/// accepting only translates disjoint from everything placed, then also
/// translates whose overlap with earlier translates of the same tile is
/// below eps * |T| (still disjoint from other tiles). Returns nullopt when
/// the (1 - eps)-cover is not reached.
inline std::optional<QuasiTiling> greedy_quasi_tile(const GroupSpec& G, const FiniteSubset& A,
                                                    const std::vector<FiniteSubset>& tiles, const Rational& eps) {
  if (tiles.empty()) throw std::invalid_argument("greedy_quasi_tile needs at least one tile");
  if (eps <= 0 || eps > Rational(1, 4)) throw std::invalid_argument("eps must lie in (0, 1/4]");
  std::vector<std::size_t> order(tiles.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return tiles[a].size() > tiles[b].size(); });

  QuasiTiling qt;
  qt.tiles = tiles;
  qt.eps = eps;
  std::vector<std::vector<GroupElement>> centers(tiles.size());
  std::unordered_set<GroupElement, GroupElementHash> other_tiles;  // blocks of finished tiles
  for (std::size_t i : order) {
    const FiniteSubset& T = tiles[i];
    if (T.empty()) throw std::invalid_argument("tiles must be nonempty");
    const FiniteSubset candidates = interior(G, A, T);
    std::unordered_set<GroupElement, GroupElementHash> same_tile;
    std::unordered_set<GroupElement, GroupElementHash> used;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& c : candidates) {
        if (used.count(c)) continue;
        const FiniteSubset placed = translate(G, c, T);
        bool clash = false;
        std::size_t overlap = 0;
        for (const auto& g : placed) {
          if (other_tiles.count(g)) {
            clash = true;
            break;
          }
          if (same_tile.count(g)) ++overlap;
        }
        if (clash) continue;
        const bool accept = (pass == 0) ? overlap == 0
                                        : Rational(BigInt(overlap), BigInt(T.size())) < eps;
        if (!accept) continue;
        used.insert(c);
        centers[i].push_back(c);
        same_tile.insert(placed.begin(), placed.end());
      }
    }
    other_tiles.insert(same_tile.begin(), same_tile.end());
  }
  for (auto& c : centers) qt.centers.emplace_back(std::move(c));

  // The ordered same-tile greedy witness keeps each translate's fresh part above
  // (1 - eps)|T|, so only the cover can fail; the checker stays authoritative.
  if (!check_quasi_tiling(G, A, qt).pass()) return std::nullopt;
  return qt;
}

/// "tile_index:center_list" per tile, e.g. "0:(-18),(-13)".
inline std::string format_tiling(const QuasiTiling& t) {
  std::string out;
  for (std::size_t i = 0; i < t.centers.size(); ++i) {
    out += std::to_string(i) + ":";
    bool first = true;
    for (const auto& c : t.centers[i]) {
      if (!first) out += ",";
      out += c.to_string();
      first = false;
    }
    out += "\n";
  }
  return out;
}

struct Net {
  FiniteSubset points;
  FiniteSubset E;
  FiniteSubset F;
  FiniteSubset window;
  bool coverage_ok = false;
  std::optional<GroupElement> uncovered;  // first window element not in points * F
};

/// Greedy maximal subset of the window (canonical scan) with pairwise
/// disjoint translates gE. Every window element was a candidate, so
/// maximality puts each one in some g E E^{-1}; coverage by points * F is
/// then checked over the whole window.
inline Net build_net(const GroupSpec& G, const FiniteSubset& E, const FiniteSubset& F, const FiniteSubset& window) {
  if (E.empty()) throw std::invalid_argument("build_net needs nonempty E");
  if (!window.contains(G.identity())) throw std::invalid_argument("build_net needs a window containing e");
  std::unordered_set<GroupElement, GroupElementHash> occupied;
  std::vector<GroupElement> points;
  for (const auto& g : window) {
    const FiniteSubset gE = translate(G, g, E);
    if (std::any_of(gE.begin(), gE.end(), [&](const GroupElement& x) { return occupied.count(x) != 0; })) continue;
    occupied.insert(gE.begin(), gE.end());
    points.push_back(g);
  }
  Net net{FiniteSubset(std::move(points)), E, F, window, true, std::nullopt};
  const FiniteSubset covered = set_product(G, net.points, F);
  for (const auto& x : window) {
    if (!covered.contains(x)) {
      net.coverage_ok = false;
      net.uncovered = x;
      break;
    }
  }
  return net;
}

/// |F_n ∩ points| / |F_n|.
inline Rational net_density(const Net& net, const FolnerScheme& scheme, std::size_t n) {
  const FiniteSubset Fn = scheme.set(n);
  if (!Fn.is_subset_of(net.window)) throw std::invalid_argument("net window does not contain F_n");
  return Rational(BigInt(set_intersection(Fn, net.points).size()), BigInt(Fn.size()));
}

/// M * eps + max(ratios) / (1 - eps).
inline Rational ow_upper_bound(const Rational& M, const Rational& eps, const std::vector<Rational>& tile_ratios) {
  if (tile_ratios.empty()) throw std::invalid_argument("ow_upper_bound needs at least one tile ratio");
  if (eps <= 0 || eps >= 1) throw std::invalid_argument("eps must lie in (0, 1)");
  const Rational best = *std::max_element(tile_ratios.begin(), tile_ratios.end());
  return M * eps + best / (Rational(1) - eps);
}

}  // namespace entrolen
