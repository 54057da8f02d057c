#pragma once

// Concrete finitely generated amenable groups with exact arithmetic:
//
//   Z^d            integer d-vectors under addition (1 <= d <= 4)
//   Z x Z/2        pairs (n, t) with t a bit, direct product
//   Heisenberg     triples (a, b, c) <-> [[1,a,c],[0,1,b],[0,0,1]],
//                  (a,b,c)(a',b',c') = (a+a', b+b', c+c'+a*b')
//
// Elements are small value types ordered lexicographically by coordinates;
// that order is the canonical order used for column layout downstream.

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace entrolen {

enum class GroupKind : std::uint8_t { FreeAbelian, ZCrossZ2, Heisenberg };

inline constexpr std::size_t kMaxCoords = 4;

class GroupElement {
 public:
  GroupElement() = default;
  GroupElement(GroupKind kind, std::initializer_list<std::int64_t> coords)
      : kind_(kind), arity_(static_cast<std::uint8_t>(coords.size())) {
    if (coords.size() > kMaxCoords) throw std::invalid_argument("too many coordinates");
    std::copy(coords.begin(), coords.end(), coords_.begin());
  }
  GroupElement(GroupKind kind, const std::vector<std::int64_t>& coords)
      : kind_(kind), arity_(static_cast<std::uint8_t>(coords.size())) {
    if (coords.size() > kMaxCoords) throw std::invalid_argument("too many coordinates");
    std::copy(coords.begin(), coords.end(), coords_.begin());
  }

  GroupKind kind() const { return kind_; }
  std::size_t arity() const { return arity_; }
  std::int64_t operator[](std::size_t i) const { return coords_[i]; }
  std::int64_t& operator[](std::size_t i) { return coords_[i]; }

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
  friend std::strong_ordering operator<=>(const GroupElement& a, const GroupElement& b) {
    if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
    if (auto c = a.arity_ <=> b.arity_; c != 0) return c;
    for (std::size_t i = 0; i < a.arity_; ++i) {
      if (auto c = a.coords_[i] <=> b.coords_[i]; c != 0) return c;
    }
    return std::strong_ordering::equal;
  }

  std::size_t hash() const {
    std::size_t h = static_cast<std::size_t>(kind_) * 31u + arity_;
    for (std::size_t i = 0; i < arity_; ++i) {
      h ^= std::hash<std::int64_t>{}(coords_[i]) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }

  /// "(1,2)", "(3,1)", "(1,0,0)".
  std::string to_string() const {
    std::string out = "(";
    for (std::size_t i = 0; i < arity_; ++i) {
      if (i) out += ',';
      out += std::to_string(coords_[i]);
    }
    return out + ")";
  }

 private:
  GroupKind kind_ = GroupKind::FreeAbelian;
  std::uint8_t arity_ = 0;
  std::array<std::int64_t, kMaxCoords> coords_{};
};

struct GroupElementHash {
  std::size_t operator()(const GroupElement& g) const { return g.hash(); }
};

class GroupMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class GroupSpec {
 public:
  static GroupSpec free_abelian(std::size_t d) {
    if (d < 1 || d > kMaxCoords) throw std::invalid_argument("Z^d requires 1 <= d <= 4");
    return GroupSpec(GroupKind::FreeAbelian, d);
  }
  static GroupSpec z_cross_z2() { return GroupSpec(GroupKind::ZCrossZ2, 2); }
  static GroupSpec heisenberg() { return GroupSpec(GroupKind::Heisenberg, 3); }

  /// Accepts "Z", "Z^d", "ZxZ2", "Heisenberg" (also "H3").
  static GroupSpec parse(std::string_view name) {
    if (name == "Z") return free_abelian(1);
    if (name == "ZxZ2" || name == "ZxZ/2") return z_cross_z2();
    if (name == "Heisenberg" || name == "H3") return heisenberg();
    if (name.size() == 3 && name.substr(0, 2) == "Z^" && name[2] >= '1' && name[2] <= '4') {
      return free_abelian(static_cast<std::size_t>(name[2] - '0'));
    }
    throw std::invalid_argument("unknown group '" + std::string(name) + "'");
  }

  GroupKind kind() const { return kind_; }
  std::size_t arity() const { return arity_; }

  std::string name() const {
    switch (kind_) {
      case GroupKind::FreeAbelian:
        return arity_ == 1 ? "Z" : "Z^" + std::to_string(arity_);
      case GroupKind::ZCrossZ2:
        return "ZxZ2";
      case GroupKind::Heisenberg:
        return "Heisenberg";
    }
    return "?";
  }

  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;

  GroupElement identity() const {
    GroupElement e(kind_, std::vector<std::int64_t>(arity_, 0));
    return e;
  }

  GroupElement element(std::initializer_list<std::int64_t> coords) const {
    GroupElement g(kind_, coords);
    check(g);
    return g;
  }

  GroupElement element(const std::vector<std::int64_t>& coords) const {
    GroupElement g(kind_, coords);
    check(g);
    return g;
  }

  bool owns(const GroupElement& g) const {
    if (g.kind() != kind_ || g.arity() != arity_) return false;
    if (kind_ == GroupKind::ZCrossZ2) return g[1] == 0 || g[1] == 1;
    return true;
  }

  void check(const GroupElement& g) const {
    if (!owns(g)) {
      throw GroupMismatch("element " + g.to_string() + " does not belong to " + name());
    }
  }

  GroupElement mul(const GroupElement& g, const GroupElement& h) const {
    check(g);
    check(h);
    GroupElement r = g;
    switch (kind_) {
      case GroupKind::FreeAbelian:
        for (std::size_t i = 0; i < arity_; ++i) r[i] += h[i];
        break;
      case GroupKind::ZCrossZ2:
        r[0] += h[0];
        r[1] = (g[1] + h[1]) & 1;
        break;
      case GroupKind::Heisenberg:
        r[0] += h[0];
        r[1] += h[1];
        r[2] += h[2] + g[0] * h[1];
        break;
    }
    return r;
  }

  GroupElement inverse(const GroupElement& g) const {
    check(g);
    GroupElement r = g;
    switch (kind_) {
      case GroupKind::FreeAbelian:
        for (std::size_t i = 0; i < arity_; ++i) r[i] = -g[i];
        break;
      case GroupKind::ZCrossZ2:
        r[0] = -g[0];
        break;
      case GroupKind::Heisenberg:
        r[0] = -g[0];
        r[1] = -g[1];
        r[2] = g[0] * g[1] - g[2];
        break;
    }
    return r;
  }

  /// Fixed symmetric generating set, identity first, then canonical order.
  /// Z^d: {e, +-e_i}; ZxZ2: {e, (+-1,0), (0,1)}; Heisenberg: {e, x^+-1, y^+-1}.
  std::vector<GroupElement> generators() const {
    std::vector<GroupElement> gens{identity()};
    switch (kind_) {
      case GroupKind::FreeAbelian:
        for (std::size_t i = 0; i < arity_; ++i) {
          for (std::int64_t s : {-1, 1}) {
            GroupElement g = identity();
            g[i] = s;
            gens.push_back(g);
          }
        }
        break;
      case GroupKind::ZCrossZ2:
        gens.push_back(element({-1, 0}));
        gens.push_back(element({1, 0}));
        gens.push_back(element({0, 1}));
        break;
      case GroupKind::Heisenberg:
        gens.push_back(element({-1, 0, 0}));
        gens.push_back(element({1, 0, 0}));
        gens.push_back(element({0, -1, 0}));
        gens.push_back(element({0, 1, 0}));
        break;
    }
    std::sort(gens.begin() + 1, gens.end());
    return gens;
  }

  /// Parses "(1,2)"; whitespace around numbers is tolerated.
  GroupElement parse_element(std::string_view text) const {
    std::size_t i = 0;
    auto skip = [&] {
      while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    };
    skip();
    if (i >= text.size() || text[i] != '(') {
      throw std::invalid_argument("group element must start with '(': '" + std::string(text) + "'");
    }
    ++i;
    std::vector<std::int64_t> coords;
    while (true) {
      skip();
      std::size_t start = i;
      if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
      std::size_t digits = i;
      while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
      if (i == digits) {
        throw std::invalid_argument("expected integer in group element '" + std::string(text) + "'");
      }
      coords.push_back(std::stoll(std::string(text.substr(start, i - start))));
      skip();
      if (i < text.size() && text[i] == ',') {
        ++i;
        continue;
      }
      if (i < text.size() && text[i] == ')') {
        ++i;
        break;
      }
      throw std::invalid_argument("malformed group element '" + std::string(text) + "'");
    }
    skip();
    if (i != text.size()) {
      throw std::invalid_argument("trailing characters after group element '" + std::string(text) + "'");
    }
    if (coords.size() != arity_) {
      throw GroupMismatch("element " + std::string(text) + " has " + std::to_string(coords.size()) +
                          " coordinates, " + name() + " needs " + std::to_string(arity_));
    }
    return element(coords);
  }

 private:
  GroupSpec(GroupKind kind, std::size_t arity) : kind_(kind), arity_(arity) {}

  GroupKind kind_;
  std::size_t arity_;
};

/// Finite set of group elements, immutable once built. Iteration follows the
/// canonical order; membership is a hash lookup.
class FiniteSubset {
 public:
  FiniteSubset() = default;
  explicit FiniteSubset(std::vector<GroupElement> elems) : elems_(std::move(elems)) {
    std::sort(elems_.begin(), elems_.end());
    elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
    index_.reserve(elems_.size());
    index_.insert(elems_.begin(), elems_.end());
  }
  FiniteSubset(std::initializer_list<GroupElement> elems)
      : FiniteSubset(std::vector<GroupElement>(elems)) {}

  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }
  bool contains(const GroupElement& g) const { return index_.count(g) != 0; }
  const std::vector<GroupElement>& elements() const { return elems_; }
  auto begin() const { return elems_.begin(); }
  auto end() const { return elems_.end(); }

  bool is_subset_of(const FiniteSubset& other) const {
    return std::all_of(elems_.begin(), elems_.end(),
                       [&](const GroupElement& g) { return other.contains(g); });
  }

  friend bool operator==(const FiniteSubset& a, const FiniteSubset& b) { return a.elems_ == b.elems_; }

  std::string to_string() const {
    std::string out = "{";
    for (std::size_t i = 0; i < elems_.size(); ++i) {
      if (i) out += ",";
      out += elems_[i].to_string();
    }
    return out + "}";
  }

 private:
  std::vector<GroupElement> elems_;
  std::unordered_set<GroupElement, GroupElementHash> index_;
};

inline FiniteSubset set_union(const FiniteSubset& a, const FiniteSubset& b) {
  std::vector<GroupElement> out(a.elements());
  out.insert(out.end(), b.begin(), b.end());
  return FiniteSubset(std::move(out));
}

inline FiniteSubset set_intersection(const FiniteSubset& a, const FiniteSubset& b) {
  std::vector<GroupElement> out;
  for (const auto& g : a) {
    if (b.contains(g)) out.push_back(g);
  }
  return FiniteSubset(std::move(out));
}

inline FiniteSubset set_difference(const FiniteSubset& a, const FiniteSubset& b) {
  std::vector<GroupElement> out;
  for (const auto& g : a) {
    if (!b.contains(g)) out.push_back(g);
  }
  return FiniteSubset(std::move(out));
}

/// gA = {g a : a in A}.
inline FiniteSubset translate(const GroupSpec& G, const GroupElement& g, const FiniteSubset& A) {
  std::vector<GroupElement> out;
  out.reserve(A.size());
  for (const auto& a : A) out.push_back(G.mul(g, a));
  return FiniteSubset(std::move(out));
}

/// AB = {a b : a in A, b in B}.
inline FiniteSubset set_product(const GroupSpec& G, const FiniteSubset& A, const FiniteSubset& B) {
  std::vector<GroupElement> out;
  out.reserve(A.size() * B.size());
  for (const auto& a : A) {
    for (const auto& b : B) out.push_back(G.mul(a, b));
  }
  return FiniteSubset(std::move(out));
}

/// A^{-1} = {a^{-1} : a in A}.
inline FiniteSubset set_inverse(const GroupSpec& G, const FiniteSubset& A) {
  std::vector<GroupElement> out;
  out.reserve(A.size());
  for (const auto& a : A) out.push_back(G.inverse(a));
  return FiniteSubset(std::move(out));
}

/// Word ball B_r(S): products of at most r generators (S contains e).
inline FiniteSubset ball(const GroupSpec& G, std::size_t radius) {
  const auto gens = G.generators();
  std::unordered_set<GroupElement, GroupElementHash> seen{G.identity()};
  std::vector<GroupElement> frontier{G.identity()};
  std::vector<GroupElement> all{G.identity()};
  for (std::size_t step = 0; step < radius; ++step) {
    std::vector<GroupElement> next;
    for (const auto& g : frontier) {
      for (const auto& s : gens) {
        GroupElement h = G.mul(g, s);
        if (seen.insert(h).second) {
          next.push_back(h);
          all.push_back(h);
        }
      }
    }
    frontier = std::move(next);
  }
  return FiniteSubset(std::move(all));
}

}  // namespace entrolen

template <>
struct std::hash<entrolen::GroupElement> {
  std::size_t operator()(const entrolen::GroupElement& g) const { return g.hash(); }
};
