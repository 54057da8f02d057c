#pragma once

// Exact sparse linear algebra over a CoefficientField.
//
// Vectors are keyed by ColumnLabel = (group element, coordinate). A
// computation first fixes a ColumnIndex (the sorted union of all labels it
// touches), converts to index-keyed rows, and eliminates. Pivots are chosen
// by smallest column, so the reduced basis depends only on the span.

#include <entrolen/fields.hpp>
#include <entrolen/groups.hpp>

#include <algorithm>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace entrolen {

struct ColumnLabel {
  GroupElement g;
  std::uint32_t coord = 0;
  friend bool operator==(const ColumnLabel&, const ColumnLabel&) = default;
  friend std::strong_ordering operator<=>(const ColumnLabel& a, const ColumnLabel& b) {
    if (auto c = a.g <=> b.g; c != 0) return c;
    return a.coord <=> b.coord;
  }
};

struct ColumnLabelHash {
  std::size_t operator()(const ColumnLabel& l) const { return l.g.hash() * 1000003u + l.coord; }
};

/// Sparse vector over labels. Entries sorted by label, no zero values.
template <CoefficientField F>
class SparseVector {
 public:
  using value_type = typename F::value_type;
  using Entry = std::pair<ColumnLabel, value_type>;

  SparseVector() = default;

  /// Sums duplicate labels and drops zeros.
  static SparseVector from_entries(const F& field, std::vector<Entry> entries) {
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Entry& a, const Entry& b) { return a.first < b.first; });
    SparseVector v;
    for (auto& e : entries) {
      if (!v.entries_.empty() && v.entries_.back().first == e.first) {
        v.entries_.back().second = field.add(v.entries_.back().second, e.second);
      } else {
        v.entries_.push_back(std::move(e));
      }
    }
    std::erase_if(v.entries_, [&](const Entry& e) { return field.is_zero(e.second); });
    return v;
  }

  const std::vector<Entry>& entries() const { return entries_; }
  bool is_zero() const { return entries_.empty(); }
  std::size_t support_size() const { return entries_.size(); }

  value_type at(const F& field, const ColumnLabel& label) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), label,
                               [](const Entry& e, const ColumnLabel& l) { return e.first < l; });
    return (it != entries_.end() && it->first == label) ? it->second : field.zero();
  }

  friend bool operator==(const SparseVector& a, const SparseVector& b) { return a.entries_ == b.entries_; }

 private:
  std::vector<Entry> entries_;
};

template <CoefficientField F>
SparseVector<F> add(const F& field, const SparseVector<F>& a, const SparseVector<F>& b) {
  auto entries = a.entries();
  entries.insert(entries.end(), b.entries().begin(), b.entries().end());
  return SparseVector<F>::from_entries(field, std::move(entries));
}

template <CoefficientField F>
SparseVector<F> scale(const F& field, const typename F::value_type& s, const SparseVector<F>& v) {
  std::vector<typename SparseVector<F>::Entry> entries;
  for (const auto& [l, a] : v.entries()) entries.emplace_back(l, field.mul(s, a));
  return SparseVector<F>::from_entries(field, std::move(entries));
}

/// Dense coordinates (a_0, ..., a_{n-1}) placed at labels (e, 0..n-1).
template <CoefficientField F>
SparseVector<F> dense_vector(const F& field, const GroupSpec& G, const std::vector<typename F::value_type>& values) {
  std::vector<typename SparseVector<F>::Entry> entries;
  for (std::size_t i = 0; i < values.size(); ++i) {
    entries.emplace_back(ColumnLabel{G.identity(), static_cast<std::uint32_t>(i)}, values[i]);
  }
  return SparseVector<F>::from_entries(field, std::move(entries));
}

/// Row keyed by column index; sorted, no zeros.
template <CoefficientField F>
using IndexRow = std::vector<std::pair<std::uint32_t, typename F::value_type>>;

/// a + s * b.
template <CoefficientField F>
IndexRow<F> axpy(const F& field, const IndexRow<F>& a, const typename F::value_type& s, const IndexRow<F>& b) {
  IndexRow<F> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, field.mul(s, b[j].second));
      ++j;
    } else {
      auto v = field.add(a[i].second, field.mul(s, b[j].second));
      if (!field.is_zero(v)) out.emplace_back(a[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

/// The ordered column universe of one computation.
class ColumnIndex {
 public:
  ColumnIndex() = default;
  explicit ColumnIndex(std::vector<ColumnLabel> labels) : labels_(std::move(labels)) {
    std::sort(labels_.begin(), labels_.end());
    labels_.erase(std::unique(labels_.begin(), labels_.end()), labels_.end());
    if (!labels_.empty()) {
      const auto& g0 = labels_.front().g;
      for (const auto& l : labels_) {
        if (l.g.kind() != g0.kind() || l.g.arity() != g0.arity()) {
          throw GroupMismatch("inconsistent column labels: " + g0.to_string() + " vs " + l.g.to_string());
        }
      }
    }
    lookup_.reserve(labels_.size());
    for (std::uint32_t i = 0; i < labels_.size(); ++i) lookup_.emplace(labels_[i], i);
  }

  template <CoefficientField F>
  static ColumnIndex covering(const std::vector<SparseVector<F>>& vectors) {
    std::vector<ColumnLabel> labels;
    for (const auto& v : vectors) {
      for (const auto& e : v.entries()) labels.push_back(e.first);
    }
    return ColumnIndex(std::move(labels));
  }

  std::size_t size() const { return labels_.size(); }
  const std::vector<ColumnLabel>& labels() const { return labels_; }
  const ColumnLabel& label(std::uint32_t i) const { return labels_[i]; }

  bool has(const ColumnLabel& l) const { return lookup_.count(l) != 0; }
  std::uint32_t index_of(const ColumnLabel& l) const {
    auto it = lookup_.find(l);
    if (it == lookup_.end()) throw std::out_of_range("label outside column universe");
    return it->second;
  }

  template <CoefficientField F>
  IndexRow<F> to_row(const SparseVector<F>& v) const {
    IndexRow<F> row;
    row.reserve(v.support_size());
    for (const auto& [l, a] : v.entries()) row.emplace_back(index_of(l), a);
    // labels are sorted and the index is monotone, so the row is sorted
    return row;
  }

  template <CoefficientField F>
  SparseVector<F> to_vector(const F& field, const IndexRow<F>& row) const {
    std::vector<typename SparseVector<F>::Entry> entries;
    entries.reserve(row.size());
    for (const auto& [c, a] : row) entries.emplace_back(labels_[c], a);
    return SparseVector<F>::from_entries(field, std::move(entries));
  }

 private:
  std::vector<ColumnLabel> labels_;
  std::unordered_map<ColumnLabel, std::uint32_t, ColumnLabelHash> lookup_;
};

/// Incremental row echelon form with monic pivots at the smallest column.
template <CoefficientField F>
class EchelonForm {
 public:
  using Row = IndexRow<F>;

  EchelonForm(F field, std::size_t ncols) : field_(std::move(field)), pivot_row_(ncols, -1) {}

  std::size_t rank() const { return rows_.size(); }
  std::size_t columns() const { return pivot_row_.size(); }
  const std::vector<Row>& rows() const { return rows_; }
  bool has_pivot(std::uint32_t col) const { return pivot_row_[col] >= 0; }

  /// Reduces the leading entries of row against existing pivots.
  Row reduce(Row row) const {
    while (!row.empty()) {
      const auto [col, lead] = row.front();
      const int p = pivot_row_[col];
      if (p < 0) break;
      row = axpy(field_, row, field_.neg(lead), rows_[static_cast<std::size_t>(p)]);
    }
    return row;
  }

  /// Adds row to the span. Returns true if the rank grew.
  bool insert(Row row) {
    row = reduce(std::move(row));
    if (row.empty()) return false;
    const auto inv = field_.inv(row.front().second);
    for (auto& e : row) e.second = field_.mul(inv, e.second);
    pivot_row_[row.front().first] = static_cast<int>(rows_.size());
    rows_.push_back(std::move(row));
    return true;
  }

  bool contains(Row row) const { return reduce(std::move(row)).empty(); }

  /// Reduced row echelon form, rows ordered by increasing pivot.
  std::vector<Row> reduced_rows() const {
    std::vector<std::size_t> order(rows_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return rows_[a].front().first > rows_[b].front().first; });
    std::vector<Row> reduced(rows_.size());
    std::vector<int> done(pivot_row_.size(), -1);  // col -> slot in reduced
    for (std::size_t slot = 0; slot < order.size(); ++slot) {
      Row row = rows_[order[slot]];
      // Clear every non-leading entry sitting on a pivot of an already
      // reduced row (those rows have higher pivots and zeros on all other pivots).
      std::vector<std::pair<std::uint32_t, typename F::value_type>> hits;
      for (std::size_t k = 1; k < row.size(); ++k) {
        if (done[row[k].first] >= 0) hits.push_back(row[k]);
      }
      for (const auto& [col, a] : hits) {
        row = axpy(field_, row, field_.neg(a), reduced[static_cast<std::size_t>(done[col])]);
      }
      done[row.front().first] = static_cast<int>(slot);
      reduced[slot] = std::move(row);
    }
    std::reverse(reduced.begin(), reduced.end());
    return reduced;
  }

 private:
  F field_;
  std::vector<int> pivot_row_;
  std::vector<Row> rows_;
};

/// Finite-dimensional subspace with a reduced echelon basis over a fixed,
/// ordered column universe.
template <CoefficientField F>
class Subspace {
 public:
  using Row = IndexRow<F>;

  Subspace(F field, ColumnIndex columns, std::vector<Row> rref)
      : field_(std::move(field)), columns_(std::move(columns)), basis_(std::move(rref)),
        pivot_row_(columns_.size(), -1) {
    for (std::size_t i = 0; i < basis_.size(); ++i) pivot_row_[basis_[i].front().first] = static_cast<int>(i);
  }

  const F& field() const { return field_; }
  const ColumnIndex& columns() const { return columns_; }
  const std::vector<Row>& basis_rows() const { return basis_; }
  std::size_t dim() const { return basis_.size(); }

  std::vector<SparseVector<F>> basis() const {
    std::vector<SparseVector<F>> out;
    out.reserve(basis_.size());
    for (const auto& r : basis_) out.push_back(columns_.to_vector(field_, r));
    return out;
  }

  /// v minus its projection along the pivot columns; zero iff v lies in the span.
  Row residual(const Row& v) const {
    Row out = v;
    for (const auto& [c, a] : v) {
      const int p = pivot_row_[c];
      if (p >= 0) out = axpy(field_, out, field_.neg(a), basis_[static_cast<std::size_t>(p)]);
    }
    return out;
  }

  std::vector<std::uint32_t> pivots() const {
    std::vector<std::uint32_t> out;
    for (const auto& r : basis_) out.push_back(r.front().first);
    return out;
  }

 private:
  F field_;
  ColumnIndex columns_;
  std::vector<Row> basis_;
  std::vector<int> pivot_row_;
};

template <CoefficientField F>
std::vector<SparseVector<F>> nonzero(const std::vector<SparseVector<F>>& vectors) {
  std::vector<SparseVector<F>> out;
  for (const auto& v : vectors) {
    if (!v.is_zero()) out.push_back(v);
  }
  return out;
}

/// Span of vectors over the given column universe (must cover their supports).
template <CoefficientField F>
Subspace<F> span_in(const F& field, const ColumnIndex& columns, const std::vector<SparseVector<F>>& vectors) {
  EchelonForm<F> ech(field, columns.size());
  for (const auto& v : vectors) ech.insert(columns.to_row<F>(v));
  return Subspace<F>(field, columns, ech.reduced_rows());
}

template <CoefficientField F>
Subspace<F> span(const F& field, const std::vector<SparseVector<F>>& vectors) {
  return span_in(field, ColumnIndex::covering(vectors), vectors);
}

/// Rank without materializing a reduced basis.
template <CoefficientField F>
std::size_t span_dim(const F& field, const std::vector<SparseVector<F>>& vectors) {
  const ColumnIndex columns = ColumnIndex::covering(vectors);
  EchelonForm<F> ech(field, columns.size());
  for (const auto& v : vectors) ech.insert(columns.to_row<F>(v));
  return ech.rank();
}

namespace detail {

template <CoefficientField F>
void require_same_field(const Subspace<F>& U, const Subspace<F>& V) {
  if (!(U.field() == V.field())) throw FieldMismatch("subspaces over different fields");
}

template <CoefficientField F>
ColumnIndex merged_columns(const Subspace<F>& U, const Subspace<F>& V) {
  std::vector<ColumnLabel> labels(U.columns().labels());
  labels.insert(labels.end(), V.columns().labels().begin(), V.columns().labels().end());
  return ColumnIndex(std::move(labels));
}

}  // namespace detail

/// U + V.
template <CoefficientField F>
Subspace<F> sum(const Subspace<F>& U, const Subspace<F>& V) {
  detail::require_same_field(U, V);
  auto vectors = U.basis();
  auto more = V.basis();
  vectors.insert(vectors.end(), more.begin(), more.end());
  return span_in(U.field(), detail::merged_columns(U, V), vectors);
}

/// U ∩ V by Zassenhaus: eliminate rows (u | u) and (v | 0) over the doubled
/// universe; rows whose left half vanishes carry a basis of the intersection.
template <CoefficientField F>
Subspace<F> intersect(const Subspace<F>& U, const Subspace<F>& V) {
  detail::require_same_field(U, V);
  const F& field = U.field();
  const ColumnIndex cols = detail::merged_columns(U, V);
  const auto n = static_cast<std::uint32_t>(cols.size());
  EchelonForm<F> ech(field, 2 * static_cast<std::size_t>(n));
  for (const auto& u : U.basis()) {
    auto left = cols.to_row<F>(u);
    IndexRow<F> row = left;
    for (const auto& [c, a] : left) row.emplace_back(c + n, a);
    ech.insert(std::move(row));
  }
  for (const auto& v : V.basis()) ech.insert(cols.to_row<F>(v));

  EchelonForm<F> meet(field, n);
  for (const auto& row : ech.rows()) {
    if (row.front().first < n) continue;
    IndexRow<F> right;
    right.reserve(row.size());
    for (const auto& [c, a] : row) right.emplace_back(c - n, a);
    meet.insert(std::move(right));
  }
  return Subspace<F>(field, cols, meet.reduced_rows());
}

/// dim((U + W) / W) = dim(U + W) - dim W.
template <CoefficientField F>
std::size_t quotient_dim(const Subspace<F>& U, const Subspace<F>& W) {
  return sum(U, W).dim() - W.dim();
}

template <CoefficientField F>
bool membership(const SparseVector<F>& v, const Subspace<F>& U) {
  if (v.is_zero()) return true;
  for (const auto& e : v.entries()) {
    if (!U.columns().has(e.first)) return false;
  }
  return U.residual(U.columns().template to_row<F>(v)).empty();
}

}  // namespace entrolen
