#pragma once

// Subshifts of (K*G)^r given by finitely many generators v_1..v_m, their
// trajectories T_F = sum_{g in F} g.span{v_i}, and quotient trajectories
// (T_F + N)/N computed through the increasing approximations
// N_m = T_{E_m}(span{w_j}).

#include <entrolen/crossed_product.hpp>
#include <entrolen/fields.hpp>
#include <entrolen/groups.hpp>
#include <entrolen/linalg.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace entrolen {

template <CoefficientField F>
class SubshiftPresentation {
 public:
  SubshiftPresentation(CocycleData<F> cocycle, std::size_t rank, std::vector<FreeVector<F>> generators)
      : cocycle_(std::move(cocycle)), rank_(rank), generators_(std::move(generators)) {
    if (rank_ < 1) throw std::invalid_argument("presentation rank must be at least 1");
    for (const auto& v : generators_) {
      if (v.is_zero()) throw std::invalid_argument("presentation generators must be nonzero");
      for (const auto& [label, a] : v.entries()) {
        cocycle_.group().check(label.g);
        if (label.coord < 1 || label.coord > rank_) {
          throw std::invalid_argument("coordinate " + std::to_string(label.coord) + " outside 1.." +
                                      std::to_string(rank_));
        }
      }
    }
  }

  /// The Bernoulli shift (K*G)^r: generators e placed in each coordinate.
  static SubshiftPresentation bernoulli(const CocycleData<F>& c, std::size_t rank) {
    std::vector<FreeVector<F>> gens;
    for (std::uint32_t j = 1; j <= rank; ++j) {
      gens.push_back(embed(c.field(), unit_element(c), j));
    }
    return SubshiftPresentation(c, rank, std::move(gens));
  }

  /// The left ideal K*G x inside K*G.
  static SubshiftPresentation principal(const CocycleData<F>& c, const CrossedElement<F>& x) {
    std::vector<FreeVector<F>> gens;
    if (!x.is_zero()) gens.push_back(embed(c.field(), x, 1));
    return SubshiftPresentation(c, 1, std::move(gens));
  }

  /// Same ambient module, no generators.
  SubshiftPresentation zero_submodule() const { return SubshiftPresentation(cocycle_, rank_, {}); }

  const CocycleData<F>& cocycle() const { return cocycle_; }
  const F& field() const { return cocycle_.field(); }
  const GroupSpec& group() const { return cocycle_.group(); }
  std::size_t rank() const { return rank_; }
  const std::vector<FreeVector<F>>& generators() const { return generators_; }

  /// Group elements appearing in some generator.
  FiniteSubset support() const {
    std::vector<GroupElement> out;
    for (const auto& v : generators_) {
      for (const auto& e : v.entries()) out.push_back(e.first.g);
    }
    return FiniteSubset(std::move(out));
  }

 private:
  CocycleData<F> cocycle_;
  std::size_t rank_;
  std::vector<FreeVector<F>> generators_;
};

/// Translates act(g, v_i) for g in F.
template <CoefficientField F>
std::vector<FreeVector<F>> trajectory_vectors(const SubshiftPresentation<F>& p, const FiniteSubset& window) {
  std::vector<FreeVector<F>> out;
  out.reserve(window.size() * p.generators().size());
  for (const auto& g : window) {
    for (const auto& v : p.generators()) out.push_back(act(g, v, p.cocycle()));
  }
  return out;
}

template <CoefficientField F>
struct TrajectoryResult {
  FiniteSubset window;
  Subspace<F> subspace;
  std::size_t dim = 0;
};

template <CoefficientField F>
TrajectoryResult<F> trajectory(const SubshiftPresentation<F>& p, const FiniteSubset& window) {
  auto sub = span(p.field(), trajectory_vectors(p, window));
  const std::size_t d = sub.dim();
  return TrajectoryResult<F>{window, std::move(sub), d};
}

/// dim T_F without building the reduced basis.
template <CoefficientField F>
std::size_t trajectory_dim(const SubshiftPresentation<F>& p, const FiniteSubset& window) {
  return span_dim(p.field(), trajectory_vectors(p, window));
}

struct StabilizationConfig {
  std::size_t stability_window = 3;
  std::size_t max_steps = 16;

  void validate() const {
    if (stability_window < 1) throw std::invalid_argument("stability_window must be at least 1");
    if (max_steps < 1) throw std::invalid_argument("max_steps must be at least 1");
  }
};

/// Dimensions along 0 -> T_F ∩ N -> T_F -> (T_F + N)/N -> 0.
struct SesDims {
  std::size_t dim_T = 0;
  std::size_t dim_T_cap_N = 0;  // via Zassenhaus intersection with N_m
  std::size_t dim_image = 0;    // via dim(T_F + N_m) - dim N_m
  bool stabilized = true;
  std::size_t steps = 0;        // approximation steps taken
  std::size_t dim_N_approx = 0; // dim N_m at the last step

  bool exact() const { return dim_T == dim_T_cap_N + dim_image; }
};

template <CoefficientField F>
void require_same_ambient(const SubshiftPresentation<F>& M, const SubshiftPresentation<F>& N) {
  if (!(M.field() == N.field())) throw FieldMismatch("presentations over different fields");
  if (!(M.group() == N.group())) throw GroupMismatch("presentations over different groups");
  if (M.rank() != N.rank()) throw std::invalid_argument("presentations in free modules of different rank");
  if (M.cocycle().sigma_name() != N.cocycle().sigma_name() || M.cocycle().rho_name() != N.cocycle().rho_name()) {
    throw std::invalid_argument("presentations over different crossed products");
  }
}

namespace detail {

template <CoefficientField F>
struct ApproxStep {
  std::size_t cap = 0;
  std::size_t image = 0;
  std::size_t dim_N = 0;
};

template <CoefficientField F>
ApproxStep<F> approximation_step(const F& field, const std::vector<FreeVector<F>>& T,
                                 const std::vector<FreeVector<F>>& Nm) {
  std::vector<FreeVector<F>> all(T);
  all.insert(all.end(), Nm.begin(), Nm.end());
  const ColumnIndex cols = ColumnIndex::covering(all);
  const auto n = static_cast<std::uint32_t>(cols.size());

  // Zassenhaus: (t | t) then (w | 0); right-only rows span T ∩ N_m.
  EchelonForm<F> zass(field, 2 * static_cast<std::size_t>(n));
  for (const auto& t : T) {
    auto left = cols.to_row<F>(t);
    IndexRow<F> row = left;
    for (const auto& [c, a] : left) row.emplace_back(c + n, a);
    zass.insert(std::move(row));
  }
  for (const auto& w : Nm) zass.insert(cols.to_row<F>(w));
  std::size_t cap = 0;
  for (const auto& row : zass.rows()) {
    if (row.front().first >= n) ++cap;
  }

  EchelonForm<F> sum(field, n);
  for (const auto& w : Nm) sum.insert(cols.to_row<F>(w));
  const std::size_t dim_N = sum.rank();
  for (const auto& t : T) sum.insert(cols.to_row<F>(t));
  return {cap, sum.rank() - dim_N, dim_N};
}

}  // namespace detail

/// Windows E_m = ball(m) * F * supp(M) * supp(N)^{-1}.
template <CoefficientField F>
FiniteSubset approximation_window(const SubshiftPresentation<F>& M, const SubshiftPresentation<F>& N,
                                  const FiniteSubset& window, std::size_t m) {
  const GroupSpec& G = M.group();
  const FiniteSubset hull = set_product(G, set_product(G, window, M.support()), set_inverse(G, N.support()));
  return set_product(G, ball(G, m), hull);
}

template <CoefficientField F>
SesDims ses_dims(const SubshiftPresentation<F>& M, const SubshiftPresentation<F>& N, const FiniteSubset& window,
                 const StabilizationConfig& approx) {
  approx.validate();
  require_same_ambient(M, N);
  const F& field = M.field();
  const auto T = trajectory_vectors(M, window);
  SesDims out;
  out.dim_T = span_dim(field, T);
  if (N.generators().empty() || M.generators().empty()) {
    out.dim_image = out.dim_T;
    return out;
  }

  std::size_t unchanged = 0;
  std::size_t previous = 0;
  out.stabilized = false;
  for (std::size_t m = 0; m < approx.max_steps; ++m) {
    const auto Nm = trajectory_vectors(N, approximation_window(M, N, window, m));
    const auto step = detail::approximation_step(field, T, Nm);
    out.steps = m + 1;
    out.dim_T_cap_N = step.cap;
    out.dim_image = step.image;
    out.dim_N_approx = step.dim_N;
    if (m > 0 && step.cap == previous) {
      ++unchanged;
    } else {
      unchanged = 0;
    }
    previous = step.cap;
    if (unchanged >= approx.stability_window || step.cap == out.dim_T) {
      out.stabilized = true;
      break;
    }
  }
  return out;
}

struct QuotientDim {
  std::size_t value = 0;  // an upper bound when !stabilized
  bool stabilized = true;
  std::size_t steps = 0;
};

/// dim((T_F + N)/N).
template <CoefficientField F>
QuotientDim trajectory_dim_quotient(const SubshiftPresentation<F>& M, const SubshiftPresentation<F>& N,
                                    const FiniteSubset& window, const StabilizationConfig& approx) {
  const SesDims s = ses_dims(M, N, window, approx);
  return {s.dim_image, s.stabilized, s.steps};
}

// ---------------------------------------------------------------------------
// Text formats

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// One generator: ';'-separated terms "(g)|coeff|coord".
template <CoefficientField F>
std::string format_generator(const F& field, const FreeVector<F>& v) {
  std::string out;
  for (const auto& [label, a] : v.entries()) {
    if (!out.empty()) out += ";";
    out += label.g.to_string() + "|" + field.format(a) + "|" + std::to_string(label.coord);
  }
  return out;
}

template <CoefficientField F>
std::string serialize_presentation(const SubshiftPresentation<F>& p) {
  std::ostringstream os;
  os << "group=" << p.group().name() << "\n";
  os << "field=" << p.field().name() << "\n";
  if (p.cocycle().sigma_name() != "trivial") os << "sigma=" << p.cocycle().sigma_name() << "\n";
  if (p.cocycle().rho_name() != "trivial") os << "rho=" << p.cocycle().rho_name() << "\n";
  os << "rank=" << p.rank() << "\n";
  for (const auto& v : p.generators()) os << format_generator(p.field(), v) << "\n";
  return os.str();
}

namespace detail {

inline std::vector<std::pair<std::size_t, std::string>> split_with_offsets(std::string_view s, char sep) {
  std::vector<std::pair<std::size_t, std::string>> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(start, std::string(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

/// Parses one generator line; offsets are reported 1-based against the line.
template <CoefficientField F>
FreeVector<F> parse_generator_line(const F& field, const GroupSpec& G, std::size_t rank, std::string_view line,
                                   std::size_t line_no) {
  std::vector<typename FreeVector<F>::Entry> entries;
  for (const auto& [offset, term] : split_with_offsets(line, ';')) {
    const auto parts = split_with_offsets(term, '|');
    if (parts.size() != 3) {
      throw ParseError(line_no, offset + 1, "expected '(g)|coeff|coord', got '" + term + "'");
    }
    GroupElement g;
    typename F::value_type a;
    std::int64_t coord = 0;
    try {
      g = G.parse_element(parts[0].second);
    } catch (const std::exception& ex) {
      throw ParseError(line_no, offset + parts[0].first + 1, ex.what());
    }
    try {
      a = field.parse(parts[1].second);
    } catch (const std::exception& ex) {
      throw ParseError(line_no, offset + parts[1].first + 1, ex.what());
    }
    if (field.is_zero(a)) throw ParseError(line_no, offset + parts[1].first + 1, "zero coefficient");
    try {
      coord = parse_int(parts[2].second);
    } catch (const std::exception& ex) {
      throw ParseError(line_no, offset + parts[2].first + 1, ex.what());
    }
    if (coord < 1 || static_cast<std::size_t>(coord) > rank) {
      throw ParseError(line_no, offset + parts[2].first + 1,
                       "coordinate " + std::to_string(coord) + " outside 1.." + std::to_string(rank));
    }
    entries.emplace_back(ColumnLabel{g, static_cast<std::uint32_t>(coord)}, a);
  }
  auto v = FreeVector<F>::from_entries(field, std::move(entries));
  if (v.is_zero()) throw ParseError(line_no, 1, "generator sums to zero");
  return v;
}

struct PresentationHeader {
  std::string group, field, sigma = "trivial", rho = "trivial";
  std::size_t rank = 0;
  std::size_t group_line = 1, field_line = 1, cocycle_line = 1;
  std::vector<std::pair<std::size_t, std::string>> generator_lines;  // (line number, text)
};

inline PresentationHeader read_header(std::string_view text) {
  PresentationHeader h;
  bool have_rank = false;
  std::size_t line_no = 0;
  for (const auto& [offset, raw] : split_with_offsets(text, '\n')) {
    ++line_no;
    std::string line = raw;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq != std::string::npos && t[0] != '(') {
      const std::string key = trim(std::string_view(line).substr(0, eq));
      const std::string value = trim(std::string_view(line).substr(eq + 1));
      if (!h.generator_lines.empty()) throw ParseError(line_no, 1, "header line after generators");
      if (key == "group") {
        h.group = value;
        h.group_line = line_no;
      } else if (key == "field") {
        h.field = value;
        h.field_line = line_no;
      } else if (key == "sigma") {
        h.sigma = value;
        h.cocycle_line = line_no;
      } else if (key == "rho") {
        h.rho = value;
        h.cocycle_line = line_no;
      } else if (key == "rank") {
        try {
          const auto r = parse_int(value);
          if (r < 1) throw std::invalid_argument("rank must be positive");
          h.rank = static_cast<std::size_t>(r);
        } catch (const std::exception& ex) {
          throw ParseError(line_no, eq + 2, ex.what());
        }
        have_rank = true;
      } else {
        throw ParseError(line_no, 1, "unknown header key '" + key + "'");
      }
      continue;
    }
    h.generator_lines.emplace_back(line_no, line);
  }
  if (h.group.empty()) throw ParseError(line_no, 1, "missing header 'group='");
  if (h.field.empty()) throw ParseError(line_no, 1, "missing header 'field='");
  if (!have_rank) throw ParseError(line_no, 1, "missing header 'rank='");
  return h;
}

}  // namespace detail

/// Parses a presentation whose field is already known to be F.
template <CoefficientField F>
SubshiftPresentation<F> parse_presentation_as(const F& field, std::string_view text) {
  const auto h = detail::read_header(text);
  const GroupSpec G = [&] {
    try {
      return GroupSpec::parse(h.group);
    } catch (const std::exception& ex) {
      throw ParseError(h.group_line, 1, ex.what());
    }
  }();
  const auto c = [&] {
    try {
      return make_cocycle(field, G, h.sigma, h.rho);
    } catch (const std::exception& ex) {
      throw ParseError(h.cocycle_line, 1, ex.what());
    }
  }();
  std::vector<FreeVector<F>> gens;
  for (const auto& [line_no, line] : h.generator_lines) {
    gens.push_back(detail::parse_generator_line(field, G, h.rank, line, line_no));
  }
  return SubshiftPresentation<F>(c, h.rank, std::move(gens));
}

using AnyPresentation =
    std::variant<SubshiftPresentation<PrimeField>, SubshiftPresentation<QuadraticField>,
                 SubshiftPresentation<RationalField>>;

inline AnyPresentation parse_presentation(std::string_view text) {
  const auto h = detail::read_header(text);
  const AnyField field = [&] {
    try {
      return parse_field(h.field);
    } catch (const std::exception& ex) {
      throw ParseError(h.field_line, 1, ex.what());
    }
  }();
  return std::visit([&](const auto& f) -> AnyPresentation { return parse_presentation_as(f, text); }, field);
}

inline AnyPresentation parse_presentation_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open presentation file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_presentation(buf.str());
}

/// Command-line generator list: generators separated by ';', each made of
/// one or more "element|coord" components joined by '&', where element is
/// a crossed-product element such as "1*(0) + 2*(1)". "|coord" may be
/// omitted in rank 1.
template <CoefficientField F>
std::vector<FreeVector<F>> parse_generator_list(const F& field, const GroupSpec& G, std::size_t rank,
                                                std::string_view text) {
  std::vector<FreeVector<F>> gens;
  if (detail::trim(text).empty()) return gens;
  for (const auto& [offset, gen] : detail::split_with_offsets(text, ';')) {
    std::vector<typename FreeVector<F>::Entry> entries;
    for (const auto& [off2, comp] : detail::split_with_offsets(gen, '&')) {
      const auto bar = comp.rfind('|');
      std::int64_t coord = 1;
      std::string elem = comp;
      if (bar != std::string::npos) {
        coord = detail::parse_int(std::string_view(comp).substr(bar + 1));
        elem = comp.substr(0, bar);
      } else if (rank != 1) {
        throw std::invalid_argument("generator component '" + comp + "' needs '|coord' in rank " +
                                    std::to_string(rank));
      }
      if (coord < 1 || static_cast<std::size_t>(coord) > rank) {
        throw std::invalid_argument("coordinate " + std::to_string(coord) + " outside 1.." + std::to_string(rank));
      }
      const auto x = parse_crossed(field, G, elem);
      const FreeVector<F> placed = embed(field, x, static_cast<std::uint32_t>(coord));
      for (const auto& e : placed.entries()) entries.push_back(e);
    }
    auto v = FreeVector<F>::from_entries(field, std::move(entries));
    if (v.is_zero()) throw std::invalid_argument("generator '" + detail::trim(gen) + "' is zero");
    gens.push_back(std::move(v));
  }
  return gens;
}

}  // namespace entrolen
