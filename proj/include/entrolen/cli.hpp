#pragma once

// Command-line plumbing: a flat key=value run configuration (file or flags,
// flags win) and a dispatcher that writes CSV / key=value reports.
//
// Exit codes: 0 success, 1 a check ran and reported failure, 2 invalid
// configuration or input, 3 budget exhausted (partial output written).

#include <entrolen/entropy.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace entrolen::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitBudget = 3;

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> names = {"entropy",    "quotient-entropy", "addition-check",  "zerodiv",
                                                 "tile",       "folner-ratios",    "validate-cocycle"};
  return names;
}

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string command;
  std::string group = "Z";
  std::string field = "gf2";
  std::size_t rank = 1;
  std::string gen;           // generator list, see parse_generator_list
  std::string presentation;  // presentation file; overrides group/field/rank/gen
  std::string sub_gen;       // generators of the submodule N
  std::string sub;           // presentation file of N
  std::string scheme = "standard";
  std::size_t n_max = 10;
  Rational eps{1, 10};
  Rational tol{1, 20};
  std::size_t radius = 4;
  std::size_t stability_window = 3;
  std::size_t max_steps = 16;
  std::string output;
  std::uint64_t seed = 0;
  std::string elem;
  std::string sigma = "trivial";
  std::string rho = "trivial";
  std::vector<std::size_t> tiles = {2};
  std::size_t target = 10;
  std::string boundary_set = "ball:1";
  std::size_t sample_budget = 4096;
  double time_budget = 0;  // seconds, 0 = unlimited

  /// Known keys; '_' and '-' are interchangeable.
  static const std::vector<std::string>& keys() {
    static const std::vector<std::string> k = {
        "command", "group",  "field", "rank",  "gen",     "presentation", "sub-gen",          "sub",
        "scheme",  "nmax",   "eps",   "tol",   "radius",  "stability-window", "max-steps",    "output",
        "seed",    "elem",   "sigma", "rho",   "tiles",   "target",       "boundary-set",     "sample-budget",
        "time-budget"};
    return k;
  }

  static std::string normalize_key(std::string_view key) {
    std::string k = detail::trim(key);
    for (char& ch : k) {
      if (ch == '_') ch = '-';
    }
    if (k == "n-max") k = "nmax";
    return k;
  }

  void set(std::string_view raw_key, std::string_view raw_value) {
    const std::string key = normalize_key(raw_key);
    const std::string value = detail::trim(raw_value);
    auto count = [&](std::size_t lo, std::size_t hi) {
      std::int64_t v = 0;
      try {
        v = detail::parse_int(value);
      } catch (const std::exception&) {
        throw ConfigError(key + ": expected an integer, got '" + value + "'");
      }
      if (v < static_cast<std::int64_t>(lo) || v > static_cast<std::int64_t>(hi)) {
        throw ConfigError(key + " must lie in " + std::to_string(lo) + ".." + std::to_string(hi));
      }
      return static_cast<std::size_t>(v);
    };
    auto fraction = [&] {
      try {
        return parse_rational(value);
      } catch (const std::exception&) {
        throw ConfigError(key + ": expected a rational such as 1/10, got '" + value + "'");
      }
    };
    if (key == "command") {
      command = value;
    } else if (key == "group") {
      group = value;
    } else if (key == "field") {
      field = value;
    } else if (key == "rank") {
      rank = count(1, 64);
    } else if (key == "gen") {
      gen = value;
    } else if (key == "presentation") {
      presentation = value;
    } else if (key == "sub-gen") {
      sub_gen = value;
    } else if (key == "sub") {
      sub = value;
    } else if (key == "scheme") {
      scheme = value;
    } else if (key == "nmax") {
      n_max = count(1, 500);
    } else if (key == "eps") {
      eps = fraction();
      if (eps <= 0 || eps > Rational(1, 4)) throw ConfigError("eps must lie in (0, 1/4]");
    } else if (key == "tol") {
      tol = fraction();
      if (tol < 0) throw ConfigError("tol must be nonnegative");
    } else if (key == "radius") {
      radius = count(0, 64);
    } else if (key == "stability-window") {
      stability_window = count(1, 64);
    } else if (key == "max-steps") {
      max_steps = count(1, 256);
    } else if (key == "output") {
      output = value;
    } else if (key == "seed") {
      try {
        std::size_t pos = 0;
        seed = std::stoull(value, &pos);
        if (pos != value.size() || value.front() == '-') throw std::invalid_argument(value);
      } catch (const std::exception&) {
        throw ConfigError("seed: expected a nonnegative integer, got '" + value + "'");
      }
    } else if (key == "elem") {
      elem = value;
    } else if (key == "sigma") {
      sigma = value;
    } else if (key == "rho") {
      rho = value;
    } else if (key == "tiles") {
      tiles.clear();
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) {
        const std::string t = detail::trim(item);
        if (t.empty()) continue;
        std::int64_t v = 0;
        try {
          v = detail::parse_int(t);
        } catch (const std::exception&) {
          throw ConfigError("tiles: expected comma-separated indices, got '" + value + "'");
        }
        if (v < 0 || v > 500) throw ConfigError("tile indices must lie in 0..500");
        tiles.push_back(static_cast<std::size_t>(v));
      }
      if (tiles.empty()) throw ConfigError("tiles: at least one index required");
    } else if (key == "target") {
      target = count(0, 500);
    } else if (key == "boundary-set") {
      boundary_set = value;
    } else if (key == "sample-budget") {
      sample_budget = count(1, 10'000'000);
    } else if (key == "time-budget") {
      try {
        std::size_t pos = 0;
        time_budget = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
      } catch (const std::exception&) {
        throw ConfigError("time-budget: expected seconds, got '" + value + "'");
      }
      if (time_budget < 0) throw ConfigError("time-budget must be nonnegative");
    } else {
      throw ConfigError("unknown key '" + std::string(raw_key) + "'");
    }
  }

  void validate() const {
    bool known = false;
    for (const auto& c : commands()) known = known || c == command;
    if (!known) throw ConfigError("unknown command '" + command + "'");
  }

  StabilizationConfig approx() const { return {stability_window, max_steps}; }
};

/// Parses key=value lines ('#' comments, blank lines allowed) into cfg.
inline void apply_config_text(RunConfig& cfg, std::string_view text) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    if (!detail::trim(line).empty()) {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw ParseError(line_no, 1, "expected key=value");
      try {
        cfg.set(line.substr(0, eq), line.substr(eq + 1));
      } catch (const ConfigError& ex) {
        throw ParseError(line_no, 1, ex.what());
      }
    }
    if (end == text.size()) break;
    start = end + 1;
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// File values first, then flags; ENTROLEN_SEED overrides the seed last.
inline RunConfig build_config(const std::optional<std::string>& config_path,
                              const std::vector<std::pair<std::string, std::string>>& flags) {
  RunConfig cfg;
  if (config_path) {
    try {
      apply_config_text(cfg, read_file(*config_path));
    } catch (const ParseError& ex) {
      throw ParseError(ex.line(), ex.column(), *config_path + ": " + ex.what());
    }
  }
  for (const auto& [k, v] : flags) cfg.set(k, v);
  if (const char* env = std::getenv("ENTROLEN_SEED"); env != nullptr && *env != '\0') cfg.set("seed", env);
  cfg.validate();
  return cfg;
}

namespace detail {

class Deadline {
 public:
  explicit Deadline(double seconds) : seconds_(seconds), start_(std::chrono::steady_clock::now()) {}
  bool expired() const {
    if (seconds_ <= 0) return false;
    const std::chrono::duration<double> d = std::chrono::steady_clock::now() - start_;
    return d.count() > seconds_;
  }

 private:
  double seconds_;
  std::chrono::steady_clock::time_point start_;
};

struct Outcome {
  std::string text;
  int status = kExitOk;
};

template <CoefficientField F>
SubshiftPresentation<F> presentation_from_flags(const F& field, const RunConfig& cfg, const std::string& gens) {
  const GroupSpec G = GroupSpec::parse(cfg.group);
  const auto c = make_cocycle(field, G, cfg.sigma, cfg.rho);
  return SubshiftPresentation<F>(c, cfg.rank, parse_generator_list(field, G, cfg.rank, gens));
}

/// The main presentation M, from a file or from group/field/rank/gen.
inline AnyPresentation main_presentation(const RunConfig& cfg) {
  if (!cfg.presentation.empty()) return parse_presentation(read_file(cfg.presentation));
  if (cfg.gen.empty()) throw ConfigError("need --gen or --presentation");
  return std::visit([&](const auto& f) -> AnyPresentation { return presentation_from_flags(f, cfg, cfg.gen); },
                    parse_field(cfg.field));
}

/// The submodule N in the ambient module of M.
template <CoefficientField F>
SubshiftPresentation<F> sub_presentation(const SubshiftPresentation<F>& M, const RunConfig& cfg) {
  if (!cfg.sub.empty()) {
    auto any = parse_presentation(read_file(cfg.sub));
    auto* N = std::get_if<SubshiftPresentation<F>>(&any);
    if (N == nullptr) throw ConfigError("submodule presentation uses a different field type");
    require_same_ambient(M, *N);
    return *N;
  }
  if (cfg.sub_gen.empty()) return M.zero_submodule();
  return SubshiftPresentation<F>(M.cocycle(), M.rank(),
                                 parse_generator_list(M.field(), M.group(), M.rank(), cfg.sub_gen));
}

inline FolnerScheme scheme_for(const GroupSpec& G, const RunConfig& cfg) { return FolnerScheme::parse(G, cfg.scheme); }

template <CoefficientField F>
Outcome run_entropy(const SubshiftPresentation<F>& p, const RunConfig& cfg) {
  const FolnerScheme scheme = scheme_for(p.group(), cfg);
  const Deadline deadline(cfg.time_budget);
  EntropyEstimate est;
  Outcome out;
  for (std::size_t n = 1; n <= cfg.n_max; ++n) {
    if (deadline.expired()) {
      out.status = kExitBudget;
      break;
    }
    const FiniteSubset Fn = scheme.set(n);
    const std::size_t d = trajectory_dim(p, Fn);
    est.ratios.push_back({n, Fn.size(), d, Rational(BigInt(d), BigInt(Fn.size())), true});
  }
  out.text = estimate_csv(est);
  return out;
}

template <CoefficientField F>
Outcome run_quotient_entropy(const SubshiftPresentation<F>& M, const RunConfig& cfg) {
  const auto N = sub_presentation(M, cfg);
  const FolnerScheme scheme = scheme_for(M.group(), cfg);
  const Deadline deadline(cfg.time_budget);
  Outcome out;
  std::ostringstream os;
  os << "n,folner_size,quotient_dim,ratio,stabilized\n";
  for (std::size_t n = 1; n <= cfg.n_max; ++n) {
    if (deadline.expired()) {
      out.status = kExitBudget;
      break;
    }
    const FiniteSubset Fn = scheme.set(n);
    const QuotientDim q = trajectory_dim_quotient(M, N, Fn, cfg.approx());
    os << n << "," << Fn.size() << "," << q.value << ","
       << to_fraction_string(Rational(BigInt(q.value), BigInt(Fn.size()))) << "," << (q.stabilized ? "true" : "false")
       << "\n";
    if (!q.stabilized) out.status = kExitBudget;
  }
  out.text = os.str();
  return out;
}

template <CoefficientField F>
Outcome run_addition_check(const SubshiftPresentation<F>& M, const RunConfig& cfg) {
  const auto N = sub_presentation(M, cfg);
  const AdditionReport rep = addition_check(M, N, scheme_for(M.group(), cfg), cfg.n_max, cfg.tol, cfg.approx());
  std::ostringstream os;
  os << "e_M=" << to_fraction_string(rep.e_M) << "\n";
  os << "e_N=" << to_fraction_string(rep.e_N) << "\n";
  os << "e_Q=" << to_fraction_string(rep.e_Q) << "\n";
  os << "discrepancy=" << to_fraction_string(rep.discrepancy) << "\n";
  os << "tol=" << to_fraction_string(rep.tol) << "\n";
  os << "identities=" << (rep.identities_ok ? "true" : "false") << "\n";
  os << "stabilized=" << (rep.all_stabilized ? "true" : "false") << "\n";
  os << "pass=" << (rep.pass ? "true" : "false") << "\n";
  os << "\n";
  os << "n,dim_T,dim_T_cap_N,dim_image,dim_K1,ses_exact,stabilized\n";
  for (const auto& r : rep.rows) {
    os << r.n << "," << r.dims.dim_T << "," << r.dims.dim_T_cap_N << "," << r.dims.dim_image << "," << r.dim_K1 << ","
       << (r.dims.exact() ? "true" : "false") << "," << (r.dims.stabilized ? "true" : "false") << "\n";
  }
  Outcome out{os.str(), kExitOk};
  if (!rep.all_stabilized) {
    out.status = kExitBudget;
  } else if (!rep.pass) {
    out.status = kExitCheckFailed;
  }
  return out;
}

template <CoefficientField F>
Outcome run_zerodiv(const F& field, const RunConfig& cfg) {
  if (cfg.elem.empty()) throw ConfigError("zerodiv needs --elem");
  const GroupSpec G = GroupSpec::parse(cfg.group);
  const auto c = make_cocycle(field, G, cfg.sigma, cfg.rho);
  const auto x = parse_crossed(field, G, cfg.elem);
  if (x.is_zero()) throw ConfigError("zerodiv needs a nonzero element");
  const auto v = zero_divisor_scan(x, c, FolnerScheme::parse(G, cfg.scheme), cfg.n_max, cfg.radius, cfg.approx());
  return {format_verdict(field, x, v), kExitOk};
}

/// "rho=mutate:<g>:<value>" overwrites rho(e, g) on a trivial base cocycle.
template <CoefficientField F>
CocycleData<F> cocycle_for_validation(const F& field, const GroupSpec& G, const RunConfig& cfg) {
  const std::string prefix = "mutate:";
  if (cfg.rho.rfind(prefix, 0) != 0) return make_cocycle(field, G, cfg.sigma, cfg.rho);
  const std::string rest = cfg.rho.substr(prefix.size());
  const auto colon = rest.rfind(':');
  if (colon == std::string::npos) throw ConfigError("rho=mutate:<element>:<value>");
  const GroupElement target = G.parse_element(rest.substr(0, colon));
  return make_cocycle(field, G, cfg.sigma, "trivial").with_mutated_rho(target, field.parse(rest.substr(colon + 1)));
}

template <CoefficientField F>
Outcome run_validate_cocycle(const F& field, const RunConfig& cfg) {
  const GroupSpec G = GroupSpec::parse(cfg.group);
  const auto c = cocycle_for_validation(field, G, cfg);
  const CocycleReport rep = validate_cocycle(c, cfg.sample_budget, cfg.seed);
  std::ostringstream os;
  os << (rep.pass ? "pass" : "fail") << "\n";
  os << "field=" << field.name() << "\n";
  os << "group=" << G.name() << "\n";
  os << "sigma=" << c.sigma_name() << "\n";
  os << "rho=" << c.rho_name() << "\n";
  if (!rep.pass) {
    os << "failed_condition=" << rep.failed_condition << "\n";
    os << "witness=";
    for (std::size_t i = 0; i < rep.witness.size(); ++i) os << (i ? ";" : "") << rep.witness[i].to_string();
    os << "\n";
    if (!rep.witness_scalar.empty()) os << "witness_scalar=" << rep.witness_scalar << "\n";
  }
  os << "triples_checked=" << rep.triples_checked << "\n";
  os << "associativity_checked=" << rep.associativity_checked << "\n";
  os << "seed=" << cfg.seed << "\n";
  return {os.str(), rep.pass ? kExitOk : kExitCheckFailed};
}

inline Outcome run_tile(const RunConfig& cfg) {
  const GroupSpec G = GroupSpec::parse(cfg.group);
  const FolnerScheme scheme = FolnerScheme::parse(G, cfg.scheme);
  const FiniteSubset A = scheme.set(cfg.target);
  std::vector<FiniteSubset> tiles;
  for (std::size_t k : cfg.tiles) tiles.push_back(scheme.set(k));
  const auto t = greedy_quasi_tile(G, A, tiles, cfg.eps);
  if (!t) return {"greedy,false,0/1\n", kExitCheckFailed};
  const TilingReport rep = check_quasi_tiling(G, A, *t);
  std::ostringstream os;
  for (const auto& c : rep.conditions) {
    os << c.name << "," << (c.pass ? "true" : "false") << "," << to_fraction_string(c.ratio) << "\n";
  }
  os << format_tiling(*t);
  return {os.str(), rep.pass() ? kExitOk : kExitCheckFailed};
}

/// "ball:<r>" or an explicit list "(-1);(0);(1)".
inline FiniteSubset parse_boundary_set(const GroupSpec& G, const std::string& text) {
  if (text.rfind("ball:", 0) == 0) {
    const std::int64_t r = entrolen::detail::parse_int(std::string_view(text).substr(5));
    if (r < 0 || r > 16) throw ConfigError("boundary-set ball radius must lie in 0..16");
    return ball(G, static_cast<std::size_t>(r));
  }
  std::vector<GroupElement> elems;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (!entrolen::detail::trim(item).empty()) elems.push_back(G.parse_element(item));
  }
  if (elems.empty()) throw ConfigError("boundary-set must be nonempty");
  return FiniteSubset(std::move(elems));
}

inline Outcome run_folner_ratios(const RunConfig& cfg) {
  const GroupSpec G = GroupSpec::parse(cfg.group);
  const FolnerScheme scheme = FolnerScheme::parse(G, cfg.scheme);
  const FiniteSubset C = parse_boundary_set(G, cfg.boundary_set);
  const Deadline deadline(cfg.time_budget);
  Outcome out;
  std::ostringstream os;
  os << "n,folner_size,boundary_size,ratio\n";
  for (std::size_t n = 1; n <= cfg.n_max; ++n) {
    if (deadline.expired()) {
      out.status = kExitBudget;
      break;
    }
    const FiniteSubset Fn = scheme.set(n);
    const std::size_t b = boundary(G, Fn, C).size();
    os << n << "," << Fn.size() << "," << b << "," << to_fraction_string(Rational(BigInt(b), BigInt(Fn.size())))
       << "\n";
  }
  out.text = os.str();
  return out;
}

inline Outcome dispatch(const RunConfig& cfg) {
  const std::string& cmd = cfg.command;
  if (cmd == "tile") return run_tile(cfg);
  if (cmd == "folner-ratios") return run_folner_ratios(cfg);
  if (cmd == "zerodiv") {
    return std::visit([&](const auto& f) { return run_zerodiv(f, cfg); }, parse_field(cfg.field));
  }
  if (cmd == "validate-cocycle") {
    return std::visit([&](const auto& f) { return run_validate_cocycle(f, cfg); }, parse_field(cfg.field));
  }
  const AnyPresentation M = main_presentation(cfg);
  return std::visit(
      [&](const auto& p) -> Outcome {
        if (cmd == "entropy") return run_entropy(p, cfg);
        if (cmd == "quotient-entropy") return run_quotient_entropy(p, cfg);
        return run_addition_check(p, cfg);
      },
      M);
}

}  // namespace detail

/// Runs one command; output goes to cfg.output if set, else to `out`.
/// Diagnostics go to `err`.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  detail::Outcome result;
  try {
    cfg.validate();
    result = detail::dispatch(cfg);
  } catch (const ParseError& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitInvalid;
  }
  if (cfg.output.empty()) {
    out << result.text;
  } else {
    std::ofstream f(cfg.output, std::ios::binary);
    if (!f) {
      err << "error: cannot write '" << cfg.output << "'\n";
      return kExitInvalid;
    }
    f << result.text;
  }
  if (result.status == kExitBudget) err << "budget exhausted; partial output written\n";
  return result.status;
}

}  // namespace entrolen::cli
