#pragma once

// Entropy estimation along a Folner scheme: the ratios dim T_{F_n} / |F_n|,
// quotient ratios, tiling-certified upper bounds, additivity checks over
// short exact sequences, and the zero-divisor scan.
//
// Ratios are reported for finite n only. The sequence converges, but no rate
// is known, so the "estimate" is simply the last ratio.

#include <entrolen/crossed_product.hpp>
#include <entrolen/folner.hpp>
#include <entrolen/rational.hpp>
#include <entrolen/shift_modules.hpp>
#include <entrolen/tiling.hpp>

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace entrolen {

struct RatioRow {
  std::size_t n = 0;
  std::size_t folner_size = 0;
  std::size_t dim = 0;
  Rational ratio;
  bool stabilized = true;
};

struct EntropyEstimate {
  std::vector<RatioRow> ratios;
  Rational estimate;
  std::optional<Rational> certified_upper;
  bool all_stabilized = true;
};

template <CoefficientField F>
EntropyEstimate estimate(const SubshiftPresentation<F>& p, const FolnerScheme& scheme, std::size_t n_max) {
  if (n_max < 1) throw std::invalid_argument("n_max must be at least 1");
  EntropyEstimate est;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const FiniteSubset Fn = scheme.set(n);
    const std::size_t d = trajectory_dim(p, Fn);
    est.ratios.push_back({n, Fn.size(), d, Rational(BigInt(d), BigInt(Fn.size())), true});
  }
  est.estimate = est.ratios.back().ratio;
  return est;
}

/// Ratios dim((T_{F_n} + N)/N) / |F_n|; rows that did not stabilize are upper bounds.
template <CoefficientField F>
EntropyEstimate estimate_quotient(const SubshiftPresentation<F>& M, const SubshiftPresentation<F>& N,
                                  const FolnerScheme& scheme, std::size_t n_max, const StabilizationConfig& approx) {
  if (n_max < 1) throw std::invalid_argument("n_max must be at least 1");
  EntropyEstimate est;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const FiniteSubset Fn = scheme.set(n);
    const QuotientDim q = trajectory_dim_quotient(M, N, Fn, approx);
    est.ratios.push_back({n, Fn.size(), q.value, Rational(BigInt(q.value), BigInt(Fn.size())), q.stabilized});
    est.all_stabilized = est.all_stabilized && q.stabilized;
  }
  est.estimate = est.ratios.back().ratio;
  return est;
}

/// Distance from the estimate to the nearest nonnegative integer.
inline Rational integrality_report(const EntropyEstimate& e) {
  const Rational& r = e.estimate;
  if (r <= 0) return -r;
  const BigInt fl = boost::multiprecision::numerator(r) / boost::multiprecision::denominator(r);
  const Rational below = r - Rational(fl);
  const Rational above = Rational(fl + 1) - r;
  return below < above ? below : above;
}

/// CSV with header "n,folner_size,trajectory_dim,ratio".
inline std::string estimate_csv(const EntropyEstimate& e) {
  std::ostringstream os;
  os << "n,folner_size,trajectory_dim,ratio\n";
  for (const auto& r : e.ratios) {
    os << r.n << "," << r.folner_size << "," << r.dim << "," << to_fraction_string(r.ratio) << "\n";
  }
  return os.str();
}

class TilingFailure : public std::runtime_error {
 public:
  TilingFailure(std::size_t n, const std::string& what) : std::runtime_error(what), n_(n) {}
  std::size_t n() const { return n_; }

 private:
  std::size_t n_;
};

struct CertifiedBound {
  Rational bound;
  Rational M;                        // dim span{v_i} = f({e})
  std::vector<Rational> tile_ratios; // f(F_{n_i}) / |F_{n_i}|
  std::size_t checked_from = 0;      // greedy tilings verified for n in [from, to]
  std::size_t checked_to = 0;
};

/// Tiling bound M*eps + max_i f(F_{n_i})/|F_{n_i}| / (1 - eps) with
/// f = dim T_(.). The bound is conditional: greedy quasi-tilings of F_n by
/// {F_{n_i}} are constructed and verified only for n_from <= n <= n_check.
template <CoefficientField F>
CertifiedBound certified_upper_bound(const SubshiftPresentation<F>& p, const FolnerScheme& scheme,
                                     const Rational& eps, const std::vector<std::size_t>& tile_indices,
                                     std::size_t n_check, std::optional<std::size_t> n_from = std::nullopt) {
  if (tile_indices.empty()) throw std::invalid_argument("certified_upper_bound needs tile indices");
  if (eps <= 0 || eps >= Rational(1, 4)) throw std::invalid_argument("eps must lie in (0, 1/4)");
  const std::size_t from = n_from.value_or(n_check);
  if (from > n_check) throw std::invalid_argument("n_from exceeds n_check");

  CertifiedBound out;
  out.M = Rational(BigInt(span_dim(p.field(), p.generators())));
  std::vector<FiniteSubset> tiles;
  for (std::size_t k : tile_indices) {
    FiniteSubset T = scheme.set(k);
    const std::size_t d = trajectory_dim(p, T);
    out.tile_ratios.push_back(Rational(BigInt(d), BigInt(T.size())));
    tiles.push_back(std::move(T));
  }
  for (std::size_t n = from; n <= n_check; ++n) {
    if (!greedy_quasi_tile(scheme.group(), scheme.set(n), tiles, eps)) {
      throw TilingFailure(n, "greedy quasi-tiling of F_" + std::to_string(n) + " failed");
    }
  }
  out.checked_from = from;
  out.checked_to = n_check;
  out.bound = ow_upper_bound(out.M, eps, out.tile_ratios);
  return out;
}

struct SesRow {
  std::size_t n = 0;
  SesDims dims;
  std::size_t dim_K1 = 0;       // dim T_{F'}(span{w_j}) for F' = {g in F_n : g w_j in T_{F_n}}
  bool inequality_ok = true;    // dim_T >= dim_K1 + dim_image
};

struct AdditionReport {
  std::vector<SesRow> rows;
  Rational e_M, e_N, e_Q;
  Rational discrepancy;  // e_M - e_N - e_Q
  Rational tol;
  bool identities_ok = true;
  bool all_stabilized = true;
  bool pass = false;
};

/// Per-window SES bookkeeping for n = 1..n_max plus the additivity
/// discrepancy at n_max.
template <CoefficientField F>
AdditionReport addition_check(const SubshiftPresentation<F>& M, const SubshiftPresentation<F>& N,
                              const FolnerScheme& scheme, std::size_t n_max, const Rational& tol,
                              const StabilizationConfig& approx) {
  if (n_max < 1) throw std::invalid_argument("n_max must be at least 1");
  require_same_ambient(M, N);
  AdditionReport rep;
  rep.tol = tol;
  std::size_t dim_N_last = 0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const FiniteSubset Fn = scheme.set(n);
    SesRow row;
    row.n = n;
    row.dims = ses_dims(M, N, Fn, approx);

    const auto TF = trajectory(M, Fn);
    std::vector<GroupElement> inside;
    for (const auto& g : Fn) {
      bool all_in = true;
      for (const auto& w : N.generators()) {
        if (!membership(act(g, w, N.cocycle()), TF.subspace)) {
          all_in = false;
          break;
        }
      }
      if (all_in) inside.push_back(g);
    }
    row.dim_K1 = trajectory_dim(N, FiniteSubset(std::move(inside)));
    row.inequality_ok = row.dims.dim_T >= row.dim_K1 + row.dims.dim_image;

    rep.identities_ok = rep.identities_ok && row.dims.exact() && row.inequality_ok;
    rep.all_stabilized = rep.all_stabilized && row.dims.stabilized;
    if (n == n_max) dim_N_last = trajectory_dim(N, Fn);
    rep.rows.push_back(row);
  }
  const SesRow& last = rep.rows.back();
  const BigInt size(scheme.set(n_max).size());
  rep.e_M = Rational(BigInt(last.dims.dim_T), size);
  rep.e_N = Rational(BigInt(dim_N_last), size);
  rep.e_Q = Rational(BigInt(last.dims.dim_image), size);
  rep.discrepancy = rep.e_M - rep.e_N - rep.e_Q;
  const Rational mag = rep.discrepancy < 0 ? -rep.discrepancy : rep.discrepancy;
  rep.pass = rep.identities_ok && mag <= tol;
  return rep;
}

template <CoefficientField F>
struct ZeroDivisorVerdict {
  bool zero_divisor = false;
  std::optional<CrossedElement<F>> witness;  // y with y x = 0
  EntropyEstimate ideal;                     // K*G x
  EntropyEstimate quotient;                  // K*G / K*G x
  Rational integrality_distance;
  std::size_t window_radius = 0;

  std::string verdict() const { return zero_divisor ? "zero-divisor" : "no evidence up to budget"; }
};

/// A zero-divisor verdict needs a verified annihilator; the entropy of the
/// principal ideal is reported alongside as evidence only.
template <CoefficientField F>
ZeroDivisorVerdict<F> zero_divisor_scan(const CrossedElement<F>& x, const CocycleData<F>& c,
                                        const FolnerScheme& scheme, std::size_t n_max, std::size_t window_radius,
                                        const StabilizationConfig& approx) {
  if (x.is_zero()) throw std::invalid_argument("zero_divisor_scan: x must be nonzero");
  ZeroDivisorVerdict<F> v;
  v.window_radius = window_radius;
  const auto ideal = SubshiftPresentation<F>::principal(c, x);
  const auto whole = SubshiftPresentation<F>::bernoulli(c, 1);
  v.ideal = estimate(ideal, scheme, n_max);
  v.quotient = estimate_quotient(whole, ideal, scheme, n_max, approx);
  v.integrality_distance = integrality_report(v.ideal);
  v.witness = find_annihilator(x, window_radius, c);
  v.zero_divisor = v.witness.has_value();
  return v;
}

template <CoefficientField F>
std::string format_verdict(const F& field, const CrossedElement<F>& x, const ZeroDivisorVerdict<F>& v) {
  std::ostringstream os;
  os << "element=" << format_crossed(field, x) << "\n";
  os << "verdict=" << v.verdict() << "\n";
  os << "witness=" << (v.witness ? format_crossed(field, *v.witness) : std::string("none")) << "\n";
  os << "window_radius=" << v.window_radius << "\n";
  os << "ideal_ratio=" << to_fraction_string(v.ideal.estimate) << "\n";
  os << "integrality_distance=" << to_fraction_string(v.integrality_distance) << "\n";
  os << "quotient_ratio=" << to_fraction_string(v.quotient.estimate) << "\n";
  os << "quotient_stabilized=" << (v.quotient.all_stabilized ? "true" : "false") << "\n";
  return os.str();
}

}  // namespace entrolen
