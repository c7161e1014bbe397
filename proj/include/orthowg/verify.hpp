#ifndef ORTHOWG_VERIFY_HPP
#define ORTHOWG_VERIFY_HPP

// Verification suites behind `orthowg verify`: each returns a JSON report and
// a pass flag.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "orthowg/brute_force.hpp"
#include "orthowg/error.hpp"
#include "orthowg/expansion.hpp"
#include "orthowg/io.hpp"
#include "orthowg/montecarlo.hpp"
#include "orthowg/noncross.hpp"
#include "orthowg/permap.hpp"
#include "orthowg/random.hpp"
#include "orthowg/weingarten.hpp"

namespace orthowg {

struct SuiteResult {
  json report;
  bool ok = true;
};

namespace detail {

struct Tally {
  std::size_t instances = 0, agreements = 0;
  json counterexamples = json::array();

  void record(bool agree, const std::function<json()>& describe) {
    ++instances;
    if (agree) ++agreements;
    else if (counterexamples.size() < 20) counterexamples.push_back(describe());
  }
};

/// Small integers drawn from a Philox substream.
class DrawInts {
 public:
  DrawInts(std::uint64_t seed, std::uint32_t stream) : rng_(seed, 0, stream) {}
  int uniform(int lo, int hi) { return lo + static_cast<int>(rng_.next_u32() % static_cast<std::uint32_t>(hi - lo + 1)); }

 private:
  PhiloxStream rng_;
};

}  // namespace detail

/// Definitional noncrossing predicates against the cycle-count criteria.
inline SuiteResult verify_noncross(int disc_max = 6, int annulus_max = 7, int premap_disc_max = 4) {
  json sections = json::array();
  detail::Tally total;
  auto section = [&](const std::string& name, const detail::Tally& t) {
    sections.push_back({{"check", name}, {"instances", t.instances}, {"agreements", t.agreements}});
    total.instances += t.instances;
    total.agreements += t.agreements;
    for (const auto& c : t.counterexamples) total.counterexamples.push_back(c);
  };
  {
    detail::Tally t;
    for (int n = 1; n <= disc_max; ++n) {
      const SignedPermutation phi = trace_cycles({n});
      for_each_permutation(IndexSet::range(n), [&](const SignedPermutation& a) {
        t.record(is_disc_noncrossing(phi, a) == biane_criterion(phi, a),
                 [&] { return json{{"check", "biane"}, {"phi", phi.to_string()}, {"alpha", a.to_string()}}; });
      });
    }
    section("biane", t);
  }
  {
    detail::Tally t;
    for (int total_size = 4; total_size <= annulus_max; ++total_size) {
      for (int p = total_size - 2; p >= 2; --p) {
        const int q = total_size - p;
        if (q > p) continue;
        const AnnularFrame frame(trace_cycles({p, q}));
        for_each_permutation(IndexSet::range(total_size), [&](const SignedPermutation& a) {
          if (!connects_cycles(frame, a)) return;
          t.record(is_annular_noncrossing(frame, a) == mingo_nica_criterion(frame, a), [&] {
            return json{{"check", "mingo-nica"}, {"phi", frame.phi().to_string()}, {"alpha", a.to_string()}};
          });
        });
      }
    }
    section("mingo-nica", t);
  }
  {
    detail::Tally t;
    for (int n = 1; n <= premap_disc_max; ++n) {
      const SignedPermutation phi = trace_cycles({n});
      for_each_premap(IndexSet::range(n), [&](const SignedPermutation& a) {
        t.record(premap_chi2_disc(phi, a) == (euler_characteristic(phi, a) == 2),
                 [&] { return json{{"check", "premap-disc"}, {"phi", phi.to_string()}, {"alpha", a.to_string()}}; });
      });
    }
    for (auto [p, q] : {std::pair{2, 2}, std::pair{3, 2}}) {
      const SignedPermutation phi = trace_cycles({p, q});
      const AnnularFrame frame(phi);
      std::vector<int> v1, v2;
      for (int k = 1; k <= p; ++k) v1.insert(v1.end(), {k, -k});
      for (int k = p + 1; k <= p + q; ++k) v2.insert(v2.end(), {k, -k});
      for_each_premap(IndexSet::range(p + q), [&](const SignedPermutation& a) {
        if (!connects_sets(a, v1, v2)) return;
        t.record(premap_chi2_annular(frame, a) == (euler_characteristic(phi, a) == 2), [&] {
          return json{{"check", "premap-annular"}, {"phi", phi.to_string()}, {"alpha", a.to_string()}};
        });
      });
    }
    section("premap-chi2", t);
  }
  SuiteResult r;
  r.ok = total.counterexamples.empty();
  r.report = {{"suite", "noncross"},
              {"instances", total.instances},
              {"agreements", total.agreements},
              {"sections", sections},
              {"counterexamples", total.counterexamples}};
  return r;
}

/// Young diagrams of a pairing pair by the three constructions, and the
/// premap round trip, for all pairs on [n].
inline SuiteResult verify_loops(int n = 6) {
  detail::Tally t;
  const IndexSet ground = IndexSet::range(n);
  const auto pairings = enumerate_pairings(ground);
  for (const auto& plus : pairings) {
    for (const auto& minus : pairings) {
      const SignedPermutation a = pairings_to_premap(plus, minus);
      const auto back = premap_to_pairings(a);
      const YoungDiagram j = young_of_join(plus, minus);
      const bool ok = back.first == plus && back.second == minus && young_of_premap(a) == j &&
                      young_of_product(plus, minus) == j && is_alternating(a) && is_premap(a);
      t.record(ok, [&] { return json{{"plus", plus.to_string()}, {"minus", minus.to_string()}}; });
    }
  }
  // The worked instance on [8].
  const Pairing p = Pairing::from_pairs({{1, 2}, {3, 5}, {4, 8}, {6, 7}});
  const Pairing m = Pairing::from_pairs({{1, 6}, {2, 5}, {3, 7}, {4, 8}});
  const SignedPermutation prod = compose(pairing_as_permutation(p), pairing_as_permutation(m));
  const std::string prod_s = prod.to_string();
  const std::string lam = young_of_join(p, m).to_string();
  const bool instance_ok = prod_s == "(1,7,5)(2,3,6)(4)(8)" && lam == "3,1" &&
                           young_of_product(p, m).to_string() == lam &&
                           young_of_premap(pairings_to_premap(p, m)).to_string() == lam;
  SuiteResult r;
  r.ok = t.counterexamples.empty() && instance_ok;
  r.report = {{"suite", "loops"},
              {"instances", t.instances},
              {"agreements", t.agreements},
              {"counterexamples", t.counterexamples},
              {"worked_instance", {{"product", prod_s}, {"lambda", lam}, {"ok", instance_ok}}}};
  return r;
}

/// G W = Id for each n and the leading-order limits of wg for k <= max_k.
inline SuiteResult verify_weingarten(const std::vector<int>& ns = {2, 4, 6, 8}, int max_k = 4) {
  SuiteResult r;
  json gram = json::array();
  for (int n : ns) {
    bool ok = true;
    std::size_t checked = 0;
    std::string error;
    try {
      checked = verify_gram_identity(n, weingarten_table(n));
    } catch (const VerificationError& e) {
      ok = false;
      error = e.what();
    }
    json g = {{"n", n}, {"entries", checked}, {"ok", ok}};
    if (!ok) g["error"] = error;
    gram.push_back(g);
    r.ok = r.ok && ok;
  }
  json leading = json::array();
  for (int k = 1; k <= max_k; ++k) {
    for (const auto& lam : young_diagrams(k)) {
      const mpq_class lim = wg_of(lam).limit();
      const mpz_class expect = leading_order(lam).wg_limit();
      const bool ok = lim == expect;
      leading.push_back({{"lambda", lam.to_string()}, {"limit", rational_string(lim)}, {"expected", expect.get_str()}, {"ok", ok}});
      r.ok = r.ok && ok;
    }
  }
  r.report = {{"suite", "weingarten"}, {"gram", gram}, {"leading_order", leading}};
  return r;
}

/// A random expression and rational matrices for the brute-force battery.
struct OracleCase {
  TraceExpression expr;
  std::map<int, Matrix<mpq_class>> matrices;
  long N = 2;
};

/// Deterministic battery: one or two traces, total length up to max_total,
/// colors 1..2 with at most max_per_color factors each, N cycling through 2..4.
inline std::vector<OracleCase> oracle_battery(std::size_t count, std::uint64_t seed, int max_per_color = 3,
                                              int max_total = 6) {
  detail::DrawInts d(seed, 7);
  std::vector<OracleCase> out;
  while (out.size() < count) {
    const int total = d.uniform(2, max_total);
    std::vector<Factor> f;
    std::map<int, int> per;
    for (int i = 0; i < total; ++i) {
      Factor x;
      x.color = d.uniform(1, 2);
      x.eps = d.uniform(0, 1) ? 1 : -1;
      x.slot = d.uniform(-3, 3);
      ++per[x.color];
      f.push_back(x);
    }
    bool fits = true;
    for (auto [c, k] : per) fits = fits && k <= max_per_color;
    // Keep mostly expressions with a nonzero expansion.
    bool even = true;
    for (auto [c, k] : per) even = even && k % 2 == 0;
    if (!fits || (!even && d.uniform(0, 3) != 0)) continue;
    std::vector<std::vector<Factor>> traces;
    if (total >= 2 && d.uniform(0, 1)) {
      const int cut = d.uniform(1, total - 1);
      traces.emplace_back(f.begin(), f.begin() + cut);
      traces.emplace_back(f.begin() + cut, f.end());
    } else {
      traces.push_back(f);
    }
    OracleCase oc{TraceExpression(traces), {}, 2 + static_cast<long>(out.size() % 3)};
    for (int label = 1; label <= 3; ++label) {
      Matrix<mpq_class> m(static_cast<std::size_t>(oc.N), static_cast<std::size_t>(oc.N));
      for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
          m(i, j) = mpq_class(d.uniform(-4, 4), d.uniform(1, 3));
          m(i, j).canonicalize();
        }
      oc.matrices.emplace(label, std::move(m));
    }
    out.push_back(std::move(oc));
  }
  return out;
}

/// evaluate_moment against brute_force_moment on a generated battery.
inline SuiteResult verify_oracle(std::size_t count = 60, std::uint64_t seed = 42, unsigned workers = 1) {
  detail::Tally t;
  json cases = json::array();
  for (const auto& oc : oracle_battery(count, seed)) {
    const mpq_class a = evaluate_moment<mpq_class>(oc.expr, oc.matrices, oc.N, {workers, 64}).value;
    const mpq_class b = brute_force_moment(oc.expr, oc.matrices, oc.N);
    t.record(a == b, [&] {
      return json{{"expression", oc.expr.to_string()}, {"N", oc.N}, {"expansion", rational_string(a)},
                  {"brute_force", rational_string(b)}};
    });
    cases.push_back({{"expression", oc.expr.to_string()}, {"N", oc.N}, {"value", rational_string(a)}});
  }
  SuiteResult r;
  r.ok = t.counterexamples.empty();
  r.report = {{"suite", "oracle"},
              {"instances", t.instances},
              {"agreements", t.agreements},
              {"discrepancies", t.counterexamples},
              {"cases", cases}};
  return r;
}

/// Exact moment against a Monte Carlo estimate; passes when |z| <= 5.
inline SuiteResult verify_mc(const TraceExpression& expr, const std::map<int, Matrix<mpq_class>>& matrices, long N,
                             const McOptions& mc, unsigned workers = 1) {
  const mpq_class exact = evaluate_moment<mpq_class>(expr, matrices, N, {workers, 512}).value;
  const McEstimate est = mc_moment(expr, to_double(matrices), static_cast<int>(N), mc);
  const double z = est.std_error > 0 ? (est.mean - exact.get_d()) / est.std_error : (est.mean == exact.get_d() ? 0.0 : 1e300);
  SuiteResult r;
  r.ok = std::fabs(z) <= 5.0;
  r.report = {{"suite", "mc"},
              {"expression", expr.to_string()},
              {"N", N},
              {"samples", est.samples},
              {"exact", rational_string(exact)},
              {"exact_float", exact.get_d()},
              {"mc_mean", est.mean},
              {"mc_se", est.std_error},
              {"z_score", z},
              {"pass", r.ok}};
  return r;
}

}  // namespace orthowg

#endif  // ORTHOWG_VERIFY_HPP
