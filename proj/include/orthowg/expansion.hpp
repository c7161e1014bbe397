#ifndef ORTHOWG_EXPANSION_HPP
#define ORTHOWG_EXPANSION_HPP

// Genus expansion of E[prod tr(...)] over Haar orthogonal matrices, the
// trace-cumulant formula and the large-N limits built on them.
//
// Moments use normalized traces: a term contributes
//   N^{chi - 2#phi} prod_c wg(lambda_c) prod_{sigma in K^{-1}/2} tr_sigma(X)
// with chi = chi(phi, delta_eps alpha delta_eps). Cumulants use Tr-valued
// variables and the exponent chi - r; tr_to_Tr_factor bridges the two.

#include <gmpxx.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "orthowg/error.hpp"
#include "orthowg/expression.hpp"
#include "orthowg/permap.hpp"
#include "orthowg/polynomial.hpp"
#include "orthowg/setpart.hpp"
#include "orthowg/weingarten.hpp"

namespace orthowg {

struct ExpansionOptions {
  /// Upper bound on prod_c ((m_c - 1)!!)^2.
  std::size_t max_terms = 20'000'000;
  WeingartenOptions weingarten{};
};

struct EvalOptions {
  unsigned workers = 1;
  /// Terms per chunk; chunks are summed in index order whatever the worker
  /// count.
  std::size_t chunk = 512;
};

struct ExpansionTerm {
  std::size_t index = 0;
  std::vector<int> colors;
  std::vector<Pairing> plus, minus;  // per color
  SignedPermutation alpha;           // alpha_1 ... alpha_C on +-[n]
  int chi = 0;
  int n_exponent = 0;  // chi - 2#phi
  std::vector<YoungDiagram> lambdas;
  PolyFrac wg_factor;
  std::vector<Cycle> vertex_pattern;  // particular cycles of K(phi, d a d)^{-1}
};

/// N^{#phi}: multiplies a normalized-trace moment into a Tr-valued one.
inline mpq_class tr_to_Tr_factor(const TraceExpression& expr, long N) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(N), expr.num_traces());
  return mpq_class(p);
}

namespace detail {

inline mpq_class power_of(long N, long e) {
  if (N == 0) throw PoleError("N^" + std::to_string(e) + " at N=0", "N", 0);
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(std::labs(N)), static_cast<unsigned long>(std::labs(e)));
  if (N < 0 && (e % 2 != 0)) p = -p;
  mpq_class q = e >= 0 ? mpq_class(p) : mpq_class(mpz_class(1), p);
  q.canonicalize();
  return q;
}

inline std::size_t double_factorial_odd(int m) {
  std::size_t r = 1;
  for (int k = m - 1; k > 1; k -= 2) r *= static_cast<std::size_t>(k);
  return r;
}

/// Neumaier-compensated sum for doubles, plain sum otherwise.
template <class T>
struct Accumulator {
  T sum = T(0);
  void add(const T& x) { sum += x; }
  T value() const { return sum; }
};

template <>
struct Accumulator<double> {
  double sum = 0, c = 0;
  void add(double x) {
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) c += (sum - t) + x;
    else c += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + c; }
};

/// Runs body(i) for i in [0, count) on `workers` threads; the first exception
/// is rethrown.
template <class Body>
void parallel_for(std::size_t count, unsigned workers, Body&& body) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex mu;
  auto run = [&] {
    try {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) break;
        {
          std::lock_guard lock(mu);
          if (error) break;
        }
        body(i);
      }
    } catch (...) {
      std::lock_guard lock(mu);
      if (!error) error = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  const unsigned n = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace detail

/// The terms of the expansion, addressed by index in a fixed mixed-radix
/// order over the per-color pairs (pi_+, pi_-).
class GenusExpansion {
 public:
  explicit GenusExpansion(TraceExpression expr, const ExpansionOptions& opt = {})
      : expr_(std::move(expr)), opt_(opt), phi_(expr_.phi()), eps_(expr_.eps()) {
    colors_ = expr_.colors();
    bool odd = false;
    for (int c : colors_) {
      if (expr_.positions_of_color(c).size() % 2 != 0) odd = true;
    }
    if (odd) {
      size_ = 0;
      return;
    }
    // Size check before any enumeration.
    long double total = 1;
    for (int c : colors_) {
      const auto m = expr_.positions_of_color(c).size();
      const auto p = static_cast<long double>(detail::double_factorial_odd(static_cast<int>(m)));
      total *= p * p;
    }
    if (total > static_cast<long double>(opt_.max_terms)) {
      throw CapError("expand_moment: " + std::to_string(static_cast<unsigned long long>(total)) +
                     " terms exceed the cap of " + std::to_string(opt_.max_terms));
    }
    size_ = 1;
    for (int c : colors_) {
      const std::vector<int> pos = expr_.positions_of_color(c);
      detail::check_weingarten_size(static_cast<int>(pos.size()), opt_.weingarten);
      EnumerationCaps caps;
      caps.pairings = std::max<std::size_t>(caps.pairings, pos.size());
      pairings_.push_back(enumerate_pairings(IndexSet(pos), caps));
      size_ *= pairings_.back().size() * pairings_.back().size();
    }
  }

  const TraceExpression& expression() const noexcept { return expr_; }
  const std::vector<int>& colors() const noexcept { return colors_; }
  std::size_t size() const noexcept { return size_; }
  const SignedPermutation& phi() const noexcept { return phi_; }
  const EpsilonSigns& eps() const noexcept { return eps_; }

  /// Per-color pairing indices (plus, minus) of term i.
  std::vector<std::pair<std::size_t, std::size_t>> digits(std::size_t i) const {
    if (i >= size_) throw ValidationError("GenusExpansion: term index out of range");
    std::vector<std::pair<std::size_t, std::size_t>> d(colors_.size());
    for (std::size_t c = colors_.size(); c-- > 0;) {
      const std::size_t p = pairings_[c].size();
      const std::size_t digit = i % (p * p);
      i /= p * p;
      d[c] = {digit / p, digit % p};
    }
    return d;
  }

  ExpansionTerm term(std::size_t i, bool with_wg = true) const {
    ExpansionTerm t;
    t.index = i;
    t.colors = colors_;
    const auto d = digits(i);
    std::optional<SignedPermutation> alpha;
    for (std::size_t c = 0; c < colors_.size(); ++c) {
      const Pairing& plus = pairings_[c][d[c].first];
      const Pairing& minus = pairings_[c][d[c].second];
      t.plus.push_back(plus);
      t.minus.push_back(minus);
      t.lambdas.push_back(young_of_join(plus, minus));
      SignedPermutation ac = pairings_to_premap(plus, minus);
      alpha = alpha ? disjoint_product(*alpha, ac) : ac;
    }
    t.alpha = *alpha;
    const SignedPermutation a = conjugate_by_signs(t.alpha, eps_);
    const SignedPermutation kinv = vertex_permutation_inverse(phi_, a);
    const auto cycles = 2 * phi_.num_cycles() + a.num_cycles() + kinv.num_cycles();
    t.chi = static_cast<int>(cycles / 2) - expr_.n();
    t.n_exponent = t.chi - 2 * static_cast<int>(phi_.num_cycles());
    t.vertex_pattern = particular_cycles(kinv);
    if (with_wg) {
      t.wg_factor = PolyFrac(1);
      for (const auto& lam : t.lambdas) t.wg_factor *= wg_of(lam, opt_.weingarten);
    }
    return t;
  }

  template <class Visit>
  void for_each(Visit&& visit, bool with_wg = true) const {
    for (std::size_t i = 0; i < size_; ++i) visit(term(i, with_wg));
  }

 private:
  TraceExpression expr_;
  ExpansionOptions opt_;
  SignedPermutation phi_;
  EpsilonSigns eps_;
  std::vector<int> colors_;
  std::vector<std::vector<Pairing>> pairings_;
  std::size_t size_ = 0;
};

inline GenusExpansion expand_moment(const TraceExpression& expr, const ExpansionOptions& opt = {}) {
  return GenusExpansion(expr, opt);
}

template <class T>
struct MomentResult {
  T value = T(0);
  std::size_t term_count = 0;
};

namespace detail {

/// wg(lambda) at N for every diagram met by the expansion, keyed by weight.
template <class T>
class WgValues {
 public:
  WgValues(long N, const WeingartenOptions& opt) : N_(N), opt_(opt) {}

  const T& operator()(const YoungDiagram& lam) {
    auto it = values_.find(lam);
    if (it != values_.end()) return it->second;
    const PolyFrac f = wg_of(lam, opt_);
    mpq_class v;
    try {
      v = f.eval_at(N_);
    } catch (const PoleError& e) {
      throw PoleError("wg(" + lam.to_string() + ") has a pole at N=" + std::to_string(N_) + " (factor " + e.factor() + ")",
                      e.factor(), N_);
    }
    return values_.emplace(lam, scalar_from<T>(v)).first->second;
  }

 private:
  long N_;
  WeingartenOptions opt_;
  std::map<YoungDiagram, T> values_;
};

/// Fails early, naming lambda, if any diagram of these weights has a pole.
inline void check_poles(const GenusExpansion& ex, long N, const WeingartenOptions& opt) {
  WgValues<mpq_class> probe(N, opt);
  for (int c : ex.colors()) {
    const int m = static_cast<int>(ex.expression().positions_of_color(c).size());
    for (const auto& lam : young_diagrams(m / 2)) probe(lam);
  }
}

}  // namespace detail

/// Sum of the expansion with vertex traces supplied by `oracle` (a copyable
/// callable T(const Cycle&) returning the normalized trace along a cycle).
/// Each worker owns a copy of the oracle.
template <class T, class Oracle>
MomentResult<T> evaluate_moment_with(const GenusExpansion& ex, const Oracle& oracle, long N, const EvalOptions& eval = {},
                                     const WeingartenOptions& wopt = {}) {
  MomentResult<T> result;
  result.term_count = ex.size();
  if (ex.size() == 0) return result;
  detail::check_poles(ex, N, wopt);
  const std::size_t chunk = std::max<std::size_t>(1, eval.chunk);
  const std::size_t chunks = (ex.size() + chunk - 1) / chunk;
  std::vector<T> partial(chunks, T(0));
  const unsigned workers = std::max(1u, eval.workers);
  std::vector<Oracle> oracles(workers, oracle);
  std::vector<detail::WgValues<T>> wgs(workers, detail::WgValues<T>(N, wopt));
  std::vector<std::map<int, T>> powers(workers);
  std::atomic<unsigned> slot{0};
  std::mutex slot_mu;
  std::map<std::thread::id, unsigned> slot_of;
  auto my_slot = [&]() -> unsigned {
    std::lock_guard lock(slot_mu);
    auto [it, fresh] = slot_of.emplace(std::this_thread::get_id(), 0);
    if (fresh) it->second = slot++;
    return it->second;
  };
  detail::parallel_for(chunks, workers, [&](std::size_t ci) {
    const unsigned w = my_slot();
    detail::Accumulator<T> acc;
    const std::size_t end = std::min(ex.size(), (ci + 1) * chunk);
    for (std::size_t i = ci * chunk; i < end; ++i) {
      const ExpansionTerm t = ex.term(i, false);
      auto pw = powers[w].find(t.n_exponent);
      if (pw == powers[w].end())
        pw = powers[w].emplace(t.n_exponent, detail::scalar_from<T>(detail::power_of(N, t.n_exponent))).first;
      T v = pw->second;
      for (const auto& lam : t.lambdas) v *= wgs[w](lam);
      if (detail::scalar_is_zero(v)) continue;
      for (const auto& cyc : t.vertex_pattern) v *= oracles[w](cyc);
      acc.add(v);
    }
    partial[ci] = acc.value();
  });
  detail::Accumulator<T> total;
  for (const auto& p : partial) total.add(p);
  result.value = total.value();
  return result;
}

/// E[prod tr(...)] for N x N matrices keyed by label.
template <class T>
MomentResult<T> evaluate_moment(const TraceExpression& expr, const std::map<int, Matrix<T>>& matrices, long N,
                                const EvalOptions& eval = {}, const ExpansionOptions& opt = {}) {
  if (N < 1) throw ValidationError("evaluate_moment: N must be positive");
  for (const auto& [label, m] : matrices) {
    if (m.rows() != static_cast<std::size_t>(N) || m.cols() != static_cast<std::size_t>(N)) {
      throw ValidationError("evaluate_moment: matrix " + std::to_string(label) + " is not " + std::to_string(N) + "x" +
                            std::to_string(N));
    }
  }
  GenusExpansion ex(expr, opt);
  return evaluate_moment_with<T>(ex, MatrixTraceOracle<T>(expr, matrices), N, eval, opt.weingarten);
}

/// Sum of N^{exponent} prod wg as a rational function, with the vertex
/// traces as exact rationals.
template <class Oracle>
PolyFrac evaluate_moment_symbolic(const GenusExpansion& ex, Oracle oracle) {
  std::map<std::pair<int, std::vector<YoungDiagram>>, mpq_class> grouped;
  for (std::size_t i = 0; i < ex.size(); ++i) {
    const ExpansionTerm t = ex.term(i, false);
    mpq_class tr = 1;
    for (const auto& cyc : t.vertex_pattern) tr *= oracle(cyc);
    if (tr == 0) continue;
    std::vector<YoungDiagram> lams = t.lambdas;
    grouped[{t.n_exponent, lams}] += tr;
  }
  PolyFrac total;
  for (const auto& [key, coef] : grouped) {
    if (coef == 0) continue;
    PolyFrac f = PolyFrac::N_power(key.first) * PolyFrac::constant(coef);
    for (const auto& lam : key.second) f *= wg_of(lam);
    total += f;
  }
  return total;
}

/// One product of traces in a limit functional: canonical cyclic words,
/// sorted, identity words dropped.
using TracePattern = std::vector<std::vector<int>>;

inline std::string pattern_string(const TracePattern& p) {
  if (p.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += '*';
    s += cyclic_word_string(p[i]);
  }
  return s;
}

inline TracePattern pattern_of(const TraceExpression& expr, const std::vector<Cycle>& cycles) {
  TracePattern p;
  for (const auto& c : cycles) {
    std::vector<SlotRef> word;
    for (int k : c) word.push_back(expr.resolve(k));
    auto key = cyclic_word_key(word);
    if (!key.empty()) p.push_back(std::move(key));
  }
  std::sort(p.begin(), p.end());
  return p;
}

struct AsymptoticTerm {
  mpq_class coefficient;
  TracePattern pattern;
};

/// lim E[prod tr(...)] as a linear combination of products of traces of the X.
struct AsymptoticMoment {
  std::vector<AsymptoticTerm> terms;  // sorted by pattern; no zero coefficients

  bool is_zero() const noexcept { return terms.empty(); }

  template <class T, class WordTrace>
  T evaluate(WordTrace&& word_trace) const {
    T total = T(0);
    for (const auto& t : terms) {
      T v = detail::scalar_from<T>(t.coefficient);
      for (const auto& w : t.pattern) v *= word_trace(w);
      total += v;
    }
    return total;
  }

  std::string to_string() const {
    if (terms.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const mpq_class& c = terms[i].coefficient;
      std::string cs = c.get_str();
      if (i) s += c < 0 ? " - " : " + ";
      else if (c < 0) s += "-";
      if (c < 0) cs = mpq_class(-c).get_str();
      if (cs != "1" || terms[i].pattern.empty()) s += cs + (terms[i].pattern.empty() ? "" : "*");
      if (!terms[i].pattern.empty()) s += pattern_string(terms[i].pattern);
    }
    return s;
  }
};

/// Terms with exponent 0 and wg replaced by its leading coefficient. The
/// exponent chi - 2#phi never exceeds 0, so nothing else survives.
inline AsymptoticMoment asymptotic_moment(const TraceExpression& expr, const ExpansionOptions& opt = {}) {
  GenusExpansion ex(expr, opt);
  std::map<TracePattern, mpq_class> acc;
  for (std::size_t i = 0; i < ex.size(); ++i) {
    const ExpansionTerm t = ex.term(i, false);
    if (t.n_exponent > 0) throw VerificationError("asymptotic_moment: positive exponent in term " + std::to_string(i));
    if (t.n_exponent < 0) continue;
    mpz_class c = 1;
    for (const auto& lam : t.lambdas) c *= leading_order(lam).wg_limit();
    acc[pattern_of(expr, t.vertex_pattern)] += c;
  }
  AsymptoticMoment out;
  for (auto& [p, c] : acc) {
    if (c != 0) out.terms.push_back({c, p});
  }
  return out;
}

/// Joint cumulants k_tau of the normalized vertex traces for deterministic
/// matrices: the product of traces when tau has only singletons, 0 otherwise.
template <class T>
class DeterministicVertexCumulants {
 public:
  static constexpr bool deterministic = true;

  explicit DeterministicVertexCumulants(MatrixTraceOracle<T> oracle) : oracle_(std::move(oracle)) {}

  T operator()(const std::vector<Cycle>& sigma, const SetPartition& tau) {
    if (tau.num_blocks() != sigma.size()) return T(0);
    T v = T(1);
    for (const auto& c : sigma) v *= oracle_(c);
    return v;
  }

 private:
  MatrixTraceOracle<T> oracle_;
};

namespace detail {

template <class K>
concept DeterministicKTau = requires { K::deterministic; } && K::deterministic;

inline std::string cumulant_key(const Pairing& plus, const Pairing& minus, const SetPartition& rho) {
  return plus.to_string() + "|" + minus.to_string() + "|" + rho.to_string();
}

/// Partition of [n] grouping |elements| of the sigma_i per block of tau.
inline SetPartition vertex_partition(int n, const std::vector<Cycle>& sigma, const SetPartition& tau) {
  std::vector<int> label(static_cast<std::size_t>(n), 0);
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    const int b = static_cast<int>(tau.block_index_of(static_cast<int>(i) + 1));
    for (int k : sigma[i]) label[static_cast<std::size_t>(std::abs(k) - 1)] = b;
  }
  return SetPartition::from_labels(IndexSet::range(n), label);
}

/// Shared walk of the cumulant formula; emit(exponent, C, k_tau) per surviving
/// (alpha, rho, tau).
template <class KTau, class Emit>
void walk_cumulant(const GenusExpansion& ex, KTau& ktau, Emit&& emit) {
  const TraceExpression& expr = ex.expression();
  const int n = expr.n();
  const IndexSet ground = IndexSet::range(n);
  const SetPartition faces = ex.phi().orbits();
  const SetPartition kernel = expr.word_kernel();
  const int r = static_cast<int>(expr.num_traces());
  const SetPartition one = SetPartition::one(ground);
  for (std::size_t i = 0; i < ex.size(); ++i) {
    const ExpansionTerm t = ex.term(i, false);
    std::vector<std::pair<int, int>> plus_pairs, minus_pairs;
    for (std::size_t c = 0; c < t.plus.size(); ++c) {
      for (const auto& b : t.plus[c].partition().blocks()) plus_pairs.emplace_back(b[0], b[1]);
      for (const auto& b : t.minus[c].partition().blocks()) minus_pairs.emplace_back(b[0], b[1]);
    }
    const Pairing plus = Pairing::from_pairs(ground, plus_pairs);
    const Pairing minus = Pairing::from_pairs(ground, minus_pairs);
    const SetPartition pi = join(plus.partition(), minus.partition());
    const int s = static_cast<int>(t.vertex_pattern.size());
    const IndexSet sground = IndexSet::range(s);
    auto per_tau = [&](const SetPartition& tau) {
      const auto k = ktau(t.vertex_pattern, tau);
      if (detail::scalar_is_zero(k)) return;
      const SetPartition vert = vertex_partition(n, t.vertex_pattern, tau);
      const SetPartition base = join(faces, vert);
      for_each_coarsening(pi, [&](const SetPartition& rho) {
        if (!refines(rho, kernel)) return true;
        if (!(join(base, rho) == one)) return true;
        emit(t.chi - r, plus, minus, pi, rho, k);
        return true;
      });
    };
    if constexpr (DeterministicKTau<KTau>) {
      per_tau(SetPartition::zero(sground));
    } else {
      for_each_partition(sground, [&](const SetPartition& tau) {
        per_tau(tau);
        return true;
      });
    }
  }
}

}  // namespace detail

/// k_r(Tr Y_1, ..., Tr Y_r) at N for single-trace expressions Y_i, with
/// ktau(sigma, tau) giving the joint cumulant of the vertex traces.
template <class T, class KTau>
T trace_cumulant_with(const std::vector<TraceExpression>& singles, KTau ktau, long N, const ExpansionOptions& opt = {}) {
  for (const auto& e : singles) {
    if (e.num_traces() != 1) throw ValidationError("trace_cumulant: each expression must be a single trace");
  }
  if (singles.empty()) throw ValidationError("trace_cumulant: no expressions");
  GenusExpansion ex(TraceExpression::concat(singles), opt);
  detail::check_poles(ex, N, opt.weingarten);
  std::map<std::string, T> c_cache;
  std::map<int, T> powers;
  detail::Accumulator<T> acc;
  detail::walk_cumulant(ex, ktau, [&](int e, const Pairing& plus, const Pairing& minus, const SetPartition& pi,
                                      const SetPartition& rho, const auto& k) {
    const std::string key = detail::cumulant_key(plus, minus, rho);
    auto it = c_cache.find(key);
    if (it == c_cache.end()) {
      const PolyFrac c = wg_cumulant(plus, minus, pi, rho, opt.weingarten);
      it = c_cache.emplace(key, detail::scalar_from<T>(c.eval_at(N))).first;
    }
    auto pw = powers.find(e);
    if (pw == powers.end()) pw = powers.emplace(e, detail::scalar_from<T>(detail::power_of(N, e))).first;
    acc.add(pw->second * it->second * k);
  });
  return acc.value();
}

/// Deterministic-matrix cumulant with N x N matrices.
template <class T>
T trace_cumulant(const std::vector<TraceExpression>& singles, const std::map<int, Matrix<T>>& matrices, long N,
                 const ExpansionOptions& opt = {}) {
  for (const auto& [label, m] : matrices) {
    if (m.rows() != static_cast<std::size_t>(N)) {
      throw ValidationError("trace_cumulant: matrix " + std::to_string(label) + " is not " + std::to_string(N) + "x" +
                            std::to_string(N));
    }
  }
  const TraceExpression joint = TraceExpression::concat(singles);
  return trace_cumulant_with<T>(singles, DeterministicVertexCumulants<T>(MatrixTraceOracle<T>(joint, matrices)), N, opt);
}

/// The cumulant as a rational function of N, for deterministic matrices whose
/// normalized traces do not depend on N (oracle built on fixed blocks).
inline PolyFrac trace_cumulant_symbolic(const std::vector<TraceExpression>& singles,
                                        const std::map<int, Matrix<mpq_class>>& blocks, const ExpansionOptions& opt = {}) {
  for (const auto& e : singles) {
    if (e.num_traces() != 1) throw ValidationError("trace_cumulant: each expression must be a single trace");
  }
  const TraceExpression joint = TraceExpression::concat(singles);
  GenusExpansion ex(joint, opt);
  DeterministicVertexCumulants<mpq_class> ktau(MatrixTraceOracle<mpq_class>(joint, blocks));
  std::map<std::string, PolyFrac> c_cache;
  std::map<std::string, std::pair<int, mpq_class>> grouped;  // key -> (exponent, sum of k)
  std::map<std::string, std::pair<std::pair<Pairing, Pairing>, std::pair<SetPartition, SetPartition>>> args;
  detail::walk_cumulant(ex, ktau, [&](int e, const Pairing& plus, const Pairing& minus, const SetPartition& pi,
                                      const SetPartition& rho, const mpq_class& k) {
    const std::string key = std::to_string(e) + "#" + detail::cumulant_key(plus, minus, rho);
    auto [it, fresh] = grouped.emplace(key, std::make_pair(e, mpq_class(0)));
    it->second.second += k;
    if (fresh) args.emplace(key, std::make_pair(std::make_pair(plus, minus), std::make_pair(pi, rho)));
  });
  std::map<std::pair<int, std::string>, PolyFrac> by_c;
  PolyFrac total;
  for (const auto& [key, ek] : grouped) {
    if (ek.second == 0) continue;
    const auto& a = args.at(key);
    const std::string ckey = detail::cumulant_key(a.first.first, a.first.second, a.second.second);
    auto it = c_cache.find(ckey);
    if (it == c_cache.end()) {
      it = c_cache.emplace(ckey, wg_cumulant(a.first.first, a.first.second, a.second.first, a.second.second, opt.weingarten))
               .first;
    }
    total += PolyFrac::N_power(ek.first) * PolyFrac::constant(ek.second) * it->second;
  }
  return total;
}

/// Spoke-diagram limit of k_2(Tr(a_1...a_p), Tr(b_1...b_q)) from the tables
/// direct(i, j) = phi_1(a_i b_j) and transposed(i, j) = phi_1(a_i b_j^t).
template <class T>
T predicted_second_order_cov(const Matrix<T>& direct, const Matrix<T>& transposed) {
  const std::size_t p = direct.rows(), q = direct.cols();
  if (transposed.rows() != p || transposed.cols() != q) {
    throw ValidationError("predicted_second_order_cov: tables differ in shape");
  }
  if (p != q || p == 0) return T(0);
  const long P = static_cast<long>(p);
  auto wrap = [P](long j) { return static_cast<std::size_t>(((j - 1) % P + P) % P); };  // 1-based j mod p
  T total = T(0);
  for (long k = 0; k < P; ++k) {
    T d = T(1), t = T(1);
    for (long i = 1; i <= P; ++i) {
      d *= direct(static_cast<std::size_t>(i - 1), wrap(k - i));
      t *= transposed(static_cast<std::size_t>(i - 1), wrap(k + i));
    }
    total += d + t;
  }
  return total;
}

}  // namespace orthowg

#endif  // ORTHOWG_EXPANSION_HPP
