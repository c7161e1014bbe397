#ifndef ORTHOWG_WEINGARTEN_HPP
#define ORTHOWG_WEINGARTEN_HPP

// Orthogonal Weingarten function as an exact rational function of N.
//
// Wg is the inverse of the Gram matrix G(p, q) = N^{#(p v q)} over pairings of
// [n]. It is constant on the classes lambda(p v q), so it is found from a
// p(n/2) x p(n/2) system: fix p0 = {1,2}{3,4}..., and for a representative p_mu
// of each class mu,
//   sum_lambda [ sum_{s : lambda(s v p0) = lambda} N^{#(p_mu v s)} ] Wg(lambda)
//     = [mu = (1,...,1)].

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "orthowg/error.hpp"
#include "orthowg/matrix.hpp"
#include "orthowg/permap.hpp"
#include "orthowg/polynomial.hpp"
#include "orthowg/setpart.hpp"

namespace orthowg {

struct WeingartenOptions {
  int max_n = 10;
  /// Permits n = 12.
  bool allow_large = false;
};

namespace detail {

inline void check_weingarten_size(int n, const WeingartenOptions& opt) {
  if (n < 0 || n % 2 != 0) throw ValidationError("Weingarten: n must be even and nonnegative, got " + std::to_string(n));
  const int cap = opt.allow_large ? std::max(opt.max_n, 12) : opt.max_n;
  if (n > cap) throw CapError("Weingarten: n=" + std::to_string(n) + " exceeds cap " + std::to_string(cap));
}

/// {1,2}{3,4}... on [n].
inline Pairing standard_pairing(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int k = 1; k < n; k += 2) pairs.emplace_back(k, k + 1);
  return Pairing::from_pairs(IndexSet::range(n), pairs);
}

inline Polynomial polynomial_exact_div(const Polynomial& a, const Polynomial& b) { return a.divexact(b); }

}  // namespace detail

inline mpz_class catalan(unsigned k) {
  mpz_class c;
  mpz_bin_uiui(c.get_mpz_t(), 2 * k, k);
  mpz_class r = c / (k + 1);
  return r;
}

/// Gram matrix over the pairings of [n], as exponents of N.
struct GramMatrix {
  std::vector<Pairing> pairings;
  Matrix<int> exponent;  // G(i, j) = N^{exponent(i, j)}
};

inline GramMatrix gram_matrix(int n, const WeingartenOptions& opt = {}) {
  detail::check_weingarten_size(n, opt);
  GramMatrix g;
  EnumerationCaps caps;
  caps.pairings = static_cast<std::size_t>(std::max(n, 16));
  g.pairings = enumerate_pairings(IndexSet::range(n), caps);
  const std::size_t m = g.pairings.size();
  g.exponent = Matrix<int>(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      int e = static_cast<int>(join(g.pairings[i].partition(), g.pairings[j].partition()).num_blocks());
      g.exponent(i, j) = e;
      g.exponent(j, i) = e;
    }
  }
  return g;
}

/// Wg(lambda) for every lambda |- n/2.
class WeingartenTable {
 public:
  WeingartenTable() = default;
  WeingartenTable(int n, std::map<YoungDiagram, PolyFrac> entries) : n_(n), entries_(std::move(entries)) {}

  static WeingartenTable compute(int n, const WeingartenOptions& opt = {}) {
    detail::check_weingarten_size(n, opt);
    std::map<YoungDiagram, PolyFrac> entries;
    if (n == 0) {
      entries.emplace(YoungDiagram{}, PolyFrac(1));
      return WeingartenTable(0, std::move(entries));
    }
    const int k = n / 2;
    const std::vector<YoungDiagram> classes = young_diagrams(k);
    std::map<YoungDiagram, std::size_t> class_index;
    for (std::size_t i = 0; i < classes.size(); ++i) class_index.emplace(classes[i], i);

    EnumerationCaps caps;
    caps.pairings = static_cast<std::size_t>(std::max(n, 16));
    const std::vector<Pairing> pairings = enumerate_pairings(IndexSet::range(n), caps);
    const Pairing p0 = detail::standard_pairing(n);

    const std::size_t p = classes.size();
    std::vector<std::size_t> cls(pairings.size());
    std::vector<std::optional<std::size_t>> rep(p);
    for (std::size_t s = 0; s < pairings.size(); ++s) {
      cls[s] = class_index.at(young_of_join(pairings[s], p0));
      if (!rep[cls[s]]) rep[cls[s]] = s;
    }

    // counts[mu][lambda][e] = #{s in class lambda : #(p_mu v s) = e}
    Matrix<Polynomial> a(p, p, Polynomial(0));
    for (std::size_t mu = 0; mu < p; ++mu) {
      const Pairing& pm = pairings[*rep[mu]];
      std::vector<std::vector<long>> counts(p, std::vector<long>(static_cast<std::size_t>(k) + 1, 0));
      for (std::size_t s = 0; s < pairings.size(); ++s) {
        auto e = join(pm.partition(), pairings[s].partition()).num_blocks();
        counts[cls[s]][e]++;
      }
      for (std::size_t lam = 0; lam < p; ++lam) {
        std::vector<mpz_class> coef(static_cast<std::size_t>(k) + 1, 0);
        for (std::size_t e = 0; e <= static_cast<std::size_t>(k); ++e) coef[e] = counts[lam][e];
        a(mu, lam) = Polynomial(std::move(coef));
      }
    }

    const std::size_t ones = class_index.at(YoungDiagram(std::vector<int>(static_cast<std::size_t>(k), 1)));
    const Polynomial det = bareiss_determinant(a, detail::polynomial_exact_div);
    if (det.is_zero()) throw Error("Weingarten: class system is singular");
    for (std::size_t lam = 0; lam < p; ++lam) {
      Matrix<Polynomial> ai = a;
      for (std::size_t mu = 0; mu < p; ++mu) ai(mu, lam) = Polynomial(mu == ones ? 1 : 0);
      entries.emplace(classes[lam], PolyFrac(bareiss_determinant(ai, detail::polynomial_exact_div), det));
    }
    return WeingartenTable(n, std::move(entries));
  }

  int n() const noexcept { return n_; }
  const std::map<YoungDiagram, PolyFrac>& entries() const noexcept { return entries_; }

  const PolyFrac& Wg(const YoungDiagram& lambda) const {
    auto it = entries_.find(lambda);
    if (it == entries_.end()) {
      throw ValidationError("Weingarten: no entry for (" + lambda.to_string() + ") at n=" + std::to_string(n_));
    }
    return it->second;
  }

  PolyFrac Wg(const Pairing& plus, const Pairing& minus) const {
    check_ground(plus, minus);
    return Wg(young_of_join(plus, minus));
  }

  /// wg(lambda) = N^{n - r} Wg(lambda), r the number of rows.
  PolyFrac wg(const YoungDiagram& lambda) const {
    return PolyFrac::N_power(n_ - static_cast<long>(lambda.num_rows())) * Wg(lambda);
  }

  PolyFrac wg(const Pairing& plus, const Pairing& minus) const {
    check_ground(plus, minus);
    return wg(young_of_join(plus, minus));
  }

 private:
  void check_ground(const Pairing& plus, const Pairing& minus) const {
    if (!(plus.ground() == minus.ground())) throw ValidationError("Weingarten: pairing grounds differ");
    if (static_cast<int>(plus.ground().size()) != n_) {
      throw ValidationError("Weingarten: pairings of size " + std::to_string(plus.ground().size()) +
                            " given to the n=" + std::to_string(n_) + " table");
    }
  }

  int n_ = 0;
  std::map<YoungDiagram, PolyFrac> entries_;
};

/// Process-wide cache of tables; safe to call concurrently.
inline const WeingartenTable& weingarten_table(int n, const WeingartenOptions& opt = {}) {
  detail::check_weingarten_size(n, opt);
  static std::mutex mu;
  static std::map<int, std::unique_ptr<WeingartenTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<WeingartenTable>(WeingartenTable::compute(n, opt));
  return *slot;
}

/// Normalized Weingarten function of a diagram, from the cached table.
inline PolyFrac wg_of(const YoungDiagram& lambda, const WeingartenOptions& opt = {}) {
  return weingarten_table(2 * lambda.weight(), opt).wg(lambda);
}

/// wg of two pairings on the same (arbitrary) ground set.
inline PolyFrac wg_of(const Pairing& plus, const Pairing& minus, const WeingartenOptions& opt = {}) {
  if (!(plus.ground() == minus.ground())) throw ValidationError("wg: pairing grounds differ");
  return wg_of(young_of_join(plus, minus), opt);
}

struct LeadingOrder {
  int sign = 1;
  mpz_class coefficient = 1;
  /// Exponent of N in Wg; -n + r.
  int exponent = 0;

  /// lim wg = sign * coefficient.
  mpz_class wg_limit() const { return sign * coefficient; }
};

/// (-1)^{n/2 - r} prod C_{lambda_i - 1} N^{-n + r}.
inline LeadingOrder leading_order(const YoungDiagram& lambda) {
  LeadingOrder lo;
  const int k = lambda.weight();
  const int r = static_cast<int>(lambda.num_rows());
  lo.sign = ((k - r) % 2 == 0) ? 1 : -1;
  for (int row : lambda.rows()) lo.coefficient *= catalan(static_cast<unsigned>(row - 1));
  lo.exponent = -2 * k + r;
  return lo;
}

/// C_{pi, rho, sigma} = sum_{rho <= tau <= sigma} mu(tau, sigma)
///   prod_{V in tau} wg(plus|V, minus|V).
inline PolyFrac wg_cumulant(const Pairing& plus, const Pairing& minus, const SetPartition& rho, const SetPartition& sigma,
                            const WeingartenOptions& opt = {}) {
  const SetPartition pi = join(plus.partition(), minus.partition());
  if (!refines(pi, rho) || !refines(rho, sigma)) {
    throw ValidationError("wg_cumulant: need pi_+ v pi_- <= rho <= sigma");
  }
  PolyFrac total;
  for_each_coarsening(rho, [&](const SetPartition& tau) {
    if (!refines(tau, sigma)) return true;
    mpz_class m = mobius(tau, sigma);
    if (m == 0) return true;
    PolyFrac prod(1);
    for (const auto& v : tau.blocks()) prod *= wg_of(plus.restricted_to(v), minus.restricted_to(v), opt);
    total += PolyFrac(Polynomial(m)) * prod;
    return true;
  });
  return total;
}

/// deg(num) - deg(den) <= 2(#sigma - #rho). Zero satisfies every bound.
inline bool wg_cumulant_order_ok(const PolyFrac& c, const SetPartition& rho, const SetPartition& sigma) {
  auto ord = c.order();
  if (!ord) return true;
  return *ord <= 2 * (static_cast<long>(sigma.num_blocks()) - static_cast<long>(rho.num_blocks()));
}

/// Checks G W = Id for the pairings of [n] as a polynomial identity: with
/// Wg(lambda) = P_lambda / D over a common denominator, every entry of G W
/// reduces to sum c N^e P_lambda, which must equal D on the diagonal and 0
/// elsewhere. Returns the number of (row, column) entries checked.
inline std::size_t verify_gram_identity(int n, const WeingartenTable& table, const WeingartenOptions& opt = {}) {
  GramMatrix g = gram_matrix(n, opt);
  const std::size_t m = g.pairings.size();
  const int k = n / 2;
  const std::vector<YoungDiagram> classes = young_diagrams(k);
  std::map<YoungDiagram, std::size_t> class_index;
  for (std::size_t i = 0; i < classes.size(); ++i) class_index.emplace(classes[i], i);

  Polynomial den(1);
  for (const auto& lam : classes) {
    const Polynomial& d = table.Wg(lam).den();
    den = (den * d).divexact(gcd(den, d));
  }
  std::vector<Polynomial> numer;
  for (const auto& lam : classes) {
    const PolyFrac& w = table.Wg(lam);
    numer.push_back(w.num() * den.divexact(w.den()));
  }

  Matrix<int> cls(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      cls(i, j) = static_cast<int>(class_index.at(young_of_join(g.pairings[i], g.pairings[j])));

  const std::size_t width = classes.size() * (static_cast<std::size_t>(k) + 1);
  std::map<std::vector<long>, Polynomial> memo;
  std::size_t checked = 0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<long> counts(width, 0);
      for (std::size_t s = 0; s < m; ++s) {
        counts[static_cast<std::size_t>(cls(s, j)) * (static_cast<std::size_t>(k) + 1) +
               static_cast<std::size_t>(g.exponent(i, s))]++;
      }
      auto it = memo.find(counts);
      if (it == memo.end()) {
        Polynomial sum;
        for (std::size_t c = 0; c < classes.size(); ++c) {
          for (std::size_t e = 0; e <= static_cast<std::size_t>(k); ++e) {
            long cnt = counts[c * (static_cast<std::size_t>(k) + 1) + e];
            if (cnt == 0) continue;
            Polynomial term = numer[c].shifted(e);
            term *= mpz_class(cnt);
            sum += term;
          }
        }
        it = memo.emplace(std::move(counts), std::move(sum)).first;
      }
      const Polynomial expected = (i == j) ? den : Polynomial{};
      if (!(it->second == expected)) {
        throw VerificationError("Gram identity fails at n=" + std::to_string(n) + " entry (" + g.pairings[i].to_string() +
                                ", " + g.pairings[j].to_string() + ")");
      }
      ++checked;
    }
  }
  return checked;
}

/// Full symbolic inverse of the Gram matrix by Gauss-Jordan over Q(N).
inline Matrix<PolyFrac> gram_inverse_symbolic(int n, const WeingartenOptions& opt = {}) {
  GramMatrix g = gram_matrix(n, opt);
  const std::size_t m = g.pairings.size();
  Matrix<PolyFrac> gm(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) gm(i, j) = PolyFrac::N_power(g.exponent(i, j));
  return gauss_jordan_inverse(gm);
}

}  // namespace orthowg

#endif  // ORTHOWG_WEINGARTEN_HPP
