#ifndef ORTHOWG_BRUTE_FORCE_HPP
#define ORTHOWG_BRUTE_FORCE_HPP

// Entrywise evaluation of E[prod tr(...)]: the explicit index sum of the
// traces, with E[O_{i_1 j_1} ... O_{i_m j_m}] expanded over pairs of pairings
// (pi_+, pi_-) with i constant on pi_+ blocks and j constant on pi_- blocks.
// Only the Weingarten table is shared with the genus expansion.

#include <gmpxx.h>

#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "orthowg/error.hpp"
#include "orthowg/expression.hpp"
#include "orthowg/matrix.hpp"
#include "orthowg/weingarten.hpp"

namespace orthowg {

struct BruteForceOptions {
  int max_per_color = 4;
  long max_N = 4;
};

namespace detail {

/// All perfect matchings of `items`, as partner maps over the same indices.
inline void matchings(const std::vector<int>& items, std::vector<std::vector<std::pair<int, int>>>& out) {
  std::vector<std::pair<int, int>> cur;
  std::vector<char> used(items.size(), 0);
  std::function<void()> rec = [&] {
    std::size_t i = 0;
    while (i < items.size() && used[i]) ++i;
    if (i == items.size()) {
      out.push_back(cur);
      return;
    }
    used[i] = 1;
    for (std::size_t j = i + 1; j < items.size(); ++j) {
      if (used[j]) continue;
      used[j] = 1;
      cur.emplace_back(items[i], items[j]);
      rec();
      cur.pop_back();
      used[j] = 0;
    }
    used[i] = 0;
  };
  rec();
}

struct Dsu {
  std::vector<int> parent;
  explicit Dsu(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

/// Coset type of (p, q): halves of the block sizes of p v q, decreasing.
inline YoungDiagram coset_type(const std::vector<std::pair<int, int>>& p, const std::vector<std::pair<int, int>>& q,
                               const std::vector<int>& items) {
  std::map<int, int> idx;
  for (std::size_t i = 0; i < items.size(); ++i) idx[items[i]] = static_cast<int>(i);
  Dsu d(items.size());
  for (const auto& [a, b] : p) d.unite(idx[a], idx[b]);
  for (const auto& [a, b] : q) d.unite(idx[a], idx[b]);
  std::map<int, int> sizes;
  for (std::size_t i = 0; i < items.size(); ++i) ++sizes[d.find(static_cast<int>(i))];
  std::vector<int> rows;
  for (auto [root, s] : sizes) rows.push_back(s / 2);
  std::sort(rows.rbegin(), rows.rend());
  return YoungDiagram(rows);
}

}  // namespace detail

/// Exact E[prod tr(...)] for N x N rational matrices by direct summation.
inline mpq_class brute_force_moment(const TraceExpression& expr, const std::map<int, Matrix<mpq_class>>& matrices, long N,
                                    const BruteForceOptions& opt = {}) {
  if (N < 1 || N > opt.max_N) {
    throw CapError("brute_force_moment: N=" + std::to_string(N) + " outside 1.." + std::to_string(opt.max_N));
  }
  const int n = expr.n();
  for (int c : expr.colors()) {
    if (static_cast<int>(expr.positions_of_color(c).size()) > opt.max_per_color) {
      throw CapError("brute_force_moment: more than " + std::to_string(opt.max_per_color) + " factors of color " +
                     std::to_string(c));
    }
  }
  // Matrix at each position (identity, X_L or X_L^T).
  std::vector<Matrix<mpq_class>> xs;
  for (int k = 1; k <= n; ++k) {
    const int slot = expr.at(k).slot;
    if (slot == 0) {
      xs.push_back(Matrix<mpq_class>::identity(static_cast<std::size_t>(N)));
      continue;
    }
    auto it = matrices.find(std::abs(slot));
    if (it == matrices.end()) throw ValidationError("brute_force_moment: no matrix for label " + std::to_string(slot));
    if (it->second.rows() != static_cast<std::size_t>(N) || it->second.cols() != static_cast<std::size_t>(N)) {
      throw ValidationError("brute_force_moment: matrix " + std::to_string(std::abs(slot)) + " is not NxN");
    }
    xs.push_back(slot > 0 ? it->second : it->second.transpose());
  }
  // Next position inside the same trace.
  std::vector<int> next(static_cast<std::size_t>(n));
  {
    int start = 0;
    for (const auto& t : expr.traces()) {
      const int len = static_cast<int>(t.size());
      for (int i = 0; i < len; ++i) next[static_cast<std::size_t>(start + i)] = start + (i + 1) % len;
      start += len;
    }
  }
  // Variables: u_k = 2k (left index of the O-factor at k), v_k = 2k + 1.
  // O^{eps} (u, v) reads O(u, v) for eps = + and O(v, u) for eps = -.
  auto row_var = [&](int k) { return expr.at(k + 1).eps > 0 ? 2 * k : 2 * k + 1; };
  auto col_var = [&](int k) { return expr.at(k + 1).eps > 0 ? 2 * k + 1 : 2 * k; };

  const std::vector<int> colors = expr.colors();
  std::vector<std::vector<int>> members;
  std::vector<std::vector<std::vector<std::pair<int, int>>>> match;
  for (int c : colors) {
    std::vector<int> pos;
    for (int k = 0; k < n; ++k) {
      if (expr.at(k + 1).color == c) pos.push_back(k);
    }
    if (pos.size() % 2 != 0) return 0;
    members.push_back(pos);
    match.emplace_back();
    detail::matchings(pos, match.back());
  }

  std::map<std::pair<int, YoungDiagram>, mpq_class> wg_values;
  auto Wg = [&](int m, const YoungDiagram& lam) -> const mpq_class& {
    auto key = std::make_pair(m, lam);
    auto it = wg_values.find(key);
    if (it == wg_values.end()) it = wg_values.emplace(key, weingarten_table(m).Wg(lam).eval_at(N)).first;
    return it->second;
  };

  mpq_class total = 0;
  std::vector<std::size_t> choice(2 * colors.size(), 0);
  std::function<void(std::size_t)> over_pairings = [&](std::size_t c) {
    if (c < colors.size()) {
      for (std::size_t a = 0; a < match[c].size(); ++a) {
        for (std::size_t b = 0; b < match[c].size(); ++b) {
          choice[2 * c] = a;
          choice[2 * c + 1] = b;
          over_pairings(c + 1);
        }
      }
      return;
    }
    mpq_class weight = 1;
    detail::Dsu d(static_cast<std::size_t>(2 * n));
    for (std::size_t cc = 0; cc < colors.size(); ++cc) {
      const auto& plus = match[cc][choice[2 * cc]];
      const auto& minus = match[cc][choice[2 * cc + 1]];
      weight *= Wg(static_cast<int>(members[cc].size()), detail::coset_type(plus, minus, members[cc]));
      for (const auto& [a, b] : plus) d.unite(row_var(a), row_var(b));
      for (const auto& [a, b] : minus) d.unite(col_var(a), col_var(b));
    }
    if (weight == 0) return;
    std::map<int, int> cls;
    std::vector<int> var_class(static_cast<std::size_t>(2 * n));
    for (int v = 0; v < 2 * n; ++v) {
      auto [it, fresh] = cls.emplace(d.find(v), static_cast<int>(cls.size()));
      var_class[static_cast<std::size_t>(v)] = it->second;
    }
    const std::size_t classes = cls.size();
    std::vector<long> value(classes, 0);
    mpq_class sum = 0;
    for (;;) {
      mpq_class prod = 1;
      for (int k = 0; k < n && prod != 0; ++k) {
        const long vk = value[static_cast<std::size_t>(var_class[static_cast<std::size_t>(2 * k + 1)])];
        const long un = value[static_cast<std::size_t>(var_class[static_cast<std::size_t>(2 * next[static_cast<std::size_t>(k)])])];
        prod *= xs[static_cast<std::size_t>(k)](static_cast<std::size_t>(vk), static_cast<std::size_t>(un));
      }
      sum += prod;
      std::size_t pos = 0;
      while (pos < classes && ++value[pos] == N) value[pos++] = 0;
      if (pos == classes) break;
    }
    total += weight * sum;
  };
  over_pairings(0);
  mpz_class norm;
  mpz_ui_pow_ui(norm.get_mpz_t(), static_cast<unsigned long>(N), expr.num_traces());
  total /= norm;
  return total;
}

}  // namespace orthowg

#endif  // ORTHOWG_BRUTE_FORCE_HPP
