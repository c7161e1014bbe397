#ifndef ORTHOWG_SETPART_HPP
#define ORTHOWG_SETPART_HPP

// Set partitions over finite sets of signed integers, the partition lattice,
// its Moebius function, pairings, Young diagrams and the classical
// moment/cumulant conversion.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "orthowg/error.hpp"

namespace orthowg {

/// Enumeration guards. These are configuration, adjust per call.
struct EnumerationCaps {
  std::size_t partitions = 12;
  std::size_t pairings = 16;
};

/// Ordered finite set of nonzero integers (ascending, no duplicates).
class IndexSet {
 public:
  IndexSet() = default;

  explicit IndexSet(std::vector<int> elements) : elems_(std::move(elements)) {
    std::sort(elems_.begin(), elems_.end());
    if (std::adjacent_find(elems_.begin(), elems_.end()) != elems_.end()) {
      throw ValidationError("IndexSet: duplicate element");
    }
    if (std::binary_search(elems_.begin(), elems_.end(), 0)) {
      throw ValidationError("IndexSet: 0 is not a valid index");
    }
  }

  IndexSet(std::initializer_list<int> elements) : IndexSet(std::vector<int>(elements)) {}

  /// [n] = {1, ..., n}
  static IndexSet range(int n) {
    std::vector<int> v(static_cast<std::size_t>(std::max(n, 0)));
    std::iota(v.begin(), v.end(), 1);
    return IndexSet(std::move(v));
  }

  /// +-[n] = {-n, ..., -1, 1, ..., n}
  static IndexSet symmetric(int n) {
    std::vector<int> v;
    for (int k = 1; k <= n; ++k) {
      v.push_back(k);
      v.push_back(-k);
    }
    return IndexSet(std::move(v));
  }

  /// +-I for a set I with I and -I disjoint.
  IndexSet plus_minus() const {
    std::vector<int> v = elems_;
    for (int k : elems_) v.push_back(-k);
    return IndexSet(std::move(v));
  }

  IndexSet negated() const {
    std::vector<int> v;
    v.reserve(elems_.size());
    for (int k : elems_) v.push_back(-k);
    return IndexSet(std::move(v));
  }

  std::size_t size() const noexcept { return elems_.size(); }
  bool empty() const noexcept { return elems_.empty(); }
  bool contains(int k) const { return std::binary_search(elems_.begin(), elems_.end(), k); }

  /// Position of k in ascending order; throws if absent.
  std::size_t index_of(int k) const {
    auto it = std::lower_bound(elems_.begin(), elems_.end(), k);
    if (it == elems_.end() || *it != k) {
      throw ValidationError("IndexSet: element " + std::to_string(k) + " not in set");
    }
    return static_cast<std::size_t>(it - elems_.begin());
  }

  int operator[](std::size_t i) const { return elems_[i]; }
  const std::vector<int>& elements() const noexcept { return elems_; }
  auto begin() const noexcept { return elems_.begin(); }
  auto end() const noexcept { return elems_.end(); }

  /// True when the set equals its own negation.
  bool is_symmetric() const {
    return std::all_of(elems_.begin(), elems_.end(), [&](int k) { return contains(-k); });
  }

  bool is_subset_of(const IndexSet& other) const {
    return std::includes(other.elems_.begin(), other.elems_.end(), elems_.begin(), elems_.end());
  }

  int max_abs() const {
    int m = 0;
    for (int k : elems_) m = std::max(m, k < 0 ? -k : k);
    return m;
  }

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::vector<int> elems_;
};

/// A partition of an IndexSet. Blocks are kept in canonical form: each block
/// sorted ascending, blocks sorted by their minimum element.
class SetPartition {
 public:
  SetPartition() = default;

  /// Partition from block labels aligned with ground (label of ground[i]).
  static SetPartition from_labels(IndexSet ground, std::span<const int> labels) {
    if (labels.size() != ground.size()) throw ValidationError("SetPartition: label count mismatch");
    SetPartition p;
    p.ground_ = std::move(ground);
    p.label_.assign(labels.size(), -1);
    std::map<int, int> relabel;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      auto [it, fresh] = relabel.emplace(labels[i], static_cast<int>(relabel.size()));
      p.label_[i] = it->second;
    }
    p.rebuild_blocks();
    return p;
  }

  static SetPartition from_blocks(IndexSet ground, const std::vector<std::vector<int>>& blocks) {
    std::vector<int> labels(ground.size(), -1);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (blocks[b].empty()) throw ValidationError("SetPartition: empty block");
      for (int k : blocks[b]) {
        std::size_t i = ground.index_of(k);
        if (labels[i] != -1) throw ValidationError("SetPartition: blocks overlap at " + std::to_string(k));
        labels[i] = static_cast<int>(b);
      }
    }
    if (std::find(labels.begin(), labels.end(), -1) != labels.end()) {
      throw ValidationError("SetPartition: blocks do not cover the ground set");
    }
    return from_labels(std::move(ground), labels);
  }

  /// Partition whose ground set is the union of the given blocks.
  static SetPartition from_blocks(const std::vector<std::vector<int>>& blocks) {
    std::vector<int> all;
    for (const auto& b : blocks) all.insert(all.end(), b.begin(), b.end());
    return from_blocks(IndexSet(std::move(all)), blocks);
  }

  /// 0_I: all singletons.
  static SetPartition zero(const IndexSet& ground) {
    std::vector<int> labels(ground.size());
    std::iota(labels.begin(), labels.end(), 0);
    return from_labels(ground, labels);
  }

  /// 1_I: one block.
  static SetPartition one(const IndexSet& ground) {
    std::vector<int> labels(ground.size(), 0);
    return from_labels(ground, labels);
  }

  const IndexSet& ground() const noexcept { return ground_; }
  const std::vector<std::vector<int>>& blocks() const noexcept { return blocks_; }
  std::size_t num_blocks() const noexcept { return blocks_.size(); }

  /// Canonical label of ground[i]; labels number blocks by their minimum.
  const std::vector<int>& labels() const noexcept { return label_; }
  int block_index_of(int k) const { return label_[ground_.index_of(k)]; }
  const std::vector<int>& block_of(int k) const { return blocks_[static_cast<std::size_t>(block_index_of(k))]; }

  bool same_block(int a, int b) const { return block_index_of(a) == block_index_of(b); }

  /// Sizes of the blocks, in canonical block order.
  std::vector<std::size_t> block_sizes() const {
    std::vector<std::size_t> s;
    for (const auto& b : blocks_) s.push_back(b.size());
    return s;
  }

  bool is_pairing() const {
    return std::all_of(blocks_.begin(), blocks_.end(), [](const auto& b) { return b.size() == 2; });
  }

  /// Restriction to a union of blocks.
  SetPartition restricted_to(const std::vector<int>& subset) const {
    IndexSet sub{std::vector<int>(subset)};
    std::vector<int> labels;
    labels.reserve(sub.size());
    for (int k : sub) labels.push_back(block_index_of(k));
    return from_labels(std::move(sub), labels);
  }

  std::string to_string() const {
    std::ostringstream os;
    os << '{';
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      if (b) os << ',';
      os << '{';
      for (std::size_t i = 0; i < blocks_[b].size(); ++i) {
        if (i) os << ',';
        os << blocks_[b][i];
      }
      os << '}';
    }
    os << '}';
    return os.str();
  }

  friend bool operator==(const SetPartition& a, const SetPartition& b) {
    return a.ground_ == b.ground_ && a.label_ == b.label_;
  }
  friend bool operator<(const SetPartition& a, const SetPartition& b) {
    if (a.ground_.elements() != b.ground_.elements()) return a.ground_.elements() < b.ground_.elements();
    return a.label_ < b.label_;
  }
  friend std::ostream& operator<<(std::ostream& os, const SetPartition& p) { return os << p.to_string(); }

 private:
  void rebuild_blocks() {
    // Renumber labels so that blocks are ordered by their minimum element.
    std::vector<int> order(label_.size(), -1);
    int next = 0;
    for (auto& l : label_) {
      if (order[static_cast<std::size_t>(l)] == -1) order[static_cast<std::size_t>(l)] = next++;
      l = order[static_cast<std::size_t>(l)];
    }
    blocks_.assign(static_cast<std::size_t>(next), {});
    for (std::size_t i = 0; i < label_.size(); ++i) {
      blocks_[static_cast<std::size_t>(label_[i])].push_back(ground_[i]);
    }
  }

  IndexSet ground_;
  std::vector<int> label_;
  std::vector<std::vector<int>> blocks_;
};

namespace detail {

inline void require_same_ground(const SetPartition& p, const SetPartition& q, const char* op) {
  if (!(p.ground() == q.ground())) throw ValidationError(std::string(op) + ": ground sets differ");
}

template <class T>
T from_mpz(const mpz_class& z) {
  if constexpr (std::is_floating_point_v<T>) return static_cast<T>(z.get_d());
  else return T(z);
}

struct UnionFind {
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> parent;
};

}  // namespace detail

/// p joined with q: the finest partition coarser than both.
inline SetPartition join(const SetPartition& p, const SetPartition& q) {
  detail::require_same_ground(p, q, "join");
  const std::size_t n = p.ground().size();
  detail::UnionFind uf(n);
  for (const auto* part : {&p, &q}) {
    std::vector<std::size_t> first(part->num_blocks(), n);
    for (std::size_t i = 0; i < n; ++i) {
      auto b = static_cast<std::size_t>(part->labels()[i]);
      if (first[b] == n) first[b] = i;
      else uf.unite(first[b], i);
    }
  }
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(uf.find(i));
  return SetPartition::from_labels(p.ground(), labels);
}

/// p met with q: blockwise intersections.
inline SetPartition meet(const SetPartition& p, const SetPartition& q) {
  detail::require_same_ground(p, q, "meet");
  const std::size_t n = p.ground().size();
  std::vector<int> labels(n);
  const int stride = static_cast<int>(q.num_blocks());
  for (std::size_t i = 0; i < n; ++i) labels[i] = p.labels()[i] * stride + q.labels()[i];
  return SetPartition::from_labels(p.ground(), labels);
}

/// p is finer than q (every block of p inside a block of q).
inline bool refines(const SetPartition& p, const SetPartition& q) {
  detail::require_same_ground(p, q, "refines");
  std::vector<int> image(p.num_blocks(), -1);
  for (std::size_t i = 0; i < p.labels().size(); ++i) {
    auto b = static_cast<std::size_t>(p.labels()[i]);
    if (image[b] == -1) image[b] = q.labels()[i];
    else if (image[b] != q.labels()[i]) return false;
  }
  return true;
}

/// Moebius function of the partition lattice. Zero unless p refines q;
/// otherwise the product over blocks W of q of (-1)^(m-1) (m-1)!, where m
/// counts the blocks of p inside W.
inline mpz_class mobius(const SetPartition& p, const SetPartition& q) {
  if (!refines(p, q)) return 0;
  std::vector<unsigned> inside(q.num_blocks(), 0);
  for (const auto& block : p.blocks()) inside[static_cast<std::size_t>(q.block_index_of(block.front()))]++;
  mpz_class result = 1;
  for (unsigned m : inside) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), m - 1);
    if ((m - 1) % 2 == 1) f = -f;
    result *= f;
  }
  return result;
}

/// Calls visit(partition) for every partition of ground, in restricted-growth
/// order. Returning false from visit stops the enumeration.
template <class Visit>
void for_each_partition(const IndexSet& ground, Visit&& visit, const EnumerationCaps& caps = {}) {
  const std::size_t n = ground.size();
  if (n > caps.partitions) {
    throw CapError("enumerate_partitions: ground size " + std::to_string(n) + " exceeds cap " +
                   std::to_string(caps.partitions));
  }
  if (n == 0) {
    visit(SetPartition::from_labels(ground, std::vector<int>{}));
    return;
  }
  std::vector<int> a(n, 0);    // restricted growth string
  std::vector<int> mx(n, 0);   // mx[i] = max(a[0..i-1])
  while (true) {
    if (!visit(SetPartition::from_labels(ground, a))) return;
    std::size_t i = n - 1;
    while (i > 0 && a[i] == mx[i] + 1) --i;
    if (i == 0) return;
    ++a[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      a[j] = 0;
      mx[j] = std::max(mx[j - 1], a[j - 1]);
    }
    if (i + 1 < n) mx[i + 1] = std::max(mx[i], a[i]);
  }
}

inline std::vector<SetPartition> enumerate_partitions(const IndexSet& ground, const EnumerationCaps& caps = {}) {
  std::vector<SetPartition> out;
  for_each_partition(ground, [&](const SetPartition& p) { out.push_back(p); return true; }, caps);
  return out;
}

/// A set partition with every block of size two.
class Pairing {
 public:
  Pairing() = default;

  explicit Pairing(SetPartition p) : part_(std::move(p)) {
    if (!part_.is_pairing()) throw ValidationError("Pairing: every block must have two elements");
  }

  static Pairing from_pairs(const std::vector<std::pair<int, int>>& pairs) {
    std::vector<std::vector<int>> blocks;
    for (auto [a, b] : pairs) blocks.push_back({a, b});
    return Pairing(SetPartition::from_blocks(blocks));
  }

  static Pairing from_pairs(const IndexSet& ground, const std::vector<std::pair<int, int>>& pairs) {
    std::vector<std::vector<int>> blocks;
    for (auto [a, b] : pairs) blocks.push_back({a, b});
    return Pairing(SetPartition::from_blocks(ground, blocks));
  }

  int partner(int k) const {
    const auto& b = part_.block_of(k);
    return b[0] == k ? b[1] : b[0];
  }

  const SetPartition& partition() const noexcept { return part_; }
  const IndexSet& ground() const noexcept { return part_.ground(); }
  std::size_t num_pairs() const noexcept { return part_.num_blocks(); }

  /// Restriction to a union of pairs.
  Pairing restricted_to(const std::vector<int>& subset) const { return Pairing(part_.restricted_to(subset)); }

  std::string to_string() const { return part_.to_string(); }

  friend bool operator==(const Pairing& a, const Pairing& b) { return a.part_ == b.part_; }
  friend bool operator<(const Pairing& a, const Pairing& b) { return a.part_ < b.part_; }

 private:
  SetPartition part_;
};

/// All (|ground|-1)!! pairings, pairing the smallest unpaired element with
/// each candidate in ascending order. Empty for odd ground sets.
inline std::vector<Pairing> enumerate_pairings(const IndexSet& ground, const EnumerationCaps& caps = {}) {
  const std::size_t n = ground.size();
  if (n > caps.pairings) {
    throw CapError("enumerate_pairings: ground size " + std::to_string(n) + " exceeds cap " +
                   std::to_string(caps.pairings));
  }
  std::vector<Pairing> out;
  if (n % 2 == 1) return out;
  std::vector<int> labels(n, -1);
  std::function<void(int)> rec = [&](int next_label) {
    std::size_t first = 0;
    while (first < n && labels[first] != -1) ++first;
    if (first == n) {
      out.emplace_back(SetPartition::from_labels(ground, labels));
      return;
    }
    labels[first] = next_label;
    for (std::size_t j = first + 1; j < n; ++j) {
      if (labels[j] != -1) continue;
      labels[j] = next_label;
      rec(next_label + 1);
      labels[j] = -1;
    }
    labels[first] = -1;
  };
  rec(0);
  return out;
}

/// ker(f): blocks are the preimages of points. values[i] is f(ground[i]).
template <class T>
SetPartition kernel_of(const IndexSet& ground, std::span<const T> values) {
  if (values.size() != ground.size()) throw ValidationError("kernel_of: value count mismatch");
  std::vector<T> distinct(values.begin(), values.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<int> labels(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    labels[i] = static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(), values[i]) - distinct.begin());
  }
  return SetPartition::from_labels(ground, labels);
}

template <class T>
SetPartition kernel_of(const IndexSet& ground, const std::vector<T>& values) {
  return kernel_of(ground, std::span<const T>(values));
}

/// Partition of an integer, rows weakly decreasing.
class YoungDiagram {
 public:
  YoungDiagram() = default;

  explicit YoungDiagram(std::vector<int> rows) : rows_(std::move(rows)) {
    if (std::any_of(rows_.begin(), rows_.end(), [](int r) { return r < 1; })) {
      throw ValidationError("YoungDiagram: rows must be positive");
    }
    std::sort(rows_.begin(), rows_.end(), std::greater<>());
  }

  YoungDiagram(std::initializer_list<int> rows) : YoungDiagram(std::vector<int>(rows)) {}

  /// Rows are half the block sizes of a partition with even blocks.
  static YoungDiagram from_even_blocks(const SetPartition& p) {
    std::vector<int> rows;
    for (const auto& b : p.blocks()) {
      if (b.size() % 2 != 0) throw ValidationError("YoungDiagram: odd block");
      rows.push_back(static_cast<int>(b.size() / 2));
    }
    return YoungDiagram(std::move(rows));
  }

  /// Parses "3,1".
  static YoungDiagram parse(const std::string& text) {
    std::vector<int> rows;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        int v = std::stoi(item, &used);
        if (used != item.size()) throw std::invalid_argument(item);
        rows.push_back(v);
      } catch (const std::exception&) {
        throw ValidationError("YoungDiagram: cannot parse '" + text + "'");
      }
    }
    return YoungDiagram(std::move(rows));
  }

  const std::vector<int>& rows() const noexcept { return rows_; }
  std::size_t num_rows() const noexcept { return rows_.size(); }
  int weight() const { return std::accumulate(rows_.begin(), rows_.end(), 0); }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(rows_[i]);
    }
    return s;
  }

  friend bool operator==(const YoungDiagram&, const YoungDiagram&) = default;
  friend auto operator<=>(const YoungDiagram& a, const YoungDiagram& b) { return a.rows_ <=> b.rows_; }

 private:
  std::vector<int> rows_;
};

/// All Young diagrams of weight n, in reverse lexicographic order ((n) first).
inline std::vector<YoungDiagram> young_diagrams(int n) {
  std::vector<YoungDiagram> out;
  std::vector<int> rows;
  std::function<void(int, int)> rec = [&](int left, int cap) {
    if (left == 0) {
      out.emplace_back(rows);
      return;
    }
    for (int r = std::min(left, cap); r >= 1; --r) {
      rows.push_back(r);
      rec(left - r, r);
      rows.pop_back();
    }
  };
  if (n == 0) return {YoungDiagram{}};
  rec(n, n);
  return out;
}

/// Calls visit(rho) for every rho finer than or equal to target.
template <class Visit>
void for_each_refinement(const SetPartition& target, Visit&& visit, const EnumerationCaps& caps = {}) {
  const auto& blocks = target.blocks();
  std::vector<std::vector<SetPartition>> per_block;
  per_block.reserve(blocks.size());
  for (const auto& b : blocks) per_block.push_back(enumerate_partitions(IndexSet(b), caps));
  const IndexSet& ground = target.ground();
  std::vector<std::size_t> choice(blocks.size(), 0);
  while (true) {
    std::vector<int> labels(ground.size());
    int offset = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const SetPartition& sub = per_block[b][choice[b]];
      for (std::size_t i = 0; i < sub.ground().size(); ++i) {
        labels[ground.index_of(sub.ground()[i])] = offset + sub.labels()[i];
      }
      offset += static_cast<int>(sub.num_blocks());
    }
    if (!visit(SetPartition::from_labels(ground, labels))) return;
    std::size_t b = 0;
    while (b < blocks.size() && ++choice[b] == per_block[b].size()) choice[b++] = 0;
    if (b == blocks.size()) return;
  }
}

/// Calls visit(sigma) for every sigma coarser than or equal to base, by
/// partitioning the blocks of base.
template <class Visit>
void for_each_coarsening(const SetPartition& base, Visit&& visit, const EnumerationCaps& caps = {}) {
  IndexSet block_ids = IndexSet::range(static_cast<int>(base.num_blocks()));
  for_each_partition(
      block_ids,
      [&](const SetPartition& merge) {
        std::vector<int> labels(base.ground().size());
        for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = merge.labels()[static_cast<std::size_t>(base.labels()[i])];
        return visit(SetPartition::from_labels(base.ground(), labels));
      },
      caps);
}

/// k_target = sum over rho finer than target of mu(rho, target) a_rho.
/// `moment(rho)` returns std::optional<T>; a missing value is an error.
template <class T, class MomentOracle>
T cumulant_from_moments(const SetPartition& target, MomentOracle&& moment, const EnumerationCaps& caps = {}) {
  T total = 0;
  for_each_refinement(
      target,
      [&](const SetPartition& rho) {
        std::optional<T> a = moment(rho);
        if (!a) throw ValidationError("cumulant_from_moments: oracle has no value for " + rho.to_string());
        mpz_class mu = mobius(rho, target);
        total += detail::from_mpz<T>(mu) * *a;
        return true;
      },
      caps);
  return total;
}

/// a_target = sum over rho finer than target of k_rho.
template <class T, class CumulantOracle>
T moment_from_cumulants(const SetPartition& target, CumulantOracle&& cumulant, const EnumerationCaps& caps = {}) {
  T total = 0;
  for_each_refinement(
      target,
      [&](const SetPartition& rho) {
        std::optional<T> k = cumulant(rho);
        if (!k) throw ValidationError("moment_from_cumulants: oracle has no value for " + rho.to_string());
        total += *k;
        return true;
      },
      caps);
  return total;
}

/// Multiplicative extension: f_rho = product over blocks of f(block).
template <class T, class BlockValue>
T multiplicative(const SetPartition& rho, BlockValue&& block_value) {
  T prod = 1;
  for (const auto& b : rho.blocks()) prod *= block_value(b);
  return prod;
}

}  // namespace orthowg

#endif  // ORTHOWG_SETPART_HPP
