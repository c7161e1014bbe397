#ifndef ORTHOWG_PERMAP_HPP
#define ORTHOWG_PERMAP_HPP

// Permutations of finite sets of signed integers, premaps on +-I, the
// pairing/premap correspondence and the Euler characteristic of a gluing.
//
// Composition convention: compose(s, t)(k) = s(t(k)). Products written
// left-to-right, e.g. phi_+^{-1} a^{-1} phi_-, are applied right-to-left.

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "orthowg/error.hpp"
#include "orthowg/setpart.hpp"

namespace orthowg {

using Cycle = std::vector<int>;

/// A bijection of an IndexSet onto itself.
class SignedPermutation {
 public:
  SignedPermutation() = default;

  static SignedPermutation identity(IndexSet domain) {
    SignedPermutation s;
    s.domain_ = std::move(domain);
    s.image_ = s.domain_.elements();
    s.build_lookup();
    return s;
  }

  /// images[i] is the image of domain[i].
  static SignedPermutation from_mapping(IndexSet domain, std::vector<int> images) {
    if (images.size() != domain.size()) throw ValidationError("SignedPermutation: image count mismatch");
    SignedPermutation s;
    s.domain_ = std::move(domain);
    s.image_ = std::move(images);
    s.build_lookup();
    std::vector<char> hit(s.domain_.size(), 0);
    for (int v : s.image_) {
      if (!s.in_domain(v)) throw ValidationError("SignedPermutation: image " + std::to_string(v) + " outside domain");
      auto i = s.index(v);
      if (hit[i]) throw ValidationError("SignedPermutation: not injective at " + std::to_string(v));
      hit[i] = 1;
    }
    return s;
  }

  /// Elements of domain missing from the cycles are fixed points.
  static SignedPermutation from_cycles(IndexSet domain, const std::vector<Cycle>& cycles) {
    std::vector<int> images = domain.elements();
    std::vector<char> seen(domain.size(), 0);
    for (const auto& c : cycles) {
      for (std::size_t i = 0; i < c.size(); ++i) {
        std::size_t at = domain.index_of(c[i]);
        if (seen[at]) throw ValidationError("SignedPermutation: element " + std::to_string(c[i]) + " repeated in cycles");
        seen[at] = 1;
        images[at] = c[(i + 1) % c.size()];
      }
    }
    return from_mapping(std::move(domain), std::move(images));
  }

  /// Domain is the union of the cycle elements.
  static SignedPermutation from_cycles(const std::vector<Cycle>& cycles) {
    std::vector<int> all;
    for (const auto& c : cycles) all.insert(all.end(), c.begin(), c.end());
    return from_cycles(IndexSet(std::move(all)), cycles);
  }

  const IndexSet& domain() const noexcept { return domain_; }
  std::size_t size() const noexcept { return domain_.size(); }

  bool in_domain(int k) const {
    int off = k + bound_;
    return off >= 0 && off < static_cast<int>(pos_.size()) && pos_[static_cast<std::size_t>(off)] >= 0;
  }

  int operator()(int k) const {
    if (!in_domain(k)) throw ValidationError("SignedPermutation: " + std::to_string(k) + " not in domain");
    return image_[index(k)];
  }

  /// Cycles in canonical form: each cycle starts at its element of smallest
  /// |k| (the positive one on ties); cycles ordered by that element, positive
  /// before negative.
  std::vector<Cycle> cycles() const {
    std::vector<Cycle> out;
    std::vector<char> seen(domain_.size(), 0);
    for (std::size_t i = 0; i < domain_.size(); ++i) {
      if (seen[i]) continue;
      Cycle c;
      int k = domain_[i];
      while (!seen[index(k)]) {
        seen[index(k)] = 1;
        c.push_back(k);
        k = image_[index(k)];
      }
      auto start = std::min_element(c.begin(), c.end(), abs_then_positive);
      std::rotate(c.begin(), start, c.end());
      out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end(), [](const Cycle& a, const Cycle& b) { return abs_then_positive(a[0], b[0]); });
    return out;
  }

  std::size_t num_cycles() const {
    std::size_t count = 0;
    std::vector<char> seen(domain_.size(), 0);
    for (std::size_t i = 0; i < domain_.size(); ++i) {
      if (seen[i]) continue;
      ++count;
      std::size_t j = i;
      while (!seen[j]) {
        seen[j] = 1;
        j = index(image_[j]);
      }
    }
    return count;
  }

  /// Orbits as a set partition of the domain.
  SetPartition orbits() const {
    std::vector<std::vector<int>> blocks;
    for (auto& c : cycles()) blocks.push_back(std::move(c));
    return SetPartition::from_blocks(domain_, blocks);
  }

  SignedPermutation inverse() const {
    std::vector<int> images(domain_.size());
    for (std::size_t i = 0; i < domain_.size(); ++i) images[index(image_[i])] = domain_[i];
    SignedPermutation s;
    s.domain_ = domain_;
    s.image_ = std::move(images);
    s.bound_ = bound_;
    s.pos_ = pos_;
    return s;
  }

  /// The permutation extended by fixed points to a larger domain.
  SignedPermutation extended_to(const IndexSet& larger) const {
    if (!domain_.is_subset_of(larger)) throw ValidationError("extended_to: domain is not a subset");
    std::vector<int> images = larger.elements();
    for (std::size_t i = 0; i < domain_.size(); ++i) images[larger.index_of(domain_[i])] = image_[i];
    return from_mapping(larger, std::move(images));
  }

  /// |pi| = |I| - #(pi), the minimal number of transpositions.
  std::size_t length() const { return domain_.size() - num_cycles(); }

  bool is_identity() const { return image_ == domain_.elements(); }

  std::string to_string() const {
    std::string s;
    for (const auto& c : cycles()) {
      s += '(';
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(c[i]);
      }
      s += ')';
    }
    return s.empty() ? "()" : s;
  }

  friend bool operator==(const SignedPermutation& a, const SignedPermutation& b) {
    return a.domain_ == b.domain_ && a.image_ == b.image_;
  }
  friend bool operator<(const SignedPermutation& a, const SignedPermutation& b) {
    if (a.domain_.elements() != b.domain_.elements()) return a.domain_.elements() < b.domain_.elements();
    return a.image_ < b.image_;
  }
  friend std::ostream& operator<<(std::ostream& os, const SignedPermutation& s) { return os << s.to_string(); }

  static bool abs_then_positive(int a, int b) {
    int aa = std::abs(a), bb = std::abs(b);
    if (aa != bb) return aa < bb;
    return a > b;
  }

 private:
  std::size_t index(int k) const { return static_cast<std::size_t>(pos_[static_cast<std::size_t>(k + bound_)]); }

  void build_lookup() {
    bound_ = domain_.max_abs();
    pos_.assign(static_cast<std::size_t>(2 * bound_ + 1), -1);
    for (std::size_t i = 0; i < domain_.size(); ++i) pos_[static_cast<std::size_t>(domain_[i] + bound_)] = static_cast<int>(i);
  }

  IndexSet domain_;
  std::vector<int> image_;
  int bound_ = 0;
  std::vector<int> pos_;
};

/// (s o t)(k) = s(t(k)).
inline SignedPermutation compose(const SignedPermutation& s, const SignedPermutation& t) {
  if (!(s.domain() == t.domain())) throw ValidationError("compose: domains differ");
  std::vector<int> images;
  images.reserve(t.size());
  for (int k : t.domain()) images.push_back(s(t(k)));
  return SignedPermutation::from_mapping(t.domain(), std::move(images));
}

inline SignedPermutation inverse(const SignedPermutation& s) { return s.inverse(); }

/// r s r^{-1}; its cycles are those of s with every k replaced by r(k).
inline SignedPermutation conjugate_by(const SignedPermutation& s, const SignedPermutation& r) {
  return compose(compose(r, s), r.inverse());
}

/// Induced permutation on J: first return of the orbit to J.
inline SignedPermutation induced_permutation(const SignedPermutation& s, const IndexSet& subset) {
  if (!subset.is_subset_of(s.domain())) throw ValidationError("induced_permutation: subset not contained in domain");
  std::vector<int> images;
  images.reserve(subset.size());
  for (int k : subset) {
    int m = s(k);
    while (!subset.contains(m)) m = s(m);
    images.push_back(m);
  }
  return SignedPermutation::from_mapping(subset, std::move(images));
}

/// Signs epsilon(1..n), stored 0-based; delta_eps(k) = eps(|k|) k.
class EpsilonSigns {
 public:
  EpsilonSigns() = default;
  explicit EpsilonSigns(std::vector<int> signs) : signs_(std::move(signs)) {
    for (int e : signs_) {
      if (e != 1 && e != -1) throw ValidationError("EpsilonSigns: entries must be +1 or -1");
    }
  }
  static EpsilonSigns all_plus(std::size_t n) { return EpsilonSigns(std::vector<int>(n, 1)); }
  /// epsilon(k) = (-1)^k.
  static EpsilonSigns alternating(std::size_t n) {
    std::vector<int> s(n);
    for (std::size_t k = 1; k <= n; ++k) s[k - 1] = (k % 2 == 0) ? 1 : -1;
    return EpsilonSigns(std::move(s));
  }

  int operator()(int k) const {
    auto a = static_cast<std::size_t>(std::abs(k));
    if (a == 0 || a > signs_.size()) throw ValidationError("EpsilonSigns: index out of range");
    return signs_[a - 1];
  }
  int apply(int k) const { return (*this)(k) * k; }
  std::size_t size() const noexcept { return signs_.size(); }
  const std::vector<int>& values() const noexcept { return signs_; }

 private:
  std::vector<int> signs_;
};

/// delta s delta, delta(k) = -k.
inline SignedPermutation negate_conjugate(const SignedPermutation& s) {
  std::vector<int> images;
  images.reserve(s.size());
  for (int k : s.domain()) images.push_back(-s(-k));
  return SignedPermutation::from_mapping(s.domain(), std::move(images));
}

/// delta_eps s delta_eps.
inline SignedPermutation conjugate_by_signs(const SignedPermutation& s, const EpsilonSigns& eps) {
  std::vector<int> images;
  images.reserve(s.size());
  for (int k : s.domain()) images.push_back(eps.apply(s(eps.apply(k))));
  return SignedPermutation::from_mapping(s.domain(), std::move(images));
}

inline void require_symmetric(const SignedPermutation& s, const char* op) {
  if (!s.domain().is_symmetric()) throw ValidationError(std::string(op) + ": domain is not of the form +-I");
}

/// delta s delta = s^{-1} and s(k) != -k for every k.
inline bool is_premap(const SignedPermutation& s) {
  require_symmetric(s, "is_premap");
  for (int k : s.domain()) {
    if (s(k) == -k) return false;
    if (-s(-s(k)) != k) return false;  // delta s delta (s(k)) == k
  }
  return true;
}

/// Literal form of the premap condition: no cycle holds both k and -k.
inline bool has_no_symmetric_cycle(const SignedPermutation& s) {
  for (const auto& c : s.cycles()) {
    for (int k : c) {
      if (std::find(c.begin(), c.end(), -k) != c.end()) return false;
    }
  }
  return true;
}

/// sgn(s(k)) = -sgn(k) for every k.
inline bool is_alternating(const SignedPermutation& s) {
  for (int k : s.domain()) {
    if ((s(k) > 0) == (k > 0)) return false;
  }
  return true;
}

inline void require_premap(const SignedPermutation& a, const char* op) {
  if (!is_premap(a)) throw ValidationError(std::string(op) + ": not a premap");
}

/// pi_- delta pi_+ on +-I: k -> -pi_+(k), -k -> pi_-(k) for k in I.
inline SignedPermutation pairings_to_premap(const Pairing& plus, const Pairing& minus) {
  if (!(plus.ground() == minus.ground())) throw ValidationError("pairings_to_premap: pairing grounds differ");
  const IndexSet& ground = plus.ground();
  for (int k : ground) {
    if (k <= 0) throw ValidationError("pairings_to_premap: ground must be positive");
  }
  IndexSet domain = ground.plus_minus();
  std::vector<int> images(domain.size());
  for (int k : ground) {
    images[domain.index_of(k)] = -plus.partner(k);
    images[domain.index_of(-k)] = minus.partner(k);
  }
  return SignedPermutation::from_mapping(std::move(domain), std::move(images));
}

/// Inverse of pairings_to_premap: pi_+(k) = -a(k), pi_-(k) = a(-k).
inline std::pair<Pairing, Pairing> premap_to_pairings(const SignedPermutation& a) {
  require_symmetric(a, "premap_to_pairings");
  if (!is_alternating(a) || !is_premap(a)) throw ValidationError("premap_to_pairings: not an alternating premap");
  std::vector<int> positives;
  for (int k : a.domain()) {
    if (k > 0) positives.push_back(k);
  }
  IndexSet ground(positives);
  std::vector<std::vector<int>> plus_blocks, minus_blocks;
  for (int k : ground) {
    int p = -a(k);
    int m = a(-k);
    if (k < p) plus_blocks.push_back({k, p});
    if (k < m) minus_blocks.push_back({k, m});
  }
  return {Pairing(SetPartition::from_blocks(ground, plus_blocks)), Pairing(SetPartition::from_blocks(ground, minus_blocks))};
}

namespace detail {

/// phi_+ (acts on I, fixes -I) or phi_- = delta phi delta (acts on -I) on +-I.
inline void check_face_domain(const SignedPermutation& phi, const SignedPermutation& a, const char* op) {
  for (int k : phi.domain()) {
    if (phi.domain().contains(-k)) throw ValidationError(std::string(op) + ": phi domain meets its negative");
  }
  if (!(phi.domain().plus_minus() == a.domain())) throw ValidationError(std::string(op) + ": domains do not match");
}

inline int phi_plus(const SignedPermutation& phi, int k) { return phi.domain().contains(k) ? phi(k) : k; }
inline int phi_minus(const SignedPermutation& phi, int k) { return phi.domain().contains(-k) ? -phi(-k) : k; }

}  // namespace detail

/// K(phi, a) = phi_+^{-1} a^{-1} phi_-.
inline SignedPermutation vertex_permutation(const SignedPermutation& phi, const SignedPermutation& a) {
  detail::check_face_domain(phi, a, "K");
  SignedPermutation phi_inv = phi.inverse();
  SignedPermutation a_inv = a.inverse();
  std::vector<int> images;
  images.reserve(a.size());
  for (int k : a.domain()) images.push_back(detail::phi_plus(phi_inv, a_inv(detail::phi_minus(phi, k))));
  return SignedPermutation::from_mapping(a.domain(), std::move(images));
}

/// K(phi, a)^{-1} = phi_-^{-1} a phi_+, computed in one pass.
inline SignedPermutation vertex_permutation_inverse(const SignedPermutation& phi, const SignedPermutation& a) {
  detail::check_face_domain(phi, a, "K^-1");
  SignedPermutation phi_inv = phi.inverse();
  std::vector<int> images;
  images.reserve(a.size());
  for (int k : a.domain()) images.push_back(detail::phi_minus(phi_inv, a(detail::phi_plus(phi, k))));
  return SignedPermutation::from_mapping(a.domain(), std::move(images));
}

/// phi_+ phi_-^{-1} on +-I (the two faces of each trace, with both orientations).
inline SignedPermutation face_permutation(const SignedPermutation& phi) {
  IndexSet domain = phi.domain().plus_minus();
  SignedPermutation phi_inv = phi.inverse();
  std::vector<int> images;
  images.reserve(domain.size());
  for (int k : domain) images.push_back(detail::phi_plus(phi, detail::phi_minus(phi_inv, k)));
  return SignedPermutation::from_mapping(std::move(domain), std::move(images));
}

/// chi(phi, a) = #(phi_+ phi_-^{-1})/2 + #(a)/2 + #(K(phi, a))/2 - |I|.
inline int euler_characteristic(const SignedPermutation& phi, const SignedPermutation& a) {
  detail::check_face_domain(phi, a, "euler_characteristic");
  const auto faces = face_permutation(phi).num_cycles();
  const auto edges = a.num_cycles();
  const auto vertices = vertex_permutation(phi, a).num_cycles();
  const auto total = faces + edges + vertices;
  if (total % 2 != 0) throw ValidationError("euler_characteristic: odd cycle total (not a premap gluing)");
  return static_cast<int>(total / 2) - static_cast<int>(phi.size());
}

/// a/2: the cycles whose element of smallest |k| is positive, ordered by that
/// element.
inline std::vector<Cycle> particular_cycles(const SignedPermutation& a) {
  require_premap(a, "particular_cycles");
  std::vector<Cycle> out;
  for (auto& c : a.cycles()) {
    if (c.front() > 0) out.push_back(std::move(c));
  }
  return out;
}

/// Rebuilds a premap on +-I from its particular cycles; each cycle is mirrored
/// by the reversed cycle of negatives.
inline SignedPermutation premap_from_particular_cycles(const IndexSet& positive_ground, const std::vector<Cycle>& cycles) {
  std::vector<Cycle> all = cycles;
  for (const auto& c : cycles) {
    Cycle mirror;
    for (auto it = c.rbegin(); it != c.rend(); ++it) mirror.push_back(-*it);
    all.push_back(std::move(mirror));
  }
  SignedPermutation a = SignedPermutation::from_cycles(positive_ground.plus_minus(), all);
  if (!is_premap(a)) throw ValidationError("premap_from_particular_cycles: result is not a premap");
  return a;
}

/// lambda(a): a row of length m/2 for every particular cycle of length m.
inline YoungDiagram young_of_premap(const SignedPermutation& a) {
  if (!is_alternating(a)) throw ValidationError("young_of_premap: premap is not alternating");
  std::vector<int> rows;
  for (const auto& c : particular_cycles(a)) rows.push_back(static_cast<int>(c.size() / 2));
  return YoungDiagram(std::move(rows));
}

/// Young diagram from the blocks of pi_+ v pi_-.
inline YoungDiagram young_of_join(const Pairing& plus, const Pairing& minus) {
  return YoungDiagram::from_even_blocks(join(plus.partition(), minus.partition()));
}

inline SignedPermutation pairing_as_permutation(const Pairing& p) {
  std::vector<int> images;
  for (int k : p.ground()) images.push_back(p.partner(k));
  return SignedPermutation::from_mapping(p.ground(), std::move(images));
}

/// Young diagram from the cycles of pi_+ pi_-, which come in pairs of equal
/// length; one row per pair.
inline YoungDiagram young_of_product(const Pairing& plus, const Pairing& minus) {
  SignedPermutation prod = compose(pairing_as_permutation(plus), pairing_as_permutation(minus));
  std::vector<int> lengths;
  for (const auto& c : prod.cycles()) lengths.push_back(static_cast<int>(c.size()));
  std::sort(lengths.begin(), lengths.end(), std::greater<>());
  std::vector<int> rows;
  for (std::size_t i = 0; i < lengths.size(); i += 2) {
    if (i + 1 >= lengths.size() || lengths[i] != lengths[i + 1]) {
      throw ValidationError("young_of_product: cycles of pi_+ pi_- are not paired");
    }
    rows.push_back(lengths[i]);
  }
  return YoungDiagram(std::move(rows));
}

/// The permutation with the given cycles on [n] (the face permutation of a
/// product of traces).
inline SignedPermutation trace_cycles(const std::vector<int>& lengths) {
  std::vector<Cycle> cycles;
  int next = 1;
  for (int len : lengths) {
    Cycle c;
    for (int i = 0; i < len; ++i) c.push_back(next++);
    cycles.push_back(std::move(c));
  }
  return SignedPermutation::from_cycles(IndexSet::range(next - 1), cycles);
}

/// Disjoint product of permutations on disjoint domains.
inline SignedPermutation disjoint_product(const SignedPermutation& s, const SignedPermutation& t) {
  std::vector<int> all = s.domain().elements();
  all.insert(all.end(), t.domain().begin(), t.domain().end());
  IndexSet domain(std::move(all));
  std::vector<int> images;
  images.reserve(domain.size());
  for (int k : domain) images.push_back(s.domain().contains(k) ? s(k) : t(k));
  return SignedPermutation::from_mapping(std::move(domain), std::move(images));
}

/// Calls visit(a) for every premap on +-ground (ground positive). Setting
/// a(k) = v forces a(-v) = -k, so images are chosen in pairs.
template <class Visit>
void for_each_premap(const IndexSet& positive_ground, Visit&& visit) {
  const IndexSet domain = positive_ground.plus_minus();
  const std::size_t n = domain.size();
  std::vector<int> image(n, 0);
  std::vector<char> used(n, 0);
  auto rec = [&](auto&& self) -> void {
    std::size_t first = 0;
    while (first < n && image[first] != 0) ++first;
    if (first == n) {
      visit(SignedPermutation::from_mapping(domain, image));
      return;
    }
    const int k = domain[first];
    const std::size_t mk = domain.index_of(-k);
    if (used[mk]) return;
    for (std::size_t j = 0; j < n; ++j) {
      const int v = domain[j];
      if (used[j] || v == -k) continue;
      const std::size_t mv = domain.index_of(-v);
      if (image[mv] != 0) continue;
      image[first] = v;
      used[j] = 1;
      image[mv] = -k;
      used[mk] = 1;
      self(self);
      image[first] = 0;
      used[j] = 0;
      image[mv] = 0;
      used[mk] = 0;
    }
  };
  rec(rec);
}

}  // namespace orthowg

#endif  // ORTHOWG_PERMAP_HPP
