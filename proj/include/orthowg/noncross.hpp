#ifndef ORTHOWG_NONCROSS_HPP
#define ORTHOWG_NONCROSS_HPP

// Disc and annular noncrossing conditions, as literal scans over tuples and
// as cycle-count criteria, plus the unoriented (premap) chi = 2 tests.
//
// A condition such as alpha|_{a,b,c,d} = (a,c)(b,d) is read through the
// induced permutation: a and c lie in one cycle of alpha, b and d in another,
// so the first-return map on {a,b,c,d} is exactly that product.

#include <initializer_list>
#include <optional>
#include <vector>

#include "orthowg/error.hpp"
#include "orthowg/permap.hpp"

namespace orthowg {

namespace detail {

/// Cycle id and position of each domain index of a permutation in index form.
/// Excluded indices carry id -1.
struct CycleData {
  std::vector<int> id;
  std::vector<int> pos;
  std::vector<int> length;  // by id

  explicit CycleData(const std::vector<int>& next, const std::vector<char>& excluded = {}) {
    const std::size_t n = next.size();
    id.assign(n, -1);
    pos.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (id[i] >= 0 || (!excluded.empty() && excluded[i])) continue;
      const int c = static_cast<int>(length.size());
      int len = 0;
      std::size_t j = i;
      while (id[j] < 0) {
        id[j] = c;
        pos[j] = len++;
        j = static_cast<std::size_t>(next[j]);
      }
      length.push_back(len);
    }
  }

  /// Elements of `cyc` share a cycle and appear in this cyclic order.
  bool in_cyclic_order(std::initializer_list<int> cyc) const {
    auto it = cyc.begin();
    const int first = *it;
    const int c = id[static_cast<std::size_t>(first)];
    if (c < 0) return false;
    const int len = length[static_cast<std::size_t>(c)];
    const int p0 = pos[static_cast<std::size_t>(first)];
    int last = 0;
    for (++it; it != cyc.end(); ++it) {
      if (id[static_cast<std::size_t>(*it)] != c) return false;
      int d = (pos[static_cast<std::size_t>(*it)] - p0 + len) % len;
      if (d <= last) return false;
      last = d;
    }
    return true;
  }

  bool same_cycle(int a, int b) const { return id[static_cast<std::size_t>(a)] == id[static_cast<std::size_t>(b)]; }

  /// The induced permutation on the union of `cycles` is their product.
  bool restriction_is(std::initializer_list<std::initializer_list<int>> cycles) const {
    std::vector<int> ids;
    for (const auto& cyc : cycles) {
      if (!in_cyclic_order(cyc)) return false;
      int c = id[static_cast<std::size_t>(*cyc.begin())];
      for (int other : ids) {
        if (other == c) return false;
      }
      ids.push_back(c);
    }
    return true;
  }
};

inline std::vector<int> index_form(const SignedPermutation& s) {
  std::vector<int> next(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) next[i] = static_cast<int>(s.domain().index_of(s(s.domain()[i])));
  return next;
}

inline void require_same_domain(const SignedPermutation& a, const SignedPermutation& b, const char* op) {
  if (!(a.domain() == b.domain())) throw ValidationError(std::string(op) + ": permutations act on different sets");
}

inline void require_one_cycle(const SignedPermutation& phi, const char* op) {
  if (phi.num_cycles() != 1) throw ValidationError(std::string(op) + ": phi must have exactly one cycle");
}

}  // namespace detail

/// Exists a, b, c with phi|_{a,b,c} = alpha|_{a,b,c} = (a,b,c).
inline bool is_disc_nonstandard(const SignedPermutation& phi, const SignedPermutation& alpha) {
  detail::require_one_cycle(phi, "is_disc_nonstandard");
  detail::require_same_domain(phi, alpha, "is_disc_nonstandard");
  const detail::CycleData f(detail::index_form(phi)), a(detail::index_form(alpha));
  const int n = static_cast<int>(phi.size());
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        if (x == y || y == z || x == z) continue;
        if (a.restriction_is({{x, y, z}}) && f.restriction_is({{x, y, z}})) return true;
      }
  return false;
}

/// Exists a, b, c, d with phi|_{a,b,c,d} = (a,b,c,d) and alpha| = (a,c)(b,d).
inline bool is_disc_crossing(const SignedPermutation& phi, const SignedPermutation& alpha) {
  detail::require_one_cycle(phi, "is_disc_crossing");
  detail::require_same_domain(phi, alpha, "is_disc_crossing");
  const detail::CycleData f(detail::index_form(phi)), al(detail::index_form(alpha));
  const int n = static_cast<int>(phi.size());
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c) {
      if (a == c || !al.same_cycle(a, c)) continue;
      for (int b = 0; b < n; ++b)
        for (int d = 0; d < n; ++d) {
          if (b == d || b == a || b == c || d == a || d == c) continue;
          if (al.restriction_is({{a, c}, {b, d}}) && f.restriction_is({{a, b, c, d}})) return true;
        }
    }
  return false;
}

/// Neither disc nonstandard nor disc crossing.
inline bool is_disc_noncrossing(const SignedPermutation& phi, const SignedPermutation& alpha) {
  return !is_disc_nonstandard(phi, alpha) && !is_disc_crossing(phi, alpha);
}

/// #(alpha) + #(phi^{-1} alpha^{-1}) = |I| + 1.
inline bool biane_criterion(const SignedPermutation& phi, const SignedPermutation& alpha) {
  detail::require_same_domain(phi, alpha, "biane_criterion");
  const auto rhs = compose(phi.inverse(), alpha.inverse()).num_cycles();
  return alpha.num_cycles() + rhs == phi.size() + 1;
}

/// A permutation with two cycles, both of size >= 2. The exterior cycle is
/// the one holding the canonically smallest element.
class AnnularFrame {
 public:
  explicit AnnularFrame(SignedPermutation phi) : phi_(std::move(phi)) {
    auto cycles = phi_.cycles();
    if (cycles.size() != 2) throw ValidationError("AnnularFrame: phi must have exactly two cycles");
    if (cycles[0].size() < 2 || cycles[1].size() < 2) {
      throw ValidationError("AnnularFrame: both cycles need at least two elements");
    }
    ext_ = cycles[0];
    int_ = cycles[1];
  }

  const SignedPermutation& phi() const noexcept { return phi_; }
  const Cycle& exterior() const noexcept { return ext_; }
  const Cycle& interior() const noexcept { return int_; }

  /// lambda_{x,y} on I \ {x,y}, in index form over phi's domain; x and y map
  /// to themselves and are flagged in `excluded`.
  std::vector<int> lambda_index(int xi, int yi, std::vector<char>& excluded) const {
    const std::vector<int> next = detail::index_form(phi_);
    std::vector<int> prev(next.size());
    for (std::size_t i = 0; i < next.size(); ++i) prev[static_cast<std::size_t>(next[i])] = static_cast<int>(i);
    std::vector<int> lam = next;
    lam[static_cast<std::size_t>(prev[static_cast<std::size_t>(xi)])] = next[static_cast<std::size_t>(yi)];
    lam[static_cast<std::size_t>(prev[static_cast<std::size_t>(yi)])] = next[static_cast<std::size_t>(xi)];
    lam[static_cast<std::size_t>(xi)] = xi;
    lam[static_cast<std::size_t>(yi)] = yi;
    excluded.assign(next.size(), 0);
    excluded[static_cast<std::size_t>(xi)] = 1;
    excluded[static_cast<std::size_t>(yi)] = 1;
    return lam;
  }

  /// lambda_{x,y} as a permutation of I \ {x,y}.
  SignedPermutation lambda(int x, int y) const {
    const IndexSet& dom = phi_.domain();
    std::vector<char> excluded;
    std::vector<int> lam = lambda_index(static_cast<int>(dom.index_of(x)), static_cast<int>(dom.index_of(y)), excluded);
    std::vector<int> keep, images;
    for (std::size_t i = 0; i < dom.size(); ++i) {
      if (excluded[i]) continue;
      keep.push_back(dom[i]);
      images.push_back(dom[static_cast<std::size_t>(lam[i])]);
    }
    return SignedPermutation::from_mapping(IndexSet(keep), images);
  }

 private:
  SignedPermutation phi_;
  Cycle ext_, int_;
};

/// alpha connects the two cycles of phi.
inline bool connects_cycles(const AnnularFrame& frame, const SignedPermutation& alpha) {
  detail::require_same_domain(frame.phi(), alpha, "connects_cycles");
  return join(frame.phi().orbits(), alpha.orbits()).num_blocks() == 1;
}

/// Annular nonstandard condition 1 or 2.
inline bool is_annular_nonstandard(const AnnularFrame& frame, const SignedPermutation& alpha) {
  detail::require_same_domain(frame.phi(), alpha, "is_annular_nonstandard");
  const detail::CycleData f(detail::index_form(frame.phi())), al(detail::index_form(alpha));
  const int n = static_cast<int>(alpha.size());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b || !al.same_cycle(a, b)) continue;
      for (int c = 0; c < n; ++c) {
        if (c == a || c == b) continue;
        if (al.restriction_is({{a, b, c}}) && f.restriction_is({{a, b, c}})) return true;
        for (int d = 0; d < n; ++d) {
          if (d == a || d == b || d == c) continue;
          if (f.restriction_is({{a, b}, {c, d}}) && al.restriction_is({{a, c, b, d}})) return true;
        }
      }
    }
  return false;
}

/// Annular crossing condition 1, 2 or 3.
inline bool is_annular_crossing(const AnnularFrame& frame, const SignedPermutation& alpha) {
  detail::require_same_domain(frame.phi(), alpha, "is_annular_crossing");
  const IndexSet& dom = alpha.domain();
  const detail::CycleData f(detail::index_form(frame.phi())), al(detail::index_form(alpha));
  const int n = static_cast<int>(alpha.size());
  // Condition 1: phi|_{a,b,c,d} = (a,b,c,d), alpha| = (a,c)(b,d).
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c) {
      if (a == c || !al.same_cycle(a, c)) continue;
      for (int b = 0; b < n; ++b)
        for (int d = 0; d < n; ++d) {
          if (b == d || b == a || b == c || d == a || d == c) continue;
          if (al.restriction_is({{a, c}, {b, d}}) && f.restriction_is({{a, b, c, d}})) return true;
        }
    }
  // Conditions 2 and 3 quantify over x exterior, y interior.
  for (int x : frame.exterior()) {
    for (int y : frame.interior()) {
      const int xi = static_cast<int>(dom.index_of(x));
      const int yi = static_cast<int>(dom.index_of(y));
      if (!al.same_cycle(xi, yi)) continue;
      std::vector<char> excluded;
      const detail::CycleData lam(frame.lambda_index(xi, yi, excluded), excluded);
      for (int a = 0; a < n; ++a) {
        if (a == xi || a == yi) continue;
        for (int b = 0; b < n; ++b) {
          if (b == xi || b == yi || b == a) continue;
          for (int c = 0; c < n; ++c) {
            if (c == xi || c == yi || c == a || c == b) continue;
            if (lam.restriction_is({{a, b, c}}) && al.restriction_is({{a, b, c}, {xi, yi}})) return true;
            for (int d = 0; d < n; ++d) {
              if (d == xi || d == yi || d == a || d == b || d == c) continue;
              if (lam.restriction_is({{a, b, c, d}}) && al.restriction_is({{a, c}, {b, d}, {xi, yi}})) return true;
            }
          }
        }
      }
    }
  }
  return false;
}

/// Neither annular nonstandard nor annular crossing (connectivity not
/// required).
inline bool is_annular_noncrossing(const AnnularFrame& frame, const SignedPermutation& alpha) {
  return !is_annular_nonstandard(frame, alpha) && !is_annular_crossing(frame, alpha);
}

/// Membership in the connected annular-noncrossing set.
inline bool in_annular_nc(const AnnularFrame& frame, const SignedPermutation& alpha) {
  return connects_cycles(frame, alpha) && is_annular_noncrossing(frame, alpha);
}

/// #(alpha) + #(phi^{-1} alpha^{-1}) = |I| for alpha connecting phi's cycles.
inline bool mingo_nica_criterion(const AnnularFrame& frame, const SignedPermutation& alpha) {
  if (!connects_cycles(frame, alpha)) throw ValidationError("mingo_nica_criterion: alpha does not connect the cycles");
  const auto rhs = compose(frame.phi().inverse(), alpha.inverse()).num_cycles();
  return alpha.num_cycles() + rhs == alpha.size();
}

/// Some orbit of s meets both a and b (as sets).
inline bool connects_sets(const SignedPermutation& s, const std::vector<int>& a, const std::vector<int>& b) {
  const SetPartition orb = s.orbits();
  std::vector<char> hit(orb.num_blocks(), 0);
  for (int k : a) hit[static_cast<std::size_t>(orb.block_index_of(k))] = 1;
  for (int k : b) {
    if (hit[static_cast<std::size_t>(orb.block_index_of(k))]) return true;
  }
  return false;
}

/// One-cycle phi on positive I, premap a on +-I: a does not connect I and -I
/// and a|_I is disc-noncrossing for phi.
inline bool premap_chi2_disc(const SignedPermutation& phi, const SignedPermutation& a) {
  detail::require_one_cycle(phi, "premap_chi2_disc");
  if (!(phi.domain().plus_minus() == a.domain())) throw ValidationError("premap_chi2_disc: domains do not match");
  const auto& pos = phi.domain().elements();
  if (connects_sets(a, pos, phi.domain().negated().elements())) return false;
  return is_disc_noncrossing(phi, induced_permutation(a, phi.domain()));
}

/// Two-cycle phi on positive I with orbits V1, V2; a connects +-V1 and +-V2.
/// For some sign e, a does not connect V1 u eV2 to its negative and a restricted
/// there is connected annular-noncrossing for phi_+ phi_-^{-1} restricted there.
inline bool premap_chi2_annular(const AnnularFrame& frame, const SignedPermutation& a) {
  const SignedPermutation& phi = frame.phi();
  if (!(phi.domain().plus_minus() == a.domain())) throw ValidationError("premap_chi2_annular: domains do not match");
  const Cycle& v1 = frame.exterior();
  const Cycle& v2 = frame.interior();
  std::vector<int> pm1, pm2;
  for (int k : v1) {
    pm1.push_back(k);
    pm1.push_back(-k);
  }
  for (int k : v2) {
    pm2.push_back(k);
    pm2.push_back(-k);
  }
  if (!connects_sets(a, pm1, pm2)) throw ValidationError("premap_chi2_annular: premap does not connect +-V1 and +-V2");
  const SignedPermutation faces = face_permutation(phi);
  for (int e : {1, -1}) {
    std::vector<int> side, other;
    for (int k : v1) {
      side.push_back(k);
      other.push_back(-k);
    }
    for (int k : v2) {
      side.push_back(e * k);
      other.push_back(-e * k);
    }
    if (connects_sets(a, side, other)) continue;
    IndexSet j(side);
    AnnularFrame sub(induced_permutation(faces, j));
    if (in_annular_nc(sub, induced_permutation(a, j))) return true;
  }
  return false;
}

/// All k with alpha^{-1}(k) = phi(k).
inline std::vector<int> phi_neighbors(const SignedPermutation& phi, const SignedPermutation& alpha) {
  detail::require_same_domain(phi, alpha, "phi_neighbors");
  const SignedPermutation inv = alpha.inverse();
  std::vector<int> out;
  for (int k : phi.domain()) {
    if (inv(k) == phi(k)) out.push_back(k);
  }
  return out;
}

namespace detail {
inline bool has_fixed_point(const SignedPermutation& s) {
  for (int k : s.domain()) {
    if (s(k) == k) return true;
  }
  return false;
}
}  // namespace detail

/// Disc case: alpha disc-noncrossing without fixed points has a k with
/// alpha^{-1}(k) = phi(k). Absent when the preconditions fail.
inline std::optional<int> find_phi_neighbor(const SignedPermutation& phi, const SignedPermutation& alpha) {
  if (phi.num_cycles() != 1 || detail::has_fixed_point(alpha) || !is_disc_noncrossing(phi, alpha)) return std::nullopt;
  auto ks = phi_neighbors(phi, alpha);
  if (ks.empty()) return std::nullopt;
  return ks.front();
}

/// Annular case: alpha annular-noncrossing without fixed points, with two
/// points sharing a cycle of phi and a cycle of alpha.
inline std::optional<int> find_phi_neighbor(const AnnularFrame& frame, const SignedPermutation& alpha) {
  if (detail::has_fixed_point(alpha) || !is_annular_noncrossing(frame, alpha)) return std::nullopt;
  const SetPartition shared = meet(frame.phi().orbits(), alpha.orbits());
  bool pair = false;
  for (const auto& b : shared.blocks()) pair = pair || b.size() >= 2;
  if (!pair) return std::nullopt;
  auto ks = phi_neighbors(frame.phi(), alpha);
  if (ks.empty()) return std::nullopt;
  return ks.front();
}

/// Every permutation of the domain, in lexicographic order of images.
template <class Visit>
void for_each_permutation(const IndexSet& domain, Visit&& visit) {
  std::vector<int> images = domain.elements();
  do {
    visit(SignedPermutation::from_mapping(domain, images));
  } while (std::next_permutation(images.begin(), images.end()));
}

}  // namespace orthowg

#endif  // ORTHOWG_NONCROSS_HPP
