#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace orthowg;

namespace {

SignedPermutation S(const std::vector<Cycle>& cycles, const IndexSet& domain) {
  return SignedPermutation::from_cycles(domain, cycles);
}

Pairing loops_plus() { return Pairing::from_pairs({{1, 2}, {3, 5}, {4, 8}, {6, 7}}); }
Pairing loops_minus() { return Pairing::from_pairs({{1, 6}, {2, 5}, {3, 7}, {4, 8}}); }

SignedPermutation random_permutation(int n, std::mt19937& g) {
  std::vector<int> img(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) img[static_cast<std::size_t>(i)] = i + 1;
  std::shuffle(img.begin(), img.end(), g);
  return SignedPermutation::from_mapping(IndexSet::range(n), img);
}

}  // namespace

TEST(Premap, Predicate) {
  const auto pm2 = IndexSet::symmetric(2);
  EXPECT_TRUE(is_premap(S({{1, -2}, {2, -1}}, pm2)));
  EXPECT_FALSE(is_premap(S({{1, -1}}, IndexSet::symmetric(1))));
  EXPECT_TRUE(is_premap(S({{1, 2}, {-1, -2}}, pm2)));
  EXPECT_FALSE(is_premap(S({{1, 2}, {-1}, {-2}}, pm2)));
}

TEST(Premap, PairingsToPremap) {
  auto one = Pairing::from_pairs({{1, 2}});
  EXPECT_EQ(pairings_to_premap(one, one), S({{1, -2}, {2, -1}}, IndexSet::symmetric(2)));

  const auto a = pairings_to_premap(loops_plus(), loops_minus());
  EXPECT_EQ(a, S({{1, -2, 5, -3, 7, -6}, {6, -7, 3, -5, 2, -1}, {4, -8}, {8, -4}}, IndexSet::symmetric(8)));
  auto [p, m] = premap_to_pairings(a);
  EXPECT_EQ(p.partition(), loops_plus().partition());
  EXPECT_EQ(m.partition(), loops_minus().partition());

  std::size_t count = 0;
  for (const auto& x : enumerate_pairings(IndexSet::range(4)))
    for (const auto& y : enumerate_pairings(IndexSet::range(4))) {
      auto [u, v] = premap_to_pairings(pairings_to_premap(x, y));
      EXPECT_EQ(u.partition(), x.partition());
      EXPECT_EQ(v.partition(), y.partition());
      ++count;
    }
  EXPECT_EQ(count, 9u);

  std::size_t alternating = 0;
  for_each_premap(IndexSet::range(4), [&](const SignedPermutation& s) {
    if (is_alternating(s)) ++alternating;
  });
  EXPECT_EQ(alternating, 9u);
}

TEST(Premap, VertexPermutation) {
  const auto phi = SignedPermutation::from_cycles(IndexSet::range(2), {{1, 2}});
  const auto a = S({{1, -2}, {2, -1}}, IndexSet::symmetric(2));
  // eps = (+1, -1)
  const auto twisted = conjugate_by_signs(a, EpsilonSigns({1, -1}));
  EXPECT_TRUE(vertex_permutation_inverse(phi, twisted).is_identity());
  EXPECT_EQ(euler_characteristic(phi, twisted), 2);
  EXPECT_EQ(vertex_permutation_inverse(phi, a), a);
  EXPECT_EQ(euler_characteristic(phi, a), 1);
  EXPECT_EQ(vertex_permutation(phi, a), vertex_permutation_inverse(phi, a).inverse());
}

TEST(Premap, VertexPartitionBound) {
  // K(phi, a) refines the join of the faces (both signs) and a.
  std::mt19937 g(5);
  for (int n = 1; n <= 5; ++n) {
    for_each_premap(IndexSet::range(n), [&](const SignedPermutation& a) {
      if (g() % 4 != 0) return;
      std::vector<int> lengths;
      for (int left = n; left > 0;) {
        int l = 1 + static_cast<int>(g() % static_cast<unsigned>(left));
        lengths.push_back(l);
        left -= l;
      }
      const auto phi = trace_cycles(lengths);
      const auto k = vertex_permutation(phi, a).orbits();
      const auto bound = join(face_permutation(phi).orbits(), a.orbits());
      EXPECT_TRUE(refines(k, bound));
    });
  }
}

TEST(Premap, ParticularCycles) {
  const auto a = S({{1, -2}, {2, -1}}, IndexSet::symmetric(2));
  EXPECT_EQ(particular_cycles(a), (std::vector<Cycle>{{1, -2}}));
  const auto loops = pairings_to_premap(loops_plus(), loops_minus());
  EXPECT_EQ(particular_cycles(loops), (std::vector<Cycle>{{1, -2, 5, -3, 7, -6}, {4, -8}}));
  EXPECT_EQ(premap_from_particular_cycles(IndexSet::range(8), particular_cycles(loops)), loops);
  for_each_premap(IndexSet::range(4), [&](const SignedPermutation& s) {
    EXPECT_EQ(2 * particular_cycles(s).size(), s.num_cycles());
  });
}

TEST(Premap, YoungDiagrams) {
  const auto loops = pairings_to_premap(loops_plus(), loops_minus());
  EXPECT_EQ(young_of_premap(loops), YoungDiagram({3, 1}));
  EXPECT_EQ(young_of_premap(S({{1, -2}, {2, -1}}, IndexSet::symmetric(2))), YoungDiagram({1}));
  const auto pairings = enumerate_pairings(IndexSet::range(6));
  for (const auto& x : pairings)
    for (const auto& y : pairings) {
      const auto lam = young_of_premap(pairings_to_premap(x, y));
      EXPECT_EQ(lam, young_of_join(x, y));
      EXPECT_EQ(lam, young_of_product(x, y));
    }
}

TEST(Permutation, LoopsProduct) {
  const auto prod = compose(pairing_as_permutation(loops_plus()), pairing_as_permutation(loops_minus()));
  EXPECT_EQ(prod, SignedPermutation::from_cycles(IndexSet::range(8), {{1, 7, 5}, {2, 3, 6}, {4}, {8}}));
  EXPECT_EQ(prod.to_string(), "(1,7,5)(2,3,6)(4)(8)");
}

TEST(Permutation, Induced) {
  const auto s = SignedPermutation::from_cycles(IndexSet::range(4), {{1, 2, 3, 4}});
  EXPECT_EQ(induced_permutation(s, IndexSet({1, 3})), SignedPermutation::from_cycles(IndexSet({1, 3}), {{1, 3}}));
  EXPECT_EQ(induced_permutation(s, s.domain()), s);
  const auto t = SignedPermutation::from_cycles(IndexSet::range(5), {{1, 2}, {3, 4, 5}});
  EXPECT_EQ(induced_permutation(t, IndexSet({1, 2})), SignedPermutation::from_cycles(IndexSet({1, 2}), {{1, 2}}));
}

TEST(Permutation, ComposeInverseConjugate) {
  std::mt19937 g(9);
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + static_cast<int>(g() % 6);
    const auto s = random_permutation(n, g), r = random_permutation(n, g);
    EXPECT_TRUE(compose(s, s.inverse()).is_identity());
    std::vector<Cycle> relabeled;
    for (const auto& c : s.cycles()) {
      Cycle d;
      for (int k : c) d.push_back(r(k));
      relabeled.push_back(d);
    }
    EXPECT_EQ(conjugate_by(s, r), SignedPermutation::from_cycles(s.domain(), relabeled));
  }
}
