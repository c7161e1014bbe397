#include <gtest/gtest.h>

#include "support.hpp"

using namespace orthowg;
using testing_support::Q;

namespace {

PolyFrac frac(std::vector<long> num, std::vector<long> den) {
  std::vector<mpz_class> a(num.begin(), num.end()), b(den.begin(), den.end());
  return PolyFrac(Polynomial(a), Polynomial(b));
}

}  // namespace

TEST(Gram, SmallCases) {
  auto g2 = gram_matrix(2);
  ASSERT_EQ(g2.pairings.size(), 1u);
  EXPECT_EQ(g2.exponent(0, 0), 1);
  auto g4 = gram_matrix(4);
  ASSERT_EQ(g4.pairings.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(g4.exponent(i, j), i == j ? 2 : 1);
  auto g6 = gram_matrix(6);
  ASSERT_EQ(g6.pairings.size(), 15u);
  for (int e : g6.exponent.data()) {
    EXPECT_GE(e, 1);
    EXPECT_LE(e, 3);
  }
}

TEST(Weingarten, Tables) {
  EXPECT_EQ(weingarten_table(2).Wg(YoungDiagram{1}).to_string(), "1/N");
  EXPECT_EQ(weingarten_table(2).wg(YoungDiagram{1}).to_string(), "1");
  // (N+1)/(N(N-1)(N+2)) and -1/(N(N-1)(N+2)), with N(N-1)(N+2) = N^3 + N^2 - 2N.
  EXPECT_EQ(weingarten_table(4).Wg(YoungDiagram{1, 1}), frac({1, 1}, {0, -2, 1, 1}));
  EXPECT_EQ(weingarten_table(4).Wg(YoungDiagram{2}), frac({-1}, {0, -2, 1, 1}));
  EXPECT_EQ(wg_of(YoungDiagram{3, 1}).to_string(), "2*N^6/((N+1)*(N+2)*(N+6)*(N-1)*(N-2)*(N-3))");
  EXPECT_EQ(weingarten_table(6).entries().size(), 3u);
}

TEST(Weingarten, NormalizedPairs) {
  auto a = Pairing::from_pairs({{1, 2}, {3, 4}});
  auto b = Pairing::from_pairs({{1, 3}, {2, 4}});
  EXPECT_EQ(weingarten_table(2).wg(Pairing::from_pairs({{1, 2}}), Pairing::from_pairs({{1, 2}})), PolyFrac(1));
  EXPECT_EQ(weingarten_table(4).wg(a, a), PolyFrac::N_power(2) * frac({1, 1}, {0, -2, 1, 1}));
  EXPECT_EQ(weingarten_table(4).wg(a, b), PolyFrac::N_power(3) * frac({-1}, {0, -2, 1, 1}));
}

TEST(Weingarten, Evaluation) {
  const auto w = wg_of(YoungDiagram{3, 1});
  EXPECT_EQ(w.eval_at(10L), Q(2000000, 11L * 12 * 16 * 9 * 8 * 7));
  EXPECT_THROW(w.eval_at(2L), PoleError);
  try {
    w.eval_at(3L);
    ADD_FAILURE() << "no pole reported at N=3";
  } catch (const PoleError& e) {
    EXPECT_EQ(e.factor(), "N-3");
    EXPECT_EQ(e.at(), 3);
  }
  // Large N approaches the leading coefficient.
  EXPECT_NEAR(w.eval_at(1000000L).get_d(), 2.0, 1e-4);
}

TEST(Weingarten, LeadingOrder) {
  EXPECT_EQ(leading_order(YoungDiagram{3, 1}).wg_limit(), 2);
  EXPECT_EQ(leading_order(YoungDiagram{2}).wg_limit(), -1);
  EXPECT_EQ(leading_order(YoungDiagram{1, 1, 1}).wg_limit(), 1);
  EXPECT_EQ(weingarten_table(4).Wg(YoungDiagram{2}).limit(), 0);
  EXPECT_EQ((PolyFrac::N_power(3) * weingarten_table(4).Wg(YoungDiagram{2})).limit(), -1);
  for (int k = 1; k <= 4; ++k)
    for (const auto& lam : young_diagrams(k)) {
      EXPECT_EQ(wg_of(lam).limit(), mpq_class(leading_order(lam).wg_limit())) << lam.to_string();
      EXPECT_EQ(wg_of(lam).order(), 0);
    }
}

TEST(Weingarten, GramIdentity) {
  for (int n : {2, 4, 6}) EXPECT_GT(verify_gram_identity(n, weingarten_table(n)), 0u);
  // Independent check at n = 4: invert the Gram matrix directly.
  const auto inv = gram_inverse_symbolic(4);
  const auto g = gram_matrix(4);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      EXPECT_EQ(inv(i, j), weingarten_table(4).Wg(g.pairings[i], g.pairings[j]));
}

TEST(Weingarten, Caps) {
  EXPECT_THROW(weingarten_table(12), CapError);
  EXPECT_THROW(weingarten_table(3), ValidationError);
}

TEST(WeingartenCumulant, Examples) {
  const auto ground = IndexSet::range(4);
  const auto a = Pairing::from_pairs({{1, 2}, {3, 4}});
  const auto pi = join(a.partition(), a.partition());
  // rho = sigma: a single product over blocks.
  EXPECT_EQ(wg_cumulant(a, a, pi, pi), PolyFrac(1));
  // sigma merges the two blocks: wg(whole) - wg(A) wg(B).
  const auto one = SetPartition::one(ground);
  EXPECT_EQ(wg_cumulant(a, a, pi, one), weingarten_table(4).wg(a, a) - PolyFrac(1));
  const auto c = wg_cumulant(a, a, pi, one);
  EXPECT_LE(c.order().value(), -2);
  EXPECT_TRUE(wg_cumulant_order_ok(c, pi, one));
}

TEST(WeingartenCumulant, DegreeBound) {
  for (int n : {4, 6}) {
    const auto ground = IndexSet::range(n);
    const auto pairings = enumerate_pairings(ground);
    std::size_t checked = 0;
    for (const auto& p : pairings)
      for (const auto& m : pairings) {
        const auto pi = join(p.partition(), m.partition());
        for_each_coarsening(pi, [&](const SetPartition& rho) {
          for_each_coarsening(rho, [&](const SetPartition& sigma) {
            EXPECT_TRUE(wg_cumulant_order_ok(wg_cumulant(p, m, rho, sigma), rho, sigma));
            ++checked;
            return true;
          });
          return true;
        });
      }
    EXPECT_GT(checked, 0u);
  }
}
