#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace orthowg;
using namespace testing_support;

namespace {

const TraceExpression kConj({{F(1, 1, 1), F(1, -1, 2)}});
const TraceExpression kTwist({{F(1, 1, 1), F(1, 1, 2)}});

// E[O_ia O_jb] = delta_ij delta_ab / N, summed by hand:
// E tr(O X1 O^T X2) = tr(X1) tr(X2), E tr(O X1 O X2) = tr(X1 X2^T) / N.
mpq_class conj_closed_form(const std::map<int, Matrix<mpq_class>>& ms) { return ntr(ms.at(1)) * ntr(ms.at(2)); }
mpq_class twist_closed_form(const std::map<int, Matrix<mpq_class>>& ms) {
  mpq_class v = ntr(ms.at(1) * ms.at(2).transpose());
  v /= static_cast<long>(ms.at(1).rows());
  return v;
}

double z(const McEstimate& e, double exact) { return (e.mean - exact) / e.std_error; }

}  // namespace

TEST(TraceAlong, Basics) {
  std::mt19937 g(21);
  const auto ms = random_set(3, 3, g);
  const auto two = IndexSet::range(2);
  EXPECT_EQ(trace_along(SignedPermutation::identity(two), ms), ms.at(1).trace() * ms.at(2).trace());
  const auto pm = SignedPermutation::from_cycles(IndexSet({-2, 1}), {{1, -2}});
  EXPECT_EQ(trace_along(pm, ms), (ms.at(1) * ms.at(2).transpose()).trace());
  mpq_class sum = 0;
  const auto &a = ms.at(1), &b = ms.at(2), &c = ms.at(3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) sum += a(i, j) * b(j, k) * c(k, i);
  EXPECT_EQ(trace_along(SignedPermutation::from_cycles(IndexSet::range(3), {{1, 2, 3}}), ms), sum);
}

TEST(BruteForce, ClosedForms) {
  std::mt19937 g(22);
  const auto m2 = random_set(2, 2, g);
  EXPECT_EQ(brute_force_moment(kConj, m2, 2), conj_closed_form(m2));
  const auto m3 = random_set(3, 2, g);
  EXPECT_EQ(brute_force_moment(kTwist, m3, 3), twist_closed_form(m3));
}

TEST(BruteForce, CrossOracle) {
  std::mt19937 g(23);
  const TraceExpression e({{F(1, 1, 1), F(1, 1, 2)}, {F(1, -1, 3), F(1, 1, -1)}});
  const auto ms = random_set(3, 3, g);
  EXPECT_EQ(brute_force_moment(e, ms, 3), evaluate_moment<mpq_class>(e, ms, 3).value);
  const TraceExpression two_colors({{F(1, 1, 1), F(2, 1, 2), F(1, -1, 3), F(2, 1, 0)}});
  EXPECT_EQ(brute_force_moment(two_colors, ms, 3), evaluate_moment<mpq_class>(two_colors, ms, 3).value);
  EXPECT_THROW(brute_force_moment(e, random_set(5, 3, g), 5), CapError);
}

TEST(Haar, Orthogonality) {
  PhiloxStream rng(1, 0, 0);
  for (int n : {1, 3, 8}) {
    const auto o = haar_orthogonal(n, rng);
    EXPECT_LT((o * o.transpose() - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Haar, EntryMoments) {
  McOptions opt;
  opt.samples = 40000;
  const auto sq = mc_statistic({1}, 5, opt, [](const HaarDraw& d) { return d.at(1)(0, 0) * d.at(1)(0, 0); });
  EXPECT_LT(std::fabs(z(sq, 0.2)), 5.0);
  const auto lin = mc_statistic({1}, 5, opt, [](const HaarDraw& d) { return d.at(1)(0, 0); });
  EXPECT_LT(std::fabs(z(lin, 0.0)), 5.0);
}

TEST(Haar, Invariance) {
  // Q O and O give the same distribution; compare one functional across
  // disjoint seeds.
  PhiloxStream qrng(99, 0, 0);
  const Eigen::MatrixXd q = haar_orthogonal(4, qrng);
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(4, 4);
  x(0, 1) = 1;
  x(2, 2) = 2;
  McOptions a, b;
  a.samples = b.samples = 20000;
  a.seed = 5;
  b.seed = 6;
  auto f = [&](const Eigen::MatrixXd& o) { return (o * x * o.transpose() * x).trace(); };
  const auto plain = mc_statistic({1}, 4, a, [&](const HaarDraw& d) { return f(d.at(1)); });
  const auto rotated = mc_statistic({1}, 4, b, [&](const HaarDraw& d) { return f(q * d.at(1)); });
  const double se = std::hypot(plain.std_error, rotated.std_error);
  EXPECT_LT(std::fabs(plain.mean - rotated.mean) / se, 5.0);
}

TEST(MonteCarlo, ClosedFormMoments) {
  std::mt19937 g(24);
  const auto ms = random_set(8, 2, g);
  McOptions opt;
  opt.samples = 20000;
  const auto md = orthowg::to_double(ms);
  EXPECT_LT(std::fabs(z(mc_moment(kConj, md, 8, opt), conj_closed_form(ms).get_d())), 5.0);
  EXPECT_LT(std::fabs(z(mc_moment(kTwist, md, 8, opt), twist_closed_form(ms).get_d())), 5.0);
}

TEST(MonteCarlo, DeterministicAcrossWorkers) {
  std::mt19937 g(25);
  const auto md = orthowg::to_double(random_set(6, 2, g));
  McOptions one, three;
  one.samples = three.samples = 3000;
  three.workers = 3;
  const auto a = mc_moment(kTwist, md, 6, one), b = mc_moment(kTwist, md, 6, three);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.std_error, b.std_error);
  McOptions other = one;
  other.seed = 43;
  EXPECT_NE(mc_moment(kTwist, md, 6, other).mean, a.mean);
}

TEST(MonteCarlo, StandardErrorRate) {
  std::mt19937 g(26);
  const auto md = orthowg::to_double(random_set(5, 2, g));
  McOptions small, large;
  small.samples = 4000;
  large.samples = 16000;
  const double ratio = mc_moment(kConj, md, 5, large).std_error / mc_moment(kConj, md, 5, small).std_error;
  EXPECT_NEAR(ratio, 0.5, 0.1);
}

TEST(MonteCarlo, Cumulants) {
  std::mt19937 g(27);
  const long N = 6;
  const auto ms = center_slots(random_set(static_cast<std::size_t>(N), 3, g), {1, 2, 3});
  const std::vector<TraceExpression> ys{TraceExpression({{F(1, -1, 1), F(1, 1, 0), F(2, -1, 2), F(2, 1, 0)}}),
                                        TraceExpression({{F(1, -1, 3), F(1, 1, 0), F(2, -1, 2), F(2, 1, 0)}})};
  McOptions opt;
  opt.samples = 20000;
  const double exact = trace_cumulant<mpq_class>(ys, ms, N).get_d();
  EXPECT_LT(std::fabs(z(mc_cumulant(ys, orthowg::to_double(ms), static_cast<int>(N), opt), exact)), 5.0);

  const std::vector<TraceExpression> three{TraceExpression({{F(1, 1, 1), F(1, -1, 2)}}),
                                           TraceExpression({{F(1, 1, 3), F(1, 1, 1)}}),
                                           TraceExpression({{F(1, 1, 2), F(1, -1, 3)}})};
  const auto raw = random_set(static_cast<std::size_t>(N), 3, g);
  const double k3 = trace_cumulant<mpq_class>(three, raw, N).get_d();
  EXPECT_LT(std::fabs(z(mc_cumulant(three, orthowg::to_double(raw), static_cast<int>(N), opt), k3)), 5.0);

  EXPECT_THROW(mc_cumulant({ys[0]}, orthowg::to_double(ms), static_cast<int>(N), opt), ValidationError);
}
