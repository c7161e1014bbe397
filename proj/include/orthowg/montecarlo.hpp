#ifndef ORTHOWG_MONTECARLO_HPP
#define ORTHOWG_MONTECARLO_HPP

// Monte Carlo estimates of trace moments and cumulants over independent Haar
// orthogonal matrices, one per color. Sample s of color c is drawn from the
// Philox substream (seed, s, c), and per-sample values are reduced in sample
// order, so the worker count does not change any result.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "orthowg/error.hpp"
#include "orthowg/expansion.hpp"
#include "orthowg/expression.hpp"
#include "orthowg/matrix.hpp"
#include "orthowg/random.hpp"

namespace orthowg {

struct McOptions {
  std::size_t samples = 10000;
  std::uint64_t seed = 42;
  unsigned workers = 1;
  /// Batches of the delete-one-batch jackknife used for cumulant errors.
  std::size_t batches = 20;
};

struct McEstimate {
  double mean = 0;
  double std_error = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

using HaarDraw = std::map<int, Eigen::MatrixXd>;

namespace detail {

inline Eigen::MatrixXd to_eigen(const Matrix<double>& m) {
  Eigen::MatrixXd e(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
  return e;
}

/// Tr of one trace of the expression for the given draw.
inline double trace_value(const std::vector<Factor>& trace, const HaarDraw& o, const std::map<int, Eigen::MatrixXd>& x,
                          int N) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(N, N);
  for (const auto& f : trace) {
    const Eigen::MatrixXd& oc = o.at(f.color);
    if (f.eps > 0) m = m * oc;
    else m = m * oc.transpose();
    if (f.slot > 0) m = m * x.at(f.slot);
    else if (f.slot < 0) m = m * x.at(-f.slot).transpose();
  }
  return m.trace();
}

inline std::map<int, Eigen::MatrixXd> eigen_inputs(const TraceExpression& expr, const std::map<int, Matrix<double>>& mats,
                                                   int N) {
  std::map<int, Eigen::MatrixXd> x;
  for (int label : expr.labels()) {
    auto it = mats.find(label);
    if (it == mats.end()) throw ValidationError("no matrix for label " + std::to_string(label));
    if (it->second.rows() != static_cast<std::size_t>(N) || it->second.cols() != static_cast<std::size_t>(N)) {
      throw ValidationError("matrix " + std::to_string(label) + " is not " + std::to_string(N) + "x" + std::to_string(N));
    }
    x.emplace(label, to_eigen(it->second));
  }
  return x;
}

inline McEstimate summarize(const std::vector<double>& v, std::uint64_t seed) {
  McEstimate e;
  e.samples = v.size();
  e.seed = seed;
  Accumulator<double> s;
  for (double x : v) s.add(x);
  e.mean = s.value() / static_cast<double>(v.size());
  Accumulator<double> ss;
  for (double x : v) ss.add((x - e.mean) * (x - e.mean));
  const double var = v.size() > 1 ? ss.value() / static_cast<double>(v.size() - 1) : 0.0;
  e.std_error = std::sqrt(var / static_cast<double>(v.size()));
  return e;
}

}  // namespace detail

/// Per-sample values f(draw) for `samples` independent draws of the Haar
/// matrices of the given colors; values[s] is the vector returned for sample s.
template <class Stat>
std::vector<std::vector<double>> mc_sample(const std::vector<int>& colors, int N, const McOptions& opt, Stat&& stat) {
  if (N < 1) throw ValidationError("mc: N must be positive");
  if (opt.samples < 2) throw ValidationError("mc: need at least 2 samples");
  std::vector<std::vector<double>> values(opt.samples);
  constexpr std::size_t kChunk = 256;
  const std::size_t chunks = (opt.samples + kChunk - 1) / kChunk;
  detail::parallel_for(chunks, opt.workers, [&](std::size_t ci) {
    const std::size_t end = std::min(opt.samples, (ci + 1) * kChunk);
    for (std::size_t s = ci * kChunk; s < end; ++s) {
      HaarDraw draw;
      for (int c : colors) {
        PhiloxStream rng(opt.seed, s, static_cast<std::uint32_t>(c));
        draw.emplace(c, haar_orthogonal(N, rng));
      }
      values[s] = stat(draw);
    }
  });
  return values;
}

/// Mean and standard error of a scalar statistic of the draw.
template <class Stat>
McEstimate mc_statistic(const std::vector<int>& colors, int N, const McOptions& opt, Stat&& stat) {
  auto values = mc_sample(colors, N, opt, [&](const HaarDraw& d) { return std::vector<double>{stat(d)}; });
  std::vector<double> flat;
  flat.reserve(values.size());
  for (const auto& v : values) flat.push_back(v[0]);
  return detail::summarize(flat, opt.seed);
}

/// E[prod tr(...)] by sampling.
inline McEstimate mc_moment(const TraceExpression& expr, const std::map<int, Matrix<double>>& matrices, int N,
                            const McOptions& opt = {}) {
  const auto x = detail::eigen_inputs(expr, matrices, N);
  return mc_statistic(expr.colors(), N, opt, [&](const HaarDraw& d) {
    double v = 1;
    for (const auto& t : expr.traces()) v *= detail::trace_value(t, d, x, N) / N;
    return v;
  });
}

/// Unbiased joint cumulant estimate (k-statistic) of order 2 or 3 over the
/// rows of `cols` (cols[i][s] = Y_i at sample s), restricted to the selected
/// samples.
inline double joint_k_statistic(const std::vector<std::vector<double>>& cols, const std::vector<std::size_t>& rows) {
  const std::size_t r = cols.size();
  const double n = static_cast<double>(rows.size());
  std::vector<double> mean(r, 0);
  for (std::size_t i = 0; i < r; ++i) {
    detail::Accumulator<double> a;
    for (std::size_t s : rows) a.add(cols[i][s]);
    mean[i] = a.value() / n;
  }
  detail::Accumulator<double> a;
  for (std::size_t s : rows) {
    double p = 1;
    for (std::size_t i = 0; i < r; ++i) p *= cols[i][s] - mean[i];
    a.add(p);
  }
  if (r == 2) return a.value() / (n - 1);
  return a.value() * n / ((n - 1) * (n - 2));
}

/// k_r(Tr Y_1, ..., Tr Y_r) by sampling, r in {2, 3}; the error is the
/// delete-one-batch jackknife over `batches` contiguous batches.
inline McEstimate mc_cumulant(const std::vector<TraceExpression>& singles, const std::map<int, Matrix<double>>& matrices,
                              int N, const McOptions& opt = {}) {
  const std::size_t r = singles.size();
  if (r != 2 && r != 3) throw ValidationError("mc_cumulant: order must be 2 or 3");
  for (const auto& e : singles) {
    if (e.num_traces() != 1) throw ValidationError("mc_cumulant: each expression must be a single trace");
  }
  const TraceExpression joint = TraceExpression::concat(singles);
  const auto x = detail::eigen_inputs(joint, matrices, N);
  const std::size_t B = opt.batches;
  if (B < 2 || opt.samples < 2 * B) throw ValidationError("mc_cumulant: too few samples for the batch count");
  auto values = mc_sample(joint.colors(), N, opt, [&](const HaarDraw& d) {
    std::vector<double> y;
    for (const auto& t : joint.traces()) y.push_back(detail::trace_value(t, d, x, N));
    return y;
  });
  std::vector<std::vector<double>> cols(r, std::vector<double>(values.size()));
  for (std::size_t s = 0; s < values.size(); ++s)
    for (std::size_t i = 0; i < r; ++i) cols[i][s] = values[s][i];

  std::vector<std::size_t> all(values.size());
  for (std::size_t s = 0; s < all.size(); ++s) all[s] = s;
  McEstimate e;
  e.samples = values.size();
  e.seed = opt.seed;
  e.mean = joint_k_statistic(cols, all);
  std::vector<double> theta(B);
  for (std::size_t b = 0; b < B; ++b) {
    const std::size_t lo = b * values.size() / B, hi = (b + 1) * values.size() / B;
    std::vector<std::size_t> keep;
    keep.reserve(values.size() - (hi - lo));
    for (std::size_t s = 0; s < values.size(); ++s) {
      if (s < lo || s >= hi) keep.push_back(s);
    }
    theta[b] = joint_k_statistic(cols, keep);
  }
  double tbar = 0;
  for (double t : theta) tbar += t;
  tbar /= static_cast<double>(B);
  double ss = 0;
  for (double t : theta) ss += (t - tbar) * (t - tbar);
  e.std_error = std::sqrt(static_cast<double>(B - 1) / static_cast<double>(B) * ss);
  return e;
}

}  // namespace orthowg

#endif  // ORTHOWG_MONTECARLO_HPP
