#ifndef ORTHOWG_EXPRESSION_HPP
#define ORTHOWG_EXPRESSION_HPP

// Products of traces tr(O_{w(1)}^{e(1)} X_1 O_{w(2)}^{e(2)} X_2 ...) and the
// evaluation of normalized traces along signed cycles.
//
// Positions are numbered 1..n consecutively across the traces. Each position
// carries a color (which Haar matrix), a sign (O or O^T) and a slot: 0 for the
// identity, +L for matrix L, -L for its transpose. Along a signed cycle,
// position -k stands for X_k^T.

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <type_traits>
#include <string>
#include <utility>
#include <vector>

#include "orthowg/error.hpp"
#include "orthowg/matrix.hpp"
#include "orthowg/permap.hpp"
#include "orthowg/setpart.hpp"

namespace orthowg {

struct Factor {
  int color = 0;
  int eps = 1;
  int slot = 0;

  friend bool operator==(const Factor&, const Factor&) = default;
};

/// Matrix label and orientation met at a signed position; label 0 is the
/// identity.
struct SlotRef {
  int label = 0;
  bool transposed = false;
};

class TraceExpression {
 public:
  TraceExpression() = default;
  explicit TraceExpression(std::vector<std::vector<Factor>> traces) : traces_(std::move(traces)) {
    if (traces_.empty()) throw ValidationError("TraceExpression: no traces");
    for (const auto& t : traces_) {
      if (t.empty()) throw ValidationError("TraceExpression: empty trace");
      for (const auto& f : t) {
        if (f.eps != 1 && f.eps != -1) throw ValidationError("TraceExpression: eps must be +1 or -1");
        if (f.color < 0) throw ValidationError("TraceExpression: colors must be nonnegative");
        flat_.push_back(f);
      }
    }
  }

  const std::vector<std::vector<Factor>>& traces() const noexcept { return traces_; }
  int n() const noexcept { return static_cast<int>(flat_.size()); }
  std::size_t num_traces() const noexcept { return traces_.size(); }

  /// Factor at position k in [1, n].
  const Factor& at(int k) const {
    if (k < 1 || k > n()) throw ValidationError("TraceExpression: position out of range");
    return flat_[static_cast<std::size_t>(k - 1)];
  }

  std::vector<int> trace_lengths() const {
    std::vector<int> out;
    for (const auto& t : traces_) out.push_back(static_cast<int>(t.size()));
    return out;
  }

  SignedPermutation phi() const { return trace_cycles(trace_lengths()); }

  EpsilonSigns eps() const {
    std::vector<int> e;
    for (const auto& f : flat_) e.push_back(f.eps);
    return EpsilonSigns(std::move(e));
  }

  /// Distinct colors, ascending.
  std::vector<int> colors() const {
    std::vector<int> c;
    for (const auto& f : flat_) c.push_back(f.color);
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    return c;
  }

  std::vector<int> positions_of_color(int color) const {
    std::vector<int> out;
    for (int k = 1; k <= n(); ++k) {
      if (at(k).color == color) out.push_back(k);
    }
    return out;
  }

  /// ker(w) on [n].
  SetPartition word_kernel() const {
    std::vector<int> w;
    for (const auto& f : flat_) w.push_back(f.color);
    return kernel_of(IndexSet::range(n()), w);
  }

  bool colors_even() const {
    for (int c : colors()) {
      if (positions_of_color(c).size() % 2 != 0) return false;
    }
    return true;
  }

  /// Positive matrix labels referenced by the slots.
  std::vector<int> labels() const {
    std::vector<int> out;
    for (const auto& f : flat_) {
      if (f.slot != 0) out.push_back(std::abs(f.slot));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  SlotRef resolve(int signed_position) const {
    const Factor& f = at(std::abs(signed_position));
    if (f.slot == 0) return {};
    return {std::abs(f.slot), (f.slot < 0) != (signed_position < 0)};
  }

  /// The expression made of the chosen traces, in the given order.
  TraceExpression select(const std::vector<std::size_t>& which) const {
    std::vector<std::vector<Factor>> t;
    for (std::size_t i : which) t.push_back(traces_.at(i));
    return TraceExpression(std::move(t));
  }

  /// Concatenation of the traces of several expressions.
  static TraceExpression concat(const std::vector<TraceExpression>& parts) {
    std::vector<std::vector<Factor>> t;
    for (const auto& p : parts)
      for (const auto& tr : p.traces_) t.push_back(tr);
    return TraceExpression(std::move(t));
  }

  /// "tr(O1 X1 O1^T X2^T)tr(O2)" with O-colors and slot labels.
  std::string to_string() const {
    std::string s;
    for (const auto& t : traces_) {
      s += "tr(";
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) s += ' ';
        s += "O" + std::to_string(t[i].color);
        if (t[i].eps < 0) s += "^T";
        if (t[i].slot != 0) {
          s += " X" + std::to_string(std::abs(t[i].slot));
          if (t[i].slot < 0) s += "^T";
        }
      }
      s += ")";
    }
    return s;
  }

  friend bool operator==(const TraceExpression& a, const TraceExpression& b) { return a.traces_ == b.traces_; }

 private:
  std::vector<std::vector<Factor>> traces_;
  std::vector<Factor> flat_;
};

/// Canonical key of a cyclic word of (label, transposed) letters, identity
/// letters dropped: the least rotation of the word or of its reversed,
/// transposed form (Tr(AB) = Tr(BA) = Tr(B^T A^T)).
inline std::vector<int> cyclic_word_key(const std::vector<SlotRef>& word) {
  std::vector<int> fwd, rev;
  for (const auto& r : word) {
    if (r.label != 0) fwd.push_back(2 * r.label + (r.transposed ? 1 : 0));
  }
  for (auto it = fwd.rbegin(); it != fwd.rend(); ++it) rev.push_back(*it ^ 1);
  std::vector<int> best = fwd;
  for (const auto* w : {&fwd, &rev}) {
    for (std::size_t s = 0; s < w->size(); ++s) {
      std::vector<int> rot(w->begin() + static_cast<long>(s), w->end());
      rot.insert(rot.end(), w->begin(), w->begin() + static_cast<long>(s));
      if (rot < best) best = std::move(rot);
    }
  }
  return best;
}

inline std::string cyclic_word_string(const std::vector<int>& key) {
  if (key.empty()) return "tr(I)";
  std::string s = "tr(";
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (i) s += '*';
    s += "X" + std::to_string(key[i] / 2);
    if (key[i] % 2) s += "^T";
  }
  return s + ")";
}

namespace detail {

template <class T>
T scalar_from(const mpq_class& q) {
  if constexpr (std::is_same_v<T, double>) return q.get_d();
  else return T(q);
}

template <class T>
bool scalar_is_zero(const T& x) {
  return x == T(0);
}

}  // namespace detail

/// Normalized trace tr = Tr/m of products of m x m matrices along cycles of
/// signed positions of an expression. Copies share one cache keyed by cyclic
/// word. Rational matrices are multiplied as integer matrices with their
/// denominators cleared.
template <class T>
class MatrixTraceOracle {
 public:
  MatrixTraceOracle(const TraceExpression& expr, std::map<int, Matrix<T>> matrices)
      : expr_(std::make_shared<TraceExpression>(expr)), shared_(std::make_shared<Shared>()) {
    for (const auto& [label, m] : matrices) {
      if (!m.is_square()) throw ValidationError("matrix " + std::to_string(label) + " is not square");
      if (dim_ == 0) dim_ = m.rows();
      if (m.rows() != dim_) throw ValidationError("matrices have different sizes");
    }
    for (int label : expr.labels()) {
      if (!matrices.count(label)) throw ValidationError("no matrix for label " + std::to_string(label));
    }
    if constexpr (std::is_same_v<T, mpq_class>) {
      for (auto& [label, m] : matrices) {
        mpz_class l = 1;
        for (const auto& x : m.data()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
        Matrix<mpz_class> z(m.rows(), m.cols());
        for (std::size_t i = 0; i < m.rows(); ++i)
          for (std::size_t j = 0; j < m.cols(); ++j) {
            mpq_class v = m(i, j) * l;
            z(i, j) = v.get_num();
          }
        shared_->ints.emplace(2 * label + 1, z.transpose());
        shared_->ints.emplace(2 * label, std::move(z));
        shared_->scale.emplace(label, l);
      }
    } else {
      for (auto& [label, m] : matrices) {
        shared_->mats.emplace(2 * label + 1, m.transpose());
        shared_->mats.emplace(2 * label, std::move(m));
      }
    }
  }

  std::size_t dim() const noexcept { return dim_; }

  /// tr along one cycle of signed positions.
  T operator()(const Cycle& cycle) const {
    std::vector<SlotRef> word;
    for (int k : cycle) word.push_back(expr_->resolve(k));
    return word_trace(cyclic_word_key(word));
  }

  T word_trace(const std::vector<int>& key) const {
    if (key.empty()) return T(1);
    std::lock_guard lock(shared_->mu);
    auto it = shared_->cache.find(key);
    if (it != shared_->cache.end()) return it->second;
    T v;
    if constexpr (std::is_same_v<T, mpq_class>) {
      mpz_class scale = static_cast<long>(dim_);
      for (int code : key) scale *= shared_->scale.at(code / 2);
      v = mpq_class(closing_trace(shared_->ints, shared_->int_prefix, key), scale);
      v.canonicalize();
    } else {
      v = closing_trace(shared_->mats, shared_->prefix, key) / T(static_cast<long>(dim_));
    }
    return shared_->cache.emplace(key, v).first->second;
  }

 private:
  struct Shared {
    std::map<int, Matrix<T>> mats;  // letters by code 2L + transposed
    std::map<int, Matrix<mpz_class>> ints;
    std::map<int, mpz_class> scale;
    std::map<std::vector<int>, Matrix<T>> prefix;
    std::map<std::vector<int>, Matrix<mpz_class>> int_prefix;
    std::mutex mu;
    std::map<std::vector<int>, T> cache;
  };

  /// Product of the first len letters, memoized.
  template <class S>
  static const Matrix<S>& prefix_product(const std::map<int, Matrix<S>>& letters,
                                         std::map<std::vector<int>, Matrix<S>>& memo, const std::vector<int>& key,
                                         std::size_t len) {
    if (len == 1) return letters.at(key[0]);
    std::vector<int> head(key.begin(), key.begin() + static_cast<long>(len));
    auto it = memo.find(head);
    if (it != memo.end()) return it->second;
    Matrix<S> p = prefix_product(letters, memo, key, len - 1) * letters.at(key[len - 1]);
    return memo.emplace(std::move(head), std::move(p)).first->second;
  }

  /// Tr of the whole word; the last factor enters through a dot product.
  template <class S>
  static S closing_trace(const std::map<int, Matrix<S>>& letters, std::map<std::vector<int>, Matrix<S>>& memo,
                         const std::vector<int>& key) {
    const Matrix<S>& last = letters.at(key.back());
    if (key.size() == 1) return last.trace();
    const Matrix<S>& p = prefix_product(letters, memo, key, key.size() - 1);
    S t = S(0);
    for (std::size_t i = 0; i < p.rows(); ++i)
      for (std::size_t j = 0; j < p.cols(); ++j) t += p(i, j) * last(j, i);
    return t;
  }

  std::shared_ptr<const TraceExpression> expr_;
  std::shared_ptr<Shared> shared_;
  std::size_t dim_ = 0;
};

/// prod over cycles of Tr (or tr) of the product along the cycle; position k
/// reads matrices.at(|k|), transposed when k < 0.
template <class T>
T trace_along(const SignedPermutation& pi, const std::map<int, Matrix<T>>& matrices, bool normalized = false) {
  T result = T(1);
  for (const auto& cyc : pi.cycles()) {
    const Matrix<T>* first = nullptr;
    Matrix<T> prod;
    for (int k : cyc) {
      auto it = matrices.find(std::abs(k));
      if (it == matrices.end()) throw ValidationError("trace_along: no matrix for " + std::to_string(k));
      Matrix<T> m = k < 0 ? it->second.transpose() : it->second;
      if (!first) {
        prod = m;
        first = &it->second;
      } else {
        if (m.rows() != prod.cols()) throw ValidationError("trace_along: dimension mismatch");
        prod = prod * m;
      }
    }
    T tr = prod.trace();
    if (normalized) tr = tr / T(static_cast<long>(prod.rows()));
    result *= tr;
  }
  return result;
}

/// X - tr(X) I for each chosen label.
template <class T>
std::map<int, Matrix<T>> center_slots(std::map<int, Matrix<T>> matrices, const std::vector<int>& labels) {
  for (int label : labels) {
    auto it = matrices.find(label);
    if (it == matrices.end()) throw ValidationError("center_slots: no matrix for label " + std::to_string(label));
    Matrix<T>& m = it->second;
    const T t = m.trace() / T(static_cast<long>(m.rows()));
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) -= t;
  }
  return matrices;
}

/// I_{reps} (x) x: a block-diagonal matrix whose normalized traces of
/// products equal those of the blocks.
template <class T>
Matrix<T> kron_identity(std::size_t reps, const Matrix<T>& x) {
  const std::size_t m = x.rows();
  Matrix<T> out(reps * m, reps * m);
  for (std::size_t b = 0; b < reps; ++b)
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) out(b * m + i, b * m + j) = x(i, j);
  return out;
}

}  // namespace orthowg

#endif  // ORTHOWG_EXPRESSION_HPP
