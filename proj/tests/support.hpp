#ifndef ORTHOWG_TESTS_SUPPORT_HPP
#define ORTHOWG_TESTS_SUPPORT_HPP

#include <map>
#include <random>
#include <string>

#include "orthowg/orthowg.hpp"

namespace testing_support {

using namespace orthowg;

inline mpq_class Q(long num, long den = 1) {
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

/// Small random rational matrix (entries p/q with |p| <= 4, q <= 3).
inline Matrix<mpq_class> random_rational(std::size_t n, std::mt19937& g) {
  std::uniform_int_distribution<long> num(-4, 4), den(1, 3);
  Matrix<mpq_class> m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = Q(num(g), den(g));
  return m;
}

inline std::map<int, Matrix<mpq_class>> random_set(std::size_t n, int labels, std::mt19937& g) {
  std::map<int, Matrix<mpq_class>> out;
  for (int l = 1; l <= labels; ++l) out.emplace(l, random_rational(n, g));
  return out;
}

/// Normalized trace straight from the entries.
inline mpq_class ntr(const Matrix<mpq_class>& m) {
  mpq_class t = m.trace();
  t /= static_cast<long>(m.rows());
  return t;
}

inline Factor F(int color, int eps, int slot) { return Factor{color, eps, slot}; }

inline std::string data_dir() { return ORTHOWG_DATA_DIR; }

}  // namespace testing_support

#endif
