#ifndef ORTHOWG_POLYNOMIAL_HPP
#define ORTHOWG_POLYNOMIAL_HPP

// Dense univariate polynomials over the integers in the indeterminate N, and
// reduced fractions of them.

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "orthowg/error.hpp"

namespace orthowg {

class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(long c) : coef_{mpz_class(c)} { trim(); }  // NOLINT(google-explicit-constructor)
  Polynomial(int c) : Polynomial(static_cast<long>(c)) {}  // NOLINT(google-explicit-constructor)
  Polynomial(const mpz_class& c) : coef_{c} { trim(); }  // NOLINT(google-explicit-constructor)
  /// coefficients[i] multiplies N^i.
  explicit Polynomial(std::vector<mpz_class> coefficients) : coef_(std::move(coefficients)) { trim(); }

  static Polynomial monomial(const mpz_class& c, std::size_t degree) {
    std::vector<mpz_class> v(degree + 1, 0);
    v[degree] = c;
    return Polynomial(std::move(v));
  }
  static Polynomial N() { return monomial(1, 1); }
  /// N + a.
  static Polynomial linear(long a) { return Polynomial(std::vector<mpz_class>{mpz_class(a), mpz_class(1)}); }

  bool is_zero() const noexcept { return coef_.empty(); }
  /// Degree; -1 for the zero polynomial.
  long degree() const noexcept { return static_cast<long>(coef_.size()) - 1; }
  const std::vector<mpz_class>& coefficients() const noexcept { return coef_; }
  mpz_class coefficient(std::size_t i) const { return i < coef_.size() ? coef_[i] : mpz_class(0); }
  mpz_class leading() const { return coef_.empty() ? mpz_class(0) : coef_.back(); }

  /// gcd of the coefficients, nonnegative.
  mpz_class content() const {
    mpz_class g = 0;
    for (const auto& c : coef_) {
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
      if (g == 1) break;
    }
    return g;
  }

  /// Content removed, leading coefficient positive.
  Polynomial primitive_part() const {
    if (is_zero()) return {};
    mpz_class g = content();
    if (leading() < 0) g = -g;
    Polynomial p = *this;
    for (auto& c : p.coef_) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    return p;
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.coef_.size() > coef_.size()) coef_.resize(o.coef_.size(), 0);
    for (std::size_t i = 0; i < o.coef_.size(); ++i) coef_[i] += o.coef_[i];
    trim();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    if (o.coef_.size() > coef_.size()) coef_.resize(o.coef_.size(), 0);
    for (std::size_t i = 0; i < o.coef_.size(); ++i) coef_[i] -= o.coef_[i];
    trim();
    return *this;
  }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }
  Polynomial& operator*=(const mpz_class& c) {
    if (c == 0) {
      coef_.clear();
      return *this;
    }
    for (auto& x : coef_) x *= c;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(Polynomial a) {
    for (auto& c : a.coef_) c = -c;
    return a;
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<mpz_class> out(a.coef_.size() + b.coef_.size() - 1, 0);
    for (std::size_t i = 0; i < a.coef_.size(); ++i) {
      if (a.coef_[i] == 0) continue;
      for (std::size_t j = 0; j < b.coef_.size(); ++j) out[i + j] += a.coef_[i] * b.coef_[j];
    }
    return Polynomial(std::move(out));
  }
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coef_ == b.coef_; }

  /// Multiplies by N^k.
  Polynomial shifted(std::size_t k) const {
    if (is_zero()) return {};
    std::vector<mpz_class> v(k, 0);
    v.insert(v.end(), coef_.begin(), coef_.end());
    return Polynomial(std::move(v));
  }

  /// Exact division; throws if b does not divide this over the integers.
  Polynomial divexact(const Polynomial& b) const {
    auto [q, r] = divmod_exact_lead(b);
    if (!r.is_zero()) throw Error("Polynomial::divexact: remainder is nonzero");
    return q;
  }

  /// Division with remainder; requires the leading coefficient of b to divide
  /// every intermediate leading coefficient (true for exact or monic division).
  std::pair<Polynomial, Polynomial> divmod_exact_lead(const Polynomial& b) const {
    if (b.is_zero()) throw Error("Polynomial: division by zero");
    Polynomial r = *this;
    if (r.degree() < b.degree()) return {Polynomial{}, r};
    std::vector<mpz_class> q(static_cast<std::size_t>(r.degree() - b.degree() + 1), 0);
    const mpz_class& lb = b.coef_.back();
    while (!r.is_zero() && r.degree() >= b.degree()) {
      const auto shift = static_cast<std::size_t>(r.degree() - b.degree());
      if (!mpz_divisible_p(r.coef_.back().get_mpz_t(), lb.get_mpz_t())) {
        throw Error("Polynomial: inexact leading-coefficient division");
      }
      mpz_class t;
      mpz_divexact(t.get_mpz_t(), r.coef_.back().get_mpz_t(), lb.get_mpz_t());
      q[shift] = t;
      for (std::size_t i = 0; i < b.coef_.size(); ++i) r.coef_[i + shift] -= t * b.coef_[i];
      r.trim();
    }
    return {Polynomial(std::move(q)), r};
  }

  /// lc(b)^(deg a - deg b + 1) a = q b + r.
  Polynomial pseudo_remainder(const Polynomial& b) const {
    if (b.is_zero()) throw Error("Polynomial: pseudo-remainder by zero");
    Polynomial r = *this;
    const mpz_class& lb = b.coef_.back();
    while (!r.is_zero() && r.degree() >= b.degree()) {
      const auto shift = static_cast<std::size_t>(r.degree() - b.degree());
      mpz_class lr = r.coef_.back();
      r *= lb;
      for (std::size_t i = 0; i < b.coef_.size(); ++i) r.coef_[i + shift] -= lr * b.coef_[i];
      r.trim();
    }
    return r;
  }

  mpq_class eval(const mpq_class& x) const {
    mpq_class acc = 0;
    for (auto it = coef_.rbegin(); it != coef_.rend(); ++it) acc = acc * x + mpq_class(*it);
    return acc;
  }
  mpz_class eval(const mpz_class& x) const {
    mpz_class acc = 0;
    for (auto it = coef_.rbegin(); it != coef_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }
  double eval(double x) const {
    double acc = 0;
    for (auto it = coef_.rbegin(); it != coef_.rend(); ++it) acc = acc * x + it->get_d();
    return acc;
  }

  /// Descending-power form, e.g. "N^2+3*N-1".
  std::string to_string() const {
    if (is_zero()) return "0";
    std::string s;
    for (long i = degree(); i >= 0; --i) {
      const mpz_class& c = coef_[static_cast<std::size_t>(i)];
      if (c == 0) continue;
      mpz_class a = abs(c);
      if (c < 0) s += '-';
      else if (!s.empty()) s += '+';
      if (i == 0) {
        s += a.get_str();
        continue;
      }
      if (a != 1) s += a.get_str() + "*";
      s += "N";
      if (i > 1) s += "^" + std::to_string(i);
    }
    return s;
  }

  friend std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << p.to_string(); }

 private:
  void trim() {
    while (!coef_.empty() && coef_.back() == 0) coef_.pop_back();
  }

  std::vector<mpz_class> coef_;
};

/// Primitive gcd with positive leading coefficient (primitive PRS).
inline Polynomial gcd(Polynomial a, Polynomial b) {
  if (a.is_zero()) return b.primitive_part();
  if (b.is_zero()) return a.primitive_part();
  a = a.primitive_part();
  b = b.primitive_part();
  if (a.degree() < b.degree()) std::swap(a, b);
  while (!b.is_zero()) {
    Polynomial r = a.pseudo_remainder(b);
    a = std::move(b);
    b = r.is_zero() ? Polynomial{} : r.primitive_part();
  }
  return a.primitive_part();
}

/// num/den with gcd(num, den) = 1, the integer contents coprime and
/// den's leading coefficient positive.
class PolyFrac {
 public:
  PolyFrac() : num_(0), den_(1) {}
  PolyFrac(long c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
  PolyFrac(int c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
  PolyFrac(Polynomial p) : num_(std::move(p)), den_(1) {}  // NOLINT(google-explicit-constructor)
  PolyFrac(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

  static PolyFrac constant(const mpq_class& q) {
    return PolyFrac(Polynomial(q.get_num()), Polynomial(q.get_den()));
  }

  static PolyFrac N_power(long k) {
    if (k >= 0) return PolyFrac(Polynomial::monomial(1, static_cast<std::size_t>(k)));
    return PolyFrac(Polynomial(1), Polynomial::monomial(1, static_cast<std::size_t>(-k)));
  }

  const Polynomial& num() const noexcept { return num_; }
  const Polynomial& den() const noexcept { return den_; }
  bool is_zero() const noexcept { return num_.is_zero(); }

  /// deg(num) - deg(den); the order of growth as N grows. Zero has order
  /// below every integer, reported as nullopt.
  std::optional<long> order() const {
    if (is_zero()) return std::nullopt;
    return num_.degree() - den_.degree();
  }

  friend PolyFrac operator+(const PolyFrac& a, const PolyFrac& b) {
    if (a.den_ == b.den_) return PolyFrac(a.num_ + b.num_, a.den_);
    Polynomial g = gcd(a.den_, b.den_);
    Polynomial ad = a.den_.divexact(g);
    Polynomial bd = b.den_.divexact(g);
    return PolyFrac(a.num_ * bd + b.num_ * ad, ad * b.den_);
  }
  friend PolyFrac operator-(const PolyFrac& a) { return PolyFrac(-a.num_, a.den_, raw_tag{}); }
  friend PolyFrac operator-(const PolyFrac& a, const PolyFrac& b) { return a + (-b); }
  friend PolyFrac operator*(const PolyFrac& a, const PolyFrac& b) {
    if (a.is_zero() || b.is_zero()) return {};
    Polynomial g1 = gcd(a.num_, b.den_);
    Polynomial g2 = gcd(b.num_, a.den_);
    return PolyFrac(a.num_.divexact(g1) * b.num_.divexact(g2), a.den_.divexact(g2) * b.den_.divexact(g1));
  }
  friend PolyFrac operator/(const PolyFrac& a, const PolyFrac& b) {
    if (b.is_zero()) throw Error("PolyFrac: division by zero");
    return a * PolyFrac(b.den_, b.num_);
  }
  PolyFrac& operator+=(const PolyFrac& o) { return *this = *this + o; }
  PolyFrac& operator-=(const PolyFrac& o) { return *this = *this - o; }
  PolyFrac& operator*=(const PolyFrac& o) { return *this = *this * o; }
  PolyFrac& operator/=(const PolyFrac& o) { return *this = *this / o; }
  friend bool operator==(const PolyFrac& a, const PolyFrac& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

  /// Exact value at N = n0; PoleError naming the vanishing factor otherwise.
  mpq_class eval_at(long n0) const {
    mpz_class x(n0);
    mpz_class d = den_.eval(x);
    if (d == 0) {
      throw PoleError("pole at N=" + std::to_string(n0) + " (factor " + pole_factor(n0) + ")", pole_factor(n0), n0);
    }
    mpq_class v(num_.eval(x), d);
    v.canonicalize();
    return v;
  }

  double eval_at(double x) const { return num_.eval(x) / den_.eval(x); }

  /// Limit as N grows; throws if it diverges.
  mpq_class limit() const {
    if (is_zero()) return 0;
    if (num_.degree() > den_.degree()) throw Error("PolyFrac::limit: diverges");
    if (num_.degree() < den_.degree()) return 0;
    mpq_class v(num_.leading(), den_.leading());
    v.canonicalize();
    return v;
  }

  /// Coefficient of N^order in the expansion at infinity.
  mpq_class leading_coefficient() const {
    if (is_zero()) return 0;
    mpq_class v(num_.leading(), den_.leading());
    v.canonicalize();
    return v;
  }

  /// Factored form, e.g. "2*N^6/((N+1)*(N+2)*(N+6)*(N-1)*(N-2)*(N-3))".
  std::string to_string() const {
    if (is_zero()) return "0";
    std::string n = factored(num_, true);
    if (den_ == Polynomial(1)) return n;
    std::size_t factors = 0;
    std::string d = factored(den_, false, &factors);
    if (factors > 1) d = "(" + d + ")";
    return n + "/" + d;
  }

  friend std::ostream& operator<<(std::ostream& os, const PolyFrac& p) { return os << p.to_string(); }

 private:
  struct raw_tag {};
  PolyFrac(Polynomial num, Polynomial den, raw_tag) : num_(std::move(num)), den_(std::move(den)) {}

  void normalize() {
    if (den_.is_zero()) throw Error("PolyFrac: zero denominator");
    if (num_.is_zero()) {
      den_ = Polynomial(1);
      return;
    }
    Polynomial g = gcd(num_, den_);
    if (g.degree() > 0) {
      num_ = num_.divexact(g);
      den_ = den_.divexact(g);
    }
    mpz_class cn = num_.content(), cd = den_.content();
    mpz_class c;
    mpz_gcd(c.get_mpz_t(), cn.get_mpz_t(), cd.get_mpz_t());
    if (den_.leading() < 0) c = -c;
    if (c != 1) {
      mpz_class inv = c;  // divide both by c
      num_ = divide_content(num_, inv);
      den_ = divide_content(den_, inv);
    }
  }

  static Polynomial divide_content(const Polynomial& p, const mpz_class& c) {
    std::vector<mpz_class> v = p.coefficients();
    for (auto& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), c.get_mpz_t());
    return Polynomial(std::move(v));
  }

  std::string pole_factor(long n0) const {
    // Report the linear factor (N - n0) if it divides the denominator.
    Polynomial f = Polynomial::linear(-n0);
    return factor_string(f);
  }

  static std::string factor_string(const Polynomial& f) {
    if (f.degree() == 1 && f.leading() == 1) {
      const mpz_class& a = f.coefficient(0);
      if (a == 0) return "N";
      return a > 0 ? "N+" + a.get_str() : "N-" + mpz_class(-a).get_str();
    }
    return f.to_string();
  }

  /// content * N^m * (N+a)... ordered a>0 ascending then a<0 by |a|, then the
  /// leftover factor. `count` receives the number of printed factors.
  static std::string factored(const Polynomial& p, bool signed_content, std::size_t* count = nullptr) {
    mpz_class c = p.content();
    if (p.leading() < 0) c = -c;
    Polynomial rest = divide_content(p, c);
    std::size_t zero_mult = 0;
    while (rest.degree() > 0 && rest.coefficient(0) == 0) {
      rest = rest.divexact(Polynomial::N());
      ++zero_mult;
    }
    std::map<long, std::size_t> plus, minus;  // root -a for (N+a)
    auto try_root = [&](long a) {
      Polynomial f = Polynomial::linear(a);
      while (rest.degree() > 0) {
        if (rest.eval(mpz_class(-a)) != 0) break;
        rest = rest.divexact(f);
        if (a > 0) ++plus[a];
        else ++minus[-a];
      }
    };
    if (rest.degree() > 0) {
      // Integer roots divide the constant term; in practice they are small.
      mpz_class c0 = abs(rest.coefficient(0));
      const long bound = c0.fits_slong_p() ? std::min<long>(c0.get_si(), 4096) : 4096;
      for (long a = 1; a <= bound && rest.degree() > 0; ++a) {
        if (c0 % a != 0) continue;
        try_root(a);
        try_root(-a);
      }
    }
    std::vector<std::string> parts;
    for (std::size_t i = 0; i < zero_mult; ++i) parts.push_back("N");
    auto emit = [&](long a, std::size_t mult, bool positive) {
      std::string f = positive ? "(N+" + std::to_string(a) + ")" : "(N-" + std::to_string(a) + ")";
      for (std::size_t i = 0; i < mult; ++i) parts.push_back(f);
    };
    for (auto [a, m] : plus) emit(a, m, true);
    for (auto [a, m] : minus) emit(a, m, false);
    if (rest.degree() > 0) parts.push_back("(" + rest.to_string() + ")");
    // Collapse runs of N into N^m.
    std::vector<std::string> merged;
    if (zero_mult > 0) {
      merged.push_back(zero_mult == 1 ? "N" : "N^" + std::to_string(zero_mult));
      parts.erase(parts.begin(), parts.begin() + static_cast<long>(zero_mult));
    }
    for (auto& s : parts) merged.push_back(std::move(s));
    if (count) *count = merged.size() + ((c != 1 && c != -1) ? 1 : 0);
    std::string out;
    if (merged.empty()) return c.get_str();
    if (c == -1 && signed_content) out = "-";
    else if (c != 1) out = c.get_str() + "*";
    for (std::size_t i = 0; i < merged.size(); ++i) {
      if (i) out += "*";
      out += merged[i];
    }
    return out;
  }

  Polynomial num_;
  Polynomial den_;
};

}  // namespace orthowg

#endif  // ORTHOWG_POLYNOMIAL_HPP
