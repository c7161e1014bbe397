#ifndef ORTHOWG_IO_HPP
#define ORTHOWG_IO_HPP

// JSON encodings: rationals as "p/q" strings, expressions as
// {traces: [[{color, eps, slot}]], matrices: {label: [[entries]]}}, and
// Weingarten tables as {n, entries: {lambda: {num: [...], den: [...]}}} with
// ascending coefficients.

#include <gmpxx.h>

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "orthowg/error.hpp"
#include "orthowg/expression.hpp"
#include "orthowg/matrix.hpp"
#include "orthowg/polynomial.hpp"
#include "orthowg/weingarten.hpp"

namespace orthowg {

using json = nlohmann::ordered_json;

inline std::string rational_string(const mpq_class& q) { return q.get_str(); }

/// "p/q", "p", an integer or a floating number (taken at its exact binary
/// value).
inline mpq_class parse_rational(const json& j) {
  if (j.is_number_integer()) return mpq_class(mpz_class(j.dump()));
  if (j.is_number_float()) return mpq_class(j.get<double>());
  if (!j.is_string()) throw ValidationError("expected a rational, got " + j.dump());
  const std::string s = j.get<std::string>();
  mpq_class q;
  if (s.empty() || q.set_str(s, 10) != 0) throw ValidationError("malformed rational \"" + s + "\"");
  if (q.get_den() == 0) throw ValidationError("zero denominator in \"" + s + "\"");
  q.canonicalize();
  return q;
}

inline json coefficients_json(const Polynomial& p) {
  json a = json::array();
  for (const auto& c : p.coefficients()) {
    if (c.fits_slong_p()) a.push_back(c.get_si());
    else a.push_back(c.get_str());
  }
  return a;
}

inline Polynomial parse_polynomial(const json& j) {
  if (!j.is_array()) throw ValidationError("polynomial must be an array of coefficients");
  std::vector<mpz_class> c;
  for (const auto& x : j) {
    if (x.is_number_integer()) c.emplace_back(x.dump());
    else if (x.is_string()) c.emplace_back(x.get<std::string>());
    else throw ValidationError("polynomial coefficient must be an integer");
  }
  return Polynomial(std::move(c));
}

inline int parse_sign(const json& j) {
  if (j.is_number_integer()) {
    const int e = j.get<int>();
    if (e == 1 || e == -1) return e;
  } else if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "+" || s == "1" || s == "+1") return 1;
    if (s == "-" || s == "-1" || s == "T") return -1;
  }
  throw ValidationError("eps must be +1, -1, \"+\" or \"-\", got " + j.dump());
}

inline TraceExpression parse_expression(const json& j) {
  if (!j.is_object() || !j.contains("traces")) throw ValidationError("expression needs a \"traces\" array");
  std::vector<std::vector<Factor>> traces;
  for (const auto& t : j.at("traces")) {
    std::vector<Factor> tr;
    for (const auto& f : t) {
      if (!f.is_object() || !f.contains("color")) throw ValidationError("factor needs color, eps and slot");
      Factor x;
      x.color = f.at("color").get<int>();
      x.eps = parse_sign(f.value("eps", json(1)));
      x.slot = f.value("slot", 0);
      tr.push_back(x);
    }
    traces.push_back(std::move(tr));
  }
  return TraceExpression(std::move(traces));
}

inline json expression_json(const TraceExpression& e) {
  json traces = json::array();
  for (const auto& t : e.traces()) {
    json tr = json::array();
    for (const auto& f : t) tr.push_back({{"color", f.color}, {"eps", f.eps}, {"slot", f.slot}});
    traces.push_back(tr);
  }
  return json{{"traces", traces}};
}

inline std::map<int, Matrix<mpq_class>> parse_matrices(const json& j) {
  std::map<int, Matrix<mpq_class>> out;
  if (j.is_null()) return out;
  if (!j.is_object()) throw ValidationError("matrices must be an object keyed by label");
  for (const auto& [key, rows] : j.items()) {
    int label = 0;
    try {
      std::size_t used = 0;
      label = std::stoi(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw ValidationError("matrix label \"" + key + "\" is not an integer");
    }
    if (label <= 0) throw ValidationError("matrix labels must be positive");
    if (!rows.is_array() || rows.empty()) throw ValidationError("matrix " + key + " must be a nonempty array of rows");
    const std::size_t n = rows.size();
    Matrix<mpq_class> m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!rows[i].is_array() || rows[i].size() != n) throw ValidationError("matrix " + key + " is not square");
      for (std::size_t jx = 0; jx < n; ++jx) m(i, jx) = parse_rational(rows[i][jx]);
    }
    out.emplace(label, std::move(m));
  }
  return out;
}

inline json matrices_json(const std::map<int, Matrix<mpq_class>>& ms) {
  json out = json::object();
  for (const auto& [label, m] : ms) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
      json row = json::array();
      for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(rational_string(m(i, j)));
      rows.push_back(row);
    }
    out[std::to_string(label)] = rows;
  }
  return out;
}

inline std::map<int, Matrix<double>> to_double(const std::map<int, Matrix<mpq_class>>& ms) {
  std::map<int, Matrix<double>> out;
  for (const auto& [label, m] : ms) {
    Matrix<double> d(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) d(i, j) = m(i, j).get_d();
    out.emplace(label, std::move(d));
  }
  return out;
}

inline json weingarten_table_json(const WeingartenTable& t) {
  json entries = json::object();
  for (const auto& [lam, f] : t.entries()) {
    entries[lam.to_string()] = {{"num", coefficients_json(f.num())}, {"den", coefficients_json(f.den())}};
  }
  return json{{"n", t.n()}, {"entries", entries}};
}

/// Entries of a table file as Wg rational functions keyed by diagram.
inline std::map<YoungDiagram, PolyFrac> parse_weingarten_entries(const json& j) {
  std::map<YoungDiagram, PolyFrac> out;
  for (const auto& [key, e] : j.at("entries").items()) {
    out.emplace(YoungDiagram::parse(key), PolyFrac(parse_polynomial(e.at("num")), parse_polynomial(e.at("den"))));
  }
  return out;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

}  // namespace orthowg

#endif  // ORTHOWG_IO_HPP
