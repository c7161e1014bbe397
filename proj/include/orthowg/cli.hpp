#ifndef ORTHOWG_CLI_HPP
#define ORTHOWG_CLI_HPP

// The `orthowg` command line: wg, expand, moment, cumulant, verify.
// Exit codes: 0 ok, 2 validation, 3 cap, 4 pole, 5 verification failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "orthowg/brute_force.hpp"
#include "orthowg/error.hpp"
#include "orthowg/expansion.hpp"
#include "orthowg/io.hpp"
#include "orthowg/montecarlo.hpp"
#include "orthowg/random.hpp"
#include "orthowg/verify.hpp"
#include "orthowg/weingarten.hpp"

namespace orthowg {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kExitOk = 0, kExitValidation = 2, kExitCap = 3, kExitPole = 4, kExitVerification = 5 };

struct RunConfig {
  int n = 0;
  std::string lambda;
  std::optional<long> eval;
  bool allow_large = false;
  std::string expr_path, exprs_path, matrices_path, out_path;
  long N = 10;
  std::string mode = "exact";
  bool asymptotic = false;
  bool symbolic = false;
  std::size_t samples = 100000;
  std::uint64_t seed = 42;
  unsigned workers = 1;
  std::size_t cap_terms = ExpansionOptions{}.max_terms;
  std::string suite;
  std::size_t battery = 60;
};

namespace detail {

inline json metadata(const RunConfig& c) {
  const EnumerationCaps caps;
  WeingartenOptions w;
  w.allow_large = c.allow_large;
  return {{"version", kVersion},
          {"seed", c.seed},
          {"caps",
           {{"max_terms", c.cap_terms},
            {"max_weingarten_n", w.allow_large ? 12 : w.max_n},
            {"partitions", caps.partitions},
            {"pairings", caps.pairings}}},
          {"rng", kRngName}};
}

inline void emit(const json& j, const RunConfig& c, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  if (c.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out_path, std::ios::binary);
  if (!f) throw ValidationError("cannot write " + c.out_path);
  f << text;
}

inline json frac_json(const PolyFrac& f) {
  return {{"string", f.to_string()}, {"num", coefficients_json(f.num())}, {"den", coefficients_json(f.den())}};
}

struct LoadedExpression {
  TraceExpression expr;
  std::map<int, Matrix<mpq_class>> matrices;
};

inline LoadedExpression load_expression(const std::string& path, const std::string& matrices_path) {
  if (path.empty()) throw ValidationError("--expr is required");
  const json j = read_json_file(path);
  LoadedExpression le{parse_expression(j), parse_matrices(j.value("matrices", json()))};
  if (!matrices_path.empty()) {
    const json m = read_json_file(matrices_path);
    for (auto& [label, mat] : parse_matrices(m.contains("matrices") ? m.at("matrices") : m)) le.matrices[label] = mat;
  }
  return le;
}

inline ExpansionOptions expansion_options(const RunConfig& c) {
  ExpansionOptions o;
  o.max_terms = c.cap_terms;
  o.weingarten.allow_large = c.allow_large;
  return o;
}

inline int cmd_wg(const RunConfig& c, std::ostream& out) {
  WeingartenOptions w;
  w.allow_large = c.allow_large;
  if (c.n <= 0 || c.n % 2 != 0) throw ValidationError("--n must be a positive even integer");
  const WeingartenTable& table = weingarten_table(c.n, w);
  json j = {{"metadata", metadata(c)}, {"n", c.n}};
  auto entry = [&](const YoungDiagram& lam) {
    const PolyFrac& big = table.Wg(lam);
    json e = {{"Wg", big.to_string()},
              {"wg", table.wg(lam).to_string()},
              {"num", coefficients_json(big.num())},
              {"den", coefficients_json(big.den())},
              {"wg_limit", rational_string(table.wg(lam).limit())}};
    if (c.eval) {
      e["N"] = *c.eval;
      e["Wg_value"] = rational_string(big.eval_at(*c.eval));
      e["wg_value"] = rational_string(table.wg(lam).eval_at(*c.eval));
    }
    return e;
  };
  if (!c.lambda.empty()) {
    const YoungDiagram lam = YoungDiagram::parse(c.lambda);
    if (2 * lam.weight() != c.n) throw ValidationError("--lambda must have weight n/2");
    j["lambda"] = lam.to_string();
    const json e = entry(lam);
    for (auto& [k, v] : e.items()) j[k] = v;
  } else {
    json entries = json::object();
    for (const auto& [lam, f] : table.entries()) entries[lam.to_string()] = entry(lam);
    j["entries"] = entries;
  }
  emit(j, c, out);
  return kExitOk;
}

inline int cmd_expand(const RunConfig& c, std::ostream& out) {
  const LoadedExpression le = load_expression(c.expr_path, c.matrices_path);
  const GenusExpansion ex(le.expr, expansion_options(c));
  json terms = json::array();
  for (std::size_t i = 0; i < ex.size(); ++i) {
    const ExpansionTerm t = ex.term(i);
    json lams = json::array();
    for (const auto& l : t.lambdas) lams.push_back(l.to_string());
    json pattern = json::array();
    for (const auto& cyc : t.vertex_pattern) pattern.push_back(cyc);
    terms.push_back({{"index", i},
                     {"alpha", t.alpha.to_string()},
                     {"chi", t.chi},
                     {"n_exponent", t.n_exponent},
                     {"lambdas", lams},
                     {"wg_factor", t.wg_factor.to_string()},
                     {"coefficient", (PolyFrac::N_power(t.n_exponent) * t.wg_factor).to_string()},
                     {"vertex_pattern", pattern},
                     {"traces", pattern_string(pattern_of(le.expr, t.vertex_pattern))}});
  }
  emit({{"metadata", metadata(c)}, {"expression", le.expr.to_string()}, {"term_count", ex.size()}, {"terms", terms}}, c,
       out);
  return kExitOk;
}

inline int cmd_moment(const RunConfig& c, std::ostream& out) {
  const LoadedExpression le = load_expression(c.expr_path, c.matrices_path);
  json j = {{"metadata", metadata(c)}, {"expression", le.expr.to_string()}};
  if (c.asymptotic) {
    const AsymptoticMoment am = asymptotic_moment(le.expr, expansion_options(c));
    json terms = json::array();
    for (const auto& t : am.terms) {
      terms.push_back({{"coefficient", rational_string(t.coefficient)}, {"pattern", pattern_string(t.pattern)}});
    }
    j["limit"] = am.to_string();
    j["terms"] = terms;
    if (!le.matrices.empty()) {
      MatrixTraceOracle<mpq_class> oracle(le.expr, le.matrices);
      j["limit_value"] = rational_string(
          am.evaluate<mpq_class>([&](const std::vector<int>& w) { return oracle.word_trace(w); }));
    }
    emit(j, c, out);
    return kExitOk;
  }
  j["N"] = c.N;
  j["mode"] = c.mode;
  const EvalOptions eval{c.workers, 512};
  if (c.mode == "exact") {
    const auto r = evaluate_moment<mpq_class>(le.expr, le.matrices, c.N, eval, expansion_options(c));
    j["value"] = rational_string(r.value);
    j["term_count"] = r.term_count;
  } else if (c.mode == "float") {
    const auto r = evaluate_moment<double>(le.expr, to_double(le.matrices), c.N, eval, expansion_options(c));
    j["value"] = r.value;
    j["term_count"] = r.term_count;
  } else {
    throw ValidationError("--mode must be exact or float");
  }
  emit(j, c, out);
  return kExitOk;
}

inline int cmd_cumulant(const RunConfig& c, std::ostream& out) {
  const LoadedExpression le = load_expression(c.exprs_path.empty() ? c.expr_path : c.exprs_path, c.matrices_path);
  std::vector<TraceExpression> singles;
  for (std::size_t i = 0; i < le.expr.num_traces(); ++i) singles.push_back(le.expr.select({i}));
  json j = {{"metadata", metadata(c)},
            {"expressions", le.expr.to_string()},
            {"order", singles.size()},
            {"convention", "Tr"}};
  if (c.symbolic) {
    const PolyFrac k = trace_cumulant_symbolic(singles, le.matrices, expansion_options(c));
    j["value"] = frac_json(k);
    if (k.order().value_or(-1) <= 0) j["limit"] = rational_string(k.limit());
    emit(j, c, out);
    return kExitOk;
  }
  j["N"] = c.N;
  j["mode"] = c.mode;
  if (c.mode == "exact") {
    j["value"] = rational_string(trace_cumulant<mpq_class>(singles, le.matrices, c.N, expansion_options(c)));
  } else if (c.mode == "float") {
    j["value"] = trace_cumulant<double>(singles, to_double(le.matrices), c.N, expansion_options(c));
  } else {
    throw ValidationError("--mode must be exact or float");
  }
  emit(j, c, out);
  return kExitOk;
}

inline int cmd_verify(const RunConfig& c, std::ostream& out) {
  SuiteResult r;
  if (c.suite == "noncross") r = verify_noncross();
  else if (c.suite == "oracle") r = verify_oracle(c.battery, c.seed, c.workers);
  else if (c.suite == "weingarten") r = verify_weingarten();
  else if (c.suite == "loops") r = verify_loops();
  else if (c.suite == "mc") {
    const LoadedExpression le = load_expression(c.expr_path, c.matrices_path);
    McOptions mc;
    mc.samples = c.samples;
    mc.seed = c.seed;
    mc.workers = c.workers;
    r = verify_mc(le.expr, le.matrices, c.N, mc, c.workers);
  } else {
    throw ValidationError("unknown suite \"" + c.suite + "\" (noncross, oracle, mc, weingarten, loops)");
  }
  json j = {{"metadata", metadata(c)}};
  for (auto& [k, v] : r.report.items()) j[k] = v;
  j["ok"] = r.ok;
  emit(j, c, out);
  return r.ok ? kExitOk : kExitVerification;
}

inline int report_error(std::ostream& err, const std::string& kind, const std::string& what, int code) {
  err << json{{"error", kind}, {"message", what}}.dump() << "\n";
  return code;
}

}  // namespace detail

/// Parses and runs one command; returns the exit code.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Moments and cumulants of traces with Haar orthogonal matrices", "orthowg"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  auto common = [&](CLI::App* s) {
    s->add_option("--out", c.out_path, "Write the JSON report here instead of stdout");
    s->add_option("--seed", c.seed, "Seed recorded in the metadata (and used by sampling suites)");
  };
  auto expansion_flags = [&](CLI::App* s) {
    s->add_option("--cap-terms", c.cap_terms, "Maximum number of expansion terms");
    s->add_flag("--allow-large", c.allow_large, "Permit Weingarten tables up to n=12");
    s->add_option("--workers", c.workers, "Worker threads")->check(CLI::Range(1u, 256u));
  };

  CLI::App* wg = app.add_subcommand("wg", "Weingarten function table or entry");
  wg->add_option("--n", c.n, "Number of matrix entries (even)")->required();
  wg->add_option("--lambda", c.lambda, "Young diagram, e.g. 3,1");
  wg->add_option("--eval", c.eval, "Evaluate at this N");
  wg->add_flag("--allow-large", c.allow_large, "Permit n up to 12");
  common(wg);

  CLI::App* expand = app.add_subcommand("expand", "List the genus-expansion terms of an expression");
  expand->add_option("--expr", c.expr_path, "Expression JSON")->required();
  expand->add_option("--matrices", c.matrices_path, "Matrix JSON");
  expansion_flags(expand);
  common(expand);

  CLI::App* moment = app.add_subcommand("moment", "E[prod tr(...)] at N or as N grows");
  moment->add_option("--expr", c.expr_path, "Expression JSON")->required();
  moment->add_option("--matrices", c.matrices_path, "Matrix JSON");
  moment->add_option("--N", c.N, "Matrix size")->check(CLI::PositiveNumber);
  moment->add_option("--mode", c.mode, "exact or float")->check(CLI::IsMember({"exact", "float"}));
  moment->add_flag("--asymptotic", c.asymptotic, "Large-N limit functional");
  expansion_flags(moment);
  common(moment);

  CLI::App* cumulant = app.add_subcommand("cumulant", "Joint cumulant of Tr of each trace of the expression");
  cumulant->add_option("--exprs,--expr", c.exprs_path, "Expression JSON, one variable per trace")->required();
  cumulant->add_option("--matrices", c.matrices_path, "Matrix JSON");
  cumulant->add_option("--N", c.N, "Matrix size")->check(CLI::PositiveNumber);
  cumulant->add_option("--mode", c.mode, "exact or float")->check(CLI::IsMember({"exact", "float"}));
  cumulant->add_flag("--symbolic", c.symbolic, "Rational function of N (matrices of any fixed size)");
  expansion_flags(cumulant);
  common(cumulant);

  CLI::App* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("--suite", c.suite, "noncross, oracle, mc, weingarten or loops")->required();
  verify->add_option("--expr", c.expr_path, "Expression JSON (mc)");
  verify->add_option("--matrices", c.matrices_path, "Matrix JSON (mc)");
  verify->add_option("--N", c.N, "Matrix size (mc)")->check(CLI::PositiveNumber);
  verify->add_option("--samples", c.samples, "Monte Carlo samples (mc)");
  verify->add_option("--battery", c.battery, "Number of generated expressions (oracle)");
  verify->add_option("--workers", c.workers, "Worker threads")->check(CLI::Range(1u, 256u));
  common(verify);

  std::vector<std::string> argv_store{"orthowg"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (wg->parsed()) return detail::cmd_wg(c, out);
    if (expand->parsed()) return detail::cmd_expand(c, out);
    if (moment->parsed()) return detail::cmd_moment(c, out);
    if (cumulant->parsed()) return detail::cmd_cumulant(c, out);
    if (verify->parsed()) return detail::cmd_verify(c, out);
  } catch (const PoleError& e) {
    return detail::report_error(err, "pole", e.what(), kExitPole);
  } catch (const CapError& e) {
    return detail::report_error(err, "cap", e.what(), kExitCap);
  } catch (const VerificationError& e) {
    return detail::report_error(err, "verification", e.what(), kExitVerification);
  } catch (const ValidationError& e) {
    return detail::report_error(err, "validation", e.what(), kExitValidation);
  } catch (const nlohmann::json::exception& e) {
    return detail::report_error(err, "validation", e.what(), kExitValidation);
  } catch (const Error& e) {
    return detail::report_error(err, "error", e.what(), kExitValidation);
  }
  return kExitValidation;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, out, err);
}

}  // namespace orthowg

#endif  // ORTHOWG_CLI_HPP
