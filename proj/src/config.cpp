#include "graphvar/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace graphvar {

const char* problem_kind_name(ProblemKind k) {
  switch (k) {
    case ProblemKind::System: return "system";
    case ProblemKind::Equation: return "equation";
    case ProblemKind::FiniteSystem: return "finite_system";
    default: return "finite_equation";
  }
}

bool is_system_kind(ProblemKind k) {
  return k == ProblemKind::System || k == ProblemKind::FiniteSystem;
}

bool is_finite_kind(ProblemKind k) {
  return k == ProblemKind::FiniteSystem || k == ProblemKind::FiniteEquation;
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

RunConfig RunConfig::parse(std::istream& in, const std::string& what) {
  RunConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line.substr(0, line.find('#')));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw ParseError("expected 'key = value' in " + what, line_no);
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ParseError("expected 'key = value' in " + what, line_no);
    if (!cfg.entries_.emplace(key, value).second)
      throw ParseError("duplicate key '" + key + "'", line_no);
    cfg.lines_[key] = line_no;
  }
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return parse(in, path);
}

std::string RunConfig::get_string(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw Error("config is missing required key '" + key + "'");
  return it->second;
}

std::string RunConfig::get_string(const std::string& key,
                                  const std::string& fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

double RunConfig::get_number(const std::string& key) const {
  const std::string v = get_string(key);
  if (v.find('/') != std::string::npos) return Rational::parse(v).to_double();
  return parse_number(v, lines_.at(key));
}

double RunConfig::get_number(const std::string& key, double fallback) const {
  return has(key) ? get_number(key) : fallback;
}

long long RunConfig::get_integer(const std::string& key, long long fallback) const {
  if (!has(key)) return fallback;
  const std::string v = get_string(key);
  try {
    size_t pos = 0;
    const long long out = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return out;
  } catch (const std::exception&) {
    throw Error("config key '" + key + "' must be an integer, got '" + v + "'");
  }
}

Rational RunConfig::get_rational(const std::string& key) const {
  if (!has(key))
    throw Error("rational mode needs '" + key + "' as an exact fraction in the config");
  return Rational::parse(get_string(key));
}

ProblemKind RunConfig::problem_kind() const {
  const std::string v = get_string("problem");
  if (v == "system") return ProblemKind::System;
  if (v == "equation") return ProblemKind::Equation;
  if (v == "finite_system") return ProblemKind::FiniteSystem;
  if (v == "finite_equation") return ProblemKind::FiniteEquation;
  throw Error("unknown problem kind '" + v +
              "' (expected system, equation, finite_system or finite_equation)");
}

ConstantSource RunConfig::embedding_source() const {
  const std::string v = get_string("embedding", "explicit");
  if (v == "explicit") return ConstantSource::Explicit;
  if (v == "brute_force") return ConstantSource::BruteForce;
  if (v == "supplied") return ConstantSource::UserSupplied;
  throw Error("unknown embedding source '" + v +
              "' (expected explicit, brute_force or supplied)");
}

SystemParams make_system_params(const RunConfig& cfg, const LoadedGraph& lg) {
  const ProblemKind kind = cfg.problem_kind();
  if (!is_system_kind(kind))
    throw Error("config problem kind '" + std::string(problem_kind_name(kind)) +
                "' is not a system");
  SystemParams P;
  P.m1 = static_cast<int>(cfg.get_integer("m1", 1));
  P.m2 = static_cast<int>(cfg.get_integer("m2", 1));
  P.p = cfg.get_number("p");
  P.q = cfg.get_number("q");
  P.gamma1 = cfg.get_number("gamma1");
  P.gamma2 = cfg.get_number("gamma2");
  P.alpha = cfg.get_number("alpha");
  P.beta = cfg.get_number("beta");
  P.lambda1 = cfg.get_number("lambda1");
  P.lambda2 = cfg.get_number("lambda2");
  P.h1 = lg.coefficient("h1");
  P.h2 = lg.coefficient("h2");
  P.c = lg.coefficient("c");
  if (is_finite_kind(kind)) {
    P.pot_u = lg.coefficient("a");
    P.pot_v = lg.coefficient("b");
  }
  return P;
}

EquationParams make_equation_params(const RunConfig& cfg, const LoadedGraph& lg) {
  const ProblemKind kind = cfg.problem_kind();
  if (is_system_kind(kind))
    throw Error("config problem kind '" + std::string(problem_kind_name(kind)) +
                "' is not a single equation");
  EquationParams P;
  P.m = static_cast<int>(cfg.get_integer("m", 1));
  P.p = cfg.get_number("p");
  P.gamma = cfg.get_number("gamma");
  P.alpha = cfg.get_number("alpha");
  P.lambda = cfg.get_number("lambda");
  P.h = lg.coefficient("h");
  P.c = lg.coefficient("c");
  if (is_finite_kind(kind)) P.pot = lg.coefficient("a");
  return P;
}

SolveConfig make_solve_config(const RunConfig& cfg) {
  SolveConfig sc;
  sc.grad_tol = cfg.get_number("grad_tol", sc.grad_tol);
  sc.max_iters = cfg.get_integer("max_iters", sc.max_iters);
  sc.path_points = static_cast<int>(cfg.get_integer("path_points", sc.path_points));
  sc.starts = static_cast<int>(cfg.get_integer("starts", sc.starts));
  sc.seed = static_cast<unsigned long long>(cfg.get_integer("seed", 1));
  sc.step_init = cfg.get_number("step_init", sc.step_init);
  sc.jobs = static_cast<int>(cfg.get_integer("jobs", sc.jobs));
  sc.validate();
  return sc;
}

namespace {

EmbeddingConstant supplied_constant(const RunConfig& cfg, const std::string& key, int m,
                                    double s) {
  EmbeddingConstant c;
  c.value = cfg.get_number(key);
  if (!(c.value > 0.0) || !std::isfinite(c.value))
    throw Error("supplied constant '" + key + "' must be positive and finite");
  c.source = ConstantSource::UserSupplied;
  c.m = m;
  c.s = s;
  c.r = std::numeric_limits<double>::quiet_NaN();
  return c;
}

EmbeddingConstant brute_constant(const RunConfig& cfg, const WeightedGraph& g,
                                 const DirichletDomain& d, int m, double s,
                                 std::initializer_list<double> rs) {
  BruteForceOptions opts;
  opts.starts = static_cast<int>(cfg.get_integer("embedding_starts", opts.starts));
  opts.seed = static_cast<unsigned long long>(
      cfg.get_integer("embedding_seed", static_cast<long long>(opts.seed)));
  EmbeddingConstant best;
  bool first = true;
  for (double r : rs) {
    const EmbeddingConstant c = brute_force_embedding_constant(g, d, m, s, r, opts);
    if (first || c.value > best.value) best = c;
    first = false;
  }
  best.r = std::numeric_limits<double>::quiet_NaN();
  return best;
}

}  // namespace

std::pair<EmbeddingConstant, EmbeddingConstant> resolve_system_embedding(
    const RunConfig& cfg, const SystemParams& P, const WeightedGraph& g,
    const DirichletDomain& d) {
  const ConstantSource src = cfg.embedding_source();
  const bool finite = is_finite_kind(cfg.problem_kind());
  switch (src) {
    case ConstantSource::UserSupplied:
      return {supplied_constant(cfg, "Cp", P.m1, P.p),
              supplied_constant(cfg, "Cq", P.m2, P.q)};
    case ConstantSource::Explicit:
      if (finite)
        return {finite_graph_constants(g, *P.pot_u, P.p),
                finite_graph_constants(g, *P.pot_v, P.q)};
      if (P.m1 != 1 || P.m2 != 1)
        throw Error(
            "closed-form embedding constant covers only first-order problems; "
            "set embedding = brute_force or supply constants");
      return {explicit_embedding_constant(g, d, P.p),
              explicit_embedding_constant(g, d, P.q)};
    default: {
      if (finite)
        throw Error(
            "brute-force search needs the Dirichlet norm; whole-graph problems "
            "have a closed-form constant (embedding = explicit)");
      const double apb = P.alpha + P.beta;
      return {brute_constant(cfg, g, d, P.m1, P.p, {P.gamma1, P.p, apb}),
              brute_constant(cfg, g, d, P.m2, P.q, {P.gamma2, P.q, apb})};
    }
  }
}

EmbeddingConstant resolve_equation_embedding(const RunConfig& cfg,
                                             const EquationParams& P,
                                             const WeightedGraph& g,
                                             const DirichletDomain& d) {
  const ConstantSource src = cfg.embedding_source();
  const bool finite = is_finite_kind(cfg.problem_kind());
  switch (src) {
    case ConstantSource::UserSupplied:
      return supplied_constant(cfg, "C", P.m, P.p);
    case ConstantSource::Explicit:
      if (finite) return finite_graph_constants(g, *P.pot, P.p);
      if (P.m != 1)
        throw Error(
            "closed-form embedding constant covers only first-order problems; "
            "set embedding = brute_force or supply one");
      return explicit_embedding_constant(g, d, P.p);
    default:
      if (finite)
        throw Error(
            "brute-force search needs the Dirichlet norm; whole-graph problems "
            "have a closed-form constant (embedding = explicit)");
      return brute_constant(cfg, g, d, P.m, P.p, {P.gamma, P.p, P.alpha});
  }
}

RationalSystemInputs rational_inputs(const RunConfig& cfg) {
  RationalSystemInputs in;
  in.p = cfg.get_rational("p");
  in.q = cfg.get_rational("q");
  in.gamma1 = cfg.get_rational("gamma1");
  in.gamma2 = cfg.get_rational("gamma2");
  in.alpha = cfg.get_rational("alpha");
  in.beta = cfg.get_rational("beta");
  in.lambda1 = cfg.get_rational("lambda1");
  in.lambda2 = cfg.get_rational("lambda2");
  in.Cp = cfg.get_rational("Cp");
  in.Cq = cfg.get_rational("Cq");
  in.C0 = cfg.get_rational("C0");
  in.h1_norm_pow = cfg.get_rational("h1_norm_pow");
  in.h2_norm_pow = cfg.get_rational("h2_norm_pow");
  return in;
}

}  // namespace graphvar
