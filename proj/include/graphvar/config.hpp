#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "graphvar/analysis.hpp"
#include "graphvar/functionals.hpp"
#include "graphvar/graph_io.hpp"
#include "graphvar/rational.hpp"
#include "graphvar/solvers.hpp"

namespace graphvar {

enum class ProblemKind { System, Equation, FiniteSystem, FiniteEquation };

const char* problem_kind_name(ProblemKind k);
bool is_system_kind(ProblemKind k);
bool is_finite_kind(ProblemKind k);

// Line-oriented `key = value` configuration with '#' comments. Values stay
// strings so exact fractions survive for rational mode.
class RunConfig {
 public:
  static RunConfig load(const std::string& path);
  static RunConfig parse(std::istream& in, const std::string& what = "<stream>");

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;

  // Accepts decimals and exact fractions like 1/5.
  double get_number(const std::string& key) const;
  double get_number(const std::string& key, double fallback) const;

  long long get_integer(const std::string& key, long long fallback) const;

  Rational get_rational(const std::string& key) const;

  ProblemKind problem_kind() const;
  ConstantSource embedding_source() const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
  std::map<std::string, int> lines_;
};

// Builds the problem parameters from config scalars plus the coefficient
// functions stored in the graph file (h1, h2, c resp. h, c; potentials a, b
// for the finite whole-graph kinds).
SystemParams make_system_params(const RunConfig& cfg, const LoadedGraph& lg);
EquationParams make_equation_params(const RunConfig& cfg, const LoadedGraph& lg);

SolveConfig make_solve_config(const RunConfig& cfg);

// Resolves the embedding constants named by `embedding = explicit |
// brute_force | supplied`. Brute force certifies the constant at every
// Lebesgue exponent the hypothesis chain uses for that component.
std::pair<EmbeddingConstant, EmbeddingConstant> resolve_system_embedding(
    const RunConfig& cfg, const SystemParams& P, const WeightedGraph& g,
    const DirichletDomain& d);
EmbeddingConstant resolve_equation_embedding(const RunConfig& cfg,
                                             const EquationParams& P,
                                             const WeightedGraph& g,
                                             const DirichletDomain& d);

// Exact inputs for the rational hypothesis checker; every field must appear
// in the config as an exact fraction or integer.
RationalSystemInputs rational_inputs(const RunConfig& cfg);

}  // namespace graphvar
