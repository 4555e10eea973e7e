#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "graphvar/graph.hpp"
#include "graphvar/solvers.hpp"

namespace graphvar {

// Parsed solution file, not yet bound to a graph.
struct SolutionData {
  std::vector<std::string> ids;
  std::vector<double> u;
  std::vector<double> v;  // empty for single-component solutions
  bool has_v = false;
  double energy = 0.0;
  double grad_norm = 0.0;
  std::string classification;
  unsigned long long seed = 0;
};

// Solution file format, line oriented, '#' starts a comment:
//   value <vertex-id> <u> [<v>]
//   energy = <decimal>
//   grad_norm = <decimal>
//   classification = <token>
//   seed = <integer>
void write_solution(std::ostream& out, const SolveReport& rep, const WeightedGraph& g,
                    const DirichletDomain& d);
void write_solution(const std::string& path, const SolveReport& rep,
                    const WeightedGraph& g, const DirichletDomain& d);

SolutionData read_solution(std::istream& in, const std::string& what = "<stream>");
SolutionData read_solution(const std::string& path);

// Solution bound to graph indices; u (and v) vanish off the interior.
struct BoundSolution {
  GraphFunction u;
  GraphFunction v;
  bool has_v = false;
  double energy = 0.0;
  double grad_norm = 0.0;
  std::string classification;
  unsigned long long seed = 0;
};

// Maps ids to vertices and checks the Dirichlet constraint. Vertices the file
// does not mention get the value zero.
BoundSolution bind_solution(const SolutionData& data, const WeightedGraph& g,
                            const DirichletDomain& d);

}  // namespace graphvar
