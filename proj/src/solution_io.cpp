#include "graphvar/solution_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "graphvar/graph_io.hpp"

namespace graphvar {

void write_solution(std::ostream& out, const SolveReport& rep, const WeightedGraph& g,
                    const DirichletDomain& d) {
  for (int x : d.active()) {
    out << "value " << g.id(x) << ' ' << format_number(rep.u[x]);
    if (rep.has_v) out << ' ' << format_number(rep.v[x]);
    out << '\n';
  }
  out << "energy = " << format_number(rep.energy) << '\n';
  out << "grad_norm = " << format_number(rep.grad_norm) << '\n';
  out << "classification = " << classification_name(rep.classification) << '\n';
  out << "seed = " << rep.seed << '\n';
}

void write_solution(const std::string& path, const SolveReport& rep,
                    const WeightedGraph& g, const DirichletDomain& d) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_solution(out, rep, g, d);
  if (!out) throw Error("failed writing '" + path + "'");
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream in(line.substr(0, line.find('#')));
  std::string t;
  while (in >> t) toks.push_back(t);
  return toks;
}

}  // namespace

SolutionData read_solution(std::istream& in, const std::string& what) {
  SolutionData data;
  bool saw_energy = false, saw_grad = false, saw_class = false, saw_seed = false;
  bool arity_known = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto toks = tokenize(line);
    if (toks.empty()) continue;
    if (toks[0] == "value") {
      if (toks.size() != 3 && toks.size() != 4)
        throw ParseError("value line needs 'value <id> <u> [<v>]'", line_no);
      const bool two = toks.size() == 4;
      if (arity_known && two != data.has_v)
        throw ParseError("solution mixes single- and two-component values", line_no);
      arity_known = true;
      data.has_v = two;
      data.ids.push_back(toks[1]);
      data.u.push_back(parse_number(toks[2], line_no));
      if (two) data.v.push_back(parse_number(toks[3], line_no));
      continue;
    }
    if (toks.size() == 3 && toks[1] == "=") {
      if (toks[0] == "energy") {
        data.energy = parse_number(toks[2], line_no);
        saw_energy = true;
      } else if (toks[0] == "grad_norm") {
        data.grad_norm = parse_number(toks[2], line_no);
        saw_grad = true;
      } else if (toks[0] == "classification") {
        data.classification = toks[2];
        saw_class = true;
      } else if (toks[0] == "seed") {
        try {
          size_t pos = 0;
          data.seed = std::stoull(toks[2], &pos);
          if (pos != toks[2].size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
          throw ParseError("seed must be a nonnegative integer", line_no);
        }
        saw_seed = true;
      } else {
        throw ParseError("unknown key '" + toks[0] + "'", line_no);
      }
      continue;
    }
    throw ParseError("unrecognized solution line", line_no);
  }
  if (data.ids.empty()) throw Error(what + ": solution file has no value lines");
  if (!saw_energy || !saw_grad || !saw_class || !saw_seed)
    throw Error(what + ": solution file missing one of energy/grad_norm/classification/seed");
  return data;
}

SolutionData read_solution(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_solution(in, path);
}

BoundSolution bind_solution(const SolutionData& data, const WeightedGraph& g,
                            const DirichletDomain& d) {
  BoundSolution b;
  b.has_v = data.has_v;
  b.energy = data.energy;
  b.grad_norm = data.grad_norm;
  b.classification = data.classification;
  b.seed = data.seed;
  b.u = GraphFunction(g.vertex_count());
  b.v = GraphFunction(g.vertex_count());
  std::set<int> seen;
  for (size_t i = 0; i < data.ids.size(); ++i) {
    const int x = g.find(data.ids[i]);
    if (x < 0) throw Error("solution references unknown vertex '" + data.ids[i] + "'");
    if (!seen.insert(x).second)
      throw Error("solution lists vertex '" + data.ids[i] + "' twice");
    if (!d.is_interior(x)) {
      const double uv = data.u[i];
      const double vv = data.has_v ? data.v[i] : 0.0;
      if (uv != 0.0 || vv != 0.0)
        throw Error("solution must vanish off the interior (vertex '" + data.ids[i] +
                    "')");
      continue;
    }
    b.u[x] = data.u[i];
    if (data.has_v) b.v[x] = data.v[i];
  }
  b.u.set_dirichlet(true);
  b.v.set_dirichlet(true);
  return b;
}

}  // namespace graphvar
