#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "graphvar/graph.hpp"

namespace graphvar {

// Result of parsing a graph file: the validated graph and domain plus every
// coefficient function named in the file (sparse entries as written).
struct LoadedGraph {
    WeightedGraph graph;
    DirichletDomain domain;
    std::map<std::string, std::map<std::string, double>> func_entries;

    // Coefficient function by name: 1.0 wherever the file gave no value.
    GraphFunction coefficient(const std::string& name) const;
    bool has_coefficient(const std::string& name) const {
        return func_entries.count(name) != 0;
    }
};

// Graph file format, line oriented, '#' starts a comment:
//   vertex <id> <mu> <I|B|O>
//   edge <id_a> <id_b> <w>
//   func <name> <id> <value>
LoadedGraph load_graph(const std::string& path);
LoadedGraph load_graph_text(const std::string& text, const std::string& what = "<string>");

void save_graph(std::ostream& out, const LoadedGraph& lg);
void save_graph(const std::string& path, const LoadedGraph& lg);

// Exact decimal parsing/printing used by every file format in the project;
// round-trips binary64 values.
double parse_number(const std::string& token, int line_no);
std::string format_number(double x);

}  // namespace graphvar
