#include "graphvar/graph_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace graphvar {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

}  // namespace

double parse_number(const std::string& token, int line_no) {
    double value = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value))
        throw ParseError("bad number '" + token + "'", line_no);
    return value;
}

std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

LoadedGraph load_graph_text(const std::string& text, const std::string& what) {
    std::vector<VertexSpec> vertices;
    std::vector<EdgeSpec> edges;
    std::map<std::string, VertexRole> roles;
    std::map<std::string, std::map<std::string, double>> funcs;

    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        auto tok = tokenize(line);
        if (tok.empty()) continue;
        const std::string& kind = tok[0];
        if (kind == "vertex") {
            if (tok.size() != 4)
                throw ParseError("vertex record needs <id> <mu> <I|B|O>", line_no);
            VertexRole role;
            if (tok[3] == "I")
                role = VertexRole::Interior;
            else if (tok[3] == "B")
                role = VertexRole::Boundary;
            else if (tok[3] == "O")
                role = VertexRole::Outside;
            else
                throw ParseError("vertex tag must be I, B or O, got '" + tok[3] + "'",
                                 line_no);
            if (roles.count(tok[1]))
                throw ParseError("duplicate vertex '" + tok[1] + "'", line_no);
            const double mu = parse_number(tok[2], line_no);
            if (!(mu > 0.0)) throw ParseError("nonpositive measure", line_no);
            vertices.push_back({tok[1], mu});
            roles[tok[1]] = role;
        } else if (kind == "edge") {
            if (tok.size() != 4)
                throw ParseError("edge record needs <id_a> <id_b> <w>", line_no);
            const double w = parse_number(tok[3], line_no);
            if (!(w > 0.0)) throw ParseError("nonpositive weight", line_no);
            if (!roles.count(tok[1]))
                throw ParseError("unknown vertex '" + tok[1] + "'", line_no);
            if (!roles.count(tok[2]))
                throw ParseError("unknown vertex '" + tok[2] + "'", line_no);
            edges.push_back({tok[1], tok[2], w});
        } else if (kind == "func") {
            if (tok.size() != 4)
                throw ParseError("func record needs <name> <id> <value>", line_no);
            if (!roles.count(tok[2]))
                throw ParseError("unknown vertex '" + tok[2] + "' in func " + tok[1],
                                 line_no);
            auto& entries = funcs[tok[1]];
            if (!entries.emplace(tok[2], parse_number(tok[3], line_no)).second)
                throw ParseError("duplicate func value for " + tok[1] + " at '" +
                                     tok[2] + "'",
                                 line_no);
        } else {
            throw ParseError("unknown record '" + kind + "'", line_no);
        }
    }
    if (vertices.empty()) throw ParseError("no vertices in " + what, line_no);

    WeightedGraph graph(std::move(vertices), edges);
    std::vector<VertexRole> role_by_index(graph.vertex_count());
    for (int v = 0; v < graph.vertex_count(); ++v) role_by_index[v] = roles.at(graph.id(v));
    DirichletDomain domain(graph, std::move(role_by_index));
    return LoadedGraph{std::move(graph), std::move(domain), std::move(funcs)};
}

LoadedGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open graph file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return load_graph_text(buf.str(), path);
}

GraphFunction LoadedGraph::coefficient(const std::string& name) const {
    GraphFunction f(graph.vertex_count(), 1.0);
    auto it = func_entries.find(name);
    if (it != func_entries.end())
        for (const auto& [id, value] : it->second) f[graph.index_of(id)] = value;
    return f;
}

void save_graph(std::ostream& out, const LoadedGraph& lg) {
    for (int v = 0; v < lg.graph.vertex_count(); ++v) {
        const char* tag = "O";
        if (lg.domain.role(v) == VertexRole::Interior) tag = "I";
        if (lg.domain.role(v) == VertexRole::Boundary) tag = "B";
        out << "vertex " << lg.graph.id(v) << ' ' << format_number(lg.graph.mu(v)) << ' '
            << tag << '\n';
    }
    for (const auto& e : lg.graph.edges())
        out << "edge " << lg.graph.id(e.a) << ' ' << lg.graph.id(e.b) << ' '
            << format_number(e.w) << '\n';
    for (const auto& [name, entries] : lg.func_entries)
        for (const auto& [id, value] : entries)
            out << "func " << name << ' ' << id << ' ' << format_number(value) << '\n';
}

void save_graph(const std::string& path, const LoadedGraph& lg) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write graph file '" + path + "'");
    save_graph(out, lg);
}

}  // namespace graphvar
