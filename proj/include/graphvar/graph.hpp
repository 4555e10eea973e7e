#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace graphvar {

// Base class for everything this library throws.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Violated construction-time invariant (bad weight, empty interior, ...).
struct InvariantError : Error {
    using Error::Error;
};

// Malformed input file; line is 1-based.
struct ParseError : Error {
    int line;
    ParseError(const std::string& msg, int line_no)
        : Error("line " + std::to_string(line_no) + ": " + msg), line(line_no) {}
};

// Operation asked to read function values outside Omega u dOmega.
struct DomainError : Error {
    using Error::Error;
};

enum class VertexRole : unsigned char { Interior, Boundary, Outside };

struct VertexSpec {
    std::string id;
    double mu;
};

struct EdgeSpec {
    std::string a, b;
    double w;
};

// Finite weighted graph with positive vertex measure mu and symmetric positive
// edge weights. Vertices are indexed 0..n-1 in lexicographic id order so every
// iteration in the library is deterministic. Immutable after construction.
class WeightedGraph {
public:
    struct Neighbor {
        int to;
        double w;
    };
    struct Edge {
        int a, b;  // a < b
        double w;
    };

    WeightedGraph(std::vector<VertexSpec> vertices, const std::vector<EdgeSpec>& edges);

    int vertex_count() const { return static_cast<int>(ids_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    const std::string& id(int v) const { return ids_[v]; }
    const std::vector<std::string>& ids() const { return ids_; }

    // Index for a known id; throws InvariantError for unknown ids.
    int index_of(std::string_view id) const;
    // Index or -1.
    int find(std::string_view id) const;

    double mu(int v) const { return mu_[v]; }
    const std::vector<double>& mu() const { return mu_; }
    double mu_min() const { return mu_min_; }

    std::span<const Neighbor> neighbors(int v) const {
        return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
    }
    int neighbor_count(int v) const { return offsets_[v + 1] - offsets_[v]; }

    // deg(x) = sum of incident edge weights.
    double degree(int v) const;

    const std::vector<Edge>& edges() const { return edges_; }

private:
    std::vector<std::string> ids_;
    std::unordered_map<std::string, int> index_;
    std::vector<double> mu_;
    std::vector<int> offsets_;   // size n+1
    std::vector<Neighbor> adj_;  // CSR payload, neighbor lists sorted by index
    std::vector<Edge> edges_;    // canonical (a < b), sorted
    double mu_min_ = 0.0;
};

// Partition of the graph's vertices into interior (Omega), boundary (dOmega)
// and outside vertices, validated against the paper-style boundary definition:
// every boundary vertex touches the interior and no outside vertex does.
class DirichletDomain {
public:
    DirichletDomain(const WeightedGraph& g, std::vector<VertexRole> roles);

    VertexRole role(int v) const { return roles_[v]; }
    bool is_interior(int v) const { return roles_[v] == VertexRole::Interior; }
    bool is_active(int v) const { return roles_[v] != VertexRole::Outside; }

    const std::vector<int>& interior() const { return interior_; }
    const std::vector<int>& boundary() const { return boundary_; }
    // interior + boundary, sorted; the set Omega u dOmega all norms sum over.
    const std::vector<int>& active() const { return active_; }

    int interior_count() const { return static_cast<int>(interior_.size()); }
    int active_count() const { return static_cast<int>(active_.size()); }

    // |Omega| = sum of mu over interior vertices.
    double omega_measure() const { return omega_measure_; }

    // True iff every interior vertex has at least one boundary neighbor.
    bool boundary_adjacent() const { return boundary_adjacent_; }

    // True iff no active vertex has an outside neighbor; then Omega u dOmega
    // is a self-contained subgraph and iterated operators never escape it.
    bool closed() const { return closed_; }

    // Check the closure requirement for an order-m operator: every vertex
    // within ceil(m/2) steps of Omega must be active. Throws DomainError.
    void require_closure_for_order(const WeightedGraph& g, int m) const;

private:
    std::vector<VertexRole> roles_;
    std::vector<int> interior_, boundary_, active_;
    double omega_measure_ = 0.0;
    bool boundary_adjacent_ = false;
    bool closed_ = true;
};

bool check_boundary_adjacency(const WeightedGraph& g, const DirichletDomain& d);

// Dense real-valued function over all graph vertices. The dirichlet flag
// asserts the function vanishes on dOmega (and outside Omega), i.e. it came
// from C_c(Omega); several operators require it.
class GraphFunction {
public:
    GraphFunction() = default;
    explicit GraphFunction(int n, double fill = 0.0) : v_(n, fill) {}

    int size() const { return static_cast<int>(v_.size()); }
    double operator[](int i) const { return v_[i]; }
    double& operator[](int i) { return v_[i]; }
    const std::vector<double>& values() const { return v_; }
    std::vector<double>& values() { return v_; }

    bool dirichlet() const { return dirichlet_; }
    GraphFunction& set_dirichlet(bool flag) {
        dirichlet_ = flag;
        return *this;
    }

private:
    std::vector<double> v_;
    bool dirichlet_ = false;
};

// Zero all values outside Omega and set the dirichlet flag.
void enforce_dirichlet(GraphFunction& f, const DirichletDomain& d);

// Throw unless f is flagged dirichlet and exactly zero off Omega.
void require_dirichlet(const GraphFunction& f, const DirichletDomain& d);

}  // namespace graphvar
