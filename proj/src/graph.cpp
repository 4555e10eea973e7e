#include "graphvar/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

namespace graphvar {

WeightedGraph::WeightedGraph(std::vector<VertexSpec> vertices, const std::vector<EdgeSpec>& edges) {
    if (vertices.empty()) throw InvariantError("graph has no vertices");

    std::sort(vertices.begin(), vertices.end(),
              [](const VertexSpec& a, const VertexSpec& b) { return a.id < b.id; });

    const int n = static_cast<int>(vertices.size());
    ids_.reserve(n);
    mu_.reserve(n);
    for (const auto& spec : vertices) {
        if (spec.id.empty()) throw InvariantError("empty vertex id");
        if (!index_.emplace(spec.id, static_cast<int>(ids_.size())).second)
            throw InvariantError("duplicate vertex '" + spec.id + "'");
        if (!(spec.mu > 0.0) || !std::isfinite(spec.mu))
            throw InvariantError("nonpositive measure at vertex '" + spec.id + "'");
        ids_.push_back(spec.id);
        mu_.push_back(spec.mu);
    }
    mu_min_ = *std::min_element(mu_.begin(), mu_.end());

    std::set<std::pair<int, int>> seen;
    edges_.reserve(edges.size());
    for (const auto& e : edges) {
        const int a = index_of(e.a);
        const int b = index_of(e.b);
        if (a == b) throw InvariantError("self-loop at vertex '" + e.a + "'");
        if (!(e.w > 0.0) || !std::isfinite(e.w))
            throw InvariantError("nonpositive weight on edge " + e.a + " -- " + e.b);
        auto key = std::minmax(a, b);
        if (!seen.insert(key).second)
            throw InvariantError("duplicate edge " + e.a + " -- " + e.b);
        edges_.push_back({key.first, key.second, e.w});
    }
    std::sort(edges_.begin(), edges_.end(), [](const Edge& x, const Edge& y) {
        return std::tie(x.a, x.b) < std::tie(y.a, y.b);
    });

    offsets_.assign(n + 1, 0);
    for (const auto& e : edges_) {
        ++offsets_[e.a + 1];
        ++offsets_[e.b + 1];
    }
    for (int v = 0; v < n; ++v) offsets_[v + 1] += offsets_[v];
    adj_.resize(edges_.size() * 2);
    std::vector<int> cursor(offsets_.begin(), offsets_.end() - 1);
    for (const auto& e : edges_) {
        adj_[cursor[e.a]++] = {e.b, e.w};
        adj_[cursor[e.b]++] = {e.a, e.w};
    }
    // Edge list is sorted, so each CSR row already comes out sorted by index.
}

int WeightedGraph::index_of(std::string_view id) const {
    const int v = find(id);
    if (v < 0) throw InvariantError("unknown vertex '" + std::string(id) + "'");
    return v;
}

int WeightedGraph::find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    return it == index_.end() ? -1 : it->second;
}

double WeightedGraph::degree(int v) const {
    double sum = 0.0;
    for (const auto& nb : neighbors(v)) sum += nb.w;
    return sum;
}

DirichletDomain::DirichletDomain(const WeightedGraph& g, std::vector<VertexRole> roles)
    : roles_(std::move(roles)) {
    const int n = g.vertex_count();
    if (static_cast<int>(roles_.size()) != n)
        throw InvariantError("role list does not match vertex count");

    for (int v = 0; v < n; ++v) {
        switch (roles_[v]) {
            case VertexRole::Interior: interior_.push_back(v); break;
            case VertexRole::Boundary: boundary_.push_back(v); break;
            case VertexRole::Outside: break;
        }
        if (roles_[v] != VertexRole::Outside) active_.push_back(v);
    }
    if (interior_.empty()) throw InvariantError("Omega must be nonempty");

    for (int v : active_) {
        if (g.neighbor_count(v) == 0)
            throw InvariantError("isolated vertex '" + g.id(v) + "' in Omega u dOmega");
    }
    for (int v : boundary_) {
        bool touches_interior = false;
        for (const auto& nb : g.neighbors(v))
            if (roles_[nb.to] == VertexRole::Interior) {
                touches_interior = true;
                break;
            }
        if (!touches_interior)
            throw InvariantError("boundary vertex '" + g.id(v) +
                                 "' has no interior neighbor");
    }
    for (int v = 0; v < n; ++v) {
        if (roles_[v] != VertexRole::Outside) continue;
        for (const auto& nb : g.neighbors(v))
            if (roles_[nb.to] == VertexRole::Interior)
                throw InvariantError("vertex '" + g.id(v) +
                                     "' is adjacent to Omega but tagged outside");
    }

    for (int v : interior_) omega_measure_ += g.mu(v);

    boundary_adjacent_ = true;
    for (int v : interior_) {
        bool has_boundary = false;
        for (const auto& nb : g.neighbors(v))
            if (roles_[nb.to] == VertexRole::Boundary) {
                has_boundary = true;
                break;
            }
        if (!has_boundary) {
            boundary_adjacent_ = false;
            break;
        }
    }

    for (int v : active_) {
        for (const auto& nb : g.neighbors(v))
            if (roles_[nb.to] == VertexRole::Outside) {
                closed_ = false;
                break;
            }
        if (!closed_) break;
    }
}

void DirichletDomain::require_closure_for_order(const WeightedGraph& g, int m) const {
    if (m < 1) throw InvariantError("operator order must be >= 1");
    if (closed_) return;
    const int radius = (m + 1) / 2;
    // Load validation already guarantees the 1-step neighborhood of Omega is
    // active, so only higher orders can escape.
    if (radius <= 1) return;
    std::vector<int> dist(g.vertex_count(), -1);
    std::deque<int> queue;
    for (int v : interior_) {
        dist[v] = 0;
        queue.push_back(v);
    }
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        if (dist[v] == radius) continue;
        for (const auto& nb : g.neighbors(v)) {
            if (dist[nb.to] >= 0) continue;
            dist[nb.to] = dist[v] + 1;
            if (roles_[nb.to] == VertexRole::Outside)
                throw DomainError("domain not closed for order " + std::to_string(m) +
                                  ": vertex '" + g.id(nb.to) + "' is " +
                                  std::to_string(dist[nb.to]) + " steps from Omega");
            queue.push_back(nb.to);
        }
    }
}

bool check_boundary_adjacency(const WeightedGraph& g, const DirichletDomain& d) {
    for (int v : d.interior()) {
        bool has_boundary = false;
        for (const auto& nb : g.neighbors(v))
            if (d.role(nb.to) == VertexRole::Boundary) {
                has_boundary = true;
                break;
            }
        if (!has_boundary) return false;
    }
    return true;
}

void enforce_dirichlet(GraphFunction& f, const DirichletDomain& d) {
    for (int v = 0; v < f.size(); ++v)
        if (!d.is_interior(v)) f[v] = 0.0;
    f.set_dirichlet(true);
}

void require_dirichlet(const GraphFunction& f, const DirichletDomain& d) {
    if (!f.dirichlet()) throw InvariantError("non-Dirichlet input rejected");
    for (int v = 0; v < f.size(); ++v)
        if (!d.is_interior(v) && f[v] != 0.0)
            throw InvariantError("dirichlet flag set but function is nonzero off Omega");
}

}  // namespace graphvar
