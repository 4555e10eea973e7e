#include "graphvar/reference.hpp"

#include <cmath>
#include <vector>

namespace graphvar::reference {

namespace {

void require_closed(const DirichletDomain& d, const char* op) {
  if (!d.closed())
    throw DomainError(std::string(op) + ": reference kernels require a closed domain");
}

// Accumulates w * (u(b) - u(a)) into a, and the negated term into b, one edge
// at a time. Dividing by mu afterwards gives the Laplacian on every vertex.
std::vector<double> edge_laplacian(const std::vector<double>& u, const WeightedGraph& g) {
  std::vector<double> acc(static_cast<size_t>(g.vertex_count()), 0.0);
  for (const auto& e : g.edges()) {
    const double flux = e.w * (u[static_cast<size_t>(e.b)] - u[static_cast<size_t>(e.a)]);
    acc[static_cast<size_t>(e.a)] += flux;
    acc[static_cast<size_t>(e.b)] -= flux;
  }
  for (int x = 0; x < g.vertex_count(); ++x) acc[static_cast<size_t>(x)] /= g.mu(x);
  return acc;
}

std::vector<double> edge_gamma(const std::vector<double>& u1, const std::vector<double>& u2,
                               const WeightedGraph& g) {
  std::vector<double> acc(static_cast<size_t>(g.vertex_count()), 0.0);
  for (const auto& e : g.edges()) {
    const double d1 = u1[static_cast<size_t>(e.b)] - u1[static_cast<size_t>(e.a)];
    const double d2 = u2[static_cast<size_t>(e.b)] - u2[static_cast<size_t>(e.a)];
    acc[static_cast<size_t>(e.a)] += e.w * d1 * d2;
    acc[static_cast<size_t>(e.b)] += e.w * d1 * d2;
  }
  for (int x = 0; x < g.vertex_count(); ++x)
    acc[static_cast<size_t>(x)] /= 2.0 * g.mu(x);
  return acc;
}

GraphFunction mask_active(std::vector<double> values, const WeightedGraph& g,
                          const DirichletDomain& d) {
  GraphFunction out(g.vertex_count());
  for (int x : d.active()) out[x] = values[static_cast<size_t>(x)];
  return out;
}

// |grad^m u| on every vertex, via repeated edge sweeps.
std::vector<double> length_all(const GraphFunction& u, const OperatorOrder& order,
                               const WeightedGraph& g) {
  validate_order(order);
  std::vector<double> cur = u.values();
  const int half = order.m / 2;
  for (int j = 0; j < half; ++j) cur = edge_laplacian(cur, g);
  if (order.m % 2 == 0) {
    for (double& v : cur) v = std::abs(v);
    return cur;
  }
  std::vector<double> gam = edge_gamma(cur, cur, g);
  for (double& v : gam) v = std::sqrt(std::max(v, 0.0));
  return gam;
}

}  // namespace

GraphFunction laplacian(const GraphFunction& u, const WeightedGraph& g,
                        const DirichletDomain& d) {
  require_closed(d, "laplacian");
  return mask_active(edge_laplacian(u.values(), g), g, d);
}

GraphFunction gradient_form(const GraphFunction& u1, const GraphFunction& u2,
                            const WeightedGraph& g, const DirichletDomain& d) {
  require_closed(d, "gradient_form");
  return mask_active(edge_gamma(u1.values(), u2.values(), g), g, d);
}

GraphFunction s_laplacian(const GraphFunction& u, double s, const WeightedGraph& g,
                          const DirichletDomain& d) {
  require_closed(d, "s_laplacian");
  validate_order({1, s});
  std::vector<double> gam = edge_gamma(u.values(), u.values(), g);
  std::vector<double> eta(gam.size());
  for (size_t i = 0; i < gam.size(); ++i) eta[i] = grad_weight(gam[i], s);
  const std::vector<double>& uv = u.values();
  std::vector<double> acc(uv.size(), 0.0);
  for (const auto& e : g.edges()) {
    const double t = (eta[static_cast<size_t>(e.a)] + eta[static_cast<size_t>(e.b)]) *
                     e.w * (uv[static_cast<size_t>(e.b)] - uv[static_cast<size_t>(e.a)]);
    acc[static_cast<size_t>(e.a)] += t;
    acc[static_cast<size_t>(e.b)] -= t;
  }
  for (int x = 0; x < g.vertex_count(); ++x)
    acc[static_cast<size_t>(x)] /= 2.0 * g.mu(x);
  return mask_active(std::move(acc), g, d);
}

GraphFunction gradient_length_m(const GraphFunction& u, const OperatorOrder& order,
                                const WeightedGraph& g, const DirichletDomain& d) {
  require_closed(d, "gradient_length_m");
  return mask_active(length_all(u, order, g), g, d);
}

double sobolev_norm(const GraphFunction& u, const OperatorOrder& order,
                    const WeightedGraph& g, const DirichletDomain& d) {
  require_closed(d, "sobolev_norm");
  require_dirichlet(u, d);
  std::vector<double> len = length_all(u, order, g);
  double total = 0.0;
  for (int x : d.active())
    total += std::pow(len[static_cast<size_t>(x)], order.s) * g.mu(x);
  return std::pow(total, 1.0 / order.s);
}

double lr_norm(const GraphFunction& u, double r, const WeightedGraph& g,
               const DirichletDomain& d) {
  if (std::isinf(r)) {
    double m = 0.0;
    for (int x : d.interior()) m = std::max(m, std::abs(u[x]));
    return m;
  }
  if (!(r >= 1.0)) throw Error("lr_norm: exponent must satisfy r >= 1");
  double total = 0.0;
  for (int x : d.interior()) total += std::pow(std::abs(u[x]), r) * g.mu(x);
  return std::pow(total, 1.0 / r);
}

double integrate(const GraphFunction& f, const WeightedGraph& g,
                 std::span<const int> verts) {
  double total = 0.0;
  for (int x : verts) total += f[x] * g.mu(x);
  return total;
}

}  // namespace graphvar::reference
