#pragma once

#include <span>

#include "graphvar/graph.hpp"

namespace graphvar {

// Order of a poly-Laplacian style operator: m iterations, exponent s.
struct OperatorOrder {
    int m = 1;
    double s = 2.0;
};

void validate_order(const OperatorOrder& order);

// phi_r(w) = |w|^{r-2} w, extended by 0 at w = 0 (continuous for r > 1).
double phi_power(double w, double r);

// |grad u|^{s-2} from the stored Gamma(u,u) value, with the limiting value 0
// at a vanishing gradient for s < 2 (and the exact constant 1 for s = 2).
double grad_weight(double gamma_uu, double s);

// Integral of f against mu over an explicit vertex set.
double integrate(const GraphFunction& f, const WeightedGraph& g, std::span<const int> verts);
double integrate_interior(const GraphFunction& f, const WeightedGraph& g,
                          const DirichletDomain& d);
double integrate_active(const GraphFunction& f, const WeightedGraph& g,
                        const DirichletDomain& d);

// Delta u(x) = (1/mu(x)) sum_{y~x} w_xy (u(y) - u(x)) on Omega u dOmega.
GraphFunction laplacian(const GraphFunction& u, const WeightedGraph& g,
                        const DirichletDomain& d);

// Gamma(u1,u2)(x) = (1/(2 mu(x))) sum_{y~x} w_xy (u1(y)-u1(x)) (u2(y)-u2(x)).
GraphFunction gradient_form(const GraphFunction& u1, const GraphFunction& u2,
                            const WeightedGraph& g, const DirichletDomain& d);

// Delta_s u(x) = (1/(2 mu(x))) sum_{y~x} (|grad u|^{s-2}(y) + |grad u|^{s-2}(x))
//                w_xy (u(y) - u(x)).
GraphFunction s_laplacian(const GraphFunction& u, double s, const WeightedGraph& g,
                          const DirichletDomain& d);

// |grad^m u| on Omega u dOmega: |Delta^{m/2} u| for even m, the gradient length
// of Delta^{(m-1)/2} u for odd m.
GraphFunction gradient_length_m(const GraphFunction& u, const OperatorOrder& order,
                                const WeightedGraph& g, const DirichletDomain& d);

// E(u) = sum_{Omega u dOmega} |grad^m u|^s mu, and its s-th root.
double sobolev_energy(const GraphFunction& u, const OperatorOrder& order,
                      const WeightedGraph& g, const DirichletDomain& d);
double sobolev_norm(const GraphFunction& u, const OperatorOrder& order,
                    const WeightedGraph& g, const DirichletDomain& d);

// L^r(Omega) norm; r = infinity gives the max norm.
double lr_norm(const GraphFunction& u, double r, const WeightedGraph& g,
               const DirichletDomain& d);

// Pointwise poly-Laplacian on Omega, via the exact chain rule for dE: the
// returned L satisfies dE(u)[phi] = s * sum_Omega L(x) phi(x) mu(x) for every
// Dirichlet phi. Zero off Omega.
GraphFunction poly_lap_apply(const GraphFunction& u, const OperatorOrder& order,
                             const WeightedGraph& g, const DirichletDomain& d);

// Weak pairing of the poly-Laplacian: the right-hand side written with the
// m-th order gradient weight against the iterated Laplacians of u and phi.
// Equals sum_Omega (L u) phi mu; computed independently of poly_lap_apply.
double weak_pairing(const GraphFunction& u, const OperatorOrder& order,
                    const GraphFunction& phi, const WeightedGraph& g,
                    const DirichletDomain& d);

}  // namespace graphvar
