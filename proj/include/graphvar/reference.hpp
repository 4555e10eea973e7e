#pragma once

#include "graphvar/calculus.hpp"
#include "graphvar/graph.hpp"

namespace graphvar::reference {

// Plain serial re-implementations of the calculus kernels, written as direct
// edge-list sweeps instead of the parallel per-vertex CSR loops. They exist as
// an independent cross-check for the tests and as the baseline side of the
// kernel benchmark. All of them require a closed domain (no active vertex may
// touch an outside vertex).

GraphFunction laplacian(const GraphFunction& u, const WeightedGraph& g,
                        const DirichletDomain& d);
GraphFunction gradient_form(const GraphFunction& u1, const GraphFunction& u2,
                            const WeightedGraph& g, const DirichletDomain& d);
GraphFunction s_laplacian(const GraphFunction& u, double s, const WeightedGraph& g,
                          const DirichletDomain& d);
GraphFunction gradient_length_m(const GraphFunction& u, const OperatorOrder& order,
                                const WeightedGraph& g, const DirichletDomain& d);
double sobolev_norm(const GraphFunction& u, const OperatorOrder& order,
                    const WeightedGraph& g, const DirichletDomain& d);
double lr_norm(const GraphFunction& u, double r, const WeightedGraph& g,
               const DirichletDomain& d);
double integrate(const GraphFunction& f, const WeightedGraph& g,
                 std::span<const int> verts);

}  // namespace graphvar::reference
