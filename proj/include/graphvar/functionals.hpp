#pragma once

#include <optional>
#include <utility>

#include "graphvar/calculus.hpp"
#include "graphvar/graph.hpp"

namespace graphvar {

// Parameters of the two-component problem
//   L_{m1,p} u (+ a|u|^{p-2}u) = lambda1 h1 |u|^{gamma1-2}u + (alpha/(alpha+beta)) c |u|^{alpha-2}u |v|^beta
//   L_{m2,q} v (+ b|v|^{q-2}v) = lambda2 h2 |v|^{gamma2-2}v + (beta/(alpha+beta)) c |u|^alpha |v|^{beta-2}v
// The optional potentials pot_u, pot_v turn the Dirichlet problem into the
// whole-graph variant: both must be present or absent together, and the
// domain must then have an empty boundary.
struct SystemParams {
  int m1 = 1;
  int m2 = 1;
  double p = 2.0;
  double q = 2.0;
  double gamma1 = 1.5;
  double gamma2 = 1.5;
  double alpha = 2.0;
  double beta = 2.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  GraphFunction h1;
  GraphFunction h2;
  GraphFunction c;
  std::optional<GraphFunction> pot_u;
  std::optional<GraphFunction> pot_v;

  void validate(const WeightedGraph& g, const DirichletDomain& d) const;

  // Extrema of the coefficients over the interior, recomputed on call.
  double H1(const DirichletDomain& d) const;
  double H2(const DirichletDomain& d) const;
  double h1_min(const DirichletDomain& d) const;
  double h2_min(const DirichletDomain& d) const;
  double C0(const DirichletDomain& d) const;
};

// Single-equation counterpart:
//   L_{m,p} u (+ a|u|^{p-2}u) = lambda h |u|^{gamma-2}u + c |u|^{alpha-2}u.
struct EquationParams {
  int m = 1;
  double p = 2.0;
  double gamma = 1.5;
  double alpha = 4.0;
  double lambda = 0.0;
  GraphFunction h;
  GraphFunction c;
  std::optional<GraphFunction> pot;

  void validate(const WeightedGraph& g, const DirichletDomain& d) const;

  double H0(const DirichletDomain& d) const;
  double C0(const DirichletDomain& d) const;
};

double max_over_interior(const GraphFunction& f, const DirichletDomain& d);
double min_over_interior(const GraphFunction& f, const DirichletDomain& d);

// ||u||^s for the problem norm: the W_0^{m,s} energy plus, when a potential is
// present, sum_V a(x)|u(x)|^s mu(x). norm = power^{1/s}.
double norm_power(const GraphFunction& u, const OperatorOrder& order,
                  const GraphFunction* pot, const WeightedGraph& g,
                  const DirichletDomain& d);
double problem_norm(const GraphFunction& u, const OperatorOrder& order,
                    const GraphFunction* pot, const WeightedGraph& g,
                    const DirichletDomain& d);

double energy_system(const GraphFunction& u, const GraphFunction& v,
                     const SystemParams& P, const WeightedGraph& g,
                     const DirichletDomain& d);

// Gradient fields (g_u, g_v), supported on the interior: the directional
// derivative of energy_system along Dirichlet (phi, psi) equals
// sum_Omega (g_u phi + g_v psi) mu.
std::pair<GraphFunction, GraphFunction> grad_system(const GraphFunction& u,
                                                    const GraphFunction& v,
                                                    const SystemParams& P,
                                                    const WeightedGraph& g,
                                                    const DirichletDomain& d);

double energy_equation(const GraphFunction& u, const EquationParams& P,
                       const WeightedGraph& g, const DirichletDomain& d);
GraphFunction grad_equation(const GraphFunction& u, const EquationParams& P,
                            const WeightedGraph& g, const DirichletDomain& d);

// (A, B, C) = (||u||^p, int c|u|^alpha, lambda int h|u|^gamma).
struct OperatorTriple {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
};
OperatorTriple operator_triple(const GraphFunction& u, const EquationParams& P,
                               const WeightedGraph& g, const DirichletDomain& d);

// Energy along the ray t -> t*u, reduced to three scalars:
//   G(t) = (t^p/p) A - (t^gamma/gamma) C - (t^alpha/alpha) B.
struct FiberingMap {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  double p = 2.0;
  double gamma = 1.5;
  double alpha = 4.0;

  double value(double t) const;
  double deriv1(double t) const;
  double deriv2(double t) const;
};

FiberingMap fibering_map(const GraphFunction& u, const EquationParams& P,
                         const WeightedGraph& g, const DirichletDomain& d);
double fibering_value(const GraphFunction& u, double t, const EquationParams& P,
                      const WeightedGraph& g, const DirichletDomain& d);
double fibering_deriv1(const GraphFunction& u, double t, const EquationParams& P,
                       const WeightedGraph& g, const DirichletDomain& d);
double fibering_deriv2(const GraphFunction& u, double t, const EquationParams& P,
                       const WeightedGraph& g, const DirichletDomain& d);

enum class NehariTag { Nplus, Nzero, Nminus, NotOnNehari };

struct NehariClass {
  NehariTag tag = NehariTag::NotOnNehari;
  double g_prime = 0.0;        // G'(1) = A - C - B
  double g_double_prime = 0.0; // G''(1) = (p-1)A - (gamma-1)C - (alpha-1)B
};

// Tolerance is relative to A + C + B so the classification is scale-free.
NehariClass nehari_classify(const GraphFunction& u, const EquationParams& P,
                            const WeightedGraph& g, const DirichletDomain& d,
                            double tol);

const char* nehari_tag_name(NehariTag tag);

}  // namespace graphvar
