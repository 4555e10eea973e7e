#include "graphvar/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace graphvar {

namespace {

void check_exponent(double e, const char* name) {
  if (!(e > 1.0) || !std::isfinite(e))
    throw Error(std::string(name) + " must be a finite real > 1");
}

void check_positive_interior(const GraphFunction& f, const WeightedGraph& g,
                             const DirichletDomain& d, const char* name) {
  if (f.size() != g.vertex_count())
    throw Error(std::string(name) + " has wrong size for this graph");
  for (int x : d.interior())
    if (!(f[x] > 0.0))
      throw Error(std::string(name) + " must be strictly positive on Omega (vertex '" +
                  g.id(x) + "')");
}

void check_positive_active(const GraphFunction& f, const WeightedGraph& g,
                           const DirichletDomain& d, const char* name) {
  if (f.size() != g.vertex_count())
    throw Error(std::string(name) + " has wrong size for this graph");
  for (int x : d.active())
    if (!(f[x] > 0.0))
      throw Error(std::string(name) + " must be strictly positive (vertex '" + g.id(x) +
                  "')");
}

void check_domain_shape(bool has_pot, const DirichletDomain& d) {
  if (has_pot && !d.boundary().empty())
    throw Error("potential-weighted problems run on the whole graph; boundary must be empty");
  if (!has_pot && d.boundary().empty())
    throw Error("Dirichlet problem needs a nonempty boundary (or supply a potential)");
}

double abs_pow(double v, double e) { return std::pow(std::abs(v), e); }

}  // namespace

void SystemParams::validate(const WeightedGraph& g, const DirichletDomain& d) const {
  if (m1 < 1 || m2 < 1) throw Error("operator orders m1, m2 must be >= 1");
  check_exponent(p, "p");
  check_exponent(q, "q");
  check_exponent(gamma1, "gamma1");
  check_exponent(gamma2, "gamma2");
  if (!(alpha > 0.0) || !(beta > 0.0)) throw Error("alpha and beta must be positive");
  if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0))
    throw Error("lambda1 and lambda2 must be nonnegative");
  if (!(std::max(gamma1, gamma2) < std::min(p, q)))
    throw Error("exponent ordering violated: need max{gamma1,gamma2} < min{p,q}");
  if (!(std::max(p, q) < alpha + beta))
    throw Error("exponent ordering violated: need max{p,q} < alpha+beta");
  check_positive_interior(h1, g, d, "h1");
  check_positive_interior(h2, g, d, "h2");
  check_positive_interior(c, g, d, "c");
  if (pot_u.has_value() != pot_v.has_value())
    throw Error("potentials must be supplied for both components or neither");
  check_domain_shape(pot_u.has_value(), d);
  if (pot_u) check_positive_active(*pot_u, g, d, "potential a");
  if (pot_v) check_positive_active(*pot_v, g, d, "potential b");
  d.require_closure_for_order(g, m1);
  d.require_closure_for_order(g, m2);
}

double SystemParams::H1(const DirichletDomain& d) const { return max_over_interior(h1, d); }
double SystemParams::H2(const DirichletDomain& d) const { return max_over_interior(h2, d); }
double SystemParams::h1_min(const DirichletDomain& d) const { return min_over_interior(h1, d); }
double SystemParams::h2_min(const DirichletDomain& d) const { return min_over_interior(h2, d); }
double SystemParams::C0(const DirichletDomain& d) const { return max_over_interior(c, d); }

void EquationParams::validate(const WeightedGraph& g, const DirichletDomain& d) const {
  if (m < 1) throw Error("operator order m must be >= 1");
  check_exponent(p, "p");
  check_exponent(gamma, "gamma");
  if (!(alpha > 0.0)) throw Error("alpha must be positive");
  if (!(lambda >= 0.0)) throw Error("lambda must be nonnegative");
  if (!(gamma < p && p < alpha))
    throw Error("exponent ordering violated: need gamma < p < alpha");
  check_positive_interior(h, g, d, "h");
  check_positive_interior(c, g, d, "c");
  check_domain_shape(pot.has_value(), d);
  if (pot) check_positive_active(*pot, g, d, "potential a");
  d.require_closure_for_order(g, m);
}

double EquationParams::H0(const DirichletDomain& d) const { return max_over_interior(h, d); }
double EquationParams::C0(const DirichletDomain& d) const { return max_over_interior(c, d); }

double max_over_interior(const GraphFunction& f, const DirichletDomain& d) {
  double m = -std::numeric_limits<double>::infinity();
  for (int x : d.interior()) m = std::max(m, f[x]);
  return m;
}

double min_over_interior(const GraphFunction& f, const DirichletDomain& d) {
  double m = std::numeric_limits<double>::infinity();
  for (int x : d.interior()) m = std::min(m, f[x]);
  return m;
}

double norm_power(const GraphFunction& u, const OperatorOrder& order,
                  const GraphFunction* pot, const WeightedGraph& g,
                  const DirichletDomain& d) {
  double e = sobolev_energy(u, order, g, d);
  if (pot != nullptr) {
    for (int x : d.active()) e += (*pot)[x] * abs_pow(u[x], order.s) * g.mu(x);
  }
  return e;
}

double problem_norm(const GraphFunction& u, const OperatorOrder& order,
                    const GraphFunction* pot, const WeightedGraph& g,
                    const DirichletDomain& d) {
  return std::pow(norm_power(u, order, pot, g, d), 1.0 / order.s);
}

double energy_system(const GraphFunction& u, const GraphFunction& v,
                     const SystemParams& P, const WeightedGraph& g,
                     const DirichletDomain& d) {
  P.validate(g, d);
  require_dirichlet(u, d);
  require_dirichlet(v, d);
  const double Eu = norm_power(u, {P.m1, P.p}, P.pot_u ? &*P.pot_u : nullptr, g, d);
  const double Ev = norm_power(v, {P.m2, P.q}, P.pot_v ? &*P.pot_v : nullptr, g, d);
  double concave_u = 0.0, concave_v = 0.0, coupling = 0.0;
  for (int x : d.interior()) {
    concave_u += P.h1[x] * abs_pow(u[x], P.gamma1) * g.mu(x);
    concave_v += P.h2[x] * abs_pow(v[x], P.gamma2) * g.mu(x);
    coupling += P.c[x] * abs_pow(u[x], P.alpha) * abs_pow(v[x], P.beta) * g.mu(x);
  }
  return Eu / P.p - (P.lambda1 / P.gamma1) * concave_u + Ev / P.q -
         (P.lambda2 / P.gamma2) * concave_v - coupling / (P.alpha + P.beta);
}

std::pair<GraphFunction, GraphFunction> grad_system(const GraphFunction& u,
                                                    const GraphFunction& v,
                                                    const SystemParams& P,
                                                    const WeightedGraph& g,
                                                    const DirichletDomain& d) {
  P.validate(g, d);
  require_dirichlet(u, d);
  require_dirichlet(v, d);
  GraphFunction gu = poly_lap_apply(u, {P.m1, P.p}, g, d);
  GraphFunction gv = poly_lap_apply(v, {P.m2, P.q}, g, d);
  const double wu = P.alpha / (P.alpha + P.beta);
  const double wv = P.beta / (P.alpha + P.beta);
  for (int x : d.interior()) {
    if (P.pot_u) gu[x] += (*P.pot_u)[x] * phi_power(u[x], P.p);
    if (P.pot_v) gv[x] += (*P.pot_v)[x] * phi_power(v[x], P.q);
    gu[x] -= P.lambda1 * P.h1[x] * phi_power(u[x], P.gamma1);
    gv[x] -= P.lambda2 * P.h2[x] * phi_power(v[x], P.gamma2);
    gu[x] -= wu * P.c[x] * phi_power(u[x], P.alpha) * abs_pow(v[x], P.beta);
    gv[x] -= wv * P.c[x] * abs_pow(u[x], P.alpha) * phi_power(v[x], P.beta);
  }
  return {std::move(gu), std::move(gv)};
}

double energy_equation(const GraphFunction& u, const EquationParams& P,
                       const WeightedGraph& g, const DirichletDomain& d) {
  P.validate(g, d);
  require_dirichlet(u, d);
  const double Eu = norm_power(u, {P.m, P.p}, P.pot ? &*P.pot : nullptr, g, d);
  double concave = 0.0, convex = 0.0;
  for (int x : d.interior()) {
    concave += P.h[x] * abs_pow(u[x], P.gamma) * g.mu(x);
    convex += P.c[x] * abs_pow(u[x], P.alpha) * g.mu(x);
  }
  return Eu / P.p - (P.lambda / P.gamma) * concave - convex / P.alpha;
}

GraphFunction grad_equation(const GraphFunction& u, const EquationParams& P,
                            const WeightedGraph& g, const DirichletDomain& d) {
  P.validate(g, d);
  require_dirichlet(u, d);
  GraphFunction gu = poly_lap_apply(u, {P.m, P.p}, g, d);
  for (int x : d.interior()) {
    if (P.pot) gu[x] += (*P.pot)[x] * phi_power(u[x], P.p);
    gu[x] -= P.lambda * P.h[x] * phi_power(u[x], P.gamma);
    gu[x] -= P.c[x] * phi_power(u[x], P.alpha);
  }
  return gu;
}

OperatorTriple operator_triple(const GraphFunction& u, const EquationParams& P,
                               const WeightedGraph& g, const DirichletDomain& d) {
  P.validate(g, d);
  require_dirichlet(u, d);
  OperatorTriple t;
  t.A = norm_power(u, {P.m, P.p}, P.pot ? &*P.pot : nullptr, g, d);
  for (int x : d.interior()) {
    t.B += P.c[x] * abs_pow(u[x], P.alpha) * g.mu(x);
    t.C += P.h[x] * abs_pow(u[x], P.gamma) * g.mu(x);
  }
  t.C *= P.lambda;
  return t;
}

double FiberingMap::value(double t) const {
  return std::pow(t, p) / p * A - std::pow(t, gamma) / gamma * C -
         std::pow(t, alpha) / alpha * B;
}

double FiberingMap::deriv1(double t) const {
  return std::pow(t, p - 1.0) * A - std::pow(t, gamma - 1.0) * C -
         std::pow(t, alpha - 1.0) * B;
}

double FiberingMap::deriv2(double t) const {
  return (p - 1.0) * std::pow(t, p - 2.0) * A -
         (gamma - 1.0) * std::pow(t, gamma - 2.0) * C -
         (alpha - 1.0) * std::pow(t, alpha - 2.0) * B;
}

namespace {

void require_nonzero(const OperatorTriple& t) {
  if (t.A == 0.0) throw Error("fibering map needs a nonzero function");
}

}  // namespace

FiberingMap fibering_map(const GraphFunction& u, const EquationParams& P,
                         const WeightedGraph& g, const DirichletDomain& d) {
  OperatorTriple t = operator_triple(u, P, g, d);
  require_nonzero(t);
  return {t.A, t.B, t.C, P.p, P.gamma, P.alpha};
}

double fibering_value(const GraphFunction& u, double t, const EquationParams& P,
                      const WeightedGraph& g, const DirichletDomain& d) {
  if (!(t > 0.0)) throw Error("fibering parameter t must be positive");
  return fibering_map(u, P, g, d).value(t);
}

double fibering_deriv1(const GraphFunction& u, double t, const EquationParams& P,
                       const WeightedGraph& g, const DirichletDomain& d) {
  if (!(t > 0.0)) throw Error("fibering parameter t must be positive");
  return fibering_map(u, P, g, d).deriv1(t);
}

double fibering_deriv2(const GraphFunction& u, double t, const EquationParams& P,
                       const WeightedGraph& g, const DirichletDomain& d) {
  if (!(t > 0.0)) throw Error("fibering parameter t must be positive");
  return fibering_map(u, P, g, d).deriv2(t);
}

NehariClass nehari_classify(const GraphFunction& u, const EquationParams& P,
                            const WeightedGraph& g, const DirichletDomain& d,
                            double tol) {
  OperatorTriple t = operator_triple(u, P, g, d);
  require_nonzero(t);
  NehariClass out;
  out.g_prime = t.A - t.C - t.B;
  out.g_double_prime = (P.p - 1.0) * t.A - (P.gamma - 1.0) * t.C - (P.alpha - 1.0) * t.B;
  const double scale = t.A + t.C + t.B;
  if (std::abs(out.g_prime) > tol * scale) {
    out.tag = NehariTag::NotOnNehari;
  } else if (out.g_double_prime > tol * scale) {
    out.tag = NehariTag::Nplus;
  } else if (out.g_double_prime < -tol * scale) {
    out.tag = NehariTag::Nminus;
  } else {
    out.tag = NehariTag::Nzero;
  }
  return out;
}

const char* nehari_tag_name(NehariTag tag) {
  switch (tag) {
    case NehariTag::Nplus: return "Nplus";
    case NehariTag::Nzero: return "Nzero";
    case NehariTag::Nminus: return "Nminus";
    default: return "NotOnNehari";
  }
}

}  // namespace graphvar
