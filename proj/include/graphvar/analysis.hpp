#pragma once

#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "graphvar/functionals.hpp"
#include "graphvar/graph.hpp"
#include "graphvar/rational.hpp"

namespace graphvar {

enum class ConstantSource { Explicit, BruteForce, UserSupplied };

const char* constant_source_name(ConstantSource s);

// A constant C with ||u||_{L^r} <= C ||u||_{W_0^{m,s}} for Dirichlet u.
// r is NaN when the constant serves every finite r at once (the closed-form
// constant has that property); otherwise it is the specific Lebesgue exponent
// the brute-force search was run for.
struct EmbeddingConstant {
  double value = 0.0;
  ConstantSource source = ConstantSource::UserSupplied;
  int m = 1;
  double s = 2.0;
  double r = std::numeric_limits<double>::quiet_NaN();
};

// Closed-form constant (1+|Omega|) (min_Omega mu)^{-1/s} (2 max_active mu / min w)^{1/2},
// valid for every finite r. Requires s >= 2 and every interior vertex adjacent
// to a boundary vertex. min w runs over edges with an endpoint in Omega u dOmega.
EmbeddingConstant explicit_embedding_constant(const WeightedGraph& g,
                                              const DirichletDomain& d, double s);

struct BruteForceOptions {
  int starts = 50;
  int max_iters = 2000;
  double tol = 1e-14;
  unsigned long long seed = 20240901ull;
};

// Multi-start projected gradient ascent of ||u||_{L^r} over the unit sphere of
// the W_0^{m,s} norm. The result is a certified lower bound on the best
// constant (it is a ratio attained by a concrete function).
EmbeddingConstant brute_force_embedding_constant(const WeightedGraph& g,
                                                 const DirichletDomain& d, int m,
                                                 double s, double r,
                                                 const BruteForceOptions& opts = {});

// Whole-graph constant (sum_V mu)^{1/s} / (mu_min a_min)^{1/s} for the
// potential-weighted norm; the potential must be strictly positive on V.
EmbeddingConstant finite_graph_constants(const WeightedGraph& g,
                                         const GraphFunction& pot, double s);

// (M_lambda, M2):
//   M_lambda = 2^{1-max{p,q}} min{(1-lambda1 Cp^p)/p, (1-lambda2 Cq^q)/q}
//   M2 = C0/(alpha+beta)^2 (alpha Cp^{alpha+beta} + beta Cq^{alpha+beta}).
// A nonpositive M_lambda is returned as-is; the hypothesis report flags it.
std::pair<double, double> system_constants(const SystemParams& P,
                                           const DirichletDomain& d,
                                           const EmbeddingConstant& Cp,
                                           const EmbeddingConstant& Cq);

struct HypothesisReport {
  enum class Kind { System, Equation };
  Kind kind = Kind::System;

  // System case.
  double M_lambda = std::numeric_limits<double>::quiet_NaN();
  double M2 = std::numeric_limits<double>::quiet_NaN();
  double rho = std::numeric_limits<double>::quiet_NaN();
  double lhs = std::numeric_limits<double>::quiet_NaN();
  double rhs = std::numeric_limits<double>::quiet_NaN();
  double max_pq = std::numeric_limits<double>::quiet_NaN();
  double sum_alpha_beta = std::numeric_limits<double>::quiet_NaN();
  bool cond1 = false;
  bool cond2 = false;
  bool cond3 = false;
  bool cond4 = false;

  // Equation case.
  double lambda = std::numeric_limits<double>::quiet_NaN();
  double lambda0 = std::numeric_limits<double>::quiet_NaN();
  double lambda_star = std::numeric_limits<double>::quiet_NaN();
  double lambda_star_star = std::numeric_limits<double>::quiet_NaN();

  bool all_ok = false;

  // The ball lower bound M t^{max{p,q}} - M2 t^{alpha+beta} - lhs and its
  // second derivative, recomputable from the stored scalars (system case).
  double envelope(double t) const;
  double envelope_second(double t) const;
};

// Evaluates the four smallness conditions. The weighted h-norm powers
// (int_Omega h1^{p/(p-gamma1)} dmu and the q/gamma2 counterpart) are computed
// from the coefficient functions unless supplied.
HypothesisReport check_system_hypotheses(const SystemParams& P, const WeightedGraph& g,
                                         const DirichletDomain& d,
                                         const EmbeddingConstant& Cp,
                                         const EmbeddingConstant& Cq,
                                         std::optional<double> h1_norm_pow = {},
                                         std::optional<double> h2_norm_pow = {},
                                         std::optional<double> C0_override = {});

struct EquationThresholds {
  double lambda0 = 0.0;
  double lambda_star = 0.0;
  double lambda_star_star = 0.0;
};

EquationThresholds equation_thresholds(const EquationParams& P, const DirichletDomain& d,
                                       const EmbeddingConstant& C);

HypothesisReport check_equation_hypotheses(const EquationParams& P,
                                           const WeightedGraph& g,
                                           const DirichletDomain& d,
                                           const EmbeddingConstant& C);

// Product-form test for the two-root regime of the fibering map; equivalent
// to lambda <= lambda0.
bool fibering_two_root_condition(const EquationParams& P, const DirichletDomain& d,
                                 const EmbeddingConstant& C);

enum class SystemSide { U, V };

// Norm bound for solutions with the other component identically zero:
// (lambda1 H1 C^{gamma1})^{1/(p-gamma1)} for the u side, symmetric for v.
double semi_trivial_bound(const SystemParams& P, SystemSide side,
                          const EmbeddingConstant& C, const DirichletDomain& d);

std::string serialize_report(const HypothesisReport& r, bool full);

// Exact-rational evaluation of the system conditions. Every scalar must be a
// rational and each exponent that the chain raises a rational to must be an
// integer; otherwise this throws with a pointer to float mode.
struct RationalSystemInputs {
  Rational p, q, gamma1, gamma2, alpha, beta;
  Rational lambda1, lambda2;
  Rational Cp, Cq, C0;
  Rational h1_norm_pow, h2_norm_pow;
};

struct RationalHypothesisReport {
  Rational M_lambda, M2, lhs, rhs;
  Rational rho;       // meaningful only when rho_exact
  bool rho_exact = false;
  double rho_approx = 0.0;
  bool cond1 = false, cond2 = false, cond3 = false, cond4 = false;
  bool all_ok = false;
};

RationalHypothesisReport check_system_hypotheses_exact(const RationalSystemInputs& in);

std::string serialize_report(const RationalHypothesisReport& r, bool full);

}  // namespace graphvar
