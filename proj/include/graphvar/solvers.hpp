#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "graphvar/analysis.hpp"
#include "graphvar/functionals.hpp"
#include "graphvar/graph.hpp"

namespace graphvar {

struct SolveConfig {
  double grad_tol = 1e-9;
  long max_iters = 200000;
  int path_points = 33;
  int starts = 8;
  unsigned long long seed = 1;
  double step_init = 1.0;
  double backtrack_factor = 0.5;
  double armijo_c = 1e-4;
  int jobs = 1;

  void validate() const;
};

enum class Classification { PositiveEnergy, NegativeEnergy, GroundStateCandidate };
const char* classification_name(Classification c);

struct SolveReport {
  GraphFunction u;
  GraphFunction v;
  bool has_v = false;
  double energy = std::numeric_limits<double>::quiet_NaN();
  double grad_norm = std::numeric_limits<double>::quiet_NaN();
  long iterations = 0;
  Classification classification = Classification::NegativeEnergy;
  std::optional<NehariClass> nehari;
  bool within_rho_ball = false;
  double rho = std::numeric_limits<double>::quiet_NaN();
  bool converged = false;
  bool trivial = false;
  // False when the smallness conditions were not verified before the run; the
  // solvers run either way, this only annotates the report.
  bool hypotheses_verified = false;
  unsigned long long seed = 0;
};

// Armijo descent inside the closed ball ||u|| + ||v|| <= rho, started on the
// all-ones ray at the lowest-energy small multiple. Finds the negative-energy
// local minimizer when the smallness conditions hold.
SolveReport solve_negative(const SystemParams& P, const WeightedGraph& g,
                           const DirichletDomain& d, double rho,
                           const SolveConfig& cfg, bool hypotheses_ok = true);

// Path-deformation mountain pass between 0 and a far endpoint with negative
// energy, with a damped Newton polish of the saddle. rho only scales the
// endpoint search (the endpoint must leave the rho-ball).
SolveReport solve_mountain_pass(const SystemParams& P, const WeightedGraph& g,
                                const DirichletDomain& d, const SolveConfig& cfg,
                                double rho = 1.0, bool hypotheses_ok = true);

// The two positive roots t_plus < t_minus of G'(t) = 0, by bracketing and
// bisection on psi(t) = A t^{p-gamma} - C - B t^{alpha-gamma}. Throws when the
// map does not have two roots (lambda too large).
std::pair<double, double> fibering_roots(const FiberingMap& map, double tol = 1e-13);
std::pair<double, double> fibering_roots(const GraphFunction& u, const EquationParams& P,
                                         const WeightedGraph& g, const DirichletDomain& d,
                                         double tol = 1e-13);

// Minimizes J over the Nplus Nehari branch: alternates fibering rescaling with
// descent steps in direction space, multi-start, Newton refinement.
SolveReport solve_ground_state(const EquationParams& P, const WeightedGraph& g,
                               const DirichletDomain& d, const SolveConfig& cfg,
                               bool hypotheses_ok = true);

// The Nminus companion on the same ray as u: t_minus(u) * u.
GraphFunction fibering_minus_point(const GraphFunction& u, const EquationParams& P,
                                   const WeightedGraph& g, const DirichletDomain& d,
                                   double tol = 1e-13);

// Critical point of the system with v forced to zero (requires beta > 1 so
// the coupling stays out of the v-equation). Returns a system report whose v
// component is identically zero.
SolveReport solve_semi_trivial(const SystemParams& P, const WeightedGraph& g,
                               const DirichletDomain& d, const SolveConfig& cfg);

struct VerifyRecord {
  double weak_grad_norm = std::numeric_limits<double>::quiet_NaN();
  // Pointwise equation residuals, aligned with domain.interior(). Each entry
  // is recomputed through the weak pairing with a delta test function, an
  // evaluation path independent of the operator used by the solvers.
  std::vector<double> residual_u;
  std::vector<double> residual_v;
  double max_residual_u = 0.0;
  double max_residual_v = 0.0;
  bool trivial = false;
  enum class SemiTrivial { None, VZero, UZero } semi = SemiTrivial::None;
  double bound = std::numeric_limits<double>::quiet_NaN();
  double bound_margin = std::numeric_limits<double>::quiet_NaN();
  std::optional<NehariClass> nehari;
  double tol = 0.0;
  bool pass = false;
};

// Checks the vertex-wise equations. Cu/Cv, when given, enable the norm-bound
// check for semi-trivial inputs (the constant should serve r = gamma of the
// surviving side).
VerifyRecord verify_system(const GraphFunction& u, const GraphFunction& v,
                           const SystemParams& P, const WeightedGraph& g,
                           const DirichletDomain& d, double tol,
                           const EmbeddingConstant* Cu = nullptr,
                           const EmbeddingConstant* Cv = nullptr);
VerifyRecord verify_equation(const GraphFunction& u, const EquationParams& P,
                             const WeightedGraph& g, const DirichletDomain& d,
                             double tol);

}  // namespace graphvar
