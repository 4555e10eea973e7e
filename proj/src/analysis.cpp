#include "graphvar/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <vector>

#include "graphvar/graph_io.hpp"

namespace graphvar {

namespace {

double min_edge_weight_touching_active(const WeightedGraph& g, const DirichletDomain& d) {
  double wmin = std::numeric_limits<double>::infinity();
  for (const auto& e : g.edges()) {
    if (d.is_active(e.a) || d.is_active(e.b)) wmin = std::min(wmin, e.w);
  }
  if (!std::isfinite(wmin)) throw Error("no edge touches Omega u dOmega");
  return wmin;
}

double checked_value(const EmbeddingConstant& c) {
  if (!(c.value > 0.0) || !std::isfinite(c.value))
    throw Error("embedding constant must be positive and finite");
  return c.value;
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

}  // namespace

const char* constant_source_name(ConstantSource s) {
  switch (s) {
    case ConstantSource::Explicit: return "explicit";
    case ConstantSource::BruteForce: return "brute_force";
    default: return "supplied";
  }
}

EmbeddingConstant explicit_embedding_constant(const WeightedGraph& g,
                                              const DirichletDomain& d, double s) {
  if (!(s >= 2.0))
    throw Error("closed-form embedding constant needs s >= 2; use the brute-force search");
  if (!check_boundary_adjacency(g, d))
    throw Error(
        "closed-form embedding constant needs every interior vertex adjacent to a "
        "boundary vertex; use the brute-force search");
  double mu_omega_min = std::numeric_limits<double>::infinity();
  for (int x : d.interior()) mu_omega_min = std::min(mu_omega_min, g.mu(x));
  double mu_active_max = 0.0;
  for (int x : d.active()) mu_active_max = std::max(mu_active_max, g.mu(x));
  const double wmin = min_edge_weight_touching_active(g, d);
  const double omega = static_cast<double>(d.interior_count());
  const double value = (1.0 + omega) * std::pow(mu_omega_min, -1.0 / s) *
                       std::sqrt(2.0 * mu_active_max / wmin);
  return {value, ConstantSource::Explicit, 1, s,
          std::numeric_limits<double>::quiet_NaN()};
}

namespace {

// One projected-ascent run for the ratio objective(u) / ||u||_{W_0^{m,s}},
// where dobj is the plain partial-derivative field of the numerator on the
// interior. Returns the best ratio seen.
double ascend_ratio(std::vector<double> u0, const WeightedGraph& g,
                    const DirichletDomain& d, const OperatorOrder& order,
                    const std::function<double(const GraphFunction&)>& objective,
                    const std::function<std::vector<double>(const GraphFunction&)>& dobj,
                    int max_iters) {
  const auto& iv = d.interior();
  const size_t n = iv.size();
  GraphFunction u(g.vertex_count());
  u.set_dirichlet(true);
  auto load = [&](const std::vector<double>& x) {
    for (size_t i = 0; i < n; ++i) u[iv[i]] = x[i];
  };
  load(u0);
  double sn = sobolev_norm(u, order, g, d);
  if (!(sn > 0.0)) {
    double any = 0.0;
    for (double v : u0) any += std::abs(v);
    if (any > 0.0)
      throw Error("embedding constant unbounded: nonzero function with zero norm");
    return 0.0;
  }
  for (double& v : u0) v /= sn;
  load(u0);

  double best = objective(u);
  double step = 0.5;
  for (int iter = 0; iter < max_iters; ++iter) {
    // Gradient of the numerator and of the norm constraint, both on interior dofs.
    std::vector<double> go = dobj(u);
    GraphFunction lap = poly_lap_apply(u, order, g, d);
    const double e = norm_power(u, order, nullptr, g, d);
    const double npow = std::pow(e, 1.0 / order.s - 1.0);
    std::vector<double> gc(n);
    for (size_t i = 0; i < n; ++i) gc[i] = npow * g.mu(iv[i]) * lap[iv[i]];
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < n; ++i) {
      num += go[i] * gc[i];
      den += gc[i] * gc[i];
    }
    if (!(den > 0.0)) break;
    std::vector<double> dir(n);
    double dn = 0.0;
    for (size_t i = 0; i < n; ++i) {
      dir[i] = go[i] - (num / den) * gc[i];
      dn += dir[i] * dir[i];
    }
    double gscale = 0.0;
    for (size_t i = 0; i < n; ++i) gscale += go[i] * go[i];
    if (dn <= 1e-28 * (1.0 + gscale)) break;

    bool accepted = false;
    std::vector<double> cand(n);
    GraphFunction ucand(g.vertex_count());
    ucand.set_dirichlet(true);
    for (double t = std::min(step * 2.0, 1e3); t >= 1e-16; t *= 0.5) {
      for (size_t i = 0; i < n; ++i) cand[i] = u0[i] + t * dir[i];
      for (size_t i = 0; i < n; ++i) ucand[iv[i]] = cand[i];
      const double cn = sobolev_norm(ucand, order, g, d);
      if (!(cn > 0.0)) continue;
      for (size_t i = 0; i < n; ++i) {
        cand[i] /= cn;
        ucand[iv[i]] = cand[i];
      }
      const double val = objective(ucand);
      if (val > best * (1.0 + 1e-15) || (best == 0.0 && val > 0.0)) {
        best = val;
        u0 = cand;
        load(u0);
        step = t;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  return best;
}

}  // namespace

EmbeddingConstant brute_force_embedding_constant(const WeightedGraph& g,
                                                 const DirichletDomain& d, int m,
                                                 double s, double r,
                                                 const BruteForceOptions& opts) {
  OperatorOrder order{m, s};
  validate_order(order);
  d.require_closure_for_order(g, m);
  if (!(r >= 1.0)) throw Error("embedding exponent must satisfy r >= 1");
  const auto& iv = d.interior();
  const size_t n = iv.size();

  std::vector<std::vector<double>> seeds;
  seeds.emplace_back(n, 1.0);
  for (size_t i = 0; i < n; ++i) {
    std::vector<double> delta(n, 0.0);
    delta[i] = 1.0;
    seeds.push_back(std::move(delta));
  }
  const int want = std::max<int>(opts.starts, static_cast<int>(seeds.size()));
  for (int k = static_cast<int>(seeds.size()); k < want; ++k) {
    std::mt19937_64 rng(opts.seed * 0x9e3779b97f4a7c15ull + static_cast<unsigned>(k));
    std::vector<double> x(n);
    for (size_t i = 0; i < n; ++i) {
      const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      x[i] = 2.0 * unit - 1.0;
    }
    seeds.push_back(std::move(x));
  }

  double best = 0.0;
  if (std::isinf(r)) {
    // ||u||_inf is a max of linear functionals; ascend u(z) separately per vertex.
    for (size_t zi = 0; zi < n; ++zi) {
      auto objective = [&, zi](const GraphFunction& u) { return std::abs(u[iv[zi]]); };
      auto dobj = [&, zi](const GraphFunction& u) {
        std::vector<double> go(n, 0.0);
        go[zi] = u[iv[zi]] >= 0.0 ? 1.0 : -1.0;
        return go;
      };
      for (const auto& seed : seeds)
        best = std::max(best, ascend_ratio(seed, g, d, order, objective, dobj,
                                           opts.max_iters));
    }
  } else {
    auto objective = [&](const GraphFunction& u) { return lr_norm(u, r, g, d); };
    auto dobj = [&](const GraphFunction& u) {
      const double lr = lr_norm(u, r, g, d);
      std::vector<double> go(n, 0.0);
      if (lr > 0.0) {
        const double f = std::pow(lr, 1.0 - r);
        for (size_t i = 0; i < n; ++i)
          go[i] = f * phi_power(u[iv[i]], r) * g.mu(iv[i]);
      }
      return go;
    };
    for (const auto& seed : seeds)
      best = std::max(best,
                      ascend_ratio(seed, g, d, order, objective, dobj, opts.max_iters));
  }
  if (!(best > 0.0)) throw Error("brute-force embedding search found no nonzero ratio");
  return {best, ConstantSource::BruteForce, m, s, r};
}

EmbeddingConstant finite_graph_constants(const WeightedGraph& g,
                                         const GraphFunction& pot, double s) {
  if (!(s > 1.0)) throw Error("embedding exponent must satisfy s > 1");
  if (pot.size() != g.vertex_count()) throw Error("potential has wrong size for this graph");
  double total = 0.0;
  double amin = std::numeric_limits<double>::infinity();
  for (int x = 0; x < g.vertex_count(); ++x) {
    total += g.mu(x);
    if (!(pot[x] > 0.0))
      throw Error("potential must be strictly positive (vertex '" + g.id(x) + "')");
    amin = std::min(amin, pot[x]);
  }
  const double value = std::pow(total, 1.0 / s) / std::pow(g.mu_min() * amin, 1.0 / s);
  return {value, ConstantSource::Explicit, 1, s, s};
}

std::pair<double, double> system_constants(const SystemParams& P,
                                           const DirichletDomain& d,
                                           const EmbeddingConstant& Cp,
                                           const EmbeddingConstant& Cq) {
  const double cp = checked_value(Cp);
  const double cq = checked_value(Cq);
  const double mx = std::max(P.p, P.q);
  const double apb = P.alpha + P.beta;
  const double a1 = (1.0 - P.lambda1 * std::pow(cp, P.p)) / P.p;
  const double a2 = (1.0 - P.lambda2 * std::pow(cq, P.q)) / P.q;
  const double M = std::pow(2.0, 1.0 - mx) * std::min(a1, a2);
  const double M2 = P.C0(d) / (apb * apb) *
                    (P.alpha * std::pow(cp, apb) + P.beta * std::pow(cq, apb));
  return {M, M2};
}

double HypothesisReport::envelope(double t) const {
  return M_lambda * std::pow(t, max_pq) - M2 * std::pow(t, sum_alpha_beta) - lhs;
}

double HypothesisReport::envelope_second(double t) const {
  return M_lambda * max_pq * (max_pq - 1.0) * std::pow(t, max_pq - 2.0) -
         M2 * sum_alpha_beta * (sum_alpha_beta - 1.0) * std::pow(t, sum_alpha_beta - 2.0);
}

HypothesisReport check_system_hypotheses(const SystemParams& P, const WeightedGraph& g,
                                         const DirichletDomain& d,
                                         const EmbeddingConstant& Cp,
                                         const EmbeddingConstant& Cq,
                                         std::optional<double> h1_norm_pow,
                                         std::optional<double> h2_norm_pow,
                                         std::optional<double> C0_override) {
  P.validate(g, d);
  HypothesisReport rep;
  rep.kind = HypothesisReport::Kind::System;
  const double cp = checked_value(Cp);
  const double cq = checked_value(Cq);
  rep.max_pq = std::max(P.p, P.q);
  rep.sum_alpha_beta = P.alpha + P.beta;
  auto [M, M2] = system_constants(P, d, Cp, Cq);
  if (C0_override) {
    if (!(*C0_override > 0.0)) throw Error("C0 must be positive");
    const double apb = P.alpha + P.beta;
    M2 = *C0_override / (apb * apb) *
         (P.alpha * std::pow(cp, apb) + P.beta * std::pow(cq, apb));
  }
  rep.M_lambda = M;
  rep.M2 = M2;

  double h1p = 0.0, h2p = 0.0;
  if (h1_norm_pow) {
    h1p = *h1_norm_pow;
  } else {
    const double e1 = P.p / (P.p - P.gamma1);
    for (int x : d.interior()) h1p += std::pow(P.h1[x], e1) * g.mu(x);
  }
  if (h2_norm_pow) {
    h2p = *h2_norm_pow;
  } else {
    const double e2 = P.q / (P.q - P.gamma2);
    for (int x : d.interior()) h2p += std::pow(P.h2[x], e2) * g.mu(x);
  }
  rep.lhs = P.lambda1 * (P.p - P.gamma1) / (P.p * P.gamma1) * h1p +
            P.lambda2 * (P.q - P.gamma2) / (P.q * P.gamma2) * h2p;

  const double mx = rep.max_pq;
  const double apb = rep.sum_alpha_beta;
  const double k = apb - mx;
  rep.rhs = (k / apb) * std::pow(M, apb / k) * std::pow(mx / (apb * M2), mx / k);
  rep.rho = M > 0.0 ? std::pow(mx * M / (apb * M2), 1.0 / k)
                    : std::numeric_limits<double>::quiet_NaN();

  rep.cond1 = P.lambda1 > 0.0 && P.lambda1 * std::pow(cp, P.p) < 1.0;
  rep.cond2 = P.lambda2 > 0.0 && P.lambda2 * std::pow(cq, P.q) < 1.0;
  rep.cond3 = M <= (apb / mx) * M2;
  rep.cond4 = rep.lhs < rep.rhs;
  rep.all_ok = rep.cond1 && rep.cond2 && rep.cond3 && rep.cond4;
  return rep;
}

EquationThresholds equation_thresholds(const EquationParams& P, const DirichletDomain& d,
                                       const EmbeddingConstant& C) {
  const double cv = checked_value(C);
  const double H0 = P.H0(d);
  const double C0 = P.C0(d);
  const double p = P.p, gam = P.gamma, al = P.alpha;
  EquationThresholds t;
  const double d1 = C0 * std::pow(cv, al);
  t.lambda0 = (p - gam) / H0 * std::pow(cv, -gam) *
              std::pow(std::pow(d1, p - al) * std::pow(al - p, al - p) *
                           std::pow(al - gam, gam - al),
                       1.0 / (p - gam));
  t.lambda_star = gam * (al - p) / (p * al * H0 * std::pow(cv, gam)) *
                  std::pow(d1, (p - gam) / (p - al));
  t.lambda_star_star = std::min(t.lambda0, t.lambda_star);
  return t;
}

HypothesisReport check_equation_hypotheses(const EquationParams& P,
                                           const WeightedGraph& g,
                                           const DirichletDomain& d,
                                           const EmbeddingConstant& C) {
  P.validate(g, d);
  HypothesisReport rep;
  rep.kind = HypothesisReport::Kind::Equation;
  EquationThresholds t = equation_thresholds(P, d, C);
  rep.lambda = P.lambda;
  rep.lambda0 = t.lambda0;
  rep.lambda_star = t.lambda_star;
  rep.lambda_star_star = t.lambda_star_star;
  rep.cond1 = P.lambda > 0.0 && P.lambda < t.lambda_star_star;
  rep.all_ok = rep.cond1;
  return rep;
}

bool fibering_two_root_condition(const EquationParams& P, const DirichletDomain& d,
                                 const EmbeddingConstant& C) {
  const double cv = checked_value(C);
  const double p = P.p, gam = P.gamma, al = P.alpha;
  const double d1 = P.C0(d) * std::pow(cv, al);
  const double d2 = P.lambda * P.H0(d) * std::pow(cv, gam);
  const double lhs = std::pow(d1, al - p) * std::pow(d2, p - gam);
  const double rhs = std::pow(p - gam, p - gam) * std::pow(al - p, al - p) *
                     std::pow(al - gam, gam - al);
  return lhs <= rhs;
}

double semi_trivial_bound(const SystemParams& P, SystemSide side,
                          const EmbeddingConstant& C, const DirichletDomain& d) {
  const double cv = checked_value(C);
  if (side == SystemSide::U) {
    if (!(P.lambda1 > 0.0)) throw Error("semi-trivial bound needs lambda1 > 0");
    return std::pow(P.lambda1 * P.H1(d) * std::pow(cv, P.gamma1),
                    1.0 / (P.p - P.gamma1));
  }
  if (!(P.lambda2 > 0.0)) throw Error("semi-trivial bound needs lambda2 > 0");
  return std::pow(P.lambda2 * P.H2(d) * std::pow(cv, P.gamma2), 1.0 / (P.q - P.gamma2));
}

std::string serialize_report(const HypothesisReport& r, bool full) {
  std::ostringstream out;
  if (r.kind == HypothesisReport::Kind::System) {
    out << "M_lambda = " << format_number(r.M_lambda) << "\n";
    out << "M2 = " << format_number(r.M2) << "\n";
    out << "rho = " << format_number(r.rho) << "\n";
    out << "lhs = " << format_number(r.lhs) << "\n";
    out << "rhs = " << format_number(r.rhs) << "\n";
    out << "cond1 = " << fmt_bool(r.cond1) << "\n";
    out << "cond2 = " << fmt_bool(r.cond2) << "\n";
    out << "cond3 = " << fmt_bool(r.cond3) << "\n";
    out << "cond4 = " << fmt_bool(r.cond4) << "\n";
    if (full) {
      out << "max_pq = " << format_number(r.max_pq) << "\n";
      out << "sum_alpha_beta = " << format_number(r.sum_alpha_beta) << "\n";
      out << "ball_margin = " << format_number(r.rhs - r.lhs) << "\n";
      out << "all_ok = " << fmt_bool(r.all_ok) << "\n";
    }
  } else {
    out << "lambda0 = " << format_number(r.lambda0) << "\n";
    out << "lambda_star = " << format_number(r.lambda_star) << "\n";
    out << "lambda_star_star = " << format_number(r.lambda_star_star) << "\n";
    out << "cond1 = " << fmt_bool(r.cond1) << "\n";
    if (full) {
      out << "lambda = " << format_number(r.lambda) << "\n";
      out << "all_ok = " << fmt_bool(r.all_ok) << "\n";
    }
  }
  return out.str();
}

RationalHypothesisReport check_system_hypotheses_exact(const RationalSystemInputs& in) {
  const Rational p = in.p, q = in.q;
  const Rational mx = max(p, q);
  const Rational apb = in.alpha + in.beta;
  const long long pe = require_integer(p, "p");
  const long long qe = require_integer(q, "q");
  const long long mxe = require_integer(mx, "max{p,q}");
  const long long apbe = require_integer(apb, "alpha+beta");

  const Rational one(1);
  const Rational a1 = (one - in.lambda1 * in.Cp.pow(pe)) / p;
  const Rational a2 = (one - in.lambda2 * in.Cq.pow(qe)) / q;
  RationalHypothesisReport rep;
  rep.M_lambda = Rational(1, 2).pow(mxe - 1) * min(a1, a2);
  rep.M2 = in.C0 / (apb * apb) * (in.alpha * in.Cp.pow(apbe) + in.beta * in.Cq.pow(apbe));

  rep.lhs = in.lambda1 * (p - in.gamma1) / (p * in.gamma1) * in.h1_norm_pow +
            in.lambda2 * (q - in.gamma2) / (q * in.gamma2) * in.h2_norm_pow;

  const Rational k = apb - mx;
  const long long e1 = require_integer(apb / k, "(alpha+beta)/(alpha+beta-max{p,q})");
  const long long e2 = require_integer(mx / k, "max{p,q}/(alpha+beta-max{p,q})");
  rep.rhs = (k / apb) * rep.M_lambda.pow(e1) * (mx / (apb * rep.M2)).pow(e2);

  const Rational base = mx * rep.M_lambda / (apb * rep.M2);
  if (k == one) {
    rep.rho = base;
    rep.rho_exact = true;
    rep.rho_approx = base.to_double();
  } else {
    rep.rho = Rational(0);
    rep.rho_exact = false;
    rep.rho_approx = base > Rational(0)
                         ? std::pow(base.to_double(), 1.0 / k.to_double())
                         : std::numeric_limits<double>::quiet_NaN();
  }

  rep.cond1 = in.lambda1 > Rational(0) && in.lambda1 * in.Cp.pow(pe) < one;
  rep.cond2 = in.lambda2 > Rational(0) && in.lambda2 * in.Cq.pow(qe) < one;
  rep.cond3 = rep.M_lambda <= (apb / mx) * rep.M2;
  rep.cond4 = rep.lhs < rep.rhs;
  rep.all_ok = rep.cond1 && rep.cond2 && rep.cond3 && rep.cond4;
  return rep;
}

std::string serialize_report(const RationalHypothesisReport& r, bool full) {
  std::ostringstream out;
  out << "M_lambda = " << r.M_lambda.str() << "\n";
  out << "M2 = " << r.M2.str() << "\n";
  if (r.rho_exact)
    out << "rho = " << r.rho.str() << "\n";
  else
    out << "rho = " << format_number(r.rho_approx) << "\n";
  out << "lhs = " << r.lhs.str() << "\n";
  out << "rhs = " << r.rhs.str() << "\n";
  out << "cond1 = " << fmt_bool(r.cond1) << "\n";
  out << "cond2 = " << fmt_bool(r.cond2) << "\n";
  out << "cond3 = " << fmt_bool(r.cond3) << "\n";
  out << "cond4 = " << fmt_bool(r.cond4) << "\n";
  if (full) out << "all_ok = " << fmt_bool(r.all_ok) << "\n";
  return out.str();
}

}  // namespace graphvar
