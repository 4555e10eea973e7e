#include "graphvar/solvers.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace graphvar {

namespace {

using Vec = std::vector<double>;

double uniform_pm1(std::mt19937_64& rng) {
  return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
}

std::mt19937_64 start_rng(unsigned long long seed, int which) {
  return std::mt19937_64((seed << 1) ^
                         (0x9e3779b97f4a7c15ull * (static_cast<unsigned long long>(which) + 1)));
}

double sup_abs(const Vec& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

// Packed interior-dof view of the system problem: x = (u restricted to Omega,
// v restricted to Omega).
struct SystemView {
  const SystemParams& P;
  const WeightedGraph& g;
  const DirichletDomain& d;
  std::vector<int> iv;
  size_t n;

  SystemView(const SystemParams& P_, const WeightedGraph& g_, const DirichletDomain& d_)
      : P(P_), g(g_), d(d_), iv(d_.interior().begin(), d_.interior().end()),
        n(iv.size()) {}

  void unpack(const Vec& x, GraphFunction& u, GraphFunction& v) const {
    u = GraphFunction(g.vertex_count());
    v = GraphFunction(g.vertex_count());
    for (size_t i = 0; i < n; ++i) {
      u[iv[i]] = x[i];
      v[iv[i]] = x[n + i];
    }
    u.set_dirichlet(true);
    v.set_dirichlet(true);
  }

  double energy(const Vec& x) const {
    GraphFunction u, v;
    unpack(x, u, v);
    return energy_system(u, v, P, g, d);
  }

  Vec grad(const Vec& x) const {
    GraphFunction u, v;
    unpack(x, u, v);
    auto [gu, gv] = grad_system(u, v, P, g, d);
    Vec out(2 * n);
    for (size_t i = 0; i < n; ++i) {
      out[i] = gu[iv[i]];
      out[n + i] = gv[iv[i]];
    }
    return out;
  }

  double dot(const Vec& a, const Vec& b) const {
    double s = 0.0;
    for (size_t i = 0; i < n; ++i)
      s += (a[i] * b[i] + a[n + i] * b[n + i]) * g.mu(iv[i]);
    return s;
  }

  double wnorm(const Vec& x) const {
    GraphFunction u, v;
    unpack(x, u, v);
    return problem_norm(u, {P.m1, P.p}, P.pot_u ? &*P.pot_u : nullptr, g, d) +
           problem_norm(v, {P.m2, P.q}, P.pot_v ? &*P.pot_v : nullptr, g, d);
  }
};

struct EquationView {
  const EquationParams& P;
  const WeightedGraph& g;
  const DirichletDomain& d;
  std::vector<int> iv;
  size_t n;

  EquationView(const EquationParams& P_, const WeightedGraph& g_,
               const DirichletDomain& d_)
      : P(P_), g(g_), d(d_), iv(d_.interior().begin(), d_.interior().end()),
        n(iv.size()) {}

  GraphFunction unpack(const Vec& x) const {
    GraphFunction u(g.vertex_count());
    for (size_t i = 0; i < n; ++i) u[iv[i]] = x[i];
    u.set_dirichlet(true);
    return u;
  }

  double energy(const Vec& x) const { return energy_equation(unpack(x), P, g, d); }

  Vec grad(const Vec& x) const {
    GraphFunction gu = grad_equation(unpack(x), P, g, d);
    Vec out(n);
    for (size_t i = 0; i < n; ++i) out[i] = gu[iv[i]];
    return out;
  }

  double dot(const Vec& a, const Vec& b) const {
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) s += a[i] * b[i] * g.mu(iv[i]);
    return s;
  }

  double norm(const Vec& x) const {
    return problem_norm(unpack(x), {P.m, P.p}, P.pot ? &*P.pot : nullptr, g, d);
  }
};

struct IterStats {
  long iters = 0;
  bool converged = false;
  double f = std::numeric_limits<double>::quiet_NaN();
  double gn = std::numeric_limits<double>::infinity();
};

// Projected-gradient descent with Armijo backtracking. The Armijo test uses
// the first-order decrease predicted by the mu-weighted inner product of the
// gradient with the realized (projected) displacement.
template <class EnergyFn, class GradFn, class DotFn, class ProjFn>
IterStats descend(const EnergyFn& energy, const GradFn& grad, const DotFn& dot, Vec& x,
                  const SolveConfig& cfg, long budget, const ProjFn& project) {
  project(x);
  double f = energy(x);
  double step = cfg.step_init;
  IterStats st;
  const size_t N = x.size();
  Vec cand(N), diff(N);
  for (long it = 0; it < budget; ++it) {
    Vec gv = grad(x);
    const double gn = std::sqrt(dot(gv, gv));
    st.iters = it + 1;
    st.f = f;
    st.gn = gn;
    if (gn <= cfg.grad_tol) {
      st.converged = true;
      return st;
    }
    bool accepted = false;
    for (double t = std::min(step / cfg.backtrack_factor, 1e6); t >= 1e-18;
         t *= cfg.backtrack_factor) {
      for (size_t i = 0; i < N; ++i) cand[i] = x[i] - t * gv[i];
      project(cand);
      for (size_t i = 0; i < N; ++i) diff[i] = x[i] - cand[i];
      const double pred = dot(gv, diff);
      if (!(pred > 0.0)) continue;
      const double fc = energy(cand);
      if (fc <= f - cfg.armijo_c * pred) {
        x = cand;
        f = fc;
        step = t;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      st.f = f;
      return st;
    }
  }
  Vec gv = grad(x);
  st.gn = std::sqrt(dot(gv, gv));
  st.f = f;
  st.converged = st.gn <= cfg.grad_tol;
  return st;
}

// Damped Newton iteration on the gradient map. The Jacobian action is built
// from central differences of the analytic gradient; the linear solve adds an
// escalating diagonal shift when the matrix is singular.
template <class GradFn, class DotFn>
bool newton_polish(const GradFn& grad, const DotFn& dot, Vec& x, double grad_tol,
                   long& iters, int max_steps = 80) {
  const size_t N = x.size();
  if (N == 0) return true;
  Vec gv = grad(x);
  double gn = std::sqrt(dot(gv, gv));
  for (int s = 0; s < max_steps && gn > grad_tol; ++s) {
    ++iters;
    const double xscale = sup_abs(x);
    const double hfloor = std::max(1e-8, 1e-3 * xscale);
    Eigen::MatrixXd J(N, N);
    Vec xp = x, xm = x;
    for (size_t j = 0; j < N; ++j) {
      const double h = 1e-6 * std::max(std::abs(x[j]), hfloor);
      xp[j] = x[j] + h;
      xm[j] = x[j] - h;
      Vec gp = grad(xp), gm = grad(xm);
      for (size_t i = 0; i < N; ++i) J(i, j) = (gp[i] - gm[i]) / (2.0 * h);
      xp[j] = x[j];
      xm[j] = x[j];
    }
    Eigen::VectorXd rhs(N);
    for (size_t i = 0; i < N; ++i) rhs(static_cast<long>(i)) = -gv[i];
    Eigen::VectorXd sv;
    bool solved = false;
    double shift = 0.0;
    for (int attempt = 0; attempt < 8 && !solved; ++attempt) {
      Eigen::MatrixXd Js = J;
      for (size_t i = 0; i < N; ++i) Js(static_cast<long>(i), static_cast<long>(i)) += shift;
      Eigen::FullPivLU<Eigen::MatrixXd> lu(Js);
      if (lu.isInvertible()) {
        sv = lu.solve(rhs);
        solved = sv.allFinite();
      }
      shift = shift == 0.0 ? 1e-10 * (1.0 + J.cwiseAbs().maxCoeff()) : shift * 100.0;
    }
    if (!solved) return gn <= grad_tol;
    bool accepted = false;
    Vec candv(N);
    for (double t = 1.0; t >= 1.0 / 1024.0; t *= 0.5) {
      for (size_t i = 0; i < N; ++i) candv[i] = x[i] + t * sv(static_cast<long>(i));
      Vec gc = grad(candv);
      const double gcn = std::sqrt(dot(gc, gc));
      if (gcn <= grad_tol || gcn < gn * (1.0 - 0.2 * t)) {
        x = candv;
        gv = gc;
        gn = gcn;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  return gn <= grad_tol;
}

// All-ones interior direction with each component normalized to unit problem
// norm, so || z * (du, dv) ||_W = 2z along the ray.
Vec ones_direction(const SystemView& S) {
  GraphFunction u1(S.g.vertex_count()), v1(S.g.vertex_count());
  for (int x : S.d.interior()) {
    u1[x] = 1.0;
    v1[x] = 1.0;
  }
  u1.set_dirichlet(true);
  v1.set_dirichlet(true);
  const double nu = problem_norm(u1, {S.P.m1, S.P.p},
                                 S.P.pot_u ? &*S.P.pot_u : nullptr, S.g, S.d);
  const double nv = problem_norm(v1, {S.P.m2, S.P.q},
                                 S.P.pot_v ? &*S.P.pot_v : nullptr, S.g, S.d);
  if (!(nu > 0.0) || !(nv > 0.0))
    throw Error("all-ones direction has zero norm; domain admits no Poincare bound");
  double coupling = 0.0;
  for (int x : S.d.interior()) coupling += S.P.c[x] * S.g.mu(x);
  if (!(coupling > 0.0)) throw Error("coupling term vanishes on the initial direction");
  Vec dir(2 * S.n);
  for (size_t i = 0; i < S.n; ++i) {
    dir[i] = 1.0 / nu;
    dir[S.n + i] = 1.0 / nv;
  }
  return dir;
}

struct Candidate {
  Vec x;
  double f = std::numeric_limits<double>::quiet_NaN();
  double gn = std::numeric_limits<double>::infinity();
  long iters = 0;
  bool ok = false;
};

}  // namespace

void SolveConfig::validate() const {
  if (!(grad_tol > 0.0)) throw Error("grad_tol must be positive");
  if (max_iters < 1) throw Error("max_iters must be positive");
  if (path_points < 2) throw Error("path_points must be at least 2");
  if (starts < 1) throw Error("starts must be positive");
  if (!(step_init > 0.0)) throw Error("step_init must be positive");
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0))
    throw Error("backtrack_factor must lie in (0,1)");
  if (!(armijo_c > 0.0 && armijo_c < 1.0)) throw Error("armijo_c must lie in (0,1)");
  if (jobs < 1) throw Error("jobs must be positive");
}

const char* classification_name(Classification c) {
  switch (c) {
    case Classification::PositiveEnergy: return "positive_energy";
    case Classification::NegativeEnergy: return "negative_energy";
    default: return "ground_state_candidate";
  }
}

SolveReport solve_negative(const SystemParams& P, const WeightedGraph& g,
                           const DirichletDomain& d, double rho,
                           const SolveConfig& cfg, bool hypotheses_ok) {
  cfg.validate();
  P.validate(g, d);
  if (!(rho > 0.0) || !std::isfinite(rho)) throw Error("rho must be positive and finite");
  SystemView S(P, g, d);
  const Vec dir = ones_direction(S);

  // Lowest energy along the admissible part of the ray picks the start.
  double best_z = 0.0;
  double best_f = std::numeric_limits<double>::infinity();
  Vec probe(2 * S.n);
  for (int k = 0; k <= 48; ++k) {
    const double z = (rho / 2.0) * std::pow(0.5, k);
    for (size_t i = 0; i < probe.size(); ++i) probe[i] = z * dir[i];
    const double f = S.energy(probe);
    if (f < best_f) {
      best_f = f;
      best_z = z;
    }
  }
  Vec x(2 * S.n);
  for (size_t i = 0; i < x.size(); ++i) x[i] = best_z * dir[i];

  auto project = [&](Vec& y) {
    const double wn = S.wnorm(y);
    if (wn > rho) {
      const double sc = rho / wn;
      for (double& v : y) v *= sc;
    }
  };
  auto energy = [&](const Vec& y) { return S.energy(y); };
  auto grad = [&](const Vec& y) { return S.grad(y); };
  auto dot = [&](const Vec& a, const Vec& b) { return S.dot(a, b); };

  IterStats st = descend(energy, grad, dot, x, cfg, cfg.max_iters, project);
  long iters = st.iters;
  if (!st.converged && st.gn < 1e-3) {
    Vec xn = x;
    if (newton_polish(grad, dot, xn, cfg.grad_tol, iters) &&
        S.wnorm(xn) <= rho * (1.0 + 1e-12)) {
      x = xn;
    }
  }

  SolveReport rep;
  S.unpack(x, rep.u, rep.v);
  rep.has_v = true;
  Vec gv = S.grad(x);
  rep.grad_norm = std::sqrt(S.dot(gv, gv));
  rep.energy = S.energy(x);
  rep.iterations = iters;
  rep.converged = rep.grad_norm <= cfg.grad_tol;
  const double wn = S.wnorm(x);
  rep.rho = rho;
  rep.within_rho_ball = wn <= rho * (1.0 + 1e-12);
  rep.trivial = wn <= 1e-8 * std::max(1.0, rho);
  rep.classification = Classification::NegativeEnergy;
  rep.hypotheses_verified = hypotheses_ok;
  rep.seed = cfg.seed;
  return rep;
}

namespace {

// Resamples a piecewise-linear path to equidistant points in the mu-weighted
// metric, keeping both endpoints fixed.
template <class DotFn>
void respread(std::vector<Vec>& states, const DotFn& dot) {
  const size_t npts = states.size();
  if (npts < 3) return;
  const size_t dim = states[0].size();
  std::vector<double> cum(npts, 0.0);
  Vec diff(dim);
  for (size_t i = 1; i < npts; ++i) {
    for (size_t j = 0; j < dim; ++j) diff[j] = states[i][j] - states[i - 1][j];
    cum[i] = cum[i - 1] + std::sqrt(dot(diff, diff));
  }
  const double total = cum[npts - 1];
  if (!(total > 0.0)) return;
  std::vector<Vec> out(npts);
  out[0] = states[0];
  out[npts - 1] = states[npts - 1];
  size_t seg = 1;
  for (size_t i = 1; i + 1 < npts; ++i) {
    const double target = total * static_cast<double>(i) / static_cast<double>(npts - 1);
    while (seg + 1 < npts && cum[seg] < target) ++seg;
    const double len = cum[seg] - cum[seg - 1];
    const double w = len > 0.0 ? (target - cum[seg - 1]) / len : 0.0;
    Vec pt(dim);
    for (size_t j = 0; j < dim; ++j)
      pt[j] = (1.0 - w) * states[seg - 1][j] + w * states[seg][j];
    out[i] = std::move(pt);
  }
  states = std::move(out);
}

}  // namespace

SolveReport solve_mountain_pass(const SystemParams& P, const WeightedGraph& g,
                                const DirichletDomain& d, const SolveConfig& cfg,
                                double rho, bool hypotheses_ok) {
  cfg.validate();
  P.validate(g, d);
  if (!(rho > 0.0) || !std::isfinite(rho)) throw Error("rho must be positive and finite");
  SystemView S(P, g, d);
  const Vec dir = ones_direction(S);
  auto grad = [&](const Vec& y) { return S.grad(y); };
  auto dot = [&](const Vec& a, const Vec& b) { return S.dot(a, b); };

  // Far endpoint: negative energy outside the rho-ball.
  double z = std::max(1.0, rho);
  bool found = false;
  Vec e(2 * S.n);
  for (int k = 0; k < 200 && !found; ++k) {
    for (size_t i = 0; i < e.size(); ++i) e[i] = z * dir[i];
    found = 2.0 * z > rho && S.energy(e) < 0.0;
    if (!found) z *= 2.0;
  }
  SolveReport rep;
  rep.has_v = true;
  rep.classification = Classification::PositiveEnergy;
  rep.hypotheses_verified = hypotheses_ok;
  rep.seed = cfg.seed;
  rep.rho = rho;
  if (!found) {
    S.unpack(Vec(2 * S.n, 0.0), rep.u, rep.v);
    rep.converged = false;
    return rep;
  }
  z *= 2.0;
  for (size_t i = 0; i < e.size(); ++i) e[i] = z * dir[i];

  const int npts = std::max(5, cfg.path_points);
  const double switch_tol = std::max(1e-4, 100.0 * cfg.grad_tol);
  const long deform_budget = std::max(2000L, cfg.max_iters / 10);

  std::vector<Candidate> results(static_cast<size_t>(cfg.starts));

#pragma omp parallel for num_threads(cfg.jobs) schedule(static, 1)
  for (int attempt = 0; attempt < cfg.starts; ++attempt) {
    Candidate cand;
    try {
      std::vector<Vec> states(static_cast<size_t>(npts));
      for (int i = 0; i < npts; ++i) {
        states[static_cast<size_t>(i)].resize(2 * S.n);
        const double w = static_cast<double>(i) / static_cast<double>(npts - 1);
        for (size_t j = 0; j < 2 * S.n; ++j)
          states[static_cast<size_t>(i)][j] = w * e[j];
      }
      if (attempt > 0) {
        auto rng = start_rng(cfg.seed, attempt);
        const double scale =
            0.05 * sup_abs(e) * static_cast<double>(attempt) / cfg.starts;
        for (int i = 1; i + 1 < npts; ++i)
          for (size_t j = 0; j < 2 * S.n; ++j)
            states[static_cast<size_t>(i)][j] += scale * uniform_pm1(rng);
      }
      std::vector<double> ef(static_cast<size_t>(npts));
      for (int i = 0; i < npts; ++i) ef[static_cast<size_t>(i)] = S.energy(states[static_cast<size_t>(i)]);

      // Tangent at an inner point: normalized secant through its neighbors.
      auto tangent = [&](size_t i) {
        Vec t(2 * S.n);
        for (size_t j = 0; j < 2 * S.n; ++j)
          t[j] = states[i + 1][j] - states[i - 1][j];
        const double tn = std::sqrt(dot(t, t));
        if (tn > 0.0)
          for (double& v : t) v /= tn;
        return t;
      };

      // Climbing-image deformation: the highest point follows the gradient
      // with its tangential component reflected (uphill along the path,
      // downhill across it); every other inner point relaxes only orthogonal
      // to the path, so the path cannot drain over the ridge.
      double step = cfg.step_init;
      long moves = 0;
      double best_gkn = std::numeric_limits<double>::infinity();
      int stalled = 0;
      for (; moves < deform_budget; ++moves) {
        size_t k = 1;
        for (size_t i = 2; i + 1 < states.size(); ++i)
          if (ef[i] > ef[k]) k = i;
        Vec gk = S.grad(states[k]);
        double gkn = std::sqrt(S.dot(gk, gk));
        if (gkn <= switch_tol) break;
        if (gkn < 0.999 * best_gkn) {
          best_gkn = gkn;
          stalled = 0;
        } else if (++stalled >= 30) {
          break;  // ridge estimate stopped improving, let Newton finish
        }

        bool any_move = false;
        for (size_t i = 1; i + 1 < states.size(); ++i) {
          const Vec tau = tangent(i);
          Vec gv = i == k ? gk : S.grad(states[i]);
          const double gt = dot(gv, tau);
          Vec dirv(2 * S.n);
          if (i == k) {
            for (size_t j = 0; j < 2 * S.n; ++j) dirv[j] = gv[j] - 2.0 * gt * tau[j];
          } else {
            for (size_t j = 0; j < 2 * S.n; ++j) dirv[j] = gv[j] - gt * tau[j];
          }
          const double dn2 = dot(dirv, dirv);
          if (!(dn2 > 0.0)) continue;
          for (double t = std::min(step / cfg.backtrack_factor, 1e3); t >= 1e-18;
               t *= cfg.backtrack_factor) {
            Vec trial(2 * S.n);
            for (size_t j = 0; j < 2 * S.n; ++j) trial[j] = states[i][j] - t * dirv[j];
            if (i == k) {
              // Climbing accepts on gradient-norm decrease.
              Vec gc = S.grad(trial);
              const double gcn = std::sqrt(S.dot(gc, gc));
              if (gcn < gkn) {
                states[i] = std::move(trial);
                ef[i] = S.energy(states[i]);
                step = t;
                any_move = true;
                break;
              }
            } else {
              const double fc = S.energy(trial);
              if (fc <= ef[i] - cfg.armijo_c * t * dn2) {
                states[i] = std::move(trial);
                ef[i] = fc;
                any_move = true;
                break;
              }
            }
          }
        }
        if (!any_move) break;
        if (moves % 8 == 7) {
          respread(states, dot);
          for (int i = 0; i < npts; ++i)
            ef[static_cast<size_t>(i)] = S.energy(states[static_cast<size_t>(i)]);
        }
      }

      size_t k = 1;
      for (size_t i = 2; i + 1 < states.size(); ++i)
        if (ef[i] > ef[k]) k = i;
      cand.x = states[k];
      cand.iters = moves;
      const bool polished = newton_polish(grad, dot, cand.x, cfg.grad_tol, cand.iters, 120);
      Vec gv = S.grad(cand.x);
      cand.gn = std::sqrt(S.dot(gv, gv));
      cand.f = S.energy(cand.x);
      cand.ok = polished && cand.gn <= cfg.grad_tol && cand.f > 0.0 &&
                sup_abs(cand.x) > 1e-12 * sup_abs(e);
    } catch (const std::exception&) {
      cand.ok = false;
    }
    results[static_cast<size_t>(attempt)] = std::move(cand);
  }

  // Deterministic merge: lowest gradient norm, then lowest energy.
  const Candidate* best = nullptr;
  for (const auto& c : results) {
    if (c.x.empty()) continue;
    if (best == nullptr) {
      best = &c;
      continue;
    }
    if (c.ok != best->ok) {
      if (c.ok) best = &c;
      continue;
    }
    if (c.gn < best->gn || (c.gn == best->gn && c.f < best->f)) best = &c;
  }
  if (best == nullptr) {
    S.unpack(Vec(2 * S.n, 0.0), rep.u, rep.v);
    rep.converged = false;
    return rep;
  }
  S.unpack(best->x, rep.u, rep.v);
  rep.energy = best->f;
  rep.grad_norm = best->gn;
  rep.iterations = best->iters;
  rep.converged = best->ok;
  const double wn = S.wnorm(best->x);
  rep.within_rho_ball = wn <= rho * (1.0 + 1e-12);
  rep.trivial = wn <= 1e-10;
  return rep;
}

std::pair<double, double> fibering_roots(const FiberingMap& map, double tol) {
  const double A = map.A, B = map.B, C = map.C;
  const double p = map.p, gam = map.gamma, al = map.alpha;
  if (!(A > 0.0)) throw Error("fibering map needs a nonzero function");
  if (!(B > 0.0)) throw Error("fibering map needs a positive convex term");
  if (!(C > 0.0)) throw Error("two-root regime needs a positive concave term");
  if (!(tol > 0.0)) throw Error("tolerance must be positive");
  auto psi = [&](double t) {
    return A * std::pow(t, p - gam) - C - B * std::pow(t, al - gam);
  };
  const double t_top = std::pow((p - gam) * A / ((al - gam) * B), 1.0 / (al - p));
  if (!(psi(t_top) > 0.0))
    throw Error("no two-root regime: lambda too large along this direction");

  auto bisect = [&](double lo, double hi, bool rising) {
    // rising: psi(lo) <= 0 < psi(hi); otherwise psi(lo) > 0 >= psi(hi).
    for (int i = 0; i < 500 && (hi - lo) > tol * hi; ++i) {
      const double mid = 0.5 * (lo + hi);
      const double v = psi(mid);
      if ((v > 0.0) == rising)
        hi = mid;
      else
        lo = mid;
    }
    return 0.5 * (lo + hi);
  };

  double lo = t_top;
  int guard = 0;
  while (psi(lo) > 0.0 && guard++ < 4000) lo *= 0.5;
  if (psi(lo) > 0.0) throw Error("failed to bracket the lower fibering root");
  const double t_plus = bisect(lo, 2.0 * lo, true);

  double hi = t_top;
  guard = 0;
  while (psi(hi) > 0.0 && guard++ < 4000) hi *= 2.0;
  if (psi(hi) > 0.0) throw Error("failed to bracket the upper fibering root");
  const double t_minus = bisect(hi / 2.0, hi, false);

  if (!(map.deriv2(t_plus) > 0.0) || !(map.deriv2(t_minus) < 0.0))
    throw Error("fibering root classification failed");
  return {t_plus, t_minus};
}

std::pair<double, double> fibering_roots(const GraphFunction& u, const EquationParams& P,
                                         const WeightedGraph& g, const DirichletDomain& d,
                                         double tol) {
  return fibering_roots(fibering_map(u, P, g, d), tol);
}

GraphFunction fibering_minus_point(const GraphFunction& u, const EquationParams& P,
                                   const WeightedGraph& g, const DirichletDomain& d,
                                   double tol) {
  const double t_minus = fibering_roots(u, P, g, d, tol).second;
  GraphFunction out = u;
  for (int i = 0; i < out.size(); ++i) out[i] *= t_minus;
  return out;
}

SolveReport solve_ground_state(const EquationParams& P, const WeightedGraph& g,
                               const DirichletDomain& d, const SolveConfig& cfg,
                               bool hypotheses_ok) {
  cfg.validate();
  P.validate(g, d);
  if (!(P.lambda > 0.0))
    throw Error("ground-state search needs lambda > 0 (two-root regime)");
  EquationView E(P, g, d);
  auto energy = [&](const Vec& y) { return E.energy(y); };
  auto grad = [&](const Vec& y) { return E.grad(y); };
  auto dot = [&](const Vec& a, const Vec& b) { return E.dot(a, b); };
  const double switch_tol = std::max(1e-6, 100.0 * cfg.grad_tol);
  const long inner_budget = std::min<long>(cfg.max_iters, 5000);

  std::vector<Candidate> results(static_cast<size_t>(cfg.starts));

#pragma omp parallel for num_threads(cfg.jobs) schedule(static, 1)
  for (int start = 0; start < cfg.starts; ++start) {
    Candidate cand;
    try {
      Vec x(E.n, 1.0);
      if (start > 0) {
        auto rng = start_rng(cfg.seed, start);
        for (double& v : x) v = uniform_pm1(rng);
      }
      double step = cfg.step_init;
      long it = 0;
      for (; it < inner_budget; ++it) {
        const double nrm = E.norm(x);
        if (!(nrm > 0.0)) throw Error("degenerate direction");
        for (double& v : x) v /= nrm;
        const FiberingMap map = fibering_map(E.unpack(x), P, g, d);
        const double t_plus = fibering_roots(map, 1e-13).first;
        for (double& v : x) v *= t_plus;
        Vec gv = grad(x);
        const double gn = std::sqrt(dot(gv, gv));
        if (gn <= switch_tol) break;
        const double f0 = energy(x);
        bool accepted = false;
        for (double t = std::min(step / cfg.backtrack_factor, 1e6); t >= 1e-18;
             t *= cfg.backtrack_factor) {
          Vec trial(E.n);
          for (size_t j = 0; j < E.n; ++j) trial[j] = x[j] - t * gv[j];
          if (energy(trial) <= f0 - cfg.armijo_c * t * gn * gn) {
            x = std::move(trial);
            step = t;
            accepted = true;
            break;
          }
        }
        if (!accepted) break;
      }
      cand.iters = it;
      const bool polished = newton_polish(grad, dot, x, cfg.grad_tol, cand.iters, 120);
      Vec gv = grad(x);
      cand.gn = std::sqrt(dot(gv, gv));
      cand.f = energy(x);
      cand.x = std::move(x);
      if (polished && cand.gn <= cfg.grad_tol && cand.f < 0.0) {
        const NehariClass nc = nehari_classify(E.unpack(cand.x), P, g, d, 1e-8);
        cand.ok = nc.tag == NehariTag::Nplus;
      }
    } catch (const std::exception&) {
      cand.ok = false;
    }
    results[static_cast<size_t>(start)] = std::move(cand);
  }

  // Minimizer tie-break: lowest energy among converged candidates.
  const Candidate* best = nullptr;
  for (const auto& c : results) {
    if (c.x.empty()) continue;
    if (best == nullptr) {
      best = &c;
      continue;
    }
    if (c.ok != best->ok) {
      if (c.ok) best = &c;
      continue;
    }
    if (c.ok ? (c.f < best->f) : (c.gn < best->gn)) best = &c;
  }
  SolveReport rep;
  rep.classification = Classification::GroundStateCandidate;
  rep.hypotheses_verified = hypotheses_ok;
  rep.seed = cfg.seed;
  if (best == nullptr) {
    rep.u = E.unpack(Vec(E.n, 0.0));
    rep.converged = false;
    return rep;
  }
  rep.u = E.unpack(best->x);
  rep.energy = best->f;
  rep.grad_norm = best->gn;
  rep.iterations = best->iters;
  rep.converged = best->ok;
  rep.trivial = sup_abs(best->x) <= 1e-12;
  if (!rep.trivial && best->ok)
    rep.nehari = nehari_classify(rep.u, P, g, d, 1e-8);
  return rep;
}

SolveReport solve_semi_trivial(const SystemParams& P, const WeightedGraph& g,
                               const DirichletDomain& d, const SolveConfig& cfg) {
  cfg.validate();
  P.validate(g, d);
  if (!(P.beta > 1.0)) throw Error("semi-trivial solve needs beta > 1");
  if (!(P.lambda1 > 0.0)) throw Error("semi-trivial solve needs lambda1 > 0");
  SystemView S(P, g, d);
  const size_t n = S.n;

  // Reduced functional of the u component; v stays identically zero, which the
  // coupling power beta > 1 keeps consistent with the full gradient.
  auto to_full = [&](const Vec& xu) {
    Vec full(2 * n, 0.0);
    for (size_t i = 0; i < n; ++i) full[i] = xu[i];
    return full;
  };
  auto energy = [&](const Vec& xu) { return S.energy(to_full(xu)); };
  auto grad = [&](const Vec& xu) {
    Vec gfull = S.grad(to_full(xu));
    return Vec(gfull.begin(), gfull.begin() + static_cast<long>(n));
  };
  auto dot = [&](const Vec& a, const Vec& b) {
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) s += a[i] * b[i] * S.g.mu(S.iv[i]);
    return s;
  };
  auto project = [](Vec&) {};

  GraphFunction u1(g.vertex_count());
  for (int x : d.interior()) u1[x] = 1.0;
  u1.set_dirichlet(true);
  const double nu =
      problem_norm(u1, {P.m1, P.p}, P.pot_u ? &*P.pot_u : nullptr, g, d);

  std::vector<Candidate> results(static_cast<size_t>(cfg.starts) + 1);
  for (int start = 0; start <= cfg.starts; ++start) {
    Candidate cand;
    try {
      Vec x(n);
      if (start == 0) {
        // Lowest energy along the all-ones ray.
        double best_z = 1.0, best_f = std::numeric_limits<double>::infinity();
        for (int k = -8; k <= 48; ++k) {
          const double zz = std::pow(0.5, k) / nu;
          Vec probe(n, zz);
          const double f = energy(probe);
          if (f < best_f) {
            best_f = f;
            best_z = zz;
          }
        }
        x.assign(n, best_z);
      } else {
        auto rng = start_rng(cfg.seed, start);
        for (double& v : x) v = uniform_pm1(rng) / nu;
      }
      IterStats st = descend(energy, grad, dot, x, cfg, cfg.max_iters, project);
      cand.iters = st.iters;
      bool ok = st.converged;
      if (!ok && st.gn < 1e-3) ok = newton_polish(grad, dot, x, cfg.grad_tol, cand.iters);
      Vec gv = grad(x);
      cand.gn = std::sqrt(dot(gv, gv));
      cand.f = energy(x);
      cand.x = std::move(x);
      cand.ok = cand.gn <= cfg.grad_tol && cand.f < 0.0 && sup_abs(cand.x) > 1e-12;
    } catch (const std::exception&) {
      cand.ok = false;
    }
    results[static_cast<size_t>(start)] = std::move(cand);
  }

  const Candidate* best = nullptr;
  for (const auto& c : results) {
    if (c.x.empty()) continue;
    if (best == nullptr) {
      best = &c;
      continue;
    }
    if (c.ok != best->ok) {
      if (c.ok) best = &c;
      continue;
    }
    if (c.ok ? (c.f < best->f) : (c.gn < best->gn)) best = &c;
  }
  SolveReport rep;
  rep.has_v = true;
  rep.classification = Classification::NegativeEnergy;
  rep.hypotheses_verified = true;
  rep.seed = cfg.seed;
  if (best == nullptr) {
    S.unpack(Vec(2 * n, 0.0), rep.u, rep.v);
    rep.converged = false;
    return rep;
  }
  S.unpack(to_full(best->x), rep.u, rep.v);
  rep.energy = best->f;
  rep.grad_norm = best->gn;
  rep.iterations = best->iters;
  rep.converged = best->ok;
  rep.trivial = sup_abs(best->x) <= 1e-12;
  return rep;
}

namespace {

double delta_operator_value(const GraphFunction& u, const OperatorOrder& order,
                            int z, const WeightedGraph& g, const DirichletDomain& d) {
  GraphFunction delta(g.vertex_count());
  delta[z] = 1.0;
  delta.set_dirichlet(true);
  return weak_pairing(u, order, delta, g, d) / g.mu(z);
}

}  // namespace

VerifyRecord verify_system(const GraphFunction& u, const GraphFunction& v,
                           const SystemParams& P, const WeightedGraph& g,
                           const DirichletDomain& d, double tol,
                           const EmbeddingConstant* Cu, const EmbeddingConstant* Cv) {
  P.validate(g, d);
  require_dirichlet(u, d);
  require_dirichlet(v, d);
  VerifyRecord rec;
  rec.tol = tol;

  auto [gu, gv] = grad_system(u, v, P, g, d);
  double w2 = 0.0;
  for (int x : d.interior()) w2 += (gu[x] * gu[x] + gv[x] * gv[x]) * g.mu(x);
  rec.weak_grad_norm = std::sqrt(w2);

  const double wu = P.alpha / (P.alpha + P.beta);
  const double wv = P.beta / (P.alpha + P.beta);
  for (int z : d.interior()) {
    double ru = delta_operator_value(u, {P.m1, P.p}, z, g, d);
    double rv = delta_operator_value(v, {P.m2, P.q}, z, g, d);
    if (P.pot_u) ru += (*P.pot_u)[z] * phi_power(u[z], P.p);
    if (P.pot_v) rv += (*P.pot_v)[z] * phi_power(v[z], P.q);
    ru -= P.lambda1 * P.h1[z] * phi_power(u[z], P.gamma1);
    rv -= P.lambda2 * P.h2[z] * phi_power(v[z], P.gamma2);
    ru -= wu * P.c[z] * phi_power(u[z], P.alpha) * std::pow(std::abs(v[z]), P.beta);
    rv -= wv * P.c[z] * std::pow(std::abs(u[z]), P.alpha) * phi_power(v[z], P.beta);
    rec.residual_u.push_back(std::abs(ru));
    rec.residual_v.push_back(std::abs(rv));
    rec.max_residual_u = std::max(rec.max_residual_u, std::abs(ru));
    rec.max_residual_v = std::max(rec.max_residual_v, std::abs(rv));
  }

  double uinf = 0.0, vinf = 0.0;
  for (int x : d.interior()) {
    uinf = std::max(uinf, std::abs(u[x]));
    vinf = std::max(vinf, std::abs(v[x]));
  }
  const bool u_zero = uinf <= 1e-12 * std::max(1.0, vinf);
  const bool v_zero = vinf <= 1e-12 * std::max(1.0, uinf);
  rec.trivial = u_zero && v_zero;
  if (!rec.trivial && v_zero) rec.semi = VerifyRecord::SemiTrivial::VZero;
  if (!rec.trivial && u_zero) rec.semi = VerifyRecord::SemiTrivial::UZero;

  if (rec.semi == VerifyRecord::SemiTrivial::VZero && Cu != nullptr && P.lambda1 > 0.0) {
    rec.bound = semi_trivial_bound(P, SystemSide::U, *Cu, d);
    const double nrm =
        problem_norm(u, {P.m1, P.p}, P.pot_u ? &*P.pot_u : nullptr, g, d);
    rec.bound_margin = rec.bound - nrm;
  } else if (rec.semi == VerifyRecord::SemiTrivial::UZero && Cv != nullptr &&
             P.lambda2 > 0.0) {
    rec.bound = semi_trivial_bound(P, SystemSide::V, *Cv, d);
    const double nrm =
        problem_norm(v, {P.m2, P.q}, P.pot_v ? &*P.pot_v : nullptr, g, d);
    rec.bound_margin = rec.bound - nrm;
  }

  rec.pass = rec.max_residual_u <= tol && rec.max_residual_v <= tol;
  return rec;
}

VerifyRecord verify_equation(const GraphFunction& u, const EquationParams& P,
                             const WeightedGraph& g, const DirichletDomain& d,
                             double tol) {
  P.validate(g, d);
  require_dirichlet(u, d);
  VerifyRecord rec;
  rec.tol = tol;

  GraphFunction gu = grad_equation(u, P, g, d);
  double w2 = 0.0;
  for (int x : d.interior()) w2 += gu[x] * gu[x] * g.mu(x);
  rec.weak_grad_norm = std::sqrt(w2);

  for (int z : d.interior()) {
    double r = delta_operator_value(u, {P.m, P.p}, z, g, d);
    if (P.pot) r += (*P.pot)[z] * phi_power(u[z], P.p);
    r -= P.lambda * P.h[z] * phi_power(u[z], P.gamma);
    r -= P.c[z] * phi_power(u[z], P.alpha);
    rec.residual_u.push_back(std::abs(r));
    rec.max_residual_u = std::max(rec.max_residual_u, std::abs(r));
  }

  double uinf = 0.0;
  for (int x : d.interior()) uinf = std::max(uinf, std::abs(u[x]));
  rec.trivial = uinf <= 1e-12;
  if (!rec.trivial) rec.nehari = nehari_classify(u, P, g, d, 1e-8);
  rec.pass = rec.max_residual_u <= tol;
  return rec;
}

}  // namespace graphvar
