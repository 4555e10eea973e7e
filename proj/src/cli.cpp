#include "graphvar/cli.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "graphvar/analysis.hpp"
#include "graphvar/config.hpp"
#include "graphvar/graph_io.hpp"
#include "graphvar/solution_io.hpp"
#include "graphvar/solvers.hpp"

namespace graphvar {

namespace {

const char* fmt_bool(bool b) { return b ? "true" : "false"; }

double min_edge_weight(const WeightedGraph& g) {
  double w = std::numeric_limits<double>::infinity();
  for (const auto& e : g.edges()) w = std::min(w, e.w);
  return w;
}

SolveConfig solve_config_with_overrides(const RunConfig& cfg, const CliOptions& opts) {
  SolveConfig sc = make_solve_config(cfg);
  if (opts.starts >= 0) sc.starts = opts.starts;
  if (opts.jobs >= 0) sc.jobs = opts.jobs;
  if (opts.seed >= 0) sc.seed = static_cast<unsigned long long>(opts.seed);
  sc.validate();
  return sc;
}

void print_verify(const VerifyRecord& rec, bool has_v, bool full,
                  const WeightedGraph& g, const DirichletDomain& d,
                  std::ostream& out) {
  out << "weak_grad_norm = " << format_number(rec.weak_grad_norm) << '\n';
  out << "max_residual_u = " << format_number(rec.max_residual_u) << '\n';
  if (has_v) out << "max_residual_v = " << format_number(rec.max_residual_v) << '\n';
  if (full) {
    const auto& iv = d.interior();
    for (size_t i = 0; i < rec.residual_u.size(); ++i) {
      out << "residual " << g.id(iv[i]) << ' ' << format_number(rec.residual_u[i]);
      if (has_v) out << ' ' << format_number(rec.residual_v[i]);
      out << '\n';
    }
  }
  if (rec.trivial) out << "warning = trivial solution (every component vanishes)\n";
  if (rec.semi == VerifyRecord::SemiTrivial::VZero) out << "semi_trivial = v_zero\n";
  if (rec.semi == VerifyRecord::SemiTrivial::UZero) out << "semi_trivial = u_zero\n";
  if (std::isfinite(rec.bound)) {
    out << "norm_bound = " << format_number(rec.bound) << '\n';
    out << "bound_margin = " << format_number(rec.bound_margin) << '\n';
  }
  if (rec.nehari) out << "nehari = " << nehari_tag_name(rec.nehari->tag) << '\n';
  if (!rec.pass) {
    // Name the worst vertex so a corrupted file points at itself.
    const auto& iv = d.interior();
    size_t worst = 0;
    double worst_val = -1.0;
    for (size_t i = 0; i < rec.residual_u.size(); ++i) {
      double v = rec.residual_u[i];
      if (has_v && i < rec.residual_v.size()) v = std::max(v, rec.residual_v[i]);
      if (v > worst_val) {
        worst_val = v;
        worst = i;
      }
    }
    if (worst < iv.size()) out << "worst_vertex = " << g.id(iv[worst]) << '\n';
  }
  out << "tolerance = " << format_number(rec.tol) << '\n';
  out << "pass = " << fmt_bool(rec.pass) << '\n';
}

}  // namespace

int run_check_graph(const std::string& graph_path, std::ostream& out,
                    std::ostream& err) {
  try {
    const LoadedGraph lg = load_graph(graph_path);
    const WeightedGraph& g = lg.graph;
    const DirichletDomain& d = lg.domain;
    out << "vertices = " << g.vertex_count() << '\n';
    out << "edges = " << g.edge_count() << '\n';
    out << "interior = " << d.interior_count() << '\n';
    out << "boundary = " << d.boundary().size() << '\n';
    out << "outside = " << (g.vertex_count() - d.active_count()) << '\n';
    out << "omega_measure = " << format_number(d.omega_measure()) << '\n';
    out << "mu_min = " << format_number(g.mu_min()) << '\n';
    out << "w_min = " << format_number(min_edge_weight(g)) << '\n';
    out << "boundary_adjacent = " << fmt_bool(d.boundary_adjacent()) << '\n';
    out << "closed = " << fmt_bool(d.closed()) << '\n';
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int run_check_hypotheses(const std::string& graph_path, const std::string& config_path,
                         const CliOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    const LoadedGraph lg = load_graph(graph_path);
    const RunConfig cfg = RunConfig::load(config_path);
    const ProblemKind kind = cfg.problem_kind();
    if (opts.rational) {
      if (!is_system_kind(kind))
        throw Error("rational mode covers the system hypothesis chain only");
      const RationalHypothesisReport rep =
          check_system_hypotheses_exact(rational_inputs(cfg));
      out << serialize_report(rep, opts.full);
      return rep.all_ok ? 0 : 2;
    }
    if (is_system_kind(kind)) {
      const SystemParams P = make_system_params(cfg, lg);
      const auto [Cp, Cq] = resolve_system_embedding(cfg, P, lg.graph, lg.domain);
      std::optional<double> h1np, h2np, c0;
      if (cfg.has("h1_norm_pow")) h1np = cfg.get_number("h1_norm_pow");
      if (cfg.has("h2_norm_pow")) h2np = cfg.get_number("h2_norm_pow");
      if (cfg.has("C0")) c0 = cfg.get_number("C0");
      const HypothesisReport rep =
          check_system_hypotheses(P, lg.graph, lg.domain, Cp, Cq, h1np, h2np, c0);
      out << serialize_report(rep, opts.full);
      return rep.all_ok ? 0 : 2;
    }
    const EquationParams P = make_equation_params(cfg, lg);
    const EmbeddingConstant C = resolve_equation_embedding(cfg, P, lg.graph, lg.domain);
    const HypothesisReport rep = check_equation_hypotheses(P, lg.graph, lg.domain, C);
    out << serialize_report(rep, opts.full);
    return rep.all_ok ? 0 : 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int run_solve(const std::string& mode, const std::string& graph_path,
              const std::string& config_path, const std::string& out_path,
              const CliOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    if (mode != "negative" && mode != "mountain-pass" && mode != "ground-state")
      throw Error("unknown mode '" + mode +
                  "' (expected negative, mountain-pass or ground-state)");
    const LoadedGraph lg = load_graph(graph_path);
    const RunConfig cfg = RunConfig::load(config_path);
    const ProblemKind kind = cfg.problem_kind();
    const SolveConfig sc = solve_config_with_overrides(cfg, opts);
    const double verify_tol = cfg.get_number("verify_tol", 1e-7);
    out << "seed = " << sc.seed << '\n';

    SolveReport rep;
    VerifyRecord vrec;
    if (mode == "ground-state") {
      if (is_system_kind(kind)) throw Error("mode requires equation");
      const EquationParams P = make_equation_params(cfg, lg);
      const EmbeddingConstant C =
          resolve_equation_embedding(cfg, P, lg.graph, lg.domain);
      const HypothesisReport hyp =
          check_equation_hypotheses(P, lg.graph, lg.domain, C);
      if (opts.full) out << serialize_report(hyp, true);
      rep = solve_ground_state(P, lg.graph, lg.domain, sc, hyp.all_ok);
      write_solution(out_path, rep, lg.graph, lg.domain);
      vrec = verify_equation(rep.u, P, lg.graph, lg.domain, verify_tol);
    } else {
      if (!is_system_kind(kind)) throw Error("mode requires system");
      const SystemParams P = make_system_params(cfg, lg);
      const auto [Cp, Cq] = resolve_system_embedding(cfg, P, lg.graph, lg.domain);
      std::optional<double> h1np, h2np, c0;
      if (cfg.has("h1_norm_pow")) h1np = cfg.get_number("h1_norm_pow");
      if (cfg.has("h2_norm_pow")) h2np = cfg.get_number("h2_norm_pow");
      if (cfg.has("C0")) c0 = cfg.get_number("C0");
      const HypothesisReport hyp =
          check_system_hypotheses(P, lg.graph, lg.domain, Cp, Cq, h1np, h2np, c0);
      if (opts.full) out << serialize_report(hyp, true);
      const double rho = hyp.all_ok ? hyp.rho : 1.0;
      if (!hyp.all_ok)
        out << "warning = smallness conditions fail; using fallback rho = 1\n";
      if (mode == "negative")
        rep = solve_negative(P, lg.graph, lg.domain, rho, sc, hyp.all_ok);
      else
        rep = solve_mountain_pass(P, lg.graph, lg.domain, sc, rho, hyp.all_ok);
      write_solution(out_path, rep, lg.graph, lg.domain);
      vrec = verify_system(rep.u, rep.v, P, lg.graph, lg.domain, verify_tol, &Cp, &Cq);
    }

    out << "energy = " << format_number(rep.energy) << '\n';
    out << "grad_norm = " << format_number(rep.grad_norm) << '\n';
    out << "iterations = " << rep.iterations << '\n';
    out << "classification = " << classification_name(rep.classification) << '\n';
    out << "converged = " << fmt_bool(rep.converged) << '\n';
    if (mode != "ground-state") {
      out << "rho = " << format_number(rep.rho) << '\n';
      out << "within_rho_ball = " << fmt_bool(rep.within_rho_ball) << '\n';
    }
    if (rep.nehari) out << "nehari = " << nehari_tag_name(rep.nehari->tag) << '\n';
    out << "hypotheses_verified = " << fmt_bool(rep.hypotheses_verified) << '\n';
    if (rep.trivial) out << "warning = solution is trivial\n";
    out << "solution_file = " << out_path << '\n';
    if (!rep.converged) return 3;
    print_verify(vrec, rep.has_v, opts.full, lg.graph, lg.domain, out);
    return vrec.pass ? 0 : 4;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int run_verify(const std::string& graph_path, const std::string& config_path,
               const std::string& solution_path, const CliOptions& opts,
               std::ostream& out, std::ostream& err) {
  try {
    const LoadedGraph lg = load_graph(graph_path);
    const RunConfig cfg = RunConfig::load(config_path);
    const ProblemKind kind = cfg.problem_kind();
    const BoundSolution sol = bind_solution(read_solution(solution_path), lg.graph,
                                            lg.domain);
    const double verify_tol = cfg.get_number("verify_tol", 1e-7);
    VerifyRecord rec;
    if (is_system_kind(kind)) {
      if (!sol.has_v)
        throw Error("system config needs a two-component solution file");
      const SystemParams P = make_system_params(cfg, lg);
      const auto [Cp, Cq] = resolve_system_embedding(cfg, P, lg.graph, lg.domain);
      rec = verify_system(sol.u, sol.v, P, lg.graph, lg.domain, verify_tol, &Cp, &Cq);
    } else {
      if (sol.has_v)
        throw Error("equation config needs a single-component solution file");
      const EquationParams P = make_equation_params(cfg, lg);
      rec = verify_equation(sol.u, P, lg.graph, lg.domain, verify_tol);
    }
    print_verify(rec, sol.has_v, opts.full, lg.graph, lg.domain, out);
    return rec.pass ? 0 : 4;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int run_embedding(const std::string& graph_path, const CliOptions& opts,
                  std::ostream& out, std::ostream& err) {
  try {
    const LoadedGraph lg = load_graph(graph_path);
    EmbeddingConstant c;
    if (opts.brute_force) {
      c = brute_force_embedding_constant(lg.graph, lg.domain, opts.m, opts.s, opts.r);
    } else {
      if (opts.m != 1)
        throw Error(
            "closed-form embedding constant covers only m = 1; use --brute-force");
      c = explicit_embedding_constant(lg.graph, lg.domain, opts.s);
    }
    out << "constant = " << format_number(c.value) << '\n';
    out << "source = " << constant_source_name(c.source) << '\n';
    out << "m = " << c.m << '\n';
    out << "s = " << format_number(c.s) << '\n';
    if (std::isfinite(c.r)) out << "r = " << format_number(c.r) << '\n';
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace graphvar
