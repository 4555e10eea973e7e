#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "graphvar/cli.hpp"
#include "graphvar/solution_io.hpp"

using namespace graphvar;
namespace fs = std::filesystem;

namespace {

#ifndef GRAPHVAR_FIXTURE_DIR
#error "GRAPHVAR_FIXTURE_DIR must point at the fixture directory"
#endif

std::string fixture(const std::string& name) {
  return std::string(GRAPHVAR_FIXTURE_DIR) + "/" + name;
}

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("graphvar_test_" + name);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run check_graph(const std::string& g) {
  std::ostringstream out, err;
  Run r;
  r.code = run_check_graph(g, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

Run check_hyp(const std::string& g, const std::string& c, CliOptions opts = {}) {
  std::ostringstream out, err;
  Run r;
  r.code = run_check_hypotheses(g, c, opts, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

Run solve(const std::string& mode, const std::string& g, const std::string& c,
          const fs::path& sol, CliOptions opts = {}) {
  std::ostringstream out, err;
  Run r;
  r.code = run_solve(mode, g, c, sol.string(), opts, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

Run verify(const std::string& g, const std::string& c, const fs::path& sol,
           CliOptions opts = {}) {
  std::ostringstream out, err;
  Run r;
  r.code = run_verify(g, c, sol.string(), opts, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

Run embedding(const std::string& g, CliOptions opts) {
  std::ostringstream out, err;
  Run r;
  r.code = run_embedding(g, opts, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

}  // namespace

TEST_CASE("check-graph prints the domain summary") {
  const Run r = check_graph(fixture("path2.graph"));
  CHECK(r.code == 0);
  for (const char* key :
       {"vertices = 4", "edges = 3", "interior = 2", "boundary = 2",
        "outside = 0", "omega_measure = 2", "mu_min = 1", "w_min = 1",
        "boundary_adjacent = true", "closed = true"}) {
    CHECK_MESSAGE(r.out.find(key) != std::string::npos, key);
  }
  const Run bad = check_graph("/nonexistent/nowhere.graph");
  CHECK(bad.code == 1);
  CHECK(bad.err.find("error:") != std::string::npos);
}

TEST_CASE("hypothesis check reproduces the worked constants exactly") {
  CliOptions opts;
  opts.rational = true;
  opts.full = true;
  const Run r =
      check_hyp(fixture("single.graph"), fixture("remark_constants.config"), opts);
  CHECK(r.code == 0);
  CHECK(r.out.find("M_lambda = 1/96") != std::string::npos);
  CHECK(r.out.find("M2 = 1/18") != std::string::npos);
  CHECK(r.out.find("rho = 5/32") != std::string::npos);
  CHECK(r.out.find("lhs = 3125/25769803776") != std::string::npos);
  CHECK(r.out.find("rhs = 3125/19327352832") != std::string::npos);
  CHECK(r.out.find("all_ok = true") != std::string::npos);

  // float mode agrees to print precision
  CliOptions fl;
  fl.full = true;
  const Run f =
      check_hyp(fixture("single.graph"), fixture("remark_constants.config"), fl);
  CHECK(f.code == 0);
  CHECK(f.out.find("rho = 0.15625") != std::string::npos);
  CHECK(f.out.find("all_ok = true") != std::string::npos);
}

TEST_CASE("hypothesis check exits 2 when smallness fails, with the full report") {
  // copy the config and blow up lambda1
  const fs::path cfg = temp_file("big_lambda.config");
  std::string text = slurp(fixture("remark_constants.config"));
  text.insert(text.find("lambda1 = 1/5"), "# ");
  text += "\nlambda1 = 10\n";
  spit(cfg, text);
  CliOptions opts;
  opts.rational = true;
  opts.full = true;
  const Run r = check_hyp(fixture("single.graph"), cfg.string(), opts);
  CHECK(r.code == 2);
  CHECK(r.out.find("cond1 = false") != std::string::npos);
  CHECK(r.out.find("all_ok = false") != std::string::npos);
  fs::remove(cfg);
}

TEST_CASE("hypothesis check covers the single equation") {
  CliOptions full;
  full.full = true;
  const Run r =
      check_hyp(fixture("single.graph"), fixture("equation_ground.config"), full);
  CHECK(r.code == 0);
  CHECK(r.out.find("lambda0 = ") != std::string::npos);
  CHECK(r.out.find("lambda_star_star = ") != std::string::npos);
  CHECK(r.out.find("all_ok = true") != std::string::npos);

  // rational mode is reserved for the system chain
  CliOptions opts;
  opts.rational = true;
  const Run e =
      check_hyp(fixture("single.graph"), fixture("equation_ground.config"), opts);
  CHECK(e.code == 1);
  CHECK(e.err.find("system") != std::string::npos);
}

TEST_CASE("solve, write, verify round-trip for every mode") {
  const fs::path neg = temp_file("neg.solution");
  const Run rn = solve("negative", fixture("path2.graph"),
                       fixture("system_small.config"), neg);
  CAPTURE(rn.err);
  CHECK(rn.code == 0);
  CHECK(rn.out.find("classification = negative_energy") != std::string::npos);
  CHECK(rn.out.find("converged = true") != std::string::npos);
  CHECK(rn.out.find("within_rho_ball = true") != std::string::npos);
  CHECK(rn.out.find("pass = true") != std::string::npos);
  CHECK(verify(fixture("path2.graph"), fixture("system_small.config"), neg).code ==
        0);

  const fs::path mp = temp_file("mp.solution");
  const Run rm = solve("mountain-pass", fixture("path2.graph"),
                       fixture("system_small.config"), mp);
  CHECK(rm.code == 0);
  CHECK(rm.out.find("classification = positive_energy") != std::string::npos);
  CHECK(verify(fixture("path2.graph"), fixture("system_small.config"), mp).code ==
        0);

  const fs::path gs = temp_file("gs.solution");
  const Run rg = solve("ground-state", fixture("path2.graph"),
                       fixture("equation_ground.config"), gs);
  CHECK(rg.code == 0);
  CHECK(rg.out.find("classification = ground_state_candidate") != std::string::npos);
  CHECK(rg.out.find("nehari = Nplus") != std::string::npos);
  CHECK(verify(fixture("path2.graph"), fixture("equation_ground.config"), gs).code ==
        0);

  fs::remove(neg);
  fs::remove(mp);
  fs::remove(gs);
}

TEST_CASE("verify exits 4 on a corrupted solution and names the worst vertex") {
  const fs::path sol = temp_file("corrupt.solution");
  const Run rn = solve("negative", fixture("path2.graph"),
                       fixture("system_small.config"), sol);
  REQUIRE(rn.code == 0);

  SolutionData data = read_solution(sol.string());
  for (size_t i = 0; i < data.ids.size(); ++i) {
    if (data.ids[i] == "i0") data.u[i] += 1e-3;
  }
  {
    std::ofstream out(sol);
    for (size_t i = 0; i < data.ids.size(); ++i) {
      out << "value " << data.ids[i] << " " << data.u[i] << " " << data.v[i]
          << "\n";
    }
    out << "energy = " << data.energy << "\n";
    out << "grad_norm = " << data.grad_norm << "\n";
    out << "classification = " << data.classification << "\n";
    out << "seed = " << data.seed << "\n";
  }
  const Run rv = verify(fixture("path2.graph"), fixture("system_small.config"), sol);
  CHECK(rv.code == 4);
  CHECK(rv.out.find("pass = false") != std::string::npos);
  CHECK(rv.out.find("worst_vertex = ") != std::string::npos);
  fs::remove(sol);
}

TEST_CASE("verify accepts the zero solution with a trivial warning") {
  const fs::path sol = temp_file("zero.solution");
  spit(sol,
       "value i0 0 0\nvalue i1 0 0\n"
       "energy = 0\ngrad_norm = 0\nclassification = negative_energy\nseed = 1\n");
  const Run rv = verify(fixture("path2.graph"), fixture("system_small.config"), sol);
  CHECK(rv.code == 0);
  CHECK(rv.out.find("trivial") != std::string::npos);
  fs::remove(sol);
}

TEST_CASE("mode and config kinds must agree") {
  const fs::path sol = temp_file("mismatch.solution");
  const Run r1 = solve("ground-state", fixture("path2.graph"),
                       fixture("system_small.config"), sol);
  CHECK(r1.code == 1);
  CHECK(r1.err.find("equation") != std::string::npos);
  const Run r2 = solve("negative", fixture("path2.graph"),
                       fixture("equation_ground.config"), sol);
  CHECK(r2.code == 1);
  CHECK(r2.err.find("system") != std::string::npos);
  const Run r3 = solve("sideways", fixture("path2.graph"),
                       fixture("system_small.config"), sol);
  CHECK(r3.code == 1);

  // a one-component solution cannot verify a system config
  const fs::path one = temp_file("one.solution");
  spit(one,
       "value i0 0.1\nvalue i1 0.1\n"
       "energy = 0\ngrad_norm = 0\nclassification = negative_energy\nseed = 1\n");
  const Run rv =
      verify(fixture("path2.graph"), fixture("system_small.config"), one);
  CHECK(rv.code == 1);
  CHECK(rv.err.find("two-component") != std::string::npos);
  fs::remove(one);
}

TEST_CASE("repeat solves with one seed write byte-identical files") {
  const fs::path a = temp_file("repeat_a.solution");
  const fs::path b = temp_file("repeat_b.solution");
  CliOptions opts;
  opts.seed = 42;
  CHECK(solve("negative", fixture("path2.graph"), fixture("system_small.config"),
              a, opts)
            .code == 0);
  CHECK(solve("negative", fixture("path2.graph"), fixture("system_small.config"),
              b, opts)
            .code == 0);
  const std::string ta = slurp(a), tb = slurp(b);
  CHECK(ta == tb);
  CHECK(ta.find("seed = 42") != std::string::npos);
  fs::remove(a);
  fs::remove(b);
}

TEST_CASE("solve prints a warning but still runs when smallness fails") {
  // whole-graph equation: hypotheses fail with the explicit constant, yet the
  // solver converges and verification passes
  const fs::path sol = temp_file("finite.solution");
  const Run r = solve("ground-state", fixture("finite2.graph"),
                      fixture("finite_equation.config"), sol);
  CHECK(r.code == 0);
  CHECK(r.out.find("hypotheses_verified = false") != std::string::npos);
  CHECK(r.out.find("pass = true") != std::string::npos);
  fs::remove(sol);

  // system modes additionally fall back to the unit ball with a warning
  const fs::path cfg = temp_file("big_lambda_system.config");
  std::string text = slurp(fixture("system_small.config"));
  const auto at = [&](const std::string& key) { return text.find(key); };
  text.replace(at("lambda1 = 0.05"), 14, "lambda1 = 0.50");
  text.replace(at("lambda2 = 0.05"), 14, "lambda2 = 0.50");
  spit(cfg, text);
  const fs::path bsol = temp_file("big_lambda.solution");
  const Run rb = solve("negative", fixture("path2.graph"), cfg.string(), bsol);
  CHECK(rb.code == 0);
  CHECK(rb.out.find("warning = smallness conditions fail") != std::string::npos);
  CHECK(rb.out.find("rho = 1") != std::string::npos);
  CHECK(rb.out.find("hypotheses_verified = false") != std::string::npos);
  CHECK(rb.out.find("pass = true") != std::string::npos);
  fs::remove(cfg);
  fs::remove(bsol);
}

TEST_CASE("embedding command prints constants from both sources") {
  CliOptions ex;
  const Run re = embedding(fixture("path2.graph"), ex);
  CHECK(re.code == 0);
  CHECK(re.out.find("constant = 4.2426406871192857") != std::string::npos);
  CHECK(re.out.find("source = explicit") != std::string::npos);

  CliOptions br;
  br.brute_force = true;
  br.r = 2.0;
  const Run rb = embedding(fixture("path2.graph"), br);
  CHECK(rb.code == 0);
  CHECK(rb.out.find("source = brute_force") != std::string::npos);
  CHECK(rb.out.find("r = 2") != std::string::npos);

  // higher orders have no closed form
  CliOptions m2;
  m2.m = 2;
  const Run rm = embedding(fixture("path2.graph"), m2);
  CHECK(rm.code == 1);
  CHECK(rm.err.find("--brute-force") != std::string::npos);
  m2.brute_force = true;
  CHECK(embedding(fixture("path2.graph"), m2).code == 0);
}

TEST_CASE("solution files reject malformed content") {
  const fs::path sol = temp_file("bad.solution");
  spit(sol, "value i0 0.1 0.2\nvalue i1 0.3\nenergy = 0\ngrad_norm = 0\n"
            "classification = x\nseed = 1\n");
  CHECK_THROWS_WITH_AS(read_solution(sol.string()),
                       doctest::Contains("single- and two-component"), Error);
  spit(sol, "value i0 0.1 0.2\nenergy = 0\n");
  CHECK_THROWS_WITH_AS(read_solution(sol.string()), doctest::Contains("missing"),
                       Error);
  spit(sol, "value nowhere 0.1 0.2\nvalue i0 0 0\nvalue i1 0 0\n"
            "energy = 0\ngrad_norm = 0\nclassification = x\nseed = 1\n");
  const Run rv = verify(fixture("path2.graph"), fixture("system_small.config"), sol);
  CHECK(rv.code == 1);
  CHECK(rv.err.find("nowhere") != std::string::npos);
  fs::remove(sol);
}
