#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "graphvar/analysis.hpp"
#include "graphvar/graph_io.hpp"
#include "testutil.hpp"

using namespace graphvar;

namespace {

LoadedGraph single_interior() {
  return load_graph_text("vertex i0 1 I\nvertex b0 1 B\nedge i0 b0 1\n");
}

LoadedGraph bib_path() {
  return load_graph_text(
      "vertex b0 1 B\nvertex x1 1 I\nvertex b1 1 B\n"
      "edge b0 x1 1\nedge x1 b1 1\n");
}

LoadedGraph two_interior_path() {
  return load_graph_text(
      "vertex b0 1 B\nvertex i0 1 I\nvertex i1 1 I\nvertex b1 1 B\n"
      "edge b0 i0 1\nedge i0 i1 1\nedge i1 b1 1\n");
}

EquationParams unit_equation(const LoadedGraph& lg, double lambda) {
  EquationParams P;
  P.p = 2.0;
  P.gamma = 1.5;
  P.alpha = 4.0;
  P.lambda = lambda;
  P.h = GraphFunction(lg.graph.vertex_count(), 1.0);
  P.c = GraphFunction(lg.graph.vertex_count(), 1.0);
  return P;
}

EmbeddingConstant supplied(double v, double s = 2.0) {
  EmbeddingConstant c;
  c.value = v;
  c.source = ConstantSource::UserSupplied;
  c.s = s;
  return c;
}

}  // namespace

TEST_CASE("closed-form embedding constant on tiny paths") {
  // one interior vertex, measures and weights all 1: (1+1) sqrt(2) = 2 sqrt(2)
  for (const LoadedGraph& lg : {single_interior(), bib_path()}) {
    const EmbeddingConstant C = explicit_embedding_constant(lg.graph, lg.domain, 2.0);
    CHECK(C.value == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-15));
    CHECK(C.source == ConstantSource::Explicit);
    CHECK(std::isnan(C.r));
  }
  // two interior vertices: (1+2) sqrt(2) = 3 sqrt(2)
  const LoadedGraph lg = two_interior_path();
  const EmbeddingConstant C = explicit_embedding_constant(lg.graph, lg.domain, 2.0);
  CHECK(C.value == doctest::Approx(4.2426406871192857).epsilon(1e-15));
  // s only enters through mu_omega_min = 1 here, so s = 4 gives the same value
  CHECK(explicit_embedding_constant(lg.graph, lg.domain, 4.0).value ==
        doctest::Approx(C.value).epsilon(1e-15));
  CHECK_THROWS_WITH_AS(explicit_embedding_constant(lg.graph, lg.domain, 1.5),
                       doctest::Contains("s >= 2"), Error);
}

TEST_CASE("closed-form constant demands boundary adjacency") {
  // i1 has no boundary neighbor
  const LoadedGraph lg = load_graph_text(
      "vertex b0 1 B\nvertex i0 1 I\nvertex i1 1 I\n"
      "edge b0 i0 1\nedge i0 i1 1\n");
  CHECK_THROWS_WITH_AS(explicit_embedding_constant(lg.graph, lg.domain, 2.0),
                       doctest::Contains("brute-force"), Error);
  CHECK_NOTHROW(brute_force_embedding_constant(lg.graph, lg.domain, 1, 2.0, 2.0));
}

TEST_CASE("brute-force constants attain the known optima on paths") {
  // single interior vertex joined to one boundary vertex: ratio 1 at any scale
  const LoadedGraph ib = single_interior();
  const EmbeddingConstant cib =
      brute_force_embedding_constant(ib.graph, ib.domain, 1, 2.0, 2.0);
  CHECK(cib.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cib.r == doctest::Approx(2.0));

  // boundary-interior-boundary: norm sqrt(2)|c|, L2 norm |c|
  const LoadedGraph bib = bib_path();
  CHECK(brute_force_embedding_constant(bib.graph, bib.domain, 1, 2.0, 2.0).value ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

  // two interior vertices: the symmetric bump u = (1,1) has norm^2 = 2,
  // L2 norm sqrt(2), so the ratio 1 is optimal here
  const LoadedGraph p2 = two_interior_path();
  CHECK(brute_force_embedding_constant(p2.graph, p2.domain, 1, 2.0, 2.0).value ==
        doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("brute-force constant is a valid and efficient embedding bound") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 6; ++trial) {
    const LoadedGraph lg = testutil::random_graph(rng, 12, /*adjacency=*/true);
    for (double s : {2.0, 3.0}) {
      const EmbeddingConstant ex =
          explicit_embedding_constant(lg.graph, lg.domain, s);
      for (double r : {1.0, 2.0, 4.0}) {
        const EmbeddingConstant br =
            brute_force_embedding_constant(lg.graph, lg.domain, 1, s, r);
        CHECK(br.value <= ex.value * (1.0 + 1e-12));
        for (int k = 0; k < 30; ++k) {
          const GraphFunction u = testutil::random_dirichlet(rng, lg);
          const double lr = lr_norm(u, r, lg.graph, lg.domain);
          const double w = sobolev_norm(u, {1, s}, lg.graph, lg.domain);
          CHECK(lr <= br.value * w * (1.0 + 1e-9));
          CHECK(lr <= ex.value * w * (1.0 + 1e-12));
        }
      }
    }
  }
}

TEST_CASE("brute-force search reports an unbounded ratio on boundary-free graphs") {
  const LoadedGraph lg = load_graph_text(
      "vertex v0 1 I\nvertex v1 1 I\nedge v0 v1 1\n");
  CHECK_THROWS_WITH_AS(
      brute_force_embedding_constant(lg.graph, lg.domain, 1, 2.0, 2.0),
      doctest::Contains("unbounded"), Error);
}

TEST_CASE("whole-graph constant matches the closed form") {
  const LoadedGraph lg = load_graph_text(
      "vertex v0 1 I\nvertex v1 1 I\nedge v0 v1 1\n");
  GraphFunction a1(2, 1.0);
  for (double s : {2.0, 3.0, 4.0}) {
    CHECK(finite_graph_constants(lg.graph, a1, s).value ==
          doctest::Approx(std::pow(2.0, 1.0 / s)).epsilon(1e-15));
  }
  // quadrupling the potential halves the s = 2 constant
  GraphFunction a4(2, 4.0);
  CHECK(finite_graph_constants(lg.graph, a4, 2.0).value ==
        doctest::Approx(0.5 * std::sqrt(2.0)).epsilon(1e-15));
  // and the constant really bounds ||u||_s by the potential-weighted norm
  std::mt19937_64 rng(73);
  for (int k = 0; k < 50; ++k) {
    GraphFunction u(2);
    u[0] = testutil::urand_pm(rng);
    u[1] = testutil::urand_pm(rng);
    u.set_dirichlet(true);
    const double lhs = lr_norm(u, 2.0, lg.graph, lg.domain);
    const double rhs = problem_norm(u, {1, 2.0}, &a4, lg.graph, lg.domain);
    CHECK(lhs <= finite_graph_constants(lg.graph, a4, 2.0).value * rhs * (1 + 1e-12));
  }
  GraphFunction bad(2, 1.0);
  bad[1] = 0.0;
  CHECK_THROWS_WITH_AS(finite_graph_constants(lg.graph, bad, 2.0),
                       doctest::Contains("v1"), Error);
}

TEST_CASE("exact rational hypothesis chain reproduces the worked constants") {
  RationalSystemInputs in;
  in.p = Rational(4);
  in.q = Rational(5);
  in.gamma1 = Rational(2);
  in.gamma2 = Rational(3);
  in.alpha = Rational(2);
  in.beta = Rational(4);
  in.lambda1 = Rational(1, 5);
  in.lambda2 = Rational(1, 6);
  in.Cp = Rational(1);
  in.Cq = Rational(1);
  in.C0 = Rational(1, 3);
  in.h1_norm_pow = Rational(15625, 19327352832LL);
  in.h2_norm_pow = Rational(15625, 4294967296LL);

  const RationalHypothesisReport r = check_system_hypotheses_exact(in);
  CHECK(r.M_lambda == Rational(1, 96));
  CHECK(r.M2 == Rational(1, 18));
  CHECK(r.rho_exact);
  CHECK(r.rho == Rational(5, 32));
  CHECK(r.lhs == Rational(3125, 25769803776LL));
  CHECK(r.rhs == Rational(3125, 19327352832LL));
  CHECK(r.cond1);
  CHECK(r.cond2);
  CHECK(r.cond3);
  CHECK(r.cond4);
  CHECK(r.all_ok);

  // float path agrees to near machine precision with the exact values
  const LoadedGraph lg = single_interior();
  SystemParams P;
  P.p = 4.0;
  P.q = 5.0;
  P.gamma1 = 2.0;
  P.gamma2 = 3.0;
  P.alpha = 2.0;
  P.beta = 4.0;
  P.lambda1 = 0.2;
  P.lambda2 = 1.0 / 6.0;
  const int n = lg.graph.vertex_count();
  P.h1 = GraphFunction(n, 1.0);
  P.h2 = GraphFunction(n, 1.0);
  P.c = GraphFunction(n, 1.0);
  const HypothesisReport f = check_system_hypotheses(
      P, lg.graph, lg.domain, supplied(1.0, 4.0), supplied(1.0, 5.0),
      in.h1_norm_pow.to_double(), in.h2_norm_pow.to_double(), in.C0.to_double());
  CHECK(f.M_lambda == doctest::Approx(r.M_lambda.to_double()).epsilon(1e-12));
  CHECK(f.M2 == doctest::Approx(r.M2.to_double()).epsilon(1e-12));
  CHECK(f.rho == doctest::Approx(r.rho.to_double()).epsilon(1e-12));
  CHECK(f.lhs == doctest::Approx(r.lhs.to_double()).epsilon(1e-12));
  CHECK(f.rhs == doctest::Approx(r.rhs.to_double()).epsilon(1e-12));
  CHECK(f.all_ok);

  // the ball lower bound peaks at rho with positive margin rhs - lhs
  CHECK(f.envelope(f.rho) == doctest::Approx(f.rhs - f.lhs).epsilon(1e-12));
  CHECK(f.envelope_second(f.rho) < 0.0);
  const double eps = 1e-6 * f.rho;
  CHECK(f.envelope(f.rho) >= f.envelope(f.rho - eps));
  CHECK(f.envelope(f.rho) >= f.envelope(f.rho + eps));

  // fractional exponents cannot be evaluated exactly
  RationalSystemInputs frac = in;
  frac.p = Rational(7, 2);
  CHECK_THROWS_WITH_AS(check_system_hypotheses_exact(frac),
                       doctest::Contains("--rational"), Error);
}

TEST_CASE("rational serialization prints exact fractions") {
  RationalSystemInputs in;
  in.p = Rational(4);
  in.q = Rational(5);
  in.gamma1 = Rational(2);
  in.gamma2 = Rational(3);
  in.alpha = Rational(2);
  in.beta = Rational(4);
  in.lambda1 = Rational(1, 5);
  in.lambda2 = Rational(1, 6);
  in.Cp = Rational(1);
  in.Cq = Rational(1);
  in.C0 = Rational(1, 3);
  in.h1_norm_pow = Rational(15625, 19327352832LL);
  in.h2_norm_pow = Rational(15625, 4294967296LL);
  const std::string text = serialize_report(check_system_hypotheses_exact(in), true);
  CHECK(text.find("M_lambda = 1/96") != std::string::npos);
  CHECK(text.find("M2 = 1/18") != std::string::npos);
  CHECK(text.find("rho = 5/32") != std::string::npos);
  CHECK(text.find("3125/19327352832") != std::string::npos);
}

TEST_CASE("equation thresholds and the two-root regime on one vertex") {
  const LoadedGraph lg = single_interior();
  EquationParams P = unit_equation(lg, 0.01);
  // with C = 1: lambda0 = (1/2) * 16 / 2.5^5 = 8/97.65625 = 0.08192 exactly
  const EmbeddingConstant one = supplied(1.0);
  const EquationThresholds t = equation_thresholds(P, lg.domain, one);
  CHECK(t.lambda0 == doctest::Approx(0.08192).epsilon(1e-14));
  CHECK(t.lambda_star == doctest::Approx(0.375).epsilon(1e-14));
  CHECK(t.lambda_star_star == doctest::Approx(0.08192).epsilon(1e-14));

  // with the closed-form constant 2 sqrt(2): lambda_star = 3 / 2^{6.75}
  const EmbeddingConstant ex = explicit_embedding_constant(lg.graph, lg.domain, 2.0);
  const EquationThresholds te = equation_thresholds(P, lg.domain, ex);
  CHECK(te.lambda_star == doctest::Approx(3.0 / std::pow(2.0, 6.75)).epsilon(1e-14));

  // the product-form test flips exactly at lambda0
  P.lambda = 0.999 * t.lambda0;
  CHECK(fibering_two_root_condition(P, lg.domain, one));
  P.lambda = 1.001 * t.lambda0;
  CHECK_FALSE(fibering_two_root_condition(P, lg.domain, one));

  P.lambda = 0.01;
  const HypothesisReport rep =
      check_equation_hypotheses(P, lg.graph, lg.domain, one);
  CHECK(rep.cond1);
  CHECK(rep.all_ok);
  CHECK(rep.lambda == doctest::Approx(0.01));
  P.lambda = 0.1;  // above lambda_star_star
  CHECK_FALSE(check_equation_hypotheses(P, lg.graph, lg.domain, one).all_ok);
}

TEST_CASE("semi-trivial norm bound matches the closed form") {
  const LoadedGraph lg = single_interior();
  SystemParams P;
  P.p = 2.0;
  P.q = 2.0;
  P.gamma1 = 1.5;
  P.gamma2 = 1.5;
  P.alpha = 2.0;
  P.beta = 2.0;
  P.lambda1 = 0.1;
  P.lambda2 = 0.2;
  const int n = lg.graph.vertex_count();
  P.h1 = GraphFunction(n, 1.0);
  P.h2 = GraphFunction(n, 1.0);
  P.c = GraphFunction(n, 1.0);
  const EmbeddingConstant C = supplied(2.0 * std::sqrt(2.0));
  // (0.1 * 1 * (2 sqrt 2)^{1.5})^{1/0.5} = 0.01 * 2^{4.5}
  CHECK(semi_trivial_bound(P, SystemSide::U, C, lg.domain) ==
        doctest::Approx(0.22627416997969522).epsilon(1e-14));
  CHECK(semi_trivial_bound(P, SystemSide::V, C, lg.domain) ==
        doctest::Approx(0.04 * std::pow(2.0, 4.5)).epsilon(1e-13));
  SystemParams zero = P;
  zero.lambda1 = 0.0;
  CHECK_THROWS_WITH_AS(semi_trivial_bound(zero, SystemSide::U, C, lg.domain),
                       doctest::Contains("lambda1"), Error);
}

TEST_CASE("float hypothesis report serializes every condition") {
  const LoadedGraph lg = single_interior();
  SystemParams P;
  P.p = 4.0;
  P.q = 5.0;
  P.gamma1 = 2.0;
  P.gamma2 = 3.0;
  P.alpha = 2.0;
  P.beta = 4.0;
  P.lambda1 = 0.2;
  P.lambda2 = 1.0 / 6.0;
  const int n = lg.graph.vertex_count();
  P.h1 = GraphFunction(n, 1.0);
  P.h2 = GraphFunction(n, 1.0);
  P.c = GraphFunction(n, 1.0);
  const HypothesisReport f = check_system_hypotheses(
      P, lg.graph, lg.domain, supplied(1.0, 4.0), supplied(1.0, 5.0),
      15625.0 / 19327352832.0, 15625.0 / 4294967296.0, 1.0 / 3.0);
  const std::string text = serialize_report(f, true);
  for (const char* key : {"M_lambda = ", "M2 = ", "rho = ", "lhs = ", "rhs = ",
                          "cond1 = true", "cond2 = true", "cond3 = true",
                          "cond4 = true", "all_ok = true", "ball_margin = "}) {
    CHECK_MESSAGE(text.find(key) != std::string::npos, key);
  }
}
