// Timing harness for the OpenMP kernels against the serial reference sweeps.
// Builds square grid graphs with a Dirichlet border, runs each kernel pair on
// the same input, and reports wall times plus the largest pointwise
// discrepancy. --quick shrinks the sizes so the harness can run as a smoke
// test.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "graphvar/calculus.hpp"
#include "graphvar/graph_io.hpp"
#include "graphvar/reference.hpp"

using namespace graphvar;

namespace {

LoadedGraph build_grid(int n) {
  std::string text;
  text.reserve(static_cast<size_t>(n) * n * 24);
  char buf[64];
  // corners would be boundary vertices with no interior neighbor; skip them
  auto corner = [n](int i, int j) {
    return (i == 0 || i == n - 1) && (j == 0 || j == n - 1);
  };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (corner(i, j)) continue;
      const bool border = i == 0 || j == 0 || i == n - 1 || j == n - 1;
      std::snprintf(buf, sizeof buf, "vertex g%d_%d 1 %c\n", i, j,
                    border ? 'B' : 'I');
      text += buf;
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (corner(i, j)) continue;
      if (i + 1 < n && !corner(i + 1, j)) {
        std::snprintf(buf, sizeof buf, "edge g%d_%d g%d_%d 1\n", i, j, i + 1, j);
        text += buf;
      }
      if (j + 1 < n && !corner(i, j + 1)) {
        std::snprintf(buf, sizeof buf, "edge g%d_%d g%d_%d 1\n", i, j, i, j + 1);
        text += buf;
      }
    }
  }
  return load_graph_text(text, "<grid>");
}

GraphFunction random_values(const LoadedGraph& lg, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  GraphFunction u(lg.graph.vertex_count());
  for (int x : lg.domain.interior()) u[x] = dist(rng);
  return u.set_dirichlet(true);
}

template <typename F>
double time_ms(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

double max_abs_diff(const GraphFunction& a, const GraphFunction& b,
                    const DirichletDomain& d) {
  double m = 0.0;
  for (int x : d.active()) m = std::max(m, std::abs(a[x] - b[x]));
  return m;
}

struct KernelRow {
  const char* name;
  double par_ms;
  double ser_ms;
  double diff;
};

}  // namespace

int main(int argc, char** argv) {
  bool quick = false;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) quick = true;
  }
  const std::vector<int> sizes = quick ? std::vector<int>{16, 32}
                                       : std::vector<int>{64, 128, 256};
  const int reps = quick ? 2 : 5;

  std::printf("%-22s %10s %12s %12s %9s %10s\n", "kernel", "vertices",
              "parallel ms", "serial ms", "speedup", "max |diff|");
  bool all_match = true;
  for (int n : sizes) {
    const LoadedGraph lg = build_grid(n);
    const GraphFunction u = random_values(lg, 12345u + static_cast<unsigned>(n));
    const GraphFunction w = random_values(lg, 54321u + static_cast<unsigned>(n));

    GraphFunction pa(lg.graph.vertex_count()), se(lg.graph.vertex_count());
    std::vector<KernelRow> rows;

    auto add = [&](const char* name, auto&& par, auto&& ser) {
      const double tp = time_ms(reps, [&] { pa = par(); });
      const double ts = time_ms(reps, [&] { se = ser(); });
      rows.push_back({name, tp, ts, max_abs_diff(pa, se, lg.domain)});
    };

    add("laplacian",
        [&] { return laplacian(u, lg.graph, lg.domain); },
        [&] { return reference::laplacian(u, lg.graph, lg.domain); });
    add("gradient_form",
        [&] { return gradient_form(u, w, lg.graph, lg.domain); },
        [&] { return reference::gradient_form(u, w, lg.graph, lg.domain); });
    add("s_laplacian(s=3)",
        [&] { return s_laplacian(u, 3.0, lg.graph, lg.domain); },
        [&] { return reference::s_laplacian(u, 3.0, lg.graph, lg.domain); });
    add("gradient_length(m=2)",
        [&] { return gradient_length_m(u, {2, 2.0}, lg.graph, lg.domain); },
        [&] { return reference::gradient_length_m(u, {2, 2.0}, lg.graph, lg.domain); });

    for (const KernelRow& r : rows) {
      std::printf("%-22s %10d %12.3f %12.3f %8.2fx %10.2e\n", r.name,
                  lg.graph.vertex_count(), r.par_ms, r.ser_ms,
                  r.ser_ms / std::max(r.par_ms, 1e-9), r.diff);
      if (r.diff > 1e-10) all_match = false;
    }

    // scalar reductions
    const double np = time_ms(reps, [&] {
      volatile double v = sobolev_norm(u, {2, 3.0}, lg.graph, lg.domain);
      (void)v;
    });
    const double ns = time_ms(reps, [&] {
      volatile double v = reference::sobolev_norm(u, {2, 3.0}, lg.graph, lg.domain);
      (void)v;
    });
    const double dv = std::abs(sobolev_norm(u, {2, 3.0}, lg.graph, lg.domain) -
                               reference::sobolev_norm(u, {2, 3.0}, lg.graph, lg.domain));
    std::printf("%-22s %10d %12.3f %12.3f %8.2fx %10.2e\n", "sobolev_norm(m=2,s=3)",
                lg.graph.vertex_count(), np, ns, ns / std::max(np, 1e-9), dv);
    if (dv > 1e-10) all_match = false;
  }

  if (!all_match) {
    std::fprintf(stderr, "kernel outputs diverged beyond 1e-10\n");
    return 1;
  }
  return 0;
}
