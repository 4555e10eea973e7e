#include "graphvar/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace graphvar {

namespace {

// Vertex counts below this run serially; a parallel region costs more than it
// saves on desk-scale graphs.
constexpr int kGrain = 2048;

// Raw-value kernels assume every value they read is meaningful. On closed
// domains reads never leave the active set; otherwise only functions storing
// exact zeros outside Omega may pass.
void prepare_reads(const GraphFunction& u, const WeightedGraph& g, const DirichletDomain& d,
                   const char* op) {
    if (d.closed()) return;
    if (u.dirichlet()) {
        require_dirichlet(u, d);
        return;
    }
    for (int x : d.active())
        for (const auto& nb : g.neighbors(x))
            if (!d.is_active(nb.to))
                throw DomainError(std::string(op) + ": vertex '" + g.id(x) +
                                  "' has neighbor '" + g.id(nb.to) +
                                  "' outside Omega u dOmega");
}

void laplacian_into(const WeightedGraph& g, std::span<const int> eval,
                    const std::vector<double>& u, std::vector<double>& out) {
    const int ne = static_cast<int>(eval.size());
#pragma omp parallel for schedule(static) if (ne >= kGrain)
    for (int i = 0; i < ne; ++i) {
        const int x = eval[i];
        double acc = 0.0;
        for (const auto& nb : g.neighbors(x)) acc += nb.w * (u[nb.to] - u[x]);
        out[x] = acc / g.mu(x);
    }
}

void gamma_into(const WeightedGraph& g, std::span<const int> eval,
                const std::vector<double>& u1, const std::vector<double>& u2,
                std::vector<double>& out) {
    const int ne = static_cast<int>(eval.size());
#pragma omp parallel for schedule(static) if (ne >= kGrain)
    for (int i = 0; i < ne; ++i) {
        const int x = eval[i];
        double acc = 0.0;
        for (const auto& nb : g.neighbors(x))
            acc += nb.w * (u1[nb.to] - u1[x]) * (u2[nb.to] - u2[x]);
        out[x] = acc / (2.0 * g.mu(x));
    }
}

// out(x) = sign/(2 mu(x)) * sum_y (eta(y)+eta(x)) w_xy (u(y)-u(x)); the common
// shape of the s-Laplacian and of the divergence-form adjoint inside the
// poly-Laplacian chain rule.
void weighted_slap_into(const WeightedGraph& g, std::span<const int> eval,
                        const std::vector<double>& u, const std::vector<double>& eta,
                        double sign, std::vector<double>& out) {
    const int ne = static_cast<int>(eval.size());
#pragma omp parallel for schedule(static) if (ne >= kGrain)
    for (int i = 0; i < ne; ++i) {
        const int x = eval[i];
        double acc = 0.0;
        for (const auto& nb : g.neighbors(x))
            acc += (eta[nb.to] + eta[x]) * nb.w * (u[nb.to] - u[x]);
        out[x] = sign * acc / (2.0 * g.mu(x));
    }
}

// Apply the Laplacian `count` times; intermediate iterates are evaluated on
// `mid`, the final one on `last`. Values start (and stay) zero elsewhere.
std::vector<double> iterate_laplacian(const WeightedGraph& g, std::vector<double> cur,
                                      int count, std::span<const int> mid,
                                      std::span<const int> last) {
    std::vector<double> next(cur.size(), 0.0);
    for (int j = 1; j <= count; ++j) {
        std::fill(next.begin(), next.end(), 0.0);
        laplacian_into(g, j == count ? last : mid, cur, next);
        std::swap(cur, next);
    }
    return cur;
}

// Deterministic weighted sum: contributions are always added in index order,
// so the parallel fill changes nothing in the result bits.
template <class Term>
double ordered_sum(std::span<const int> verts, Term term) {
    const int n = static_cast<int>(verts.size());
    if (n < kGrain) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) acc += term(verts[i]);
        return acc;
    }
    std::vector<double> buf(n);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) buf[i] = term(verts[i]);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += buf[i];
    return acc;
}

}  // namespace

void validate_order(const OperatorOrder& order) {
    if (order.m < 1) throw InvariantError("operator order m must be >= 1");
    if (!(order.s > 1.0) || !std::isfinite(order.s))
        throw InvariantError("exponent s must be a finite real > 1");
}

double phi_power(double w, double r) {
    if (w == 0.0) return 0.0;
    return std::copysign(std::pow(std::abs(w), r - 1.0), w);
}

double grad_weight(double gamma_uu, double s) {
    if (s == 2.0) return 1.0;
    if (gamma_uu <= 0.0) return 0.0;
    return std::pow(gamma_uu, 0.5 * (s - 2.0));
}

double integrate(const GraphFunction& f, const WeightedGraph& g,
                 std::span<const int> verts) {
    for (int v : verts)
        if (v < 0 || v >= g.vertex_count() || v >= f.size())
            throw InvariantError("integrate: vertex index out of range");
    return ordered_sum(verts, [&](int v) { return f[v] * g.mu(v); });
}

double integrate_interior(const GraphFunction& f, const WeightedGraph& g,
                          const DirichletDomain& d) {
    return integrate(f, g, d.interior());
}

double integrate_active(const GraphFunction& f, const WeightedGraph& g,
                        const DirichletDomain& d) {
    return integrate(f, g, d.active());
}

GraphFunction laplacian(const GraphFunction& u, const WeightedGraph& g,
                        const DirichletDomain& d) {
    prepare_reads(u, g, d, "laplacian");
    GraphFunction out(g.vertex_count());
    laplacian_into(g, d.active(), u.values(), out.values());
    return out;
}

GraphFunction gradient_form(const GraphFunction& u1, const GraphFunction& u2,
                            const WeightedGraph& g, const DirichletDomain& d) {
    prepare_reads(u1, g, d, "gradient_form");
    prepare_reads(u2, g, d, "gradient_form");
    GraphFunction out(g.vertex_count());
    gamma_into(g, d.active(), u1.values(), u2.values(), out.values());
    return out;
}

GraphFunction s_laplacian(const GraphFunction& u, double s, const WeightedGraph& g,
                          const DirichletDomain& d) {
    validate_order({1, s});
    prepare_reads(u, g, d, "s_laplacian");
    const int n = g.vertex_count();
    std::vector<double> gm(n, 0.0);
    gamma_into(g, d.active(), u.values(), u.values(), gm);
    std::vector<double> eta(n, 0.0);
    for (int x : d.active()) eta[x] = grad_weight(gm[x], s);
    GraphFunction out(n);
    weighted_slap_into(g, d.active(), u.values(), eta, +1.0, out.values());
    return out;
}

GraphFunction gradient_length_m(const GraphFunction& u, const OperatorOrder& order,
                                const WeightedGraph& g, const DirichletDomain& d) {
    validate_order(order);
    if (order.m >= 2) d.require_closure_for_order(g, order.m);
    prepare_reads(u, g, d, "gradient_length_m");
    const int n = g.vertex_count();
    GraphFunction out(n);
    if (order.m % 2 == 0) {
        auto w = iterate_laplacian(g, u.values(), order.m / 2, d.active(), d.active());
        for (int x : d.active()) out[x] = std::abs(w[x]);
    } else {
        auto w = iterate_laplacian(g, u.values(), (order.m - 1) / 2, d.active(), d.active());
        std::vector<double> gm(n, 0.0);
        gamma_into(g, d.active(), w, w, gm);
        for (int x : d.active()) out[x] = std::sqrt(std::max(gm[x], 0.0));
    }
    return out;
}

double sobolev_energy(const GraphFunction& u, const OperatorOrder& order,
                      const WeightedGraph& g, const DirichletDomain& d) {
    require_dirichlet(u, d);
    GraphFunction gl = gradient_length_m(u, order, g, d);
    const double s = order.s;
    return ordered_sum(d.active(), [&](int x) { return std::pow(gl[x], s) * g.mu(x); });
}

double sobolev_norm(const GraphFunction& u, const OperatorOrder& order,
                    const WeightedGraph& g, const DirichletDomain& d) {
    return std::pow(sobolev_energy(u, order, g, d), 1.0 / order.s);
}

double lr_norm(const GraphFunction& u, double r, const WeightedGraph& g,
               const DirichletDomain& d) {
    if (std::isinf(r) && r > 0) {
        double best = 0.0;
        for (int x : d.interior()) best = std::max(best, std::abs(u[x]));
        return best;
    }
    if (!(r >= 1.0)) throw InvariantError("lr_norm requires r >= 1");
    const double sum =
        ordered_sum(d.interior(), [&](int x) { return std::pow(std::abs(u[x]), r) * g.mu(x); });
    return std::pow(sum, 1.0 / r);
}

GraphFunction poly_lap_apply(const GraphFunction& u, const OperatorOrder& order,
                             const WeightedGraph& g, const DirichletDomain& d) {
    validate_order(order);
    require_dirichlet(u, d);
    if (order.m >= 2) d.require_closure_for_order(g, order.m);
    const int n = g.vertex_count();
    const double s = order.s;
    std::vector<double> stage;
    int k = 0;
    if (order.m % 2 == 1) {
        // L u = Delta^k D with D the eta-weighted divergence of w = Delta^k u,
        // eta = |grad w|^{s-2}; for m = 1 this is exactly -Delta_s u.
        k = (order.m - 1) / 2;
        auto w = iterate_laplacian(g, u.values(), k, d.active(), d.active());
        std::vector<double> gm(n, 0.0);
        gamma_into(g, d.active(), w, w, gm);
        std::vector<double> eta(n, 0.0);
        for (int x : d.active()) eta[x] = grad_weight(gm[x], s);
        stage.assign(n, 0.0);
        weighted_slap_into(g, k == 0 ? std::span<const int>(d.interior()) : d.active(), w,
                           eta, -1.0, stage);
    } else {
        // L u = Delta^k (|v|^{s-2} v) with v = Delta^k u; the iterated
        // Laplacian is self-adjoint against the mu-weighted pairing, which
        // moves all k applications off the test function.
        k = order.m / 2;
        auto v = iterate_laplacian(g, u.values(), k, d.active(), d.active());
        stage.assign(n, 0.0);
        for (int x : d.active()) stage[x] = phi_power(v[x], s);
    }
    if (k > 0) stage = iterate_laplacian(g, std::move(stage), k, d.active(), d.interior());
    GraphFunction out(n);
    for (int x : d.interior()) out[x] = stage[x];
    out.set_dirichlet(true);
    return out;
}

double weak_pairing(const GraphFunction& u, const OperatorOrder& order,
                    const GraphFunction& phi, const WeightedGraph& g,
                    const DirichletDomain& d) {
    validate_order(order);
    require_dirichlet(u, d);
    require_dirichlet(phi, d);
    if (order.m >= 2) d.require_closure_for_order(g, order.m);
    const int n = g.vertex_count();
    const double s = order.s;
    if (order.m % 2 == 1) {
        const int k = (order.m - 1) / 2;
        auto wu = iterate_laplacian(g, u.values(), k, d.active(), d.active());
        auto wp = iterate_laplacian(g, phi.values(), k, d.active(), d.active());
        std::vector<double> gm(n, 0.0), cross(n, 0.0);
        gamma_into(g, d.active(), wu, wu, gm);
        gamma_into(g, d.active(), wu, wp, cross);
        return ordered_sum(d.active(), [&](int x) {
            return grad_weight(gm[x], s) * cross[x] * g.mu(x);
        });
    }
    const int k = order.m / 2;
    auto vu = iterate_laplacian(g, u.values(), k, d.active(), d.active());
    auto vp = iterate_laplacian(g, phi.values(), k, d.active(), d.active());
    return ordered_sum(d.active(),
                       [&](int x) { return phi_power(vu[x], s) * vp[x] * g.mu(x); });
}

}  // namespace graphvar
