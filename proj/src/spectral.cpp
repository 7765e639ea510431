#include "rewirelab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>

#include "rewirelab/errors.hpp"

namespace rwl::spectral {

namespace {

double dot(const std::vector<double> &a, const std::vector<double> &b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

double norm(const std::vector<double> &a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, const std::vector<double> &x, std::vector<double> &y) {
    for (std::size_t i = 0; i < y.size(); ++i)
        y[i] += alpha * x[i];
}

bool normalize(std::vector<double> &v) {
    const double n = norm(v);
    if (n == 0.0 || !std::isfinite(n))
        return false;
    for (auto &x : v)
        x /= n;
    return true;
}

// D^-1/2 A D^-1/2 with zero rows for isolated nodes, plus the trivial
// eigenvectors to deflate.
struct NormalizedAdjacency {
    const Graph &g;
    std::vector<double> inv_sqrt_deg;
    std::vector<std::vector<double>> deflation;
    std::vector<std::uint32_t> comp;
    count num_components = 0;
    count isolated = 0;

    explicit NormalizedAdjacency(const Graph &graph) : g(graph) {
        const count n = g.num_nodes();
        inv_sqrt_deg.assign(n, 0.0);
        for (node i = 0; i < n; ++i)
            if (g.degree(i) > 0)
                inv_sqrt_deg[i] = 1.0 / std::sqrt(static_cast<double>(g.degree(i)));

        count total = 0;
        comp = connected_components(g, &total);
        std::vector<double> volume(total, 0.0);
        for (node i = 0; i < n; ++i)
            volume[comp[i]] += static_cast<double>(g.degree(i));
        std::vector<std::int64_t> slot(total, -1);
        for (std::uint32_t c = 0; c < total; ++c) {
            if (volume[c] > 0.0)
                slot[c] = static_cast<std::int64_t>(num_components++);
        }
        deflation.assign(num_components, std::vector<double>(n, 0.0));
        for (node i = 0; i < n; ++i) {
            if (g.degree(i) == 0) {
                ++isolated;
                continue;
            }
            deflation[slot[comp[i]]][i] = std::sqrt(static_cast<double>(g.degree(i)));
        }
        for (auto &w : deflation)
            normalize(w);
    }

    void apply(const std::vector<double> &x, std::vector<double> &y) const {
        const count n = g.num_nodes();
        y.assign(n, 0.0);
        for (node i = 0; i < n; ++i) {
            double s = 0.0;
            for (auto j : g.neighbors(i))
                s += inv_sqrt_deg[j] * x[j];
            y[i] = inv_sqrt_deg[i] * s;
        }
    }

    void deflate(std::vector<double> &v) const {
        for (const auto &w : deflation)
            axpy(-dot(w, v), w, v);
    }

    double residual(const std::vector<double> &x, double theta) const {
        std::vector<double> bx;
        apply(x, bx);
        axpy(-theta, x, bx);
        return norm(bx);
    }
};

std::vector<double> default_start(count n) {
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<double> v(n);
    for (auto &x : v)
        x = unif(rng);
    return v;
}

// Zero-eigenvalue vector when there are several non-trivial components.
State disconnected_state(const NormalizedAdjacency &op) {
    const Graph &g = op.g;
    const count n = g.num_nodes();
    count total = 0;
    for (auto c : op.comp)
        total = std::max<count>(total, c + 1);
    std::vector<double> volume(total, 0.0);
    for (node i = 0; i < n; ++i)
        volume[op.comp[i]] += static_cast<double>(g.degree(i));
    std::uint32_t small = 0;
    bool found = false;
    for (std::uint32_t c = 0; c < total; ++c)
        if (volume[c] > 0.0 && (!found || volume[c] < volume[small])) {
            small = c;
            found = true;
        }
    double vol_small = volume[small];
    double vol_rest = std::accumulate(volume.begin(), volume.end(), 0.0) - vol_small;

    State s;
    s.fiedler.assign(n, 0.0);
    for (node i = 0; i < n; ++i) {
        if (g.degree(i) == 0)
            continue;
        double sd = std::sqrt(static_cast<double>(g.degree(i)));
        s.fiedler[i] = op.comp[i] == small ? sd * std::sqrt(vol_rest / vol_small)
                                           : -sd * std::sqrt(vol_small / vol_rest);
    }
    normalize(s.fiedler);
    s.gap = 0.0;
    s.connected = false;
    s.components = op.num_components;
    s.isolated = op.isolated;
    s.residual = op.residual(s.fiedler, 1.0);
    return s;
}

// No edges at all: every mode has eigenvalue 1.
State edgeless_state(const NormalizedAdjacency &op) {
    State s;
    const count n = op.g.num_nodes();
    s.fiedler.assign(n, 0.0);
    s.fiedler[0] = 1.0 / std::sqrt(2.0);
    s.fiedler[1] = -1.0 / std::sqrt(2.0);
    s.gap = 1.0;
    s.connected = false;
    s.components = 0;
    s.isolated = op.isolated;
    return s;
}

struct RitzPair {
    double theta;
    std::vector<double> x;
    count matvecs;
};

// One Lanczos cycle of at most `m` steps from `start`; returns the largest Ritz pair.
RitzPair lanczos_cycle(const NormalizedAdjacency &op, std::vector<double> start, count m) {
    const count n = op.g.num_nodes();
    std::vector<std::vector<double>> basis;
    std::vector<double> alpha, beta;
    op.deflate(start);
    normalize(start);
    std::vector<double> q = std::move(start), w;
    count matvecs = 0;
    for (count j = 0; j < m; ++j) {
        basis.push_back(q);
        op.apply(q, w);
        ++matvecs;
        double a = dot(q, w);
        alpha.push_back(a);
        for (int pass = 0; pass < 2; ++pass) {
            op.deflate(w);
            for (const auto &v : basis)
                axpy(-dot(v, w), v, w);
        }
        double b = norm(w);
        if (j + 1 == m || b < 1e-12)
            break;
        beta.push_back(b);
        for (std::size_t i = 0; i < n; ++i)
            q[i] = w[i] / b;
    }

    const auto k = static_cast<Eigen::Index>(alpha.size());
    Eigen::VectorXd diag(k), sub(std::max<Eigen::Index>(k - 1, 0));
    for (Eigen::Index i = 0; i < k; ++i)
        diag[i] = alpha[i];
    for (Eigen::Index i = 0; i + 1 < k; ++i)
        sub[i] = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const Eigen::Index top = k - 1; // eigenvalues ascending
    RitzPair r{es.eigenvalues()[top], std::vector<double>(n, 0.0), matvecs};
    for (Eigen::Index i = 0; i < k; ++i)
        axpy(es.eigenvectors()(i, top), basis[i], r.x);
    op.deflate(r.x);
    normalize(r.x);
    return r;
}

} // namespace

State spectral_gap(const Graph &g, const Options &opts, const std::vector<double> *warm_start) {
    const count n = g.num_nodes();
    if (n < 2)
        throw ValidationError("spectral gap needs at least 2 nodes");
    NormalizedAdjacency op(g);
    if (op.num_components >= 2)
        return disconnected_state(op);
    if (op.num_components == 0)
        return edgeless_state(op);

    const count max_iter = opts.max_iter ? opts.max_iter : std::max<count>(10 * n, 300);
    const count free_dim = n - 1;
    const count cycle = std::min<count>(free_dim, 64);

    std::vector<double> start =
        warm_start && warm_start->size() == n ? *warm_start : default_start(n);
    // A warm start may lie entirely in the deflation space after an edit.
    {
        auto probe = start;
        op.deflate(probe);
        if (norm(probe) < 1e-8)
            start = default_start(n);
    }

    count used = 0;
    double best_theta = 0.0, best_res = INFINITY;
    std::vector<double> best_x;
    while (true) {
        if (used + 2 > max_iter)
            throw ConvergenceError("spectral gap did not converge in " + std::to_string(max_iter) +
                                       " operator applications",
                                   1.0 - best_theta, best_res);
        auto ritz = lanczos_cycle(op, start, std::min(cycle, max_iter - used - 1));
        used += ritz.matvecs;
        double res = op.residual(ritz.x, ritz.theta);
        ++used;
        if (res < best_res) {
            best_res = res;
            best_theta = ritz.theta;
            best_x = ritz.x;
        }
        if (res <= opts.tol) {
            State s;
            s.gap = std::clamp(1.0 - ritz.theta, 0.0, 2.0);
            s.fiedler = std::move(ritz.x);
            s.residual = res;
            s.connected = op.isolated == 0;
            s.components = op.num_components;
            s.isolated = op.isolated;
            s.iterations = used;
            return s;
        }
        start = std::move(ritz.x);
    }
}

State refresh(const Graph &g, const State &warm, count iterations) {
    const count n = g.num_nodes();
    NormalizedAdjacency op(g);
    if (op.num_components >= 2)
        return disconnected_state(op);
    if (op.num_components == 0)
        return edgeless_state(op);

    std::vector<double> x = warm.fiedler.size() == n ? warm.fiedler : default_start(n);
    op.deflate(x);
    if (!normalize(x)) {
        x = default_start(n);
        op.deflate(x);
        normalize(x);
    }
    std::vector<double> bx;
    for (count it = 0; it < iterations; ++it) {
        op.apply(x, bx);
        axpy(1.0, x, bx); // (2I - L) x = x + B x
        op.deflate(bx);
        if (!normalize(bx))
            break;
        x.swap(bx);
    }
    op.apply(x, bx);
    const double theta = dot(x, bx);
    State s;
    s.gap = std::clamp(1.0 - theta, 0.0, 2.0);
    axpy(-theta, x, bx);
    s.residual = norm(bx);
    s.fiedler = std::move(x);
    s.connected = op.isolated == 0;
    s.components = op.num_components;
    s.isolated = op.isolated;
    s.iterations = iterations;
    return s;
}

double proxy_gap_after_add(const State &s, node u, node v) {
    const double fu = s.fiedler[u], fv = s.fiedler[v];
    return s.gap + ((fu - fv) * (fu - fv) - s.gap * (fu * fu + fv * fv));
}

double proxy_gap_after_del(const State &s, node u, node v) {
    const double fu = s.fiedler[u], fv = s.fiedler[v];
    return s.gap - ((fu - fv) * (fu - fv) - s.gap * (fu * fu + fv * fv));
}

namespace {

void check_prob(double p, const char *name) {
    if (!(p > 0.0 && p < 1.0))
        throw ValidationError(std::string(name) + " must lie in (0, 1)");
}

} // namespace

double expected_gap_two_block(count n, double p, double q) {
    if (n <= 2 || n % 2 != 0)
        throw ValidationError("two-block model needs an even node count > 2");
    return expected_gap_k_block(n, 2, p, q);
}

double expected_gap_k_block(count n, count k, double p, double q) {
    check_prob(p, "p");
    check_prob(q, "q");
    if (k < 2)
        throw ValidationError("need at least 2 blocks");
    if (n % k != 0)
        throw ValidationError(std::to_string(k) + " blocks do not divide " + std::to_string(n) +
                              " nodes");
    const double m = static_cast<double>(n / k);
    const double nn = static_cast<double>(n);
    // Expected degree includes the unit diagonal of the expected adjacency.
    const double degree = m * p + (nn - m) * q + (1.0 - p);
    return 1.0 + ((q - p) * m - (1.0 - p)) / degree;
}

double expected_gap_unequal(count n, count m, double p, double q) {
    check_prob(p, "p");
    check_prob(q, "q");
    if (2 * m < n || m >= n)
        throw ValidationError("larger block size must satisfy n/2 <= m < n");
    const double nn = static_cast<double>(n), mm = static_cast<double>(m);
    const double d1 = 1.0 / (1.0 + (mm - 1.0) * p + (nn - mm) * q);
    const double d2 = 1.0 / (1.0 + (nn - mm - 1.0) * p + mm * q);
    // The block-constant 2x2 reduction has eigenvalues 1 and trace - 1.
    const double trace = d1 * (1.0 - p + mm * p) + d2 * (1.0 - p + (nn - mm) * p);
    return 2.0 - trace;
}

} // namespace rwl::spectral
