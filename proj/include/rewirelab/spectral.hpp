#pragma once

#include <vector>

#include "rewirelab/graph.hpp"

namespace rwl::spectral {

struct Options {
    double tol = 1e-8;
    /// Operator applications allowed; 0 selects max(10 * N, 300).
    count max_iter = 0;
};

/// Second-smallest eigenpair of the normalized Laplacian L = I - D^-1/2 A D^-1/2.
///
/// Degree-0 nodes use the identity row of L, so they contribute eigenvalue-1
/// modes and are left out of the deflation space. When the graph has two or
/// more components of size >= 2, the gap is 0, `connected` is false and
/// `fiedler` is the zero-eigenvalue vector separating the smallest-volume
/// component from the rest.
struct State {
    double gap = 0.0;
    std::vector<double> fiedler;
    double residual = 0.0;
    bool connected = true;
    count iterations = 0;
    count components = 0; ///< components with at least one edge
    count isolated = 0;
};

/// Full solve by restarted Lanczos with full reorthogonalization against the
/// per-component trivial vectors D^1/2 1. Throws ConvergenceError carrying the
/// best estimate when `max_iter` operator applications are not enough.
State spectral_gap(const Graph &g, const Options &opts = {},
                   const std::vector<double> *warm_start = nullptr);

/// Cheap update after a small edit: `iterations` deflated power steps on
/// 2I - L starting from `warm.fiedler`. Never throws on slow convergence;
/// the residual reports how good the result is.
State refresh(const Graph &g, const State &warm, count iterations = 15);

/// First-order estimate of the gap after adding (u, v):
/// gap + ((f_u - f_v)^2 - gap * (f_u^2 + f_v^2)).
double proxy_gap_after_add(const State &s, node u, node v);

/// First-order estimate of the gap after deleting (u, v); the negated
/// correction of proxy_gap_after_add.
double proxy_gap_after_del(const State &s, node u, node v);

/// Community-mode eigenvalue of the expected normalized Laplacian of a
/// two-block (p, q) model with unit diagonal. Equals the gap whenever p >= q.
double expected_gap_two_block(count n, double p, double q);

/// Same for k equal blocks; k must divide n.
double expected_gap_k_block(count n, count k, double p, double q);

/// Two blocks of sizes m (the larger) and n - m.
double expected_gap_unequal(count n, count m, double p, double q);

} // namespace rwl::spectral
