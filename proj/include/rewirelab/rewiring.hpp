#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "rewirelab/graph.hpp"
#include "rewirelab/spectral.hpp"

namespace rwl::rewiring {

enum class Method { HigherComMa, LowerComMa, FeaSt, ComFy, ProxyMin, ProxyMax };
enum class Op { Add, Del, AddDel };
enum class Direction { Higher, Lower };
enum class Objective { Min, Max };

std::string_view to_string(Method m);
std::string_view to_string(Op op);
/// Case-insensitive; accepts the short CLI spellings ("comma-higher", "proxy-max", ...).
Method parse_method(std::string_view s);
Op parse_op(std::string_view s);

/// Cosine of the two feature rows; 0 when either row is all zeros.
double cosine_similarity(const FeatureMatrix &x, node u, node v);

/// Random community-guided rewiring. Higher+Add draws non-edges inside
/// communities, Higher+Del draws existing edges across communities, and Lower
/// swaps the two. Draws are uniform and without replacement; when fewer than
/// `k` candidates exist all are taken and a warning records the shortfall.
EdgeDelta comma(const Graph &g, const Partition &part, Direction dir, Op op, count k,
                std::uint64_t seed, bool allow_isolation = false);

struct FeastOptions {
    /// Restrict candidates to pairs inside a seeded uniform node sample.
    double sample_ratio = 1.0;
    std::uint64_t seed = 0;
    bool allow_isolation = false;
    /// Graphs larger than this switch to `auto_sample_ratio` when
    /// `sample_ratio` is left at 1.
    count auto_sample_threshold = 20000;
    double auto_sample_ratio = 0.2;
};

/// Similarity-guided rewiring. Add takes the k most similar non-edges, Del the
/// k least similar edges; ties go to the lexicographically smaller pair.
///
/// Ranking by the graph's mean similarity with or without the candidate is a
/// strictly monotone transform of sim(u, v) for a fixed edge count, so the
/// candidates are ordered by sim directly.
EdgeDelta feast(const Graph &g, const FeatureMatrix &x, Op op, count k, const FeastOptions &opts = {});

/// Budget per unordered community pair (i <= j):
/// round(k * |C_i||C_j| / sum over pairs of |C_x||C_y|).
std::map<std::pair<std::uint32_t, std::uint32_t>, count> comfy_budgets(const Partition &part, count k);

/// FeaSt applied separately inside every community pair with the budget above.
/// Pairs with fewer candidates than budget take what they have; the realized
/// modification count is recorded in the provenance.
EdgeDelta comfy(const Graph &g, const FeatureMatrix &x, const Partition &part, Op op, count k,
                bool allow_isolation = false);

struct ProxyOptions {
    bool allow_isolation = false;
    /// Warm power steps after each accepted edit.
    count refresh_iterations = 15;
    /// Full re-solve after this many edits.
    count resolve_every = 25;
    spectral::Options solver{};
};

/// Greedy spectral rewiring: k steps, each scoring every candidate with the
/// first-order gap proxy and applying the arg-min (Min) or arg-max (Max).
/// Scores within a relative 1e-12 count as ties and go to the smaller pair.
EdgeDelta proxy_rewire(const Graph &g, Objective obj, Op op, count k, const ProxyOptions &opts = {});

struct Request {
    Method method = Method::FeaSt;
    Op op = Op::Add;
    count k = 0;
    std::uint64_t seed = 0;
    double sample_ratio = 1.0;
    bool allow_isolation = false;
    ProxyOptions proxy{};
    count auto_sample_threshold = 20000;
};

/// Dispatches to the method. AddDel runs the Add phase, then the Del phase on
/// the intermediate graph, and returns the net delta against `g`. FeaSt and
/// ComFy need `x`; ComMa and ComFy need `part`.
EdgeDelta rewire(const Graph &g, const FeatureMatrix *x, const Partition *part, const Request &req);

} // namespace rwl::rewiring
