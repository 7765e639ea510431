#pragma once

#include <array>
#include <optional>
#include <span>

#include "rewirelab/graph.hpp"

namespace rwl::metrics {

/// I(a;b) / sqrt(H(a) H(b)) with natural-log entropies. Two single-cluster
/// labelings score 1; a single-cluster labeling against anything else scores 0.
double nmi(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b);
inline double nmi(const LabelVector &y, const Partition &p) { return nmi(y.values(), p.values()); }

/// Fraction of edges whose endpoints share a label; 0 for an edgeless graph.
double edge_homophily(const Graph &g, const LabelVector &y);

/// (h_edge - sum_c (D_c / 2|E|)^2) / (1 - sum_c (D_c / 2|E|)^2), D_c being the
/// degree sum of class c. Empty when the denominator vanishes (one class
/// carries all the degree) or the graph has no edges.
std::optional<double> adjusted_homophily(const Graph &g, const LabelVector &y);

/// Mean cosine similarity over the edges; 0 for an edgeless graph.
double mean_edge_similarity(const Graph &g, const FeatureMatrix &x);

/// Counts of modified edges, indexed [label][community] where index 0 means
/// "same" and 1 means "different".
struct AlignmentMatrix {
    using Grid = std::array<std::array<count, 2>, 2>;
    Grid added{};
    Grid deleted{};

    static count total(const Grid &g) { return g[0][0] + g[0][1] + g[1][0] + g[1][1]; }
};

AlignmentMatrix alignment_matrix(const EdgeDelta &delta, const LabelVector &y, const Partition &part);

} // namespace rwl::metrics
