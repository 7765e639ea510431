#include "rewirelab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "rewirelab/errors.hpp"
#include "rewirelab/io.hpp"
#include "rewirelab/rewiring.hpp"

namespace rwl::metrics {

namespace {

double entropy(const std::map<std::uint32_t, double> &counts, double n) {
    double h = 0.0;
    for (const auto &[_, c] : counts)
        if (c > 0.0)
            h -= (c / n) * std::log(c / n);
    return h;
}

} // namespace

double nmi(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
    if (a.size() != b.size())
        throw ValidationError("nmi needs labelings of equal length");
    if (a.empty())
        return 1.0;
    const double n = static_cast<double>(a.size());
    std::map<std::uint32_t, double> ca, cb;
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> joint;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ca[a[i]] += 1.0;
        cb[b[i]] += 1.0;
        joint[{a[i], b[i]}] += 1.0;
    }
    const double ha = entropy(ca, n), hb = entropy(cb, n);
    if (ha == 0.0 && hb == 0.0)
        return 1.0;
    if (ha == 0.0 || hb == 0.0)
        return 0.0;
    double mi = 0.0;
    for (const auto &[key, c] : joint)
        mi += (c / n) * std::log(n * c / (ca[key.first] * cb[key.second]));
    return std::clamp(mi / std::sqrt(ha * hb), 0.0, 1.0);
}

double edge_homophily(const Graph &g, const LabelVector &y) {
    io::check_paired(g, y);
    if (g.num_edges() == 0)
        return 0.0;
    count same = 0;
    for (const auto &e : g.edges())
        same += y[e.u] == y[e.v];
    return static_cast<double>(same) / static_cast<double>(g.num_edges());
}

std::optional<double> adjusted_homophily(const Graph &g, const LabelVector &y) {
    io::check_paired(g, y);
    if (g.num_edges() == 0)
        return std::nullopt;
    std::vector<double> class_degree(y.num_classes(), 0.0);
    for (node i = 0; i < g.num_nodes(); ++i)
        class_degree[y[i]] += static_cast<double>(g.degree(i));
    const double two_m = 2.0 * static_cast<double>(g.num_edges());
    double expected = 0.0;
    for (double d : class_degree)
        expected += (d / two_m) * (d / two_m);
    const double denom = 1.0 - expected;
    if (denom <= 1e-15)
        return std::nullopt;
    return (edge_homophily(g, y) - expected) / denom;
}

double mean_edge_similarity(const Graph &g, const FeatureMatrix &x) {
    io::check_paired(g, x);
    if (g.num_edges() == 0)
        return 0.0;
    double sum = 0.0;
    for (const auto &e : g.edges())
        sum += rewiring::cosine_similarity(x, e.u, e.v);
    return sum / static_cast<double>(g.num_edges());
}

AlignmentMatrix alignment_matrix(const EdgeDelta &delta, const LabelVector &y, const Partition &part) {
    if (y.size() != part.size())
        throw ValidationError("labels and partition cover different node counts");
    auto cell = [&](AlignmentMatrix::Grid &grid, const Edge &e) {
        if (e.v >= y.size())
            throw ValidationError("delta touches node " + std::to_string(e.v) +
                                  " outside the labeling");
        grid[y[e.u] == y[e.v] ? 0 : 1][part[e.u] == part[e.v] ? 0 : 1] += 1;
    };
    AlignmentMatrix m;
    for (const auto &e : delta.added)
        cell(m.added, e);
    for (const auto &e : delta.deleted)
        cell(m.deleted, e);
    return m;
}

} // namespace rwl::metrics
