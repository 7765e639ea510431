#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rwl {

using node = std::uint32_t;
using count = std::size_t;

/// Unordered node pair, always stored with u < v.
struct Edge {
    node u = 0;
    node v = 0;

    Edge() = default;
    Edge(node a, node b) : u(a < b ? a : b), v(a < b ? b : a) {}

    auto operator<=>(const Edge &) const = default;
};

/// Simple undirected graph in CSR form. Immutable after construction.
///
/// The edge list is sorted lexicographically and each neighbor list is sorted
/// ascending, so iteration order is deterministic everywhere downstream.
class Graph {
public:
    Graph() = default;

    /// Builds a graph from an arbitrary edge collection. Duplicates and
    /// reversed pairs collapse; self-loops and out-of-range ids throw
    /// ValidationError.
    Graph(count num_nodes, std::vector<Edge> edges);

    count num_nodes() const noexcept { return num_nodes_; }
    count num_edges() const noexcept { return edges_.size(); }
    const std::vector<Edge> &edges() const noexcept { return edges_; }

    std::span<const node> neighbors(node u) const {
        return {adjacency_.data() + offsets_[u], adjacency_.data() + offsets_[u + 1]};
    }
    count degree(node u) const { return offsets_[u + 1] - offsets_[u]; }
    bool has_edge(node u, node v) const;

    /// Full rescan of the representation invariants. Used by tests.
    bool check_invariants() const;

    bool operator==(const Graph &other) const {
        return num_nodes_ == other.num_nodes_ && edges_ == other.edges_;
    }

private:
    count num_nodes_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_{0};
    std::vector<node> adjacency_;
};

/// Row-major dense feature matrix, one row per node.
class FeatureMatrix {
public:
    FeatureMatrix() = default;
    FeatureMatrix(count rows, count dim, std::vector<double> values);

    count rows() const noexcept { return rows_; }
    count dim() const noexcept { return dim_; }
    std::span<const double> row(node i) const { return {values_.data() + i * dim_, dim_}; }
    const std::vector<double> &values() const noexcept { return values_; }

    bool operator==(const FeatureMatrix &) const = default;

private:
    count rows_ = 0;
    count dim_ = 0;
    std::vector<double> values_;
};

/// Per-node class ids in 0..num_classes-1. A class may be empty in a
/// particular sample (e.g. after random label flips).
class LabelVector {
public:
    LabelVector() = default;
    /// `num_classes` of 0 means max id + 1; otherwise every id must be below it.
    explicit LabelVector(std::vector<std::uint32_t> labels, count num_classes = 0);

    count size() const noexcept { return labels_.size(); }
    count num_classes() const noexcept { return num_classes_; }
    std::uint32_t operator[](node i) const { return labels_[i]; }
    const std::vector<std::uint32_t> &values() const noexcept { return labels_; }

    bool operator==(const LabelVector &) const = default;

private:
    std::vector<std::uint32_t> labels_;
    count num_classes_ = 0;
};

/// Node to community assignment with ids 0..k-1, every id used.
class Partition {
public:
    Partition() = default;
    /// Throws ValidationError unless ids are 0-based and contiguous.
    explicit Partition(std::vector<std::uint32_t> assignment);

    /// Renumbers arbitrary ids to 0..k-1 in order of first appearance.
    static Partition compacted(const std::vector<std::uint32_t> &ids);

    count size() const noexcept { return assignment_.size(); }
    count num_communities() const noexcept { return num_communities_; }
    std::uint32_t operator[](node i) const { return assignment_[i]; }
    const std::vector<std::uint32_t> &values() const noexcept { return assignment_; }
    std::vector<count> community_sizes() const;

    bool operator==(const Partition &) const = default;

private:
    std::vector<std::uint32_t> assignment_;
    count num_communities_ = 0;
};

struct Provenance {
    std::string method;
    std::map<std::string, std::string> params;
    std::uint64_t seed = 0;
};

/// Output of a rewiring run: edges to add and edges to delete, in selection
/// order, plus what produced them.
struct EdgeDelta {
    std::vector<Edge> added;
    std::vector<Edge> deleted;
    Provenance provenance;
    std::vector<std::string> warnings;
    std::map<std::string, double> timings_ms;

    bool empty() const noexcept { return added.empty() && deleted.empty(); }
    EdgeDelta inverse() const;
};

/// Throws ValidationError naming the first offending edge when the delta does
/// not fit the graph.
void validate_delta(const Graph &g, const EdgeDelta &d);

/// Returns a new graph with the delta applied. The input is unchanged.
Graph apply_delta(const Graph &g, const EdgeDelta &d);

/// Connected components; isolated nodes get their own component.
std::vector<std::uint32_t> connected_components(const Graph &g, count *num_components = nullptr);

} // namespace rwl
