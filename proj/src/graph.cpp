#include "rewirelab/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "rewirelab/errors.hpp"

namespace rwl {

namespace {

std::string edge_str(const Edge &e) {
    std::ostringstream os;
    os << "(" << e.u << "," << e.v << ")";
    return os.str();
}

// Checks that ids are exactly {0, ..., k-1} and returns k.
count contiguous_id_count(const std::vector<std::uint32_t> &ids, const char *what) {
    if (ids.empty())
        return 0;
    const auto k = static_cast<count>(*std::max_element(ids.begin(), ids.end())) + 1;
    std::vector<bool> seen(k, false);
    for (auto id : ids)
        seen[id] = true;
    for (count c = 0; c < k; ++c)
        if (!seen[c])
            throw ValidationError(std::string(what) + " ids are not contiguous: id " +
                                  std::to_string(c) + " is unused");
    return k;
}

} // namespace

Graph::Graph(count num_nodes, std::vector<Edge> edges) : num_nodes_(num_nodes) {
    for (const auto &e : edges) {
        if (e.u == e.v)
            throw ValidationError("self-loop on node " + std::to_string(e.u));
        if (e.v >= num_nodes)
            throw ValidationError("edge " + edge_str(e) + " out of range for " +
                                  std::to_string(num_nodes) + " nodes");
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);

    std::vector<std::size_t> deg(num_nodes_, 0);
    for (const auto &e : edges_) {
        ++deg[e.u];
        ++deg[e.v];
    }
    offsets_.assign(num_nodes_ + 1, 0);
    for (count i = 0; i < num_nodes_; ++i)
        offsets_[i + 1] = offsets_[i] + deg[i];
    adjacency_.resize(offsets_.back());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    // edges_ is sorted by (u, v), so every row ends up sorted: for row w the
    // entries with w as second endpoint (smaller partners) arrive in order of
    // u, and those come before the ones where w is first endpoint.
    for (const auto &e : edges_)
        adjacency_[fill[e.v]++] = e.u;
    for (const auto &e : edges_)
        adjacency_[fill[e.u]++] = e.v;
}

bool Graph::has_edge(node u, node v) const {
    if (u >= num_nodes_ || v >= num_nodes_ || u == v)
        return false;
    if (degree(u) > degree(v))
        std::swap(u, v);
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

bool Graph::check_invariants() const {
    std::set<Edge> from_adj;
    std::size_t degree_sum = 0;
    for (node u = 0; u < num_nodes_; ++u) {
        auto nb = neighbors(u);
        degree_sum += nb.size();
        if (!std::is_sorted(nb.begin(), nb.end()))
            return false;
        for (auto v : nb) {
            if (v == u)
                return false;
            from_adj.insert(Edge(u, v));
        }
    }
    if (degree_sum != 2 * edges_.size())
        return false;
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        if (edges_[i].u >= edges_[i].v)
            return false;
        if (i > 0 && !(edges_[i - 1] < edges_[i]))
            return false;
    }
    return std::equal(from_adj.begin(), from_adj.end(), edges_.begin(), edges_.end());
}

FeatureMatrix::FeatureMatrix(count rows, count dim, std::vector<double> values)
    : rows_(rows), dim_(dim), values_(std::move(values)) {
    if (values_.size() != rows_ * dim_)
        throw ValidationError("feature matrix has " + std::to_string(values_.size()) +
                              " values, expected " + std::to_string(rows_ * dim_));
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (!std::isfinite(values_[i]))
            throw ValidationError("non-finite feature at row " + std::to_string(i / dim_));
}

LabelVector::LabelVector(std::vector<std::uint32_t> labels, count num_classes)
    : labels_(std::move(labels)), num_classes_(num_classes) {
    const count inferred =
        labels_.empty() ? 0 : static_cast<count>(*std::max_element(labels_.begin(), labels_.end())) + 1;
    if (num_classes_ == 0)
        num_classes_ = inferred;
    else if (inferred > num_classes_)
        throw ValidationError("label " + std::to_string(inferred - 1) + " exceeds class count " +
                              std::to_string(num_classes_));
}

Partition::Partition(std::vector<std::uint32_t> assignment)
    : assignment_(std::move(assignment)),
      num_communities_(contiguous_id_count(assignment_, "community")) {}

Partition Partition::compacted(const std::vector<std::uint32_t> &ids) {
    std::map<std::uint32_t, std::uint32_t> remap;
    std::vector<std::uint32_t> out(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        auto [it, inserted] = remap.try_emplace(ids[i], static_cast<std::uint32_t>(remap.size()));
        out[i] = it->second;
    }
    return Partition(std::move(out));
}

std::vector<count> Partition::community_sizes() const {
    std::vector<count> sizes(num_communities_, 0);
    for (auto c : assignment_)
        ++sizes[c];
    return sizes;
}

EdgeDelta EdgeDelta::inverse() const {
    EdgeDelta inv = *this;
    std::swap(inv.added, inv.deleted);
    return inv;
}

void validate_delta(const Graph &g, const EdgeDelta &d) {
    std::set<Edge> added;
    for (const auto &e : d.added) {
        if (e.u == e.v)
            throw ValidationError("delta adds self-loop " + edge_str(e));
        if (e.v >= g.num_nodes())
            throw ValidationError("delta adds out-of-range edge " + edge_str(e));
        if (g.has_edge(e.u, e.v))
            throw ValidationError("delta adds existing edge " + edge_str(e));
        if (!added.insert(e).second)
            throw ValidationError("delta adds edge twice " + edge_str(e));
    }
    std::set<Edge> deleted;
    for (const auto &e : d.deleted) {
        if (!g.has_edge(e.u, e.v))
            throw ValidationError("delta deletes absent edge " + edge_str(e));
        if (!deleted.insert(e).second)
            throw ValidationError("delta deletes edge twice " + edge_str(e));
        if (added.count(e))
            throw ValidationError("edge both added and deleted " + edge_str(e));
    }
}

Graph apply_delta(const Graph &g, const EdgeDelta &d) {
    validate_delta(g, d);
    std::set<Edge> removed(d.deleted.begin(), d.deleted.end());
    std::vector<Edge> edges;
    edges.reserve(g.num_edges() + d.added.size());
    for (const auto &e : g.edges())
        if (!removed.count(e))
            edges.push_back(e);
    edges.insert(edges.end(), d.added.begin(), d.added.end());
    return Graph(g.num_nodes(), std::move(edges));
}

std::vector<std::uint32_t> connected_components(const Graph &g, count *num_components) {
    constexpr auto unset = static_cast<std::uint32_t>(-1);
    std::vector<std::uint32_t> comp(g.num_nodes(), unset);
    std::vector<node> stack;
    std::uint32_t next = 0;
    for (node s = 0; s < g.num_nodes(); ++s) {
        if (comp[s] != unset)
            continue;
        comp[s] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            node u = stack.back();
            stack.pop_back();
            for (auto v : g.neighbors(u))
                if (comp[v] == unset) {
                    comp[v] = next;
                    stack.push_back(v);
                }
        }
        ++next;
    }
    if (num_components)
        *num_components = next;
    return comp;
}

} // namespace rwl
