#include "rewirelab/community.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

#include "rewirelab/io.hpp"

namespace rwl::community {

namespace {

constexpr double kGainEps = 1e-12;

// Weighted multigraph used for the coarse levels.
struct Level {
    count n = 0;
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj; // no self entries
    std::vector<double> self;                                        // self-loop weight
    std::vector<double> strength;
    double total = 0.0; // sum of edge weights, self-loops counted once
};

Level from_graph(const Graph &g) {
    Level l;
    l.n = g.num_nodes();
    l.adj.resize(l.n);
    l.self.assign(l.n, 0.0);
    l.strength.assign(l.n, 0.0);
    for (const auto &e : g.edges()) {
        l.adj[e.u].emplace_back(e.v, 1.0);
        l.adj[e.v].emplace_back(e.u, 1.0);
        l.strength[e.u] += 1.0;
        l.strength[e.v] += 1.0;
    }
    l.total = static_cast<double>(g.num_edges());
    return l;
}

// Returns true if any node moved.
bool move_nodes(const Level &l, std::vector<std::uint32_t> &comm, double resolution,
                std::mt19937_64 &rng) {
    const double two_m = 2.0 * l.total;
    std::vector<double> tot(l.n, 0.0);
    for (count i = 0; i < l.n; ++i)
        tot[comm[i]] += l.strength[i];

    std::vector<count> order(l.n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<double> link(l.n, -1.0);
    std::vector<std::uint32_t> touched;
    bool any = false;
    bool moved = true;
    while (moved) {
        moved = false;
        for (count i : order) {
            const std::uint32_t own = comm[i];
            const double ki = l.strength[i];
            touched.clear();
            link[own] = 0.0;
            touched.push_back(own);
            for (auto [j, w] : l.adj[i]) {
                auto c = comm[j];
                if (link[c] < 0.0) {
                    link[c] = 0.0;
                    touched.push_back(c);
                }
                link[c] += w;
            }
            tot[own] -= ki;
            auto gain = [&](std::uint32_t c) { return link[c] - resolution * tot[c] * ki / two_m; };
            std::uint32_t best = own;
            double best_gain = gain(own);
            for (auto c : touched) {
                if (c == own)
                    continue;
                const double gc = gain(c);
                if (gc > best_gain + kGainEps) {
                    best = c;
                    best_gain = gc;
                } else if (best != own && std::abs(gc - best_gain) <= kGainEps && c < best) {
                    best = c;
                }
            }
            tot[best] += ki;
            if (best != own) {
                comm[i] = best;
                moved = true;
                any = true;
            }
            for (auto c : touched)
                link[c] = -1.0;
        }
    }
    return any;
}

// Renumbers communities in order of first appearance and returns the count.
count compact(std::vector<std::uint32_t> &comm) {
    std::vector<std::int64_t> remap(comm.size(), -1);
    std::uint32_t next = 0;
    for (auto &c : comm) {
        if (remap[c] < 0)
            remap[c] = next++;
        c = static_cast<std::uint32_t>(remap[c]);
    }
    return next;
}

Level aggregate(const Level &l, const std::vector<std::uint32_t> &comm, count k) {
    Level out;
    out.n = k;
    out.adj.resize(k);
    out.self.assign(k, 0.0);
    out.strength.assign(k, 0.0);
    out.total = l.total;
    std::vector<std::map<std::uint32_t, double>> acc(k);
    for (count i = 0; i < l.n; ++i) {
        out.self[comm[i]] += l.self[i];
        out.strength[comm[i]] += l.strength[i];
        for (auto [j, w] : l.adj[i]) {
            if (j < i)
                continue; // each undirected edge once
            auto a = comm[i], b = comm[j];
            if (a == b)
                out.self[a] += w;
            else {
                acc[a][b] += w;
                acc[b][a] += w;
            }
        }
    }
    for (count c = 0; c < k; ++c)
        for (auto [d, w] : acc[c])
            out.adj[c].emplace_back(d, w);
    return out;
}

} // namespace

double modularity(const Graph &g, const Partition &part, double resolution) {
    io::check_paired(g, part);
    if (g.num_edges() == 0)
        return 0.0;
    const double m = static_cast<double>(g.num_edges());
    std::vector<double> inside(part.num_communities(), 0.0), degree(part.num_communities(), 0.0);
    for (const auto &e : g.edges())
        if (part[e.u] == part[e.v])
            inside[part[e.u]] += 1.0;
    for (node i = 0; i < g.num_nodes(); ++i)
        degree[part[i]] += static_cast<double>(g.degree(i));
    double q = 0.0;
    for (count c = 0; c < part.num_communities(); ++c) {
        const double frac = degree[c] / (2.0 * m);
        q += inside[c] / m - resolution * frac * frac;
    }
    return q;
}

Partition louvain(const Graph &g, std::uint64_t seed, double resolution,
                  std::vector<double> *level_modularity) {
    std::vector<std::uint32_t> assignment(g.num_nodes());
    std::iota(assignment.begin(), assignment.end(), 0u);
    if (g.num_edges() == 0)
        return Partition(std::move(assignment));

    std::mt19937_64 rng(seed);
    Level level = from_graph(g);
    double previous = modularity(g, Partition(assignment), resolution);
    while (true) {
        std::vector<std::uint32_t> comm(level.n);
        std::iota(comm.begin(), comm.end(), 0u);
        if (!move_nodes(level, comm, resolution, rng))
            break;
        const count k = compact(comm);
        for (auto &a : assignment)
            a = comm[a];
        const double q = modularity(g, Partition(assignment), resolution);
        if (q < previous - 1e-9)
            throw std::logic_error("louvain level decreased modularity");
        previous = q;
        if (level_modularity)
            level_modularity->push_back(q);
        if (k == level.n)
            break;
        level = aggregate(level, comm, k);
    }
    return Partition(std::move(assignment));
}

} // namespace rwl::community
