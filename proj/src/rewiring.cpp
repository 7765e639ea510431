#include "rewirelab/rewiring.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <unordered_set>

#include "rewirelab/errors.hpp"
#include "rewirelab/io.hpp"

namespace rwl::rewiring {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto &c : out)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    out.erase(std::remove_if(out.begin(), out.end(), [](char c) { return c == '-' || c == '_'; }),
              out.end());
    return out;
}

std::uint64_t pair_key(const Edge &e) { return (static_cast<std::uint64_t>(e.u) << 32) | e.v; }

// Degree bookkeeping for the isolation guard.
class DegreeGuard {
public:
    DegreeGuard(const Graph &g, bool allow_isolation) : allow_(allow_isolation), deg_(g.num_nodes()) {
        for (node i = 0; i < g.num_nodes(); ++i)
            deg_[i] = g.degree(i);
    }
    bool can_delete(const Edge &e) const { return allow_ || (deg_[e.u] > 1 && deg_[e.v] > 1); }
    void remove(const Edge &e) {
        --deg_[e.u];
        --deg_[e.v];
    }

private:
    bool allow_;
    std::vector<count> deg_;
};

struct Scored {
    double sim;
    Edge e;
};

// Higher similarity first, then the smaller pair.
struct MoreSimilar {
    bool operator()(const Scored &a, const Scored &b) const {
        return a.sim > b.sim || (a.sim == b.sim && a.e < b.e);
    }
};

// Lower similarity first, then the smaller pair.
struct LessSimilar {
    bool operator()(const Scored &a, const Scored &b) const {
        return a.sim < b.sim || (a.sim == b.sim && a.e < b.e);
    }
};

// Keeps the best `k` items seen under `Better`.
template <class Better>
class TopK {
public:
    explicit TopK(count k) : k_(k) {}
    void offer(const Scored &s) {
        ++seen_;
        if (k_ == 0)
            return;
        if (heap_.size() < k_) {
            heap_.push(s);
        } else if (Better{}(s, heap_.top())) {
            heap_.pop();
            heap_.push(s);
        }
    }
    count seen() const { return seen_; }
    std::vector<Scored> sorted() {
        std::vector<Scored> out;
        out.reserve(heap_.size());
        while (!heap_.empty()) {
            out.push_back(heap_.top());
            heap_.pop();
        }
        std::sort(out.begin(), out.end(), Better{});
        return out;
    }

private:
    count k_;
    count seen_ = 0;
    std::priority_queue<Scored, std::vector<Scored>, Better> heap_;
};

// Cosine similarity with cached inverse norms.
class Similarity {
public:
    explicit Similarity(const FeatureMatrix &x) : x_(x), inv_norm_(x.rows(), 0.0) {
        for (node i = 0; i < x.rows(); ++i) {
            double s = 0.0;
            for (double v : x.row(i))
                s += v * v;
            inv_norm_[i] = s > 0.0 ? 1.0 / std::sqrt(s) : 0.0;
        }
    }
    double operator()(node u, node v) const {
        if (inv_norm_[u] == 0.0 || inv_norm_[v] == 0.0)
            return 0.0;
        auto a = x_.row(u), b = x_.row(v);
        double s = 0.0;
        for (count j = 0; j < a.size(); ++j)
            s += a[j] * b[j];
        return s * inv_norm_[u] * inv_norm_[v];
    }

private:
    const FeatureMatrix &x_;
    std::vector<double> inv_norm_;
};

void note_shortfall(EdgeDelta &d, const char *what, count requested, count got) {
    if (got < requested)
        d.warnings.push_back(std::string(what) + ": requested " + std::to_string(requested) +
                             ", only " + std::to_string(got) + " candidates available");
}

void require_single_op(Op op, const char *method) {
    if (op == Op::AddDel)
        throw ValidationError(std::string(method) + " takes Add or Del; AddDel goes through rewire()");
}

// Walks candidates in order and deletes up to k of them, skipping deletions
// that would isolate a node.
std::vector<Edge> take_deletions(const std::vector<Scored> &ranked, count k, DegreeGuard &guard,
                                 count *skipped) {
    std::vector<Edge> out;
    for (const auto &s : ranked) {
        if (out.size() == k)
            break;
        if (!guard.can_delete(s.e)) {
            ++*skipped;
            continue;
        }
        guard.remove(s.e);
        out.push_back(s.e);
    }
    return out;
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

} // namespace

std::string_view to_string(Method m) {
    switch (m) {
    case Method::HigherComMa:
        return "HigherComMa";
    case Method::LowerComMa:
        return "LowerComMa";
    case Method::FeaSt:
        return "FeaSt";
    case Method::ComFy:
        return "ComFy";
    case Method::ProxyMin:
        return "ProxyMin";
    case Method::ProxyMax:
        return "ProxyMax";
    }
    return "?";
}

std::string_view to_string(Op op) {
    switch (op) {
    case Op::Add:
        return "Add";
    case Op::Del:
        return "Del";
    case Op::AddDel:
        return "AddDel";
    }
    return "?";
}

Method parse_method(std::string_view s) {
    const auto l = lower(s);
    if (l == "highercomma" || l == "commahigher" || l == "comma")
        return Method::HigherComMa;
    if (l == "lowercomma" || l == "commalower")
        return Method::LowerComMa;
    if (l == "feast")
        return Method::FeaSt;
    if (l == "comfy")
        return Method::ComFy;
    if (l == "proxymin")
        return Method::ProxyMin;
    if (l == "proxymax" || l == "proxy")
        return Method::ProxyMax;
    throw ValidationError("unknown rewiring method '" + std::string(s) + "'");
}

Op parse_op(std::string_view s) {
    const auto l = lower(s);
    if (l == "add")
        return Op::Add;
    if (l == "del" || l == "delete")
        return Op::Del;
    if (l == "adddel" || l == "both")
        return Op::AddDel;
    throw ValidationError("unknown rewiring op '" + std::string(s) + "'");
}

double cosine_similarity(const FeatureMatrix &x, node u, node v) {
    auto a = x.row(u), b = x.row(v);
    double ab = 0.0, aa = 0.0, bb = 0.0;
    for (count j = 0; j < a.size(); ++j) {
        ab += a[j] * b[j];
        aa += a[j] * a[j];
        bb += b[j] * b[j];
    }
    if (aa == 0.0 || bb == 0.0)
        return 0.0;
    return ab / (std::sqrt(aa) * std::sqrt(bb));
}

EdgeDelta comma(const Graph &g, const Partition &part, Direction dir, Op op, count k,
                std::uint64_t seed, bool allow_isolation) {
    io::check_paired(g, part);
    require_single_op(op, "ComMa");
    const bool want_intra = (dir == Direction::Higher) == (op == Op::Add);

    EdgeDelta d;
    d.provenance.method = dir == Direction::Higher ? "HigherComMa" : "LowerComMa";
    d.provenance.seed = seed;
    d.provenance.params = {{"op", std::string(to_string(op))},
                           {"k", std::to_string(k)},
                           {"allow_isolation", allow_isolation ? "true" : "false"}};
    if (k == 0)
        return d;

    std::mt19937_64 rng(seed);
    auto in_area = [&](node u, node v) { return (part[u] == part[v]) == want_intra; };

    if (op == Op::Del) {
        std::vector<Edge> cands;
        for (const auto &e : g.edges())
            if (in_area(e.u, e.v))
                cands.push_back(e);
        DegreeGuard guard(g, allow_isolation);
        count skipped = 0;
        // Lazy Fisher-Yates: uniform order without replacement.
        for (std::size_t i = 0; i < cands.size() && d.deleted.size() < k; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, cands.size() - 1);
            std::swap(cands[i], cands[pick(rng)]);
            if (!guard.can_delete(cands[i])) {
                ++skipped;
                continue;
            }
            guard.remove(cands[i]);
            d.deleted.push_back(cands[i]);
        }
        if (cands.empty())
            d.warnings.push_back("no candidate edges for deletion");
        else
            note_shortfall(d, "deletion", k, d.deleted.size());
        if (skipped)
            d.warnings.push_back(std::to_string(skipped) + " deletions skipped by isolation guard");
        return d;
    }

    const count n = g.num_nodes();
    std::vector<std::vector<node>> members(part.num_communities());
    for (node i = 0; i < n; ++i)
        members[part[i]].push_back(i);
    double intra_area = 0.0;
    for (const auto &m : members)
        intra_area += 0.5 * static_cast<double>(m.size()) * static_cast<double>(m.size() - 1);
    const double all_pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    const double area = want_intra ? intra_area : all_pairs - intra_area;
    count existing = 0;
    for (const auto &e : g.edges())
        existing += in_area(e.u, e.v);
    const double candidates = area - static_cast<double>(existing);

    // Rejection sampling over the area when candidates are dense there and k
    // is small relative to them; otherwise enumerate.
    const double sample_space = want_intra ? intra_area : static_cast<double>(n) * n;
    const bool rejection = candidates >= 2.0 * static_cast<double>(k) &&
                           candidates >= 0.05 * sample_space && candidates > 0.0;
    if (rejection) {
        std::unordered_set<std::uint64_t> chosen;
        std::vector<double> weights;
        for (const auto &m : members)
            weights.push_back(0.5 * static_cast<double>(m.size()) * static_cast<double>(m.size() - 1));
        std::discrete_distribution<std::size_t> pick_comm(weights.begin(), weights.end());
        std::uniform_int_distribution<node> pick_node(0, static_cast<node>(n - 1));
        while (d.added.size() < k) {
            node u, v;
            if (want_intra) {
                const auto &m = members[pick_comm(rng)];
                std::uniform_int_distribution<std::size_t> a(0, m.size() - 1), b(0, m.size() - 2);
                auto i = a(rng), j = b(rng);
                if (j >= i)
                    ++j;
                u = m[i];
                v = m[j];
            } else {
                u = pick_node(rng);
                v = pick_node(rng);
                if (u == v || part[u] == part[v])
                    continue;
            }
            Edge e(u, v);
            if (g.has_edge(e.u, e.v) || !chosen.insert(pair_key(e)).second)
                continue;
            d.added.push_back(e);
        }
        return d;
    }

    std::vector<Edge> cands;
    if (want_intra) {
        for (const auto &m : members)
            for (std::size_t i = 0; i < m.size(); ++i)
                for (std::size_t j = i + 1; j < m.size(); ++j)
                    if (!g.has_edge(m[i], m[j]))
                        cands.emplace_back(m[i], m[j]);
        std::sort(cands.begin(), cands.end());
    } else {
        for (node u = 0; u < n; ++u)
            for (node v = u + 1; v < n; ++v)
                if (part[u] != part[v] && !g.has_edge(u, v))
                    cands.emplace_back(u, v);
    }
    for (std::size_t i = 0; i < cands.size() && d.added.size() < k; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, cands.size() - 1);
        std::swap(cands[i], cands[pick(rng)]);
        d.added.push_back(cands[i]);
    }
    if (cands.empty())
        d.warnings.push_back("no candidate non-edges for addition");
    else
        note_shortfall(d, "addition", k, d.added.size());
    return d;
}

EdgeDelta feast(const Graph &g, const FeatureMatrix &x, Op op, count k, const FeastOptions &opts) {
    io::check_paired(g, x);
    require_single_op(op, "FeaSt");
    if (!(opts.sample_ratio > 0.0 && opts.sample_ratio <= 1.0))
        throw ValidationError("sample ratio must lie in (0, 1]");
    const count n = g.num_nodes();

    double ratio = opts.sample_ratio;
    if (ratio >= 1.0 && n > opts.auto_sample_threshold)
        ratio = opts.auto_sample_ratio;

    EdgeDelta d;
    d.provenance.method = "FeaSt";
    d.provenance.seed = opts.seed;
    d.provenance.params = {{"op", std::string(to_string(op))},
                           {"k", std::to_string(k)},
                           {"sample_ratio", std::to_string(ratio)},
                           {"allow_isolation", opts.allow_isolation ? "true" : "false"}};

    std::vector<char> in_sample(n, 1);
    if (ratio < 1.0) {
        std::vector<node> order(n);
        std::iota(order.begin(), order.end(), 0u);
        std::mt19937_64 rng(opts.seed);
        std::shuffle(order.begin(), order.end(), rng);
        const auto take = std::max<count>(2, static_cast<count>(std::ceil(ratio * n)));
        std::fill(in_sample.begin(), in_sample.end(), 0);
        for (count i = 0; i < std::min(take, n); ++i)
            in_sample[order[i]] = 1;
    }
    if (k == 0)
        return d;

    Similarity sim(x);
    if (op == Op::Add) {
        TopK<MoreSimilar> top(k);
        std::vector<char> adjacent(n, 0);
        for (node u = 0; u < n; ++u) {
            if (!in_sample[u])
                continue;
            for (auto w : g.neighbors(u))
                adjacent[w] = 1;
            for (node v = u + 1; v < n; ++v)
                if (in_sample[v] && !adjacent[v])
                    top.offer({sim(u, v), Edge(u, v)});
            for (auto w : g.neighbors(u))
                adjacent[w] = 0;
        }
        for (const auto &s : top.sorted())
            d.added.push_back(s.e);
        note_shortfall(d, "addition", k, d.added.size());
        return d;
    }

    std::vector<Scored> ranked;
    for (const auto &e : g.edges())
        if (in_sample[e.u] && in_sample[e.v])
            ranked.push_back({sim(e.u, e.v), e});
    std::sort(ranked.begin(), ranked.end(), LessSimilar{});
    DegreeGuard guard(g, opts.allow_isolation);
    count skipped = 0;
    d.deleted = take_deletions(ranked, k, guard, &skipped);
    note_shortfall(d, "deletion", k, d.deleted.size());
    if (skipped)
        d.warnings.push_back(std::to_string(skipped) + " deletions skipped by isolation guard");
    return d;
}

std::map<std::pair<std::uint32_t, std::uint32_t>, count> comfy_budgets(const Partition &part, count k) {
    const auto sizes = part.community_sizes();
    double total = 0.0;
    for (std::size_t i = 0; i < sizes.size(); ++i)
        for (std::size_t j = i; j < sizes.size(); ++j)
            total += static_cast<double>(sizes[i]) * static_cast<double>(sizes[j]);
    std::map<std::pair<std::uint32_t, std::uint32_t>, count> budgets;
    for (std::uint32_t i = 0; i < sizes.size(); ++i)
        for (std::uint32_t j = i; j < sizes.size(); ++j) {
            const double area = static_cast<double>(sizes[i]) * static_cast<double>(sizes[j]);
            budgets[{i, j}] = total > 0.0
                                  ? static_cast<count>(std::llround(static_cast<double>(k) * area / total))
                                  : 0;
        }
    return budgets;
}

EdgeDelta comfy(const Graph &g, const FeatureMatrix &x, const Partition &part, Op op, count k,
                bool allow_isolation) {
    io::check_paired(g, x);
    io::check_paired(g, part);
    require_single_op(op, "ComFy");
    const count n = g.num_nodes();
    const count m = part.num_communities();
    const auto budgets = comfy_budgets(part, k);
    auto pair_index = [m](std::uint32_t a, std::uint32_t b) {
        if (a > b)
            std::swap(a, b);
        return static_cast<std::size_t>(a) * m + b;
    };

    EdgeDelta d;
    d.provenance.method = "ComFy";
    d.provenance.params = {{"op", std::string(to_string(op))},
                           {"k", std::to_string(k)},
                           {"communities", std::to_string(m)},
                           {"allow_isolation", allow_isolation ? "true" : "false"}};

    Similarity sim(x);
    count short_pairs = 0;
    if (op == Op::Add) {
        std::vector<TopK<MoreSimilar>> tops;
        tops.reserve(m * m);
        for (std::uint32_t a = 0; a < m; ++a)
            for (std::uint32_t b = 0; b < m; ++b)
                tops.emplace_back(a <= b ? budgets.at({a, b}) : 0);
        std::vector<char> adjacent(n, 0);
        for (node u = 0; u < n; ++u) {
            for (auto w : g.neighbors(u))
                adjacent[w] = 1;
            for (node v = u + 1; v < n; ++v) {
                if (adjacent[v])
                    continue;
                auto &top = tops[pair_index(part[u], part[v])];
                top.offer({sim(u, v), Edge(u, v)});
            }
            for (auto w : g.neighbors(u))
                adjacent[w] = 0;
        }
        for (const auto &[key, budget] : budgets) {
            auto &top = tops[pair_index(key.first, key.second)];
            if (top.seen() < budget)
                ++short_pairs;
            for (const auto &s : top.sorted())
                d.added.push_back(s.e);
        }
    } else {
        std::vector<std::vector<Scored>> groups(m * m);
        for (const auto &e : g.edges())
            groups[pair_index(part[e.u], part[e.v])].push_back({sim(e.u, e.v), e});
        DegreeGuard guard(g, allow_isolation);
        count skipped = 0;
        for (const auto &[key, budget] : budgets) {
            auto &ranked = groups[pair_index(key.first, key.second)];
            std::sort(ranked.begin(), ranked.end(), LessSimilar{});
            auto taken = take_deletions(ranked, budget, guard, &skipped);
            if (taken.size() < budget)
                ++short_pairs;
            d.deleted.insert(d.deleted.end(), taken.begin(), taken.end());
        }
        if (skipped)
            d.warnings.push_back(std::to_string(skipped) + " deletions skipped by isolation guard");
    }
    const count realized = d.added.size() + d.deleted.size();
    d.provenance.params["realized"] = std::to_string(realized);
    if (short_pairs)
        d.warnings.push_back(std::to_string(short_pairs) +
                             " community pairs had fewer candidates than budget");
    return d;
}

namespace {

// Mutable edge set that can hand out immutable Graph snapshots.
class WorkingGraph {
public:
    explicit WorkingGraph(const Graph &g) : n_(g.num_nodes()), edges_(g.edges().begin(), g.edges().end()) {}
    void add(const Edge &e) { edges_.insert(e); }
    void remove(const Edge &e) { edges_.erase(e); }
    Graph snapshot() const { return Graph(n_, std::vector<Edge>(edges_.begin(), edges_.end())); }

private:
    count n_;
    std::set<Edge> edges_;
};

bool scores_tie(double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

} // namespace

EdgeDelta proxy_rewire(const Graph &g, Objective obj, Op op, count k, const ProxyOptions &opts) {
    require_single_op(op, "Proxy");
    EdgeDelta d;
    d.provenance.method = obj == Objective::Max ? "ProxyMax" : "ProxyMin";
    d.provenance.params = {{"op", std::string(to_string(op))},
                           {"k", std::to_string(k)},
                           {"refresh_iterations", std::to_string(opts.refresh_iterations)},
                           {"resolve_every", std::to_string(opts.resolve_every)},
                           {"allow_isolation", opts.allow_isolation ? "true" : "false"}};
    if (k == 0)
        return d;

    const count n = g.num_nodes();
    WorkingGraph work(g);
    Graph current = g;
    auto state = spectral::spectral_gap(current, opts.solver);
    if (!state.connected)
        d.warnings.push_back("input graph is not connected; proxy scores use the component vector");
    const double sign = obj == Objective::Max ? 1.0 : -1.0;

    for (count step = 0; step < k; ++step) {
        bool found = false;
        double best = 0.0;
        Edge best_edge;
        auto consider = [&](double score, const Edge &e) {
            const double s = sign * score;
            // Candidates arrive in lexicographic order, so on a tie the earlier one stays.
            if (!found || (s > best && !scores_tie(s, best))) {
                found = true;
                best = s;
                best_edge = e;
            }
        };
        if (op == Op::Add) {
            std::vector<char> adjacent(n, 0);
            for (node u = 0; u < n; ++u) {
                for (auto w : current.neighbors(u))
                    adjacent[w] = 1;
                for (node v = u + 1; v < n; ++v)
                    if (!adjacent[v])
                        consider(spectral::proxy_gap_after_add(state, u, v), Edge(u, v));
                for (auto w : current.neighbors(u))
                    adjacent[w] = 0;
            }
        } else {
            for (const auto &e : current.edges()) {
                if (!opts.allow_isolation && (current.degree(e.u) <= 1 || current.degree(e.v) <= 1))
                    continue;
                consider(spectral::proxy_gap_after_del(state, e.u, e.v), e);
            }
        }
        if (!found) {
            d.warnings.push_back(std::string("stopped after ") + std::to_string(step) +
                                 " steps: no admissible candidate" +
                                 (op == Op::Del ? " (isolation guard)" : ""));
            break;
        }
        if (op == Op::Add) {
            work.add(best_edge);
            d.added.push_back(best_edge);
        } else {
            work.remove(best_edge);
            d.deleted.push_back(best_edge);
        }
        if (step + 1 == k)
            break;
        current = work.snapshot();
        const count done = step + 1;
        if (opts.resolve_every && done % opts.resolve_every == 0)
            state = spectral::spectral_gap(current, opts.solver, &state.fiedler);
        else
            state = spectral::refresh(current, state, opts.refresh_iterations);
    }
    return d;
}

EdgeDelta rewire(const Graph &g, const FeatureMatrix *x, const Partition *part, const Request &req) {
    const bool needs_features = req.method == Method::FeaSt || req.method == Method::ComFy;
    const bool needs_partition = req.method == Method::HigherComMa ||
                                 req.method == Method::LowerComMa || req.method == Method::ComFy;
    if (needs_features && !x)
        throw ValidationError(std::string(to_string(req.method)) + " needs node features");
    if (needs_partition && !part)
        throw ValidationError(std::string(to_string(req.method)) + " needs a community partition");

    auto run = [&](const Graph &graph, Op op, std::uint64_t seed) -> EdgeDelta {
        switch (req.method) {
        case Method::HigherComMa:
        case Method::LowerComMa:
            return comma(graph, *part,
                         req.method == Method::HigherComMa ? Direction::Higher : Direction::Lower, op,
                         req.k, seed, req.allow_isolation);
        case Method::FeaSt: {
            FeastOptions fo;
            fo.sample_ratio = req.sample_ratio;
            fo.seed = seed;
            fo.allow_isolation = req.allow_isolation;
            fo.auto_sample_threshold = req.auto_sample_threshold;
            return feast(graph, *x, op, req.k, fo);
        }
        case Method::ComFy:
            return comfy(graph, *x, *part, op, req.k, req.allow_isolation);
        case Method::ProxyMin:
        case Method::ProxyMax: {
            auto po = req.proxy;
            po.allow_isolation = req.allow_isolation;
            return proxy_rewire(graph, req.method == Method::ProxyMax ? Objective::Max : Objective::Min,
                                op, req.k, po);
        }
        }
        throw ValidationError("unhandled method");
    };

    const auto t0 = std::chrono::steady_clock::now();
    EdgeDelta out;
    if (req.op != Op::AddDel) {
        out = run(g, req.op, req.seed);
        out.timings_ms[req.op == Op::Add ? "add" : "del"] = elapsed_ms(t0);
    } else {
        auto add = run(g, Op::Add, req.seed);
        out.timings_ms["add"] = elapsed_ms(t0);
        const auto t1 = std::chrono::steady_clock::now();
        Graph mid = apply_delta(g, add);
        // The Del phase draws from its own stream.
        auto del = run(mid, Op::Del, req.seed ^ 0x9e3779b97f4a7c15ULL);
        out.timings_ms["del"] = elapsed_ms(t1);

        // Net effect against g: an edge added then deleted cancels out.
        std::set<Edge> deleted_set(del.deleted.begin(), del.deleted.end());
        std::set<Edge> added_set(add.added.begin(), add.added.end());
        for (const auto &e : add.added)
            if (!deleted_set.count(e))
                out.added.push_back(e);
        count cancelled = 0;
        for (const auto &e : del.deleted) {
            if (added_set.count(e))
                ++cancelled;
            else
                out.deleted.push_back(e);
        }
        out.provenance = add.provenance;
        out.warnings = add.warnings;
        out.warnings.insert(out.warnings.end(), del.warnings.begin(), del.warnings.end());
        if (cancelled)
            out.warnings.push_back(std::to_string(cancelled) +
                                   " edges added and then deleted; dropped from the net delta");
    }
    out.timings_ms["total"] = elapsed_ms(t0);
    out.provenance.method = std::string(to_string(req.method));
    out.provenance.seed = req.seed;
    out.provenance.params["op"] = std::string(to_string(req.op));
    out.provenance.params["k"] = std::to_string(req.k);
    return out;
}

} // namespace rwl::rewiring
