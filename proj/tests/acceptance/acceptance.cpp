// Acceptance suite. `acceptance N` runs one criterion, no argument runs all.
// Each criterion prints a single PASS/FAIL/SKIP line; exit status is 0 on
// pass, 1 on failure and 77 on skip.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles/dense.hpp"
#include "rewirelab/community.hpp"
#include "rewirelab/errors.hpp"
#include "rewirelab/io.hpp"
#include "rewirelab/metrics.hpp"
#include "rewirelab/rewiring.hpp"
#include "rewirelab/sbm.hpp"
#include "rewirelab/spectral.hpp"

using namespace rwl;
namespace fs = std::filesystem;

namespace {

enum class Outcome { Pass, Fail, Skip };

struct Result {
    Outcome outcome;
    std::string detail;
};

// Collects failures with a cap on how many are spelled out.
class Checker {
public:
    void fail(const std::string &what) {
        ++failures_;
        if (failures_ <= 6)
            notes_.push_back(what);
    }
    void expect(bool ok, const std::string &what) {
        ++checks_;
        if (!ok)
            fail(what);
    }
    count failures() const { return failures_; }
    count checks() const { return checks_; }
    Result result(const std::string &summary) const {
        std::ostringstream os;
        os << summary << " (" << checks_ - failures_ << "/" << checks_ << " checks)";
        for (const auto &n : notes_)
            os << "; " << n;
        if (failures_ > notes_.size())
            os << "; +" << failures_ - notes_.size() << " more";
        return {failures_ ? Outcome::Fail : Outcome::Pass, os.str()};
    }

private:
    count failures_ = 0;
    count checks_ = 0;
    std::vector<std::string> notes_;
};

std::string fmt(double v, int prec = 6) {
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

sbm::Params two_block(count n, double p, double q, double psi = 1.0) {
    sbm::Params s;
    s.n = n;
    s.p = p;
    s.q = q;
    s.psi = psi;
    return s;
}

Graph random_graph(std::mt19937_64 &rng, count n, double density) {
    std::bernoulli_distribution coin(density);
    std::vector<Edge> e;
    for (node u = 0; u < n; ++u)
        for (node v = u + 1; v < n; ++v)
            if (coin(rng))
                e.emplace_back(u, v);
    return Graph(n, e);
}

FeatureMatrix random_features(std::mt19937_64 &rng, count n, count dim) {
    std::normal_distribution<double> nd;
    std::vector<double> v(n * dim);
    for (auto &x : v)
        x = nd(rng);
    return FeatureMatrix(n, dim, v);
}

std::vector<Edge> non_edges(const Graph &g) {
    std::vector<Edge> out;
    for (node u = 0; u < g.num_nodes(); ++u)
        for (node v = u + 1; v < g.num_nodes(); ++v)
            if (!g.has_edge(u, v))
                out.emplace_back(u, v);
    return out;
}

// ---------------------------------------------------------------------------

Result gap_closed_form() {
    const auto t0 = std::chrono::steady_clock::now();
    Checker c;
    double worst_dense = 0, worst_sampled = 0;
    for (count n : {200, 500, 1000})
        for (double p : {0.5, 0.7, 0.8, 0.99})
            for (double q : {0.2, 0.5}) {
                const double closed = spectral::expected_gap_two_block(n, p, q);
                const double dense = oracle::expected_lambda2({n / 2, n / 2}, p, q);
                worst_dense = std::max(worst_dense, std::abs(closed - dense));
                c.expect(std::abs(closed - dense) <= 1e-8,
                         "dense N=" + std::to_string(n) + " p=" + fmt(p) + " q=" + fmt(q));
                for (std::uint64_t seed = 0; seed < 5; ++seed) {
                    auto s = sbm::generate(two_block(n, p, q), seed);
                    const double gap = spectral::spectral_gap(s.graph).gap;
                    const double rel = std::abs(gap - closed) / closed;
                    worst_sampled = std::max(worst_sampled, rel);
                    c.expect(rel <= 0.05, "sampled N=" + std::to_string(n) + " p=" + fmt(p) + " q=" + fmt(q) +
                                              " seed " + std::to_string(seed) + " off by " + fmt(100 * rel, 3) + "%");
                }
            }
    const double secs = seconds_since(t0);
    c.expect(secs < 120.0, "runtime " + fmt(secs, 3) + " s");
    return c.result("max |closed-dense| " + fmt(worst_dense, 3) + ", max sampled rel. error " +
                    fmt(100 * worst_sampled, 3) + "%, " + fmt(secs, 3) + " s");
}

Result gap_monotonicity() {
    Checker c;
    std::vector<double> grid;
    for (int i = 0; i < 20; ++i)
        grid.push_back(0.02 + 0.05 * i);
    count violations = 0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const double here = spectral::expected_gap_two_block(1000, grid[i], grid[j]);
            if (i + 1 < grid.size() && !(spectral::expected_gap_two_block(1000, grid[i + 1], grid[j]) < here))
                ++violations;
            if (j + 1 < grid.size() && !(spectral::expected_gap_two_block(1000, grid[i], grid[j + 1]) > here))
                ++violations;
        }
    c.expect(violations == 0, std::to_string(violations) + " monotonicity violations");

    double worst = 0;
    for (double p : {0.5, 0.8, 0.9})
        for (double q : {0.05, 0.2}) {
            for (auto [n, k] : {std::pair<count, count>{300, 3}, {1200, 3}, {400, 4}, {800, 4}}) {
                const double closed = spectral::expected_gap_k_block(n, k, p, q);
                const double dense = oracle::expected_lambda2(std::vector<count>(k, n / k), p, q);
                worst = std::max(worst, std::abs(closed - dense));
                c.expect(std::abs(closed - dense) <= 1e-9, "k=" + std::to_string(k) + " N=" + std::to_string(n));
            }
            for (count m : {100, 120, 140, 180}) {
                const double closed = spectral::expected_gap_unequal(200, m, p, q);
                const double dense = oracle::expected_lambda2({m, 200 - m}, p, q);
                worst = std::max(worst, std::abs(closed - dense));
                c.expect(std::abs(closed - dense) <= 1e-9, "unequal M=" + std::to_string(m));
            }
        }
    return c.result("400-point grid, " + std::to_string(violations) + " violations; extensions max diff " +
                    fmt(worst, 3));
}

double mc_error(const sbm::Params &p, count trials, std::uint64_t seed) {
    return sbm::monte_carlo_error(p, sbm::Aggregation::Sum, trials, seed).estimate;
}

Result aligned_error() {
    Checker c;
    std::ostringstream cells;
    for (auto [p, q] : {std::pair{0.5, 0.2}, {0.7, 0.2}, {0.8, 0.5}}) {
        const double mc = mc_error(two_block(1000, p, q), 20, 1);
        const double theory = sbm::theory_error_aligned(1000, p, q);
        cells << " (" << p << "," << q << "): mc " << fmt(mc, 4) << " vs " << fmt(theory, 4) << ";";
        c.expect(std::abs(mc - theory) <= 0.01, "cell p=" + fmt(p) + " q=" + fmt(q));
    }
    // Accuracy trend in p at q = 0.2, on the large graph and on a smaller one
    // where the error is not yet saturated at 0 (more trials there, the steps
    // near saturation are a fraction of a node per graph).
    for (count n : {1000, 200}) {
        double prev_acc = -1, prev_theory = 2;
        for (int i = 0; i <= 15; ++i) {
            const double p = 0.2 + 0.05 * i;
            const double acc = 1.0 - mc_error(two_block(n, p, 0.2), n == 1000 ? 20 : 200, 2);
            const double theory = sbm::theory_error_aligned(n, p, 0.2);
            c.expect(acc >= prev_acc, "accuracy dropped at n=" + std::to_string(n) + " p=" + fmt(p));
            c.expect(theory < prev_theory || (theory == 0 && prev_theory == 0),
                     "closed form not decreasing at n=" + std::to_string(n) + " p=" + fmt(p));
            prev_acc = acc;
            prev_theory = theory;
        }
    }
    return c.result("20 seeds, n=1000;" + cells.str() + " accuracy trend over p in [0.2, 0.95]");
}

Result alignment_error() {
    const auto t0 = std::chrono::steady_clock::now();
    Checker c;
    std::ostringstream cells;
    for (double psi : {0.6, 0.7, 0.8, 0.9, 0.95, 1.0}) {
        auto r = sbm::monte_carlo_error(two_block(1000, 0.7, 0.2, psi), sbm::Aggregation::Sum, 200, 3);
        const double theory = sbm::theory_error(1000, 0.7, 0.2, psi);
        const double tol = 3 * r.stderr_ + 0.01;
        cells << " psi=" << psi << ": " << fmt(r.estimate, 4) << " vs " << fmt(theory, 4) << ";";
        c.expect(std::abs(r.estimate - theory) <= tol, "psi=" + fmt(psi));
    }
    const double half = mc_error(two_block(1000, 0.7, 0.2, 0.5), 200, 4);
    cells << " psi=0.5: " << fmt(half, 4);
    c.expect(std::abs(half - 0.5) <= 0.02, "psi=0.5 gives " + fmt(half, 4));
    const double secs = seconds_since(t0);
    c.expect(secs < 300.0, "runtime " + fmt(secs, 3) + " s");
    return c.result("200 trials, n=1000, p=0.7, q=0.2;" + cells.str() + ", " + fmt(secs, 3) + " s");
}

double pearson(const std::vector<double> &x, const std::vector<double> &y) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

Result gap_structure_correlation() {
    Checker c;
    sbm::SweepGrid grid;
    grid.n = 1000;
    grid.p = {0.5, 0.7, 0.8, 0.99};
    grid.q = {0.2, 0.5};
    grid.psi = {1.0};
    grid.ks = {0};
    grid.compute_nmi = false;
    auto rows = sbm::sweep(grid, sbm::Aggregation::Sum, 3, 5);
    std::vector<double> gap, structure;
    for (const auto &r : rows) {
        gap.push_back(r.gap);
        structure.push_back(r.structure);
    }
    const double r = pearson(gap, structure);
    c.expect(r >= 0.99, "Pearson r = " + fmt(r));
    return c.result("n=1000, 8 (p,q) cells x 3 samples, Pearson r = " + fmt(r, 5));
}

// Literal ranking: the graph's mean similarity with the candidate added
// (or removed), computed from scratch.
double rank_add(const Graph &g, const FeatureMatrix &x, const Edge &e) {
    const double m = static_cast<double>(g.num_edges());
    return (oracle::mean_similarity(g, x) * m + oracle::cosine(x, e.u, e.v)) / (m + 1);
}

double rank_del(const Graph &g, const FeatureMatrix &x, const Edge &e) {
    const double m = static_cast<double>(g.num_edges());
    if (m <= 1)
        return -oracle::cosine(x, e.u, e.v);
    return (oracle::mean_similarity(g, x) * m - oracle::cosine(x, e.u, e.v)) / (m - 1);
}

std::set<Edge> top_by_rank(const Graph &g, const FeatureMatrix &x, const std::vector<Edge> &cands, count k,
                           bool add) {
    std::vector<std::pair<double, Edge>> scored;
    for (const auto &e : cands)
        scored.push_back({add ? rank_add(g, x, e) : rank_del(g, x, e), e});
    std::sort(scored.begin(), scored.end(),
              [](const auto &a, const auto &b) { return a.first != b.first ? a.first > b.first : a.second < b.second; });
    std::set<Edge> out;
    for (count i = 0; i < std::min<count>(k, scored.size()); ++i)
        out.insert(scored[i].second);
    return out;
}

// Best k-subset by mean similarity of the resulting graph, by enumeration.
std::set<Edge> best_subset(const Graph &g, const FeatureMatrix &x, const std::vector<Edge> &cands, count k,
                           bool add) {
    k = std::min<count>(k, cands.size());
    std::vector<int> pick(cands.size(), 0);
    std::fill(pick.begin(), pick.begin() + static_cast<long>(k), 1);
    std::sort(pick.begin(), pick.end());
    double best = -1e300;
    std::set<Edge> best_set;
    do {
        EdgeDelta d;
        for (std::size_t i = 0; i < cands.size(); ++i)
            if (pick[i])
                (add ? d.added : d.deleted).push_back(cands[i]);
        const double v = oracle::mean_similarity(apply_delta(g, d), x);
        if (v > best + 1e-12) {
            best = v;
            best_set = std::set<Edge>(add ? d.added.begin() : d.deleted.begin(), add ? d.added.end() : d.deleted.end());
        }
    } while (std::next_permutation(pick.begin(), pick.end()));
    return best_set;
}

Result rewiring_oracles() {
    Checker c;
    std::mt19937_64 rng(2024);
    for (int inst = 0; inst < 100; ++inst) {
        const count n = 3 + rng() % 4;
        auto g = random_graph(rng, n, 0.5);
        auto x = random_features(rng, n, 3);
        const count k = 1 + rng() % 3;
        const std::string tag = "instance " + std::to_string(inst);

        rewiring::FeastOptions fo;
        fo.allow_isolation = true;
        auto add = rewiring::feast(g, x, rewiring::Op::Add, k, fo);
        auto del = rewiring::feast(g, x, rewiring::Op::Del, k, fo);
        std::set<Edge> got_add(add.added.begin(), add.added.end()), got_del(del.deleted.begin(), del.deleted.end());
        c.expect(got_add == top_by_rank(g, x, non_edges(g), k, true), tag + " feast add vs rank");
        c.expect(got_del == top_by_rank(g, x, g.edges(), k, false), tag + " feast del vs rank");
        c.expect(got_add == best_subset(g, x, non_edges(g), k, true), tag + " feast add vs subsets");
        if (!g.edges().empty())
            c.expect(got_del == best_subset(g, x, g.edges(), k, false), tag + " feast del vs subsets");

        // ComFy: random partition into up to three communities
        std::vector<std::uint32_t> ids(n);
        for (auto &id : ids)
            id = static_cast<std::uint32_t>(rng() % 3);
        auto part = Partition::compacted(ids);
        const count kc = 2 + rng() % 7;
        auto sizes = part.community_sizes();
        double total = 0;
        for (std::size_t i = 0; i < sizes.size(); ++i)
            for (std::size_t j = i; j < sizes.size(); ++j)
                total += static_cast<double>(sizes[i] * sizes[j]);
        for (bool is_add : {true, false}) {
            auto d = rewiring::comfy(g, x, part, is_add ? rewiring::Op::Add : rewiring::Op::Del, kc, true);
            std::set<Edge> got(is_add ? d.added.begin() : d.deleted.begin(), is_add ? d.added.end() : d.deleted.end());
            std::set<Edge> want;
            for (std::uint32_t i = 0; i < sizes.size(); ++i)
                for (std::uint32_t j = i; j < sizes.size(); ++j) {
                    const auto budget =
                        static_cast<count>(std::round(static_cast<double>(kc * sizes[i] * sizes[j]) / total));
                    std::vector<Edge> cands;
                    for (const auto &e : is_add ? non_edges(g) : g.edges()) {
                        const auto [a, b] = std::minmax<std::uint32_t>({part[e.u], part[e.v]});
                        if (a == i && b == j)
                            cands.push_back(e);
                    }
                    auto top = top_by_rank(g, x, cands, budget, is_add);
                    want.insert(top.begin(), top.end());
                }
            c.expect(got == want, tag + (is_add ? " comfy add" : " comfy del"));
        }
    }

    // Proxy greedy against exhaustive true-gap greedy, k = 1.
    std::vector<std::pair<std::string, Graph>> family;
    for (count m = 3; m <= 6; ++m)
        family.push_back({"barbell" + std::to_string(m), oracle::barbell(m)});
    for (count n = 4; n <= 6; ++n)
        family.push_back({"path" + std::to_string(n), oracle::path(n)});
    count proxy_cases = 0;
    for (const auto &[name, g] : family)
        for (auto obj : {rewiring::Objective::Min, rewiring::Objective::Max})
            for (auto op : {rewiring::Op::Add, rewiring::Op::Del}) {
                auto d = rewiring::proxy_rewire(g, obj, op, 1);
                std::vector<Edge> cands;
                if (op == rewiring::Op::Add) {
                    cands = non_edges(g);
                } else {
                    for (const auto &e : g.edges())
                        if (g.degree(e.u) > 1 && g.degree(e.v) > 1)
                            cands.push_back(e);
                }
                const std::string tag = name + (obj == rewiring::Objective::Max ? " max" : " min") +
                                        (op == rewiring::Op::Add ? "-add" : "-del");
                if (cands.empty()) {
                    c.expect(d.empty(), tag + " should be empty");
                    continue;
                }
                ++proxy_cases;
                auto gap_after = [&](const Edge &e) {
                    EdgeDelta one;
                    (op == rewiring::Op::Add ? one.added : one.deleted).push_back(e);
                    return oracle::lambda2(apply_delta(g, one));
                };
                double best = obj == rewiring::Objective::Max ? -1e300 : 1e300;
                for (const auto &e : cands) {
                    const double v = gap_after(e);
                    best = obj == rewiring::Objective::Max ? std::max(best, v) : std::min(best, v);
                }
                const auto &picked = op == rewiring::Op::Add ? d.added : d.deleted;
                if (picked.size() != 1) {
                    c.expect(false, tag + " picked nothing");
                    continue;
                }
                const double got = gap_after(picked[0]);
                c.expect(std::abs(got - best) <= 1e-9, tag + " picked (" + std::to_string(picked[0].u) + "," +
                                                           std::to_string(picked[0].v) + ") gap " + fmt(got, 4) +
                                                           ", best " + fmt(best, 4));
            }
    return c.result("100 random graphs (3-6 nodes) for feast/comfy; " + std::to_string(proxy_cases) +
                    " proxy cases on barbells and paths");
}

Result alignment_dominance() {
    Checker c;
    std::ostringstream os;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto s = sbm::generate(two_block(200, 0.8, 0.1), seed);
        auto part = community::louvain(s.graph, seed);
        rewiring::Request r;
        r.k = 50;
        r.seed = seed;

        r.method = rewiring::Method::ProxyMax;
        r.op = rewiring::Op::Add;
        auto m = metrics::alignment_matrix(rewiring::rewire(s.graph, nullptr, &part, r), s.labels, part);
        const double diff_c = static_cast<double>(m.added[0][1] + m.added[1][1]) /
                              static_cast<double>(metrics::AlignmentMatrix::total(m.added));
        os << " " << fmt(100 * diff_c, 3) << "%";
        c.expect(diff_c >= 0.9, "seed " + std::to_string(seed) + " proxy-max add diff-C " + fmt(diff_c));

        r.method = rewiring::Method::HigherComMa;
        m = metrics::alignment_matrix(rewiring::rewire(s.graph, nullptr, &part, r), s.labels, part);
        c.expect(m.added[0][0] + m.added[1][0] == 50 && m.added[0][1] + m.added[1][1] == 0,
                 "seed " + std::to_string(seed) + " higher comma add");

        r.method = rewiring::Method::LowerComMa;
        r.op = rewiring::Op::Del;
        m = metrics::alignment_matrix(rewiring::rewire(s.graph, nullptr, &part, r), s.labels, part);
        c.expect(m.deleted[0][0] + m.deleted[1][0] == 50 && m.deleted[0][1] + m.deleted[1][1] == 0,
                 "seed " + std::to_string(seed) + " lower comma del");
    }
    return c.result("5 samples, n=200, p=0.8, q=0.1, k=50; proxy-max add diff-community share:" + os.str());
}

Result real_dataset_metrics() {
    fs::path dir;
    if (const char *env = std::getenv("RWL_CORA_DIR"))
        dir = env;
    else
        dir = fs::path(RWL_SOURCE_DIR) / "data" / "cora";
    const auto edges = dir / "edges.txt", labels = dir / "labels.txt";
    if (!fs::exists(edges) || !fs::exists(labels))
        return {Outcome::Skip, "Cora files not found (expected " + edges.string() + " and " + labels.string() +
                                   ", or set RWL_CORA_DIR)"};
    Checker c;
    auto y = io::load_labels(labels);
    auto g = io::load_edge_list(edges, y.size());
    io::check_paired(g, y);
    auto part = community::louvain(g, 0);
    const double q = community::modularity(g, part);
    const double nmi = metrics::nmi(y, part);
    auto h = metrics::adjusted_homophily(g, y);
    c.expect(std::abs(q - 0.8023) <= 0.02, "modularity " + fmt(q, 4));
    c.expect(std::abs(nmi - 0.4556) <= 0.03, "NMI " + fmt(nmi, 4));
    c.expect(h && std::abs(*h - 0.7637) <= 0.005, "adjusted homophily " + (h ? fmt(*h, 4) : "undefined"));
    return c.result(std::to_string(g.num_nodes()) + " nodes, " + std::to_string(g.num_edges()) +
                    " edges; modularity " + fmt(q, 4) + ", NMI " + fmt(nmi, 4) + ", adjusted homophily " +
                    (h ? fmt(*h, 4) : "undefined"));
}

// Cora-sized stand-in: 2708 nodes in 7 communities, about 5000 edges, 1433
// sparse binary features with community-dependent vocabularies.
struct CoraScale {
    Graph graph;
    FeatureMatrix features;
};

CoraScale cora_scale(std::uint64_t seed) {
    const count n = 2708, k = 7, dim = 1433, words = 18;
    std::mt19937_64 rng(seed);
    std::vector<std::uint32_t> block(n);
    for (count i = 0; i < n; ++i)
        block[i] = static_cast<std::uint32_t>(i * k / n);
    // intra density tuned for ~4000 intra edges, inter for ~1000
    const double p_in = 4000.0 / (k * (n / k) * (n / k - 1) / 2.0);
    const double p_out = 1000.0 / (n * (n - n / k) / 2.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<Edge> edges;
    for (node u = 0; u < n; ++u)
        for (node v = u + 1; v < n; ++v)
            if (unif(rng) < (block[u] == block[v] ? p_in : p_out))
                edges.emplace_back(u, v);
    std::vector<double> x(n * dim, 0.0);
    std::uniform_int_distribution<count> any(0, dim - 1), topic(0, dim / k - 1);
    for (count i = 0; i < n; ++i)
        for (count w = 0; w < words; ++w) {
            const count col = unif(rng) < 0.6 ? block[i] * (dim / k) + topic(rng) : any(rng);
            x[i * dim + col] = 1.0;
        }
    return {Graph(n, edges), FeatureMatrix(n, dim, x)};
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Result runtime_ordering() {
    Checker c;
    auto data = cora_scale(7);
    auto time_method = [&](rewiring::Method m) {
        std::vector<double> runs;
        for (int rep = 0; rep < 5; ++rep) {
            const auto t0 = std::chrono::steady_clock::now();
            rewiring::Request r;
            r.method = m;
            r.op = rewiring::Op::Add;
            r.k = 50;
            r.seed = static_cast<std::uint64_t>(rep);
            std::optional<Partition> part;
            if (m == rewiring::Method::HigherComMa || m == rewiring::Method::ComFy)
                part = community::louvain(data.graph, r.seed); // community detection is part of the method
            auto d = rewiring::rewire(data.graph, &data.features, part ? &*part : nullptr, r);
            // ComFy's rounded per-pair budgets need not sum to k
            if (m != rewiring::Method::ComFy && d.added.size() != 50)
                throw std::runtime_error(std::string(rewiring::to_string(m)) + " returned a short delta");
            runs.push_back(seconds_since(t0));
        }
        return median(runs);
    };
    const double comma = time_method(rewiring::Method::HigherComMa);
    const double feast = time_method(rewiring::Method::FeaSt);
    const double proxy = time_method(rewiring::Method::ProxyMax);
    const double comfy = time_method(rewiring::Method::ComFy);
    c.expect(5 * comma < feast, "ComMa not 5x faster than FeaSt");
    c.expect(5 * comma < proxy, "ComMa not 5x faster than ProxyMax");
    return c.result(std::to_string(data.graph.num_nodes()) + " nodes, " + std::to_string(data.graph.num_edges()) +
                    " edges, k=50, median of 5 (s): ComMa " + fmt(comma, 3) + ", FeaSt " + fmt(feast, 3) +
                    ", ProxyMax " + fmt(proxy, 3) + ", ComFy " + fmt(comfy, 3));
}

// ---------------------------------------------------------------------------
// Property suite

Result properties() {
    Checker c;
    std::mt19937_64 rng(99);
    const int cases = 200;
    const auto tmp = fs::temp_directory_path() / "rwl_acceptance";
    fs::create_directories(tmp);

    auto tagged = [](const char *what, int i) { return std::string(what) + " case " + std::to_string(i); };

    // graph-core
    for (int i = 0; i < cases; ++i) {
        const count n = 1 + rng() % 30;
        auto g = random_graph(rng, n, 0.2);
        io::save_edge_list(g, tmp / "g.txt");
        c.expect(io::load_edge_list(tmp / "g.txt") == g, tagged("round trip", i));

        // the same edge multiset in shuffled order, random orientation, with repeats
        std::vector<Edge> lines(g.edges());
        for (count r = 0; r < lines.size() / 3; ++r)
            lines.push_back(lines[rng() % lines.size()]);
        std::shuffle(lines.begin(), lines.end(), rng);
        std::ostringstream text;
        text << "# nodes " << n << "\n";
        for (const auto &e : lines)
            (rng() % 2 ? text << e.u << ' ' << e.v : text << e.v << ' ' << e.u) << '\n';
        c.expect(io::parse_edge_list(text.str()) == g, tagged("order independence", i));

        EdgeDelta d;
        for (const auto &e : g.edges())
            if (rng() % 3 == 0)
                d.deleted.push_back(e);
        for (const auto &e : non_edges(g))
            if (rng() % 5 == 0)
                d.added.push_back(e);
        auto h = apply_delta(g, d);
        c.expect(h.num_edges() == g.num_edges() + d.added.size() - d.deleted.size() && h.check_invariants(),
                 tagged("delta size", i));
        c.expect(apply_delta(h, d.inverse()) == g, tagged("delta inversion", i));
    }

    // spectral
    for (int i = 0, done = 0; done < cases; ++i) {
        const count n = 2 + rng() % 7;
        auto g = random_graph(rng, n, 0.3 + 0.1 * (i % 5));
        count comps = 0;
        connected_components(g, &comps);
        if (comps != 1)
            continue;
        ++done;
        auto s = spectral::spectral_gap(g);
        c.expect(std::abs(s.gap - oracle::lambda2(g)) <= 1e-8, tagged("gap vs dense", i));
        double nrm = 0, along = 0, vol = 0;
        for (node u = 0; u < n; ++u) {
            nrm += s.fiedler[u] * s.fiedler[u];
            along += s.fiedler[u] * std::sqrt(static_cast<double>(g.degree(u)));
            vol += static_cast<double>(g.degree(u));
        }
        c.expect(s.gap >= 0 && s.gap <= 2 && std::abs(nrm - 1) <= 1e-10 && std::abs(along) / std::sqrt(vol) <= 1e-8,
                 tagged("fiedler invariants", i));
    }
    for (int i = 0; i < cases; ++i) {
        std::uniform_real_distribution<double> u(0.01, 0.98);
        const double p = u(rng), q = u(rng);
        const count n = 2 * (2 + rng() % 500);
        const double here = spectral::expected_gap_two_block(n, p, q);
        c.expect(spectral::expected_gap_two_block(n, p + 0.01, q) < here &&
                     spectral::expected_gap_two_block(n, p, q + 0.01) > here,
                 tagged("expected gap monotone", i));
    }

    // community
    for (int i = 0; i < cases; ++i) {
        const count n = 2 + rng() % 40;
        auto g = random_graph(rng, n, 0.05 + 0.3 * (rng() % 100) / 100.0);
        std::vector<std::uint32_t> ids(n);
        const auto k = 1 + rng() % n;
        for (auto &id : ids)
            id = static_cast<std::uint32_t>(rng() % k);
        auto part = Partition::compacted(ids);
        const double q = community::modularity(g, part);
        c.expect(q >= -0.5 - 1e-12 && q < 1.0, tagged("modularity bounds", i));
        std::vector<std::uint32_t> perm(part.num_communities());
        std::iota(perm.begin(), perm.end(), 0u);
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<std::uint32_t> relabeled(n);
        for (node u = 0; u < n; ++u)
            relabeled[u] = perm[part[u]];
        c.expect(std::abs(community::modularity(g, Partition(relabeled)) - q) <= 1e-12, tagged("relabel", i));
        std::vector<double> levels;
        auto lp = community::louvain(g, rng(), 1.0, &levels);
        bool mono = true;
        for (std::size_t l = 1; l < levels.size(); ++l)
            mono = mono && levels[l] >= levels[l - 1] - 1e-12;
        c.expect(mono && lp.size() == n, tagged("louvain levels", i));
    }

    // metrics
    for (int i = 0; i < cases; ++i) {
        const count n = 2 + rng() % 60;
        std::vector<std::uint32_t> a(n), b(n);
        const auto ka = 1 + rng() % 5, kb = 1 + rng() % 5;
        for (node u = 0; u < n; ++u) {
            a[u] = static_cast<std::uint32_t>(rng() % ka);
            b[u] = static_cast<std::uint32_t>(rng() % kb);
        }
        const double ab = metrics::nmi(a, b), ba = metrics::nmi(b, a);
        c.expect(std::abs(ab - ba) <= 1e-12 && ab >= -1e-12 && ab <= 1 + 1e-12, tagged("nmi symmetry", i));
        std::vector<std::uint32_t> a2(n);
        for (node u = 0; u < n; ++u)
            a2[u] = static_cast<std::uint32_t>(ka - 1 - a[u]);
        c.expect(std::abs(metrics::nmi(a2, b) - ab) <= 1e-12, tagged("nmi permutation", i));
        if (std::set<std::uint32_t>(a.begin(), a.end()).size() > 1)
            c.expect(std::abs(metrics::nmi(a, a) - 1) <= 1e-12, tagged("nmi self", i));

        auto g = random_graph(rng, n, 0.2);
        LabelVector y(a, ka);
        if (auto h = metrics::adjusted_homophily(g, y)) {
            bool all_intra = true;
            for (const auto &e : g.edges())
                all_intra = all_intra && y[e.u] == y[e.v];
            c.expect(*h <= 1 + 1e-12 && (std::abs(*h - 1) <= 1e-12) == all_intra, tagged("adjusted homophily", i));
        }
        EdgeDelta d;
        for (const auto &e : g.edges())
            if (rng() % 2)
                d.deleted.push_back(e);
        for (const auto &e : non_edges(g))
            if (rng() % 7 == 0)
                d.added.push_back(e);
        auto m = metrics::alignment_matrix(d, y, Partition::compacted(b));
        c.expect(metrics::AlignmentMatrix::total(m.added) == d.added.size() &&
                     metrics::AlignmentMatrix::total(m.deleted) == d.deleted.size(),
                 tagged("alignment totals", i));
    }

    // rewiring; runs until the deletion property has its full share of cases
    for (int i = 0, del_cases = 0; i < cases || del_cases < cases; ++i) {
        const count n = 6 + rng() % 40;
        auto g = random_graph(rng, n, 0.15);
        auto x = random_features(rng, n, 4);
        const count k = 1 + rng() % 10;
        const double before = oracle::mean_similarity(g, x);

        // The guard may substitute more similar edges for the ones it protects,
        // and an emptied graph has no mean; neither case is covered.
        rewiring::FeastOptions unguarded;
        unguarded.allow_isolation = true;
        auto del = rewiring::feast(g, x, rewiring::Op::Del, k, unguarded);
        if (k < g.num_edges() && ++del_cases)
            c.expect(oracle::mean_similarity(apply_delta(g, del), x) >= before - 1e-12, tagged("feast del mean", i));
        auto add = rewiring::feast(g, x, rewiring::Op::Add, k);
        const double after_add = oracle::mean_similarity(apply_delta(g, add), x);
        // No other choice of the same number of non-edges gives a higher mean.
        auto cands = non_edges(g);
        std::shuffle(cands.begin(), cands.end(), rng);
        EdgeDelta alt;
        alt.added.assign(cands.begin(), cands.begin() + static_cast<long>(add.added.size()));
        c.expect(after_add >= oracle::mean_similarity(apply_delta(g, alt), x) - 1e-12, tagged("feast add optimal", i));

        std::vector<std::uint32_t> ids(n);
        for (auto &id : ids)
            id = static_cast<std::uint32_t>(rng() % 4);
        auto part = Partition::compacted(ids);
        const auto m = part.num_communities();
        count budget_sum = 0;
        for (const auto &[pair, b] : rewiring::comfy_budgets(part, k))
            budget_sum += b;
        c.expect(static_cast<count>(std::llabs(static_cast<long long>(budget_sum) - static_cast<long long>(k))) <=
                     m * (m + 1) / 2,
                 tagged("comfy budget slack", i));

        auto ratio = [&](const Graph &h) {
            double intra = 0, inter = 0;
            for (const auto &e : h.edges())
                (part[e.u] == part[e.v] ? intra : inter) += 1;
            return inter == 0 ? std::numeric_limits<double>::infinity() : intra / inter;
        };
        auto hi = rewiring::comma(g, part, rewiring::Direction::Higher, rewiring::Op::Add, k, rng());
        if (!hi.added.empty() && std::isfinite(ratio(g)))
            c.expect(ratio(apply_delta(g, hi)) > ratio(g), tagged("higher comma ratio", i));
        auto lo = rewiring::comma(g, part, rewiring::Direction::Lower, rewiring::Op::Add, k, rng());
        if (!lo.added.empty() && ratio(g) > 0)
            c.expect(ratio(apply_delta(g, lo)) < ratio(g), tagged("lower comma ratio", i));

        rewiring::Request r;
        r.method = static_cast<rewiring::Method>(rng() % 6);
        r.op = static_cast<rewiring::Op>(rng() % 3);
        r.k = k;
        r.seed = rng();
        auto d1 = rewiring::rewire(g, &x, &part, r);
        auto d2 = rewiring::rewire(g, &x, &part, r);
        bool valid = true;
        try {
            validate_delta(g, d1);
        } catch (const ValidationError &) {
            valid = false;
        }
        c.expect(valid && d1.added == d2.added && d1.deleted == d2.deleted, tagged("rewire valid+deterministic", i));
    }
    {
        int improved = 0, steps = 0;
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            auto s = sbm::generate(two_block(100, 0.3, 0.05), seed);
            auto d = rewiring::proxy_rewire(s.graph, rewiring::Objective::Max, rewiring::Op::Add, 10);
            Graph g = s.graph;
            double gap = oracle::lambda2(g);
            for (const auto &e : d.added) {
                EdgeDelta one;
                one.added = {e};
                g = apply_delta(g, one);
                const double next = oracle::lambda2(g);
                improved += next > gap;
                ++steps;
                gap = next;
            }
        }
        c.expect(improved >= 0.8 * steps, "proxy max raised the true gap in " + std::to_string(improved) + "/" +
                                              std::to_string(steps) + " steps");
    }

    // sbm-lab
    for (int i = 0; i < cases; ++i) {
        std::uniform_real_distribution<double> u(0.01, 0.99), w(0.0, 1.0);
        const count n = 2 * (1 + rng() % 1000);
        const double p = u(rng), q = u(rng), psi = w(rng);
        c.expect(std::abs(sbm::theory_error(n, p, q, psi) - sbm::theory_error(n, p, q, 1 - psi)) <= 1e-12,
                 tagged("psi symmetry", i));
        const double aligned = sbm::theory_error(n, p, q, 1.0);
        c.expect(p > q ? aligned <= 0.5 : p < q ? aligned >= 0.5 : true, tagged("aligned side of 0.5", i));

        const count gn = 2 + rng() % 40;
        auto g = random_graph(rng, gn, 0.2);
        auto x = random_features(rng, gn, 1);
        std::vector<double> neg = x.values();
        for (auto &v : neg)
            v = -v;
        const auto mode = rng() % 2 ? sbm::Aggregation::Sum : sbm::Aggregation::Mean;
        auto a = sbm::aggregate_classify(g, x, mode);
        auto b = sbm::aggregate_classify(g, FeatureMatrix(gn, 1, neg), mode);
        bool swapped = true;
        for (node v = 0; v < gn; ++v)
            swapped = swapped && a[v] != b[v];
        c.expect(swapped, tagged("negation equivariance", i));
    }
    {
        auto p = two_block(200, 0.05, 0.03, 0.9);
        auto small = sbm::monte_carlo_error(p, sbm::Aggregation::Sum, 50, 8);
        auto big = sbm::monte_carlo_error(p, sbm::Aggregation::Sum, 200, 8);
        const double ratio = big.stderr_ / small.stderr_;
        c.expect(ratio > 0.35 && ratio < 0.65, "stderr ratio at 4x trials " + fmt(ratio, 3));
    }
    return c.result(std::to_string(cases) + " random cases per property");
}

struct Criterion {
    int id;
    const char *name;
    std::function<Result()> run;
};

} // namespace

int main(int argc, char **argv) {
    const std::vector<Criterion> all{
        {1, "gap closed form vs dense and sampled", gap_closed_form},
        {2, "gap monotonicity and block extensions", gap_monotonicity},
        {3, "aligned misclassification vs closed form", aligned_error},
        {4, "misclassification under partial alignment", alignment_error},
        {5, "gap vs structure correlation", gap_structure_correlation},
        {6, "rewiring selections vs brute force", rewiring_oracles},
        {7, "alignment matrix dominance", alignment_dominance},
        {8, "real dataset metrics", real_dataset_metrics},
        {9, "runtime ordering", runtime_ordering},
        {10, "property suite", properties},
    };
    int only = 0;
    if (argc > 1)
        only = std::atoi(argv[1]);

    bool failed = false, skipped = false;
    for (const auto &cr : all) {
        if (only && cr.id != only)
            continue;
        Result r;
        try {
            r = cr.run();
        } catch (const std::exception &e) {
            r = {Outcome::Fail, std::string("exception: ") + e.what()};
        }
        const char *tag = r.outcome == Outcome::Pass ? "PASS" : r.outcome == Outcome::Fail ? "FAIL" : "SKIP";
        std::cout << tag << " criterion " << cr.id << " (" << cr.name << "): " << r.detail << std::endl;
        failed = failed || r.outcome == Outcome::Fail;
        skipped = skipped || r.outcome == Outcome::Skip;
    }
    if (failed)
        return 1;
    return skipped && only ? 77 : 0;
}
