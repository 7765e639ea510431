#include "rewirelab/sbm.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "rewirelab/community.hpp"
#include "rewirelab/errors.hpp"
#include "rewirelab/metrics.hpp"
#include "rewirelab/spectral.hpp"

namespace rwl::sbm {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Number of failures before the next success of a Bernoulli(p) stream.
std::uint64_t geometric_skip(std::mt19937_64 &rng, double p) {
    if (p >= 1.0)
        return 0;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double u = 1.0 - unif(rng); // (0, 1]
    double s = std::floor(std::log(u) / std::log1p(-p));
    if (!(s < 9e18))
        return std::numeric_limits<std::uint64_t>::max();
    return static_cast<std::uint64_t>(s);
}

// Pairs i < j inside [lo, lo + size).
void sample_block(std::vector<Edge> &out, node lo, count size, double p, std::mt19937_64 &rng) {
    if (p <= 0.0 || size < 2)
        return;
    const std::uint64_t total = static_cast<std::uint64_t>(size) * (size - 1) / 2;
    std::uint64_t idx = geometric_skip(rng, p);
    count row = 0;
    std::uint64_t row_start = 0; // linear index of (row, row + 1)
    while (idx < total) {
        while (idx >= row_start + (size - 1 - row)) {
            row_start += size - 1 - row;
            ++row;
        }
        const auto col = row + 1 + static_cast<count>(idx - row_start);
        out.emplace_back(lo + static_cast<node>(row), lo + static_cast<node>(col));
        const auto skip = geometric_skip(rng, p);
        if (skip >= total)
            break;
        idx += skip + 1;
    }
}

// All pairs between [a, a + sa) and [b, b + sb).
void sample_between(std::vector<Edge> &out, node a, count sa, node b, count sb, double q,
                    std::mt19937_64 &rng) {
    if (q <= 0.0 || sa == 0 || sb == 0)
        return;
    const std::uint64_t total = static_cast<std::uint64_t>(sa) * sb;
    std::uint64_t idx = geometric_skip(rng, q);
    while (idx < total) {
        out.emplace_back(a + static_cast<node>(idx / sb), b + static_cast<node>(idx % sb));
        const auto skip = geometric_skip(rng, q);
        if (skip >= total)
            break;
        idx += skip + 1;
    }
}

void check_prob(double v, const char *name) {
    if (!(v > 0.0 && v < 1.0))
        throw ValidationError(std::string(name) + " must lie in (0, 1), got " + std::to_string(v));
}

void require_two_blocks(const Params &params) {
    if (params.blocks != 2)
        throw ValidationError("the aggregation classifier needs a 2-block model");
}

double mean(const std::vector<double> &v) {
    double s = 0.0;
    for (double x : v)
        s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double stderr_of(const std::vector<double> &v) {
    if (v.size() < 2)
        return 0.0;
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v)
        ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1)) / std::sqrt(static_cast<double>(v.size()));
}

} // namespace

void Params::validate() const {
    if (blocks < 1)
        throw ValidationError("blocks must be positive");
    if (n < blocks || n % blocks != 0)
        throw ValidationError("blocks (" + std::to_string(blocks) + ") must divide n (" + std::to_string(n) + ")");
    if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0))
        throw ValidationError("p and q must lie in [0, 1]");
    if (!(psi >= 0.0 && psi <= 1.0))
        throw ValidationError("psi must lie in [0, 1]");
    if (!std::isfinite(mu0) || !(sigma0 >= 0.0) || !std::isfinite(sigma0))
        throw ValidationError("mu0 must be finite and sigma0 non-negative");
}

Sample generate(const Params &params, std::uint64_t seed) {
    params.validate();
    std::mt19937_64 rng(seed);
    const count b = params.n / params.blocks;
    const count k = params.blocks;

    std::vector<Edge> edges;
    for (count i = 0; i < k; ++i) {
        sample_block(edges, static_cast<node>(i * b), b, params.p, rng);
        for (count j = i + 1; j < k; ++j)
            sample_between(edges, static_cast<node>(i * b), b, static_cast<node>(j * b), b, params.q, rng);
    }

    std::vector<std::uint32_t> planted(params.n), labels(params.n);
    std::bernoulli_distribution keep(params.psi);
    std::uniform_int_distribution<std::uint32_t> other(0, static_cast<std::uint32_t>(k > 1 ? k - 2 : 0));
    for (count i = 0; i < params.n; ++i) {
        planted[i] = static_cast<std::uint32_t>(i / b);
        if (keep(rng) || k == 1) {
            labels[i] = planted[i];
        } else {
            auto c = other(rng);
            labels[i] = c >= planted[i] ? c + 1 : c;
        }
    }

    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> x(params.n);
    for (count i = 0; i < params.n; ++i) {
        const double centre =
            k == 1 ? 0.0 : params.mu0 * (2.0 * labels[i] / static_cast<double>(k - 1) - 1.0);
        x[i] = centre + params.sigma0 * noise(rng);
    }

    return Sample{Graph(params.n, std::move(edges)), FeatureMatrix(params.n, 1, std::move(x)),
                  LabelVector(std::move(labels), k), Partition::compacted(planted), seed};
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double theory_error_aligned(count n, double p, double q, double mu0, double sigma0) {
    if (n < 2 || n % 2 != 0)
        throw ValidationError("n must be even and at least 2");
    check_prob(p, "p");
    check_prob(q, "q");
    if (!(sigma0 > 0.0))
        throw ValidationError("sigma0 must be positive");
    const double half = static_cast<double>(n) / 2.0;
    const double ep = p * (half - 1.0);
    const double eq = q * half;
    const double mu1 = mu0 * (1.0 + ep - eq);
    const double sigma1 = sigma0 * std::sqrt(1.0 + ep + eq);
    return normal_cdf(-mu1 / sigma1);
}

double theory_error(count n, double p, double q, double psi) {
    if (n < 2 || n % 2 != 0)
        throw ValidationError("n must be even and at least 2");
    check_prob(p, "p");
    check_prob(q, "q");
    if (!(psi >= 0.0 && psi <= 1.0))
        throw ValidationError("psi must lie in [0, 1]");
    const double half = static_cast<double>(n) / 2.0;
    const double a = 2.0 * psi - 1.0;
    const double var =
        half * (p + q + p * (1 - p) + q * (1 - q) + 2.0 * (p - q) * (p - q) * psi * (1 - psi));
    return 1.0 - psi + a * normal_cdf(-half * a * (p - q) / std::sqrt(var));
}

double recoverability_threshold(count n, double q) {
    if (n < 3)
        throw ValidationError("n must be at least 3");
    if (!(q >= 0.0 && q <= 1.0))
        throw ValidationError("q must lie in [0, 1]");
    const double nn = static_cast<double>(n);
    const double ln = std::log(nn);
    const double r = std::sqrt(q * nn / ln) + std::numbers::sqrt2;
    return r * r * ln / nn;
}

LabelVector aggregate_classify(const Graph &g, const FeatureMatrix &x, Aggregation mode) {
    if (x.dim() != 1)
        throw ValidationError("aggregation classifier needs 1-dimensional features, got dim " +
                              std::to_string(x.dim()));
    if (x.rows() != g.num_nodes())
        throw ValidationError("feature rows do not match node count");
    const auto &v = x.values();
    std::vector<std::uint32_t> out(g.num_nodes());
    for (node i = 0; i < g.num_nodes(); ++i) {
        double s = v[i];
        for (auto j : g.neighbors(i))
            s += v[j];
        if (mode == Aggregation::Mean)
            s /= static_cast<double>(g.degree(i) + 1);
        out[i] = s > 0.0 ? 1 : 0;
    }
    return LabelVector(std::move(out), 2);
}

double misclassification(const LabelVector &predicted, const LabelVector &truth) {
    if (predicted.size() != truth.size())
        throw ValidationError("label vectors differ in length");
    if (truth.size() == 0)
        return 0.0;
    count wrong = 0;
    for (node i = 0; i < truth.size(); ++i)
        wrong += predicted[i] != truth[i];
    return static_cast<double>(wrong) / static_cast<double>(truth.size());
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) {
    return splitmix64(splitmix64(master) ^ trial);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t cell, std::uint64_t trial) {
    return splitmix64(splitmix64(splitmix64(master ^ 0x5bd1e995ULL) ^ cell) ^ trial);
}

MonteCarloResult monte_carlo_error(const Params &params, Aggregation mode, count trials,
                                   std::uint64_t seed) {
    if (trials < 1)
        throw ValidationError("trials must be at least 1");
    require_two_blocks(params);
    MonteCarloResult r;
    r.trials = trials;
    r.per_trial.reserve(trials);
    for (count t = 0; t < trials; ++t) {
        auto s = generate(params, trial_seed(seed, t));
        r.per_trial.push_back(misclassification(aggregate_classify(s.graph, s.features, mode), s.labels));
    }
    r.estimate = mean(r.per_trial);
    r.stderr_defined = trials > 1;
    r.stderr_ = stderr_of(r.per_trial);
    return r;
}

namespace {

struct RowConfig {
    rewiring::Method method{};
    rewiring::Op op{};
    count k = 0;
};

struct RowAccum {
    std::vector<double> error, gap, homophily, nmi, mods;
};

double measured_gap(const Graph &g) {
    try {
        return spectral::spectral_gap(g).gap;
    } catch (const ConvergenceError &e) {
        return e.estimate();
    }
}

} // namespace

std::vector<SweepRow> sweep(const SweepGrid &grid, Aggregation mode, count trials, std::uint64_t seed) {
    if (grid.p.empty() || grid.q.empty() || grid.psi.empty())
        throw ValidationError("sweep grid needs at least one value of p, q and psi");
    if (trials < 1)
        throw ValidationError("trials must be at least 1");
    if (grid.blocks != 2)
        throw ValidationError("sweep runs the 2-block model only");

    std::vector<RowConfig> configs{{}}; // k = 0 baseline first
    for (auto m : grid.methods)
        for (auto op : grid.ops)
            for (auto k : grid.ks)
                if (k > 0)
                    configs.push_back({m, op, k});

    std::vector<SweepRow> rows;
    std::uint64_t cell = 0;
    for (double p : grid.p)
        for (double q : grid.q)
            for (double psi : grid.psi) {
                Params params{grid.n, grid.blocks, p, q, psi, grid.mu0, grid.sigma0};
                params.validate();
                std::vector<RowAccum> acc(configs.size());
                for (count t = 0; t < trials; ++t) {
                    const auto sample = generate(params, trial_seed(seed, t));
                    const auto rseed = derive_seed(seed, cell, t);
                    std::optional<Partition> detected;
                    auto communities = [&]() -> const Partition & {
                        if (!detected)
                            detected = community::louvain(sample.graph, rseed);
                        return *detected;
                    };
                    for (std::size_t c = 0; c < configs.size(); ++c) {
                        const auto &cfg = configs[c];
                        Graph g = sample.graph;
                        double mods = 0.0;
                        if (cfg.k > 0) {
                            rewiring::Request req;
                            req.method = cfg.method;
                            req.op = cfg.op;
                            req.k = cfg.k;
                            req.seed = rseed;
                            const Partition &part = grid.planted ? sample.planted : communities();
                            auto delta = rewiring::rewire(sample.graph, &sample.features, &part, req);
                            mods = static_cast<double>(delta.added.size() + delta.deleted.size());
                            g = apply_delta(sample.graph, delta);
                        }
                        auto &a = acc[c];
                        a.error.push_back(misclassification(aggregate_classify(g, sample.features, mode),
                                                            sample.labels));
                        a.mods.push_back(mods);
                        a.homophily.push_back(metrics::edge_homophily(g, sample.labels));
                        a.gap.push_back(grid.compute_gap ? measured_gap(g)
                                                         : std::numeric_limits<double>::quiet_NaN());
                        if (grid.compute_nmi) {
                            const auto detected_here =
                                cfg.k == 0 ? communities() : community::louvain(g, rseed);
                            a.nmi.push_back(metrics::nmi(sample.labels, detected_here));
                        } else {
                            a.nmi.push_back(std::numeric_limits<double>::quiet_NaN());
                        }
                    }
                }

                double expected = std::numeric_limits<double>::quiet_NaN();
                if (grid.n > 2 && p > 0 && p < 1 && q > 0 && q < 1)
                    expected = spectral::expected_gap_two_block(grid.n, p, q);
                const double structure =
                    p + q > 0 ? -(p - q) / (p + q) : std::numeric_limits<double>::quiet_NaN();

                for (std::size_t c = 0; c < configs.size(); ++c) {
                    const auto &cfg = configs[c];
                    const auto &a = acc[c];
                    SweepRow row;
                    row.p = p;
                    row.q = q;
                    row.psi = psi;
                    row.method = cfg.k == 0 ? "none" : std::string(rewiring::to_string(cfg.method));
                    row.op = cfg.k == 0 ? "none" : std::string(rewiring::to_string(cfg.op));
                    row.k = cfg.k;
                    row.trials = trials;
                    row.error = mean(a.error);
                    row.error_stderr = stderr_of(a.error);
                    row.accuracy = 1.0 - row.error;
                    row.gap = mean(a.gap);
                    row.expected_gap = expected;
                    row.structure = structure;
                    row.edge_homophily = mean(a.homophily);
                    row.nmi = mean(a.nmi);
                    row.modifications = mean(a.mods);
                    rows.push_back(std::move(row));
                }
                ++cell;
            }
    return rows;
}

namespace {

std::string num(double v) {
    if (std::isnan(v))
        return "nan";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

nlohmann::ordered_json json_num(double v) {
    if (!std::isfinite(v))
        return nullptr;
    return v;
}

} // namespace

std::string sweep_csv(const std::vector<SweepRow> &rows) {
    std::ostringstream os;
    os << "p,q,psi,method,op,k,trials,error,stderr,accuracy,gap,expected_gap,structure,"
          "edge_homophily,nmi,modifications\n";
    for (const auto &r : rows)
        os << num(r.p) << ',' << num(r.q) << ',' << num(r.psi) << ',' << r.method << ',' << r.op << ','
           << r.k << ',' << r.trials << ',' << num(r.error) << ',' << num(r.error_stderr) << ','
           << num(r.accuracy) << ',' << num(r.gap) << ',' << num(r.expected_gap) << ','
           << num(r.structure) << ',' << num(r.edge_homophily) << ',' << num(r.nmi) << ','
           << num(r.modifications) << '\n';
    return os.str();
}

nlohmann::ordered_json sweep_json(const std::vector<SweepRow> &rows) {
    auto out = nlohmann::ordered_json::array();
    for (const auto &r : rows)
        out.push_back({{"p", r.p},
                       {"q", r.q},
                       {"psi", r.psi},
                       {"method", r.method},
                       {"op", r.op},
                       {"k", r.k},
                       {"trials", r.trials},
                       {"error", json_num(r.error)},
                       {"stderr", json_num(r.error_stderr)},
                       {"accuracy", json_num(r.accuracy)},
                       {"gap", json_num(r.gap)},
                       {"expected_gap", json_num(r.expected_gap)},
                       {"structure", json_num(r.structure)},
                       {"edge_homophily", json_num(r.edge_homophily)},
                       {"nmi", json_num(r.nmi)},
                       {"modifications", json_num(r.modifications)}});
    return out;
}

} // namespace rwl::sbm
