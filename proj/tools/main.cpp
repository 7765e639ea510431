// rwl: batch front end over the rewirelab C API.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rewirelab/rewirelab.h"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Failure {
    rwl_status status;
    std::string message;
};

void check(rwl_status s) {
    if (s != RWL_OK)
        throw Failure{s, rwl_last_error()};
}

struct Deleter {
    void operator()(rwl_graph *p) const { rwl_graph_free(p); }
    void operator()(rwl_features *p) const { rwl_features_free(p); }
    void operator()(rwl_labels *p) const { rwl_labels_free(p); }
    void operator()(rwl_partition *p) const { rwl_partition_free(p); }
    void operator()(rwl_delta *p) const { rwl_delta_free(p); }
    void operator()(char *p) const { rwl_string_free(p); }
};
template <class T>
using Handle = std::unique_ptr<T, Deleter>;

std::string take(char *s) {
    Handle<char> h(s);
    return s ? std::string(s) : std::string();
}

Handle<rwl_graph> load_graph(const std::string &path) {
    rwl_graph *g = nullptr;
    check(rwl_graph_load(path.c_str(), 0, &g));
    return Handle<rwl_graph>(g);
}

Handle<rwl_features> load_features(const std::string &path) {
    rwl_features *x = nullptr;
    check(rwl_features_load(path.c_str(), &x));
    return Handle<rwl_features>(x);
}

Handle<rwl_labels> load_labels(const std::string &path) {
    rwl_labels *y = nullptr;
    check(rwl_labels_load(path.c_str(), &y));
    return Handle<rwl_labels>(y);
}

// Partitions are stored like labels: one community id per line.
Handle<rwl_partition> load_partition(const std::string &path) {
    auto y = load_labels(path);
    rwl_partition *p = nullptr;
    check(rwl_partition_create(rwl_labels_size(y.get()), rwl_labels_data(y.get()), &p));
    return Handle<rwl_partition>(p);
}

void save_partition(const rwl_partition *p, const fs::path &path) {
    rwl_labels *y = nullptr;
    check(rwl_labels_create(rwl_partition_size(p), rwl_partition_data(p), &y));
    Handle<rwl_labels> h(y);
    check(rwl_labels_save(y, path.string().c_str()));
}

Handle<rwl_partition> louvain(const rwl_graph *g, std::uint64_t seed, double resolution) {
    rwl_partition *p = nullptr;
    check(rwl_louvain(g, seed, resolution, &p));
    return Handle<rwl_partition>(p);
}

json optional_number(double v, bool defined) { return defined && std::isfinite(v) ? json(v) : json(nullptr); }

struct Globals {
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    std::string format = "json";
};

// Flag record for the provenance block: every option of the subcommand with
// its effective value.
json flag_record(const CLI::App &app) {
    json flags = json::object();
    for (const CLI::Option *opt : app.get_options()) {
        if (opt == app.get_help_ptr())
            continue;
        std::string name = opt->get_name(false, true);
        name.erase(0, name.find_first_not_of('-'));
        if (opt->get_expected_max() == 0) {
            flags[name] = opt->count() > 0;
            continue;
        }
        if (opt->count() > 0) {
            auto r = opt->results();
            flags[name] = r.size() == 1 ? json(r[0]) : json(r);
        } else if (!opt->get_default_str().empty()) {
            flags[name] = opt->get_default_str();
        }
    }
    return flags;
}

json provenance(const CLI::App &sub, const Globals &g) {
    json flags = flag_record(sub);
    flags["seed"] = g.seed;
    flags["format"] = g.format;
    return json{{"tool", "rwl"}, {"version", rwl_version()}, {"subcommand", sub.get_name()},
                {"flags", flags}, {"seed", g.seed}};
}

fs::path out_path(const Globals &g, const std::string &name) {
    fs::create_directories(g.out_dir);
    return fs::path(g.out_dir) / name;
}

void write_report(const Globals &g, const std::string &name, const json &report,
                  const std::string &explicit_path = {}) {
    auto path = explicit_path.empty() ? out_path(g, name + ".json") : fs::path(explicit_path);
    check(rwl_report_save(report.dump().c_str(), path.string().c_str()));
    if (g.format == "csv") {
        std::ofstream os(out_path(g, name + ".csv"));
        os << "metric,value\n";
        for (const auto &[k, v] : report["metrics"].items())
            if (v.is_primitive())
                os << k << ',' << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
    }
    std::cout << "report: " << path.string() << '\n';
}

json base_report(const std::string &method, const CLI::App &sub, const Globals &g) {
    return json{{"method", method},
                {"params", json::object()},
                {"seed", g.seed},
                {"metrics", json::object()},
                {"delta", {{"added", json::array()}, {"deleted", json::array()}}},
                {"timings_ms", json::object()},
                {"provenance", provenance(sub, g)}};
}

json spectrum_json(const rwl_graph *g) {
    rwl_spectrum s{};
    auto st = rwl_spectral_gap(g, 0, 0, &s, nullptr);
    if (st != RWL_OK && st != RWL_ERR_CONVERGENCE)
        check(st);
    return json{{"gap", s.gap}, {"residual", s.residual}, {"converged", st == RWL_OK},
                {"connected", s.connected != 0}};
}

// Graph-level statistics, each only when its inputs are present.
json graph_metrics(const rwl_graph *g, const rwl_features *x, const rwl_labels *y, bool with_gap) {
    json m;
    m["num_nodes"] = rwl_graph_num_nodes(g);
    m["num_edges"] = rwl_graph_num_edges(g);
    m["num_edges_directed"] = 2 * rwl_graph_num_edges(g);
    if (with_gap)
        m["spectral"] = spectrum_json(g);
    if (x) {
        double s = 0;
        check(rwl_mean_edge_similarity(g, x, &s));
        m["mean_edge_similarity"] = s;
    }
    if (y) {
        double h = 0, ah = 0;
        int defined = 0;
        check(rwl_edge_homophily(g, y, &h));
        check(rwl_adjusted_homophily(g, y, &ah, &defined));
        m["edge_homophily"] = h;
        m["adjusted_homophily"] = optional_number(ah, defined != 0);
    }
    return m;
}

json grid_json(const std::size_t (&cells)[4]) {
    return json::array({json::array({cells[0], cells[1]}), json::array({cells[2], cells[3]})});
}

struct SbmFlags {
    std::size_t n = 1000;
    std::size_t blocks = 2;
    double p = 0.5;
    double q = 0.1;
    double psi = 1.0;
    double mu0 = 1.0;
    double sigma0 = 1.0;

    void add(CLI::App *app) {
        app->add_option("--n", n, "node count")->capture_default_str();
        app->add_option("--blocks", blocks, "number of equal blocks")->capture_default_str();
        app->add_option("--p", p, "intra-block edge probability")->capture_default_str();
        app->add_option("--q", q, "inter-block edge probability")->capture_default_str();
        app->add_option("--psi", psi, "label/block alignment")->capture_default_str();
        app->add_option("--mu0", mu0, "feature mean magnitude")->capture_default_str();
        app->add_option("--sigma0", sigma0, "feature standard deviation")->capture_default_str();
    }
    rwl_sbm_params params() const { return rwl_sbm_params{n, blocks, p, q, psi, mu0, sigma0}; }
    json to_json() const {
        return json{{"n", n}, {"blocks", blocks}, {"p", p}, {"q", q}, {"psi", psi}, {"mu0", mu0}, {"sigma0", sigma0}};
    }
};

int parse_mode(const std::string &s) {
    if (s == "sum")
        return RWL_SUM;
    if (s == "mean")
        return RWL_MEAN;
    throw Failure{RWL_ERR_VALIDATION, "unknown aggregation mode '" + s + "'"};
}

// Expands the bench shorthand "comma" / "proxy" and otherwise defers to the library.
int bench_method(const std::string &name) {
    if (name == "comma")
        return RWL_HIGHER_COMMA;
    if (name == "proxy")
        return RWL_PROXY_MAX;
    int m = 0;
    check(rwl_parse_method(name.c_str(), &m));
    return m;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Graph rewiring and SBM laboratory"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--seed", g.seed, "master seed")->capture_default_str();
    app.add_option("--out-dir", g.out_dir, "directory for reports and output files")->capture_default_str();
    app.add_option("--format", g.format, "extra table output")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();

    // gen-sbm
    auto *gen = app.add_subcommand("gen-sbm", "sample an SBM graph with features and labels");
    SbmFlags gen_sbm;
    gen_sbm.add(gen);

    // rewire
    auto *rew = app.add_subcommand("rewire", "rewire a graph and report before/after metrics");
    std::string method = "feast", op = "add", edges_path, features_path, labels_path, partition_path;
    std::size_t k = 10;
    double sample_ratio = 1.0, resolution = 1.0;
    std::string out_edges, out_report;
    bool allow_isolation = false, no_gap = false;
    rew->add_option("--method", method, "comma-higher, comma-lower, feast, comfy, proxy-min, proxy-max")
        ->capture_default_str();
    rew->add_option("--op", op, "add, del or adddel")->capture_default_str();
    rew->add_option("--k", k, "edges to modify")->capture_default_str();
    rew->add_option("--edges", edges_path, "edge list")->required();
    rew->add_option("--features", features_path, "feature CSV");
    rew->add_option("--labels", labels_path, "labels, one per line");
    rew->add_option("--partition", partition_path, "community ids, one per line (default: Louvain)");
    rew->add_option("--sample-ratio", sample_ratio, "FeaSt node sampling ratio")->capture_default_str();
    rew->add_option("--resolution", resolution, "Louvain resolution")->capture_default_str();
    rew->add_flag("--allow-isolation", allow_isolation, "let deletions isolate nodes");
    rew->add_flag("--no-gap", no_gap, "skip the spectral gap before/after");
    rew->add_option("--out-edges", out_edges, "rewired edge list (default: <out-dir>/rewired_edges.txt)");
    rew->add_option("--out-report", out_report, "report path (default: <out-dir>/rewire.json)");

    // metrics
    auto *met = app.add_subcommand("metrics", "dataset statistics");
    std::string m_edges, m_features, m_labels, m_partition;
    double m_resolution = 1.0;
    met->add_option("--edges", m_edges, "edge list")->required();
    met->add_option("--features", m_features, "feature CSV");
    met->add_option("--labels", m_labels, "labels, one per line");
    met->add_option("--partition", m_partition, "community ids (default: Louvain)");
    met->add_option("--resolution", m_resolution, "Louvain resolution")->capture_default_str();

    // communities
    auto *com = app.add_subcommand("communities", "Louvain communities");
    std::string c_edges;
    double c_resolution = 1.0;
    com->add_option("--edges", c_edges, "edge list")->required();
    com->add_option("--resolution", c_resolution, "Louvain resolution")->capture_default_str();

    // spectrum
    auto *spe = app.add_subcommand("spectrum", "spectral gap of the normalized Laplacian");
    std::string s_edges;
    double s_tol = 1e-8;
    std::size_t s_max_iter = 0;
    bool s_fiedler = false;
    spe->add_option("--edges", s_edges, "edge list")->required();
    spe->add_option("--tol", s_tol, "residual tolerance")->capture_default_str();
    spe->add_option("--max-iter", s_max_iter, "operator applications (0: automatic)")->capture_default_str();
    spe->add_flag("--fiedler", s_fiedler, "also write the Fiedler vector");

    // theory
    auto *the = app.add_subcommand("theory", "closed-form gap and misclassification values");
    SbmFlags th;
    std::size_t th_m = 0;
    th.add(the);
    the->add_option("--m", th_m, "larger block size for the unequal-size gap");

    // verify
    auto *ver = app.add_subcommand("verify", "Monte Carlo error against the closed form");
    SbmFlags vf;
    std::size_t v_trials = 200;
    std::string v_mode = "sum";
    double v_slack = 0.01;
    bool v_strict = false;
    vf.add(ver);
    ver->add_option("--trials", v_trials, "independent samples")->capture_default_str();
    ver->add_option("--mode", v_mode, "sum or mean")->capture_default_str();
    ver->add_option("--slack", v_slack, "absolute slack on top of 3 standard errors")->capture_default_str();
    ver->add_flag("--strict", v_strict, "exit 1 when the check fails");

    // sweep
    auto *swp = app.add_subcommand("sweep", "grid of SBM cells, optionally rewired");
    std::size_t sw_n = 200, sw_trials = 5;
    std::vector<double> sw_p{0.5, 0.7, 0.8}, sw_q{0.2}, sw_psi{1.0};
    std::vector<std::string> sw_methods, sw_ops{"add"};
    std::vector<std::size_t> sw_k{0};
    std::string sw_mode = "sum";
    bool sw_planted = false, sw_no_gap = false, sw_no_nmi = false;
    double sw_mu0 = 1.0, sw_sigma0 = 1.0;
    swp->add_option("--n", sw_n, "node count")->capture_default_str();
    swp->add_option("--p", sw_p, "intra-block probabilities")->delimiter(',')->capture_default_str();
    swp->add_option("--q", sw_q, "inter-block probabilities")->delimiter(',')->capture_default_str();
    swp->add_option("--psi", sw_psi, "alignments")->delimiter(',')->capture_default_str();
    swp->add_option("--methods", sw_methods, "rewiring methods")->delimiter(',');
    swp->add_option("--ops", sw_ops, "rewiring ops")->delimiter(',')->capture_default_str();
    swp->add_option("--k", sw_k, "edit budgets")->delimiter(',')->capture_default_str();
    swp->add_option("--trials", sw_trials, "samples per cell")->capture_default_str();
    swp->add_option("--mode", sw_mode, "sum or mean")->capture_default_str();
    swp->add_option("--mu0", sw_mu0, "feature mean magnitude")->capture_default_str();
    swp->add_option("--sigma0", sw_sigma0, "feature standard deviation")->capture_default_str();
    swp->add_flag("--planted", sw_planted, "rewire with the planted blocks instead of Louvain");
    swp->add_flag("--no-gap", sw_no_gap, "skip spectral gaps");
    swp->add_flag("--no-nmi", sw_no_nmi, "skip Louvain NMI");

    // bench
    auto *ben = app.add_subcommand("bench", "median runtime per rewiring method");
    std::vector<std::string> b_methods{"comma", "feast", "comfy", "proxy"};
    std::size_t b_k = 50, b_reps = 5;
    std::string b_edges, b_features, b_op = "add";
    ben->add_option("--methods", b_methods, "methods to time")->delimiter(',')->capture_default_str();
    ben->add_option("--k", b_k, "edges to modify")->capture_default_str();
    ben->add_option("--op", b_op, "add, del or adddel")->capture_default_str();
    ben->add_option("--reps", b_reps, "repetitions (at least 5)")->capture_default_str()->check(
        CLI::Range(std::size_t{5}, std::size_t{1000000}));
    ben->add_option("--edges", b_edges, "edge list")->required();
    ben->add_option("--features", b_features, "feature CSV (default: seeded Gaussian, 16 columns)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        std::cerr << app.help();
        return 1;
    }

    try {
        if (*gen) {
            auto params = gen_sbm.params();
            rwl_graph *gr = nullptr;
            rwl_features *x = nullptr;
            rwl_labels *y = nullptr;
            rwl_partition *pl = nullptr;
            check(rwl_sbm_generate(&params, g.seed, &gr, &x, &y, &pl));
            Handle<rwl_graph> hg(gr);
            Handle<rwl_features> hx(x);
            Handle<rwl_labels> hy(y);
            Handle<rwl_partition> hp(pl);
            check(rwl_graph_save(gr, out_path(g, "edges.txt").string().c_str()));
            check(rwl_features_save(x, out_path(g, "features.csv").string().c_str()));
            check(rwl_labels_save(y, out_path(g, "labels.txt").string().c_str()));
            save_partition(pl, out_path(g, "planted.txt"));
            auto report = base_report("gen-sbm", *gen, g);
            report["params"] = gen_sbm.to_json();
            report["metrics"] = graph_metrics(gr, x, y, false);
            write_report(g, "gen-sbm", report);
            std::cout << "nodes " << rwl_graph_num_nodes(gr) << ", edges " << rwl_graph_num_edges(gr) << '\n';
        } else if (*rew) {
            auto gr = load_graph(edges_path);
            Handle<rwl_features> x;
            Handle<rwl_labels> y;
            if (!features_path.empty())
                x = load_features(features_path);
            if (!labels_path.empty())
                y = load_labels(labels_path);
            auto req = rwl_rewire_request_default();
            check(rwl_parse_method(method.c_str(), &req.method));
            check(rwl_parse_op(op.c_str(), &req.op));
            req.k = k;
            req.seed = g.seed;
            req.sample_ratio = sample_ratio;
            req.allow_isolation = allow_isolation;

            Handle<rwl_partition> part;
            const bool needs_part =
                req.method == RWL_HIGHER_COMMA || req.method == RWL_LOWER_COMMA || req.method == RWL_COMFY;
            double louvain_ms = 0;
            if (!partition_path.empty()) {
                part = load_partition(partition_path);
            } else if (needs_part || y) {
                auto t0 = std::chrono::steady_clock::now();
                part = louvain(gr.get(), g.seed, resolution);
                louvain_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
            }

            rwl_delta *d = nullptr;
            check(rwl_rewire(gr.get(), x.get(), needs_part ? part.get() : nullptr, &req, &d));
            Handle<rwl_delta> delta(d);
            rwl_graph *after_raw = nullptr;
            check(rwl_apply_delta(gr.get(), d, &after_raw));
            Handle<rwl_graph> after(after_raw);
            const auto edges_out = out_edges.empty() ? out_path(g, "rewired_edges.txt") : fs::path(out_edges);
            check(rwl_graph_save(after_raw, edges_out.string().c_str()));

            auto report = json::parse(take([&] {
                char *s = nullptr;
                check(rwl_delta_report(d, &s));
                return s;
            }()));
            json warnings = report["metrics"].value("warnings", json::array());
            json metrics;
            metrics["before"] = graph_metrics(gr.get(), x.get(), y.get(), !no_gap);
            metrics["after"] = graph_metrics(after.get(), x.get(), y.get(), !no_gap);
            metrics["added"] = rwl_delta_num_added(d);
            metrics["deleted"] = rwl_delta_num_deleted(d);
            if (x)
                metrics["mean_similarity_delta"] = metrics["after"]["mean_edge_similarity"].get<double>() -
                                                   metrics["before"]["mean_edge_similarity"].get<double>();
            if (y && part) {
                std::size_t added[4], deleted[4];
                check(rwl_alignment_matrix(d, y.get(), part.get(), added, deleted));
                metrics["alignment"] = {{"rows", "label same/different"},
                                        {"columns", "community same/different"},
                                        {"added", grid_json(added)},
                                        {"deleted", grid_json(deleted)}};
            }
            if (part)
                metrics["num_communities"] = rwl_partition_num_communities(part.get());
            if (!warnings.empty())
                metrics["warnings"] = warnings;
            report["metrics"] = metrics;
            if (louvain_ms > 0)
                report["timings_ms"]["louvain"] = louvain_ms;
            report["provenance"] = provenance(*rew, g);
            write_report(g, "rewire", report, out_report);
            std::cout << "added " << rwl_delta_num_added(d) << ", deleted " << rwl_delta_num_deleted(d) << '\n';
            for (const auto &w : warnings)
                std::cerr << "warning: " << w.get<std::string>() << '\n';
        } else if (*met) {
            auto gr = load_graph(m_edges);
            Handle<rwl_features> x;
            Handle<rwl_labels> y;
            if (!m_features.empty())
                x = load_features(m_features);
            if (!m_labels.empty())
                y = load_labels(m_labels);
            auto part = m_partition.empty() ? louvain(gr.get(), g.seed, m_resolution) : load_partition(m_partition);
            auto metrics = graph_metrics(gr.get(), x.get(), y.get(), true);
            double q = 0;
            check(rwl_modularity(gr.get(), part.get(), m_resolution, &q));
            metrics["num_communities"] = rwl_partition_num_communities(part.get());
            metrics["modularity"] = q;
            if (y) {
                double nmi = 0;
                if (rwl_labels_size(y.get()) != rwl_partition_size(part.get()))
                    throw Failure{RWL_ERR_VALIDATION, "labels and partition differ in length"};
                check(rwl_nmi(rwl_labels_size(y.get()), rwl_labels_data(y.get()), rwl_partition_data(part.get()),
                              &nmi));
                metrics["nmi"] = nmi;
            }
            auto report = base_report("metrics", *met, g);
            report["metrics"] = metrics;
            write_report(g, "metrics", report);
            std::cout << metrics.dump(2) << '\n';
        } else if (*com) {
            auto gr = load_graph(c_edges);
            auto t0 = std::chrono::steady_clock::now();
            auto part = louvain(gr.get(), g.seed, c_resolution);
            double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
            double q = 0;
            check(rwl_modularity(gr.get(), part.get(), c_resolution, &q));
            save_partition(part.get(), out_path(g, "communities.txt"));
            auto report = base_report("louvain", *com, g);
            report["params"] = {{"resolution", c_resolution}};
            const auto *ids = rwl_partition_data(part.get());
            report["metrics"] = {{"num_communities", rwl_partition_num_communities(part.get())},
                                 {"modularity", q},
                                 {"assignment", std::vector<std::uint32_t>(ids, ids + rwl_partition_size(part.get()))}};
            report["timings_ms"]["louvain"] = ms;
            write_report(g, "communities", report);
            std::cout << "communities " << rwl_partition_num_communities(part.get()) << ", modularity " << q << '\n';
        } else if (*spe) {
            auto gr = load_graph(s_edges);
            rwl_spectrum s{};
            std::vector<double> f(rwl_graph_num_nodes(gr.get()));
            auto st = rwl_spectral_gap(gr.get(), s_tol, s_max_iter, &s, f.data());
            auto report = base_report("spectrum", *spe, g);
            report["params"] = {{"tol", s_tol}, {"max_iter", s_max_iter}};
            report["metrics"] = {{"gap", s.gap},       {"residual", s.residual},     {"converged", st == RWL_OK},
                                 {"connected", s.connected != 0}, {"iters", s.iterations},
                                 {"components", s.components},    {"isolated", s.isolated}};
            if (st != RWL_OK && st != RWL_ERR_CONVERGENCE)
                check(st);
            write_report(g, "spectrum", report);
            if (st == RWL_ERR_CONVERGENCE) {
                std::cerr << "error: " << rwl_last_error() << '\n';
                return 2;
            }
            if (s_fiedler) {
                std::ofstream os(out_path(g, "fiedler.txt"));
                os << std::setprecision(17);
                for (double v : f)
                    os << v << '\n';
            }
            std::cout << "gap " << std::setprecision(12) << s.gap << '\n';
        } else if (*the) {
            if (!(th.p > 0 && th.p < 1) || !(th.q > 0 && th.q < 1))
                throw Failure{RWL_ERR_VALIDATION, "p and q must lie in (0, 1)"};
            if (!(th.psi >= 0 && th.psi <= 1))
                throw Failure{RWL_ERR_VALIDATION, "psi must lie in [0, 1]"};
            json metrics;
            auto try_value = [&](const char *name, auto fn) {
                double v = 0;
                if (fn(&v) == RWL_OK)
                    metrics[name] = v;
                else
                    metrics[name] = nullptr;
            };
            try_value("expected_gap", [&](double *v) {
                return th.blocks == 2 ? rwl_expected_gap_two_block(th.n, th.p, th.q, v)
                                      : rwl_expected_gap_k_block(th.n, th.blocks, th.p, th.q, v);
            });
            if (th_m > 0)
                try_value("expected_gap_unequal",
                          [&](double *v) { return rwl_expected_gap_unequal(th.n, th_m, th.p, th.q, v); });
            try_value("error_aligned", [&](double *v) {
                return rwl_theory_error_aligned(th.n, th.p, th.q, th.mu0, th.sigma0, v);
            });
            try_value("error", [&](double *v) { return rwl_theory_error(th.n, th.p, th.q, th.psi, v); });
            try_value("recoverability_threshold",
                      [&](double *v) { return rwl_recoverability_threshold(th.n, th.q, v); });
            metrics["structure"] = -(th.p - th.q) / (th.p + th.q);
            bool any = false;
            for (const auto &[key, v] : metrics.items())
                any = any || !v.is_null();
            if (!any)
                throw Failure{RWL_ERR_VALIDATION, rwl_last_error()};
            auto report = base_report("theory", *the, g);
            report["params"] = th.to_json();
            if (th_m > 0)
                report["params"]["m"] = th_m;
            report["metrics"] = metrics;
            write_report(g, "theory", report);
            std::cout << metrics.dump(2) << '\n';
        } else if (*ver) {
            auto params = vf.params();
            rwl_mc_result mc{};
            check(rwl_monte_carlo_error(&params, parse_mode(v_mode), v_trials, g.seed, &mc, nullptr));
            double theory = 0;
            check(rwl_theory_error(vf.n, vf.p, vf.q, vf.psi, &theory));
            const double tolerance = 3.0 * mc.stderr_ + v_slack;
            const bool pass = std::abs(mc.estimate - theory) <= tolerance;
            auto report = base_report("verify", *ver, g);
            report["params"] = vf.to_json();
            report["params"]["trials"] = v_trials;
            report["params"]["mode"] = v_mode;
            report["metrics"] = {{"monte_carlo", mc.estimate},
                                 {"stderr", optional_number(mc.stderr_, mc.stderr_defined != 0)},
                                 {"theory", theory},
                                 {"difference", mc.estimate - theory},
                                 {"tolerance", tolerance},
                                 {"pass", pass}};
            if (vf.psi == 1.0) {
                double aligned = 0;
                if (rwl_theory_error_aligned(vf.n, vf.p, vf.q, vf.mu0, vf.sigma0, &aligned) == RWL_OK)
                    report["metrics"]["theory_aligned"] = aligned;
            }
            write_report(g, "verify", report);
            std::cout << (pass ? "PASS" : "FAIL") << " monte_carlo=" << mc.estimate << " theory=" << theory
                      << " tolerance=" << tolerance << '\n';
            if (!pass && v_strict)
                return 1;
        } else if (*swp) {
            json grid{{"p", sw_p},         {"q", sw_q},           {"psi", sw_psi},       {"methods", sw_methods},
                      {"ops", sw_ops},     {"k", sw_k},           {"n", sw_n},           {"mu0", sw_mu0},
                      {"sigma0", sw_sigma0}, {"planted", sw_planted}, {"gap", !sw_no_gap}, {"nmi", !sw_no_nmi}};
            char *csv = nullptr, *rows = nullptr;
            check(rwl_sweep(grid.dump().c_str(), parse_mode(sw_mode), sw_trials, g.seed, &csv, &rows));
            auto csv_text = take(csv);
            auto rows_json = json::parse(take(rows));
            std::ofstream(out_path(g, "sweep.csv")) << csv_text;
            auto report = base_report("sweep", *swp, g);
            report["params"] = grid;
            report["params"]["trials"] = sw_trials;
            report["params"]["mode"] = sw_mode;
            report["metrics"] = {{"rows", rows_json}};
            write_report(g, "sweep", report);
            std::cout << csv_text;
        } else if (*ben) {
            auto gr = load_graph(b_edges);
            const auto n = rwl_graph_num_nodes(gr.get());
            Handle<rwl_features> x;
            if (!b_features.empty()) {
                x = load_features(b_features);
            } else {
                std::mt19937_64 rng(g.seed);
                std::normal_distribution<double> normal;
                std::vector<double> v(n * 16);
                for (auto &e : v)
                    e = normal(rng);
                rwl_features *raw = nullptr;
                check(rwl_features_create(n, 16, v.data(), &raw));
                x.reset(raw);
            }
            int op_code = 0;
            check(rwl_parse_op(b_op.c_str(), &op_code));
            json table = json::array();
            std::cout << std::left << std::setw(16) << "method" << "median_ms\n";
            for (const auto &name : b_methods) {
                const int m = bench_method(name);
                const bool needs_part = m == RWL_HIGHER_COMMA || m == RWL_LOWER_COMMA || m == RWL_COMFY;
                std::vector<double> times;
                for (std::size_t r = 0; r < b_reps; ++r) {
                    auto t0 = std::chrono::steady_clock::now();
                    Handle<rwl_partition> part;
                    if (needs_part)
                        part = louvain(gr.get(), g.seed + r, 1.0);
                    auto req = rwl_rewire_request_default();
                    req.method = m;
                    req.op = op_code;
                    req.k = b_k;
                    req.seed = g.seed + r;
                    rwl_delta *d = nullptr;
                    check(rwl_rewire(gr.get(), x.get(), part.get(), &req, &d));
                    rwl_delta_free(d);
                    times.push_back(
                        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
                }
                table.push_back({{"method", name}, {"median_ms", median(times)}, {"runs_ms", times}});
                std::cout << std::setw(16) << name << median(times) << '\n';
            }
            auto report = base_report("bench", *ben, g);
            report["params"] = {{"k", b_k}, {"op", b_op}, {"reps", b_reps}};
            report["metrics"] = {{"note", "timings include community detection for methods that need it"}};
            report["timings_ms"] = json::object();
            for (const auto &row : table)
                report["timings_ms"][row["method"].get<std::string>()] = row["median_ms"];
            write_report(g, "bench", report);
            if (g.format == "csv") {
                std::ofstream os(out_path(g, "bench_table.csv"));
                os << "method,median_ms\n";
                for (const auto &row : table)
                    os << row["method"].get<std::string>() << ',' << row["median_ms"].get<double>() << '\n';
            }
        }
    } catch (const Failure &f) {
        std::cerr << "error: " << f.message << '\n';
        return f.status == RWL_ERR_CONVERGENCE ? 2 : 1;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
