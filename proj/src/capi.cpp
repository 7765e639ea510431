#include "rewirelab/rewirelab.h"

#include <cstring>
#include <new>
#include <string>

#include "rewirelab/community.hpp"
#include "rewirelab/errors.hpp"
#include "rewirelab/graph.hpp"
#include "rewirelab/io.hpp"
#include "rewirelab/metrics.hpp"
#include "rewirelab/report.hpp"
#include "rewirelab/rewiring.hpp"
#include "rewirelab/sbm.hpp"
#include "rewirelab/spectral.hpp"

struct rwl_graph {
    rwl::Graph g;
};
struct rwl_features {
    rwl::FeatureMatrix x;
};
struct rwl_labels {
    rwl::LabelVector y;
};
struct rwl_partition {
    rwl::Partition p;
};
struct rwl_delta {
    rwl::EdgeDelta d;
};

namespace {

thread_local std::string last_error;

rwl_status fail(rwl_status s, const std::string &msg) {
    last_error = msg;
    return s;
}

// Runs `f`, translating exceptions into status codes.
template <class F>
rwl_status guarded(F &&f) {
    try {
        f();
        return RWL_OK;
    } catch (const rwl::ParseError &e) {
        if (e.line() > 0)
            return fail(RWL_ERR_PARSE, "line " + std::to_string(e.line()) + ": " + e.what());
        return fail(RWL_ERR_PARSE, e.what());
    } catch (const rwl::ValidationError &e) {
        return fail(RWL_ERR_VALIDATION, e.what());
    } catch (const rwl::ConvergenceError &e) {
        return fail(RWL_ERR_CONVERGENCE, e.what());
    } catch (const rwl::IoError &e) {
        return fail(RWL_ERR_IO, e.what());
    } catch (const nlohmann::json::exception &e) {
        return fail(RWL_ERR_PARSE, e.what());
    } catch (const std::bad_alloc &) {
        return fail(RWL_ERR_INTERNAL, "out of memory");
    } catch (const std::exception &e) {
        return fail(RWL_ERR_INTERNAL, e.what());
    }
}

#define RWL_REQUIRE(cond, msg)                                                                     \
    do {                                                                                           \
        if (!(cond))                                                                               \
            return fail(RWL_ERR_VALIDATION, msg);                                                  \
    } while (0)

char *dup_string(const std::string &s) {
    char *out = static_cast<char *>(std::malloc(s.size() + 1));
    if (!out)
        throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void split_edges(const std::vector<rwl::Edge> &edges, uint32_t *us, uint32_t *vs) {
    for (std::size_t i = 0; i < edges.size(); ++i) {
        us[i] = edges[i].u;
        vs[i] = edges[i].v;
    }
}

rwl::sbm::Params to_params(const rwl_sbm_params &p) {
    return rwl::sbm::Params{p.n, p.blocks, p.p, p.q, p.psi, p.mu0, p.sigma0};
}

rwl::sbm::Aggregation to_mode(int mode) {
    if (mode == RWL_SUM)
        return rwl::sbm::Aggregation::Sum;
    if (mode == RWL_MEAN)
        return rwl::sbm::Aggregation::Mean;
    throw rwl::ValidationError("unknown aggregation mode " + std::to_string(mode));
}

rwl::rewiring::Method to_method(int m) {
    if (m < RWL_HIGHER_COMMA || m > RWL_PROXY_MAX)
        throw rwl::ValidationError("unknown rewiring method " + std::to_string(m));
    return static_cast<rwl::rewiring::Method>(m);
}

rwl::rewiring::Op to_op(int op) {
    if (op < RWL_ADD || op > RWL_ADD_DEL)
        throw rwl::ValidationError("unknown rewiring op " + std::to_string(op));
    return static_cast<rwl::rewiring::Op>(op);
}

template <class T>
std::vector<T> get_list(const nlohmann::json &j, const char *key) {
    std::vector<T> out;
    if (!j.contains(key))
        return out;
    const auto &v = j.at(key);
    if (v.is_array())
        out = v.get<std::vector<T>>();
    else
        out.push_back(v.get<T>());
    return out;
}

} // namespace

extern "C" {

const char *rwl_version(void) { return "0.3.0"; }
const char *rwl_last_error(void) { return last_error.c_str(); }
void rwl_string_free(char *s) { std::free(s); }

rwl_status rwl_graph_create(size_t num_nodes, const uint32_t *us, const uint32_t *vs, size_t num_edges,
                            rwl_graph **out) {
    RWL_REQUIRE(out, "null output pointer");
    RWL_REQUIRE(num_edges == 0 || (us && vs), "null edge arrays");
    return guarded([&] {
        std::vector<rwl::Edge> edges;
        edges.reserve(num_edges);
        for (size_t i = 0; i < num_edges; ++i) {
            if (us[i] == vs[i])
                throw rwl::ValidationError("self-loop on node " + std::to_string(us[i]));
            edges.emplace_back(us[i], vs[i]);
        }
        *out = new rwl_graph{rwl::Graph(num_nodes, std::move(edges))};
    });
}

rwl_status rwl_graph_load(const char *path, size_t num_nodes, rwl_graph **out) {
    RWL_REQUIRE(path && out, "null argument");
    return guarded([&] {
        std::optional<rwl::count> n;
        if (num_nodes > 0)
            n = num_nodes;
        *out = new rwl_graph{rwl::io::load_edge_list(path, n)};
    });
}

rwl_status rwl_graph_save(const rwl_graph *g, const char *path) {
    RWL_REQUIRE(g && path, "null argument");
    return guarded([&] { rwl::io::save_edge_list(g->g, path); });
}

void rwl_graph_free(rwl_graph *g) { delete g; }
size_t rwl_graph_num_nodes(const rwl_graph *g) { return g ? g->g.num_nodes() : 0; }
size_t rwl_graph_num_edges(const rwl_graph *g) { return g ? g->g.num_edges() : 0; }
void rwl_graph_edges(const rwl_graph *g, uint32_t *us, uint32_t *vs) { split_edges(g->g.edges(), us, vs); }
size_t rwl_graph_degree(const rwl_graph *g, uint32_t u) {
    return u < g->g.num_nodes() ? g->g.degree(u) : 0;
}
int rwl_graph_has_edge(const rwl_graph *g, uint32_t u, uint32_t v) { return g->g.has_edge(u, v) ? 1 : 0; }
int rwl_graph_equal(const rwl_graph *a, const rwl_graph *b) { return a->g == b->g ? 1 : 0; }

rwl_status rwl_graph_components(const rwl_graph *g, size_t *num_components) {
    RWL_REQUIRE(g && num_components, "null argument");
    return guarded([&] {
        rwl::count c = 0;
        rwl::connected_components(g->g, &c);
        *num_components = c;
    });
}

rwl_status rwl_features_create(size_t rows, size_t dim, const double *values, rwl_features **out) {
    RWL_REQUIRE(out, "null output pointer");
    RWL_REQUIRE(rows * dim == 0 || values, "null values");
    return guarded([&] {
        *out = new rwl_features{rwl::FeatureMatrix(rows, dim, std::vector<double>(values, values + rows * dim))};
    });
}

rwl_status rwl_features_load(const char *path, rwl_features **out) {
    RWL_REQUIRE(path && out, "null argument");
    return guarded([&] { *out = new rwl_features{rwl::io::load_features(path)}; });
}

rwl_status rwl_features_save(const rwl_features *x, const char *path) {
    RWL_REQUIRE(x && path, "null argument");
    return guarded([&] { rwl::io::save_features(x->x, path); });
}

void rwl_features_free(rwl_features *x) { delete x; }
size_t rwl_features_rows(const rwl_features *x) { return x ? x->x.rows() : 0; }
size_t rwl_features_dim(const rwl_features *x) { return x ? x->x.dim() : 0; }
const double *rwl_features_data(const rwl_features *x) { return x->x.values().data(); }

rwl_status rwl_labels_create(size_t n, const uint32_t *labels, rwl_labels **out) {
    RWL_REQUIRE(out, "null output pointer");
    RWL_REQUIRE(n == 0 || labels, "null labels");
    return guarded([&] { *out = new rwl_labels{rwl::LabelVector(std::vector<uint32_t>(labels, labels + n))}; });
}

rwl_status rwl_labels_load(const char *path, rwl_labels **out) {
    RWL_REQUIRE(path && out, "null argument");
    return guarded([&] { *out = new rwl_labels{rwl::io::load_labels(path)}; });
}

rwl_status rwl_labels_save(const rwl_labels *y, const char *path) {
    RWL_REQUIRE(y && path, "null argument");
    return guarded([&] { rwl::io::save_labels(y->y, path); });
}

void rwl_labels_free(rwl_labels *y) { delete y; }
size_t rwl_labels_size(const rwl_labels *y) { return y ? y->y.size() : 0; }
size_t rwl_labels_num_classes(const rwl_labels *y) { return y ? y->y.num_classes() : 0; }
const uint32_t *rwl_labels_data(const rwl_labels *y) { return y->y.values().data(); }

rwl_status rwl_partition_create(size_t n, const uint32_t *ids, rwl_partition **out) {
    RWL_REQUIRE(out, "null output pointer");
    RWL_REQUIRE(n == 0 || ids, "null ids");
    return guarded([&] { *out = new rwl_partition{rwl::Partition(std::vector<uint32_t>(ids, ids + n))}; });
}

void rwl_partition_free(rwl_partition *p) { delete p; }
size_t rwl_partition_size(const rwl_partition *p) { return p ? p->p.size() : 0; }
size_t rwl_partition_num_communities(const rwl_partition *p) { return p ? p->p.num_communities() : 0; }
const uint32_t *rwl_partition_data(const rwl_partition *p) { return p->p.values().data(); }

rwl_status rwl_spectral_gap(const rwl_graph *g, double tol, size_t max_iter, rwl_spectrum *out,
                            double *fiedler) {
    RWL_REQUIRE(g && out, "null argument");
    rwl::spectral::Options opts;
    if (tol > 0)
        opts.tol = tol;
    opts.max_iter = max_iter;
    *out = rwl_spectrum{};
    auto status = guarded([&] {
        try {
            auto s = rwl::spectral::spectral_gap(g->g, opts);
            *out = rwl_spectrum{s.gap, s.residual, s.connected ? 1 : 0, s.iterations, s.components, s.isolated};
            if (fiedler)
                std::copy(s.fiedler.begin(), s.fiedler.end(), fiedler);
        } catch (const rwl::ConvergenceError &e) {
            out->gap = e.estimate();
            out->residual = e.residual();
            throw;
        }
    });
    return status;
}

rwl_status rwl_expected_gap_two_block(size_t n, double p, double q, double *out) {
    RWL_REQUIRE(out, "null output pointer");
    return guarded([&] { *out = rwl::spectral::expected_gap_two_block(n, p, q); });
}

rwl_status rwl_expected_gap_k_block(size_t n, size_t k, double p, double q, double *out) {
    RWL_REQUIRE(out, "null output pointer");
    return guarded([&] { *out = rwl::spectral::expected_gap_k_block(n, k, p, q); });
}

rwl_status rwl_expected_gap_unequal(size_t n, size_t m, double p, double q, double *out) {
    RWL_REQUIRE(out, "null output pointer");
    return guarded([&] { *out = rwl::spectral::expected_gap_unequal(n, m, p, q); });
}

rwl_status rwl_louvain(const rwl_graph *g, uint64_t seed, double resolution, rwl_partition **out) {
    RWL_REQUIRE(g && out, "null argument");
    return guarded([&] { *out = new rwl_partition{rwl::community::louvain(g->g, seed, resolution)}; });
}

rwl_status rwl_modularity(const rwl_graph *g, const rwl_partition *p, double resolution, double *out) {
    RWL_REQUIRE(g && p && out, "null argument");
    return guarded([&] {
        rwl::io::check_paired(g->g, p->p);
        *out = rwl::community::modularity(g->g, p->p, resolution);
    });
}

rwl_rewire_request rwl_rewire_request_default(void) {
    rwl::rewiring::Request r;
    rwl_rewire_request out{};
    out.method = static_cast<int>(r.method);
    out.op = static_cast<int>(r.op);
    out.k = r.k;
    out.seed = r.seed;
    out.sample_ratio = r.sample_ratio;
    out.allow_isolation = r.allow_isolation;
    out.auto_sample_threshold = r.auto_sample_threshold;
    out.refresh_iterations = r.proxy.refresh_iterations;
    out.resolve_every = r.proxy.resolve_every;
    out.tol = r.proxy.solver.tol;
    out.max_iter = r.proxy.solver.max_iter;
    return out;
}

rwl_status rwl_parse_method(const char *name, int *method) {
    RWL_REQUIRE(name && method, "null argument");
    return guarded([&] { *method = static_cast<int>(rwl::rewiring::parse_method(name)); });
}

rwl_status rwl_parse_op(const char *name, int *op) {
    RWL_REQUIRE(name && op, "null argument");
    return guarded([&] { *op = static_cast<int>(rwl::rewiring::parse_op(name)); });
}

rwl_status rwl_rewire(const rwl_graph *g, const rwl_features *x, const rwl_partition *p,
                      const rwl_rewire_request *req, rwl_delta **out) {
    RWL_REQUIRE(g && req && out, "null argument");
    return guarded([&] {
        if (x)
            rwl::io::check_paired(g->g, x->x);
        if (p)
            rwl::io::check_paired(g->g, p->p);
        rwl::rewiring::Request r;
        r.method = to_method(req->method);
        r.op = to_op(req->op);
        r.k = req->k;
        r.seed = req->seed;
        r.sample_ratio = req->sample_ratio;
        r.allow_isolation = req->allow_isolation != 0;
        r.auto_sample_threshold = req->auto_sample_threshold;
        r.proxy.refresh_iterations = req->refresh_iterations;
        r.proxy.resolve_every = req->resolve_every;
        if (req->tol > 0)
            r.proxy.solver.tol = req->tol;
        r.proxy.solver.max_iter = req->max_iter;
        *out = new rwl_delta{rwl::rewiring::rewire(g->g, x ? &x->x : nullptr, p ? &p->p : nullptr, r)};
    });
}

void rwl_delta_free(rwl_delta *d) { delete d; }
size_t rwl_delta_num_added(const rwl_delta *d) { return d ? d->d.added.size() : 0; }
size_t rwl_delta_num_deleted(const rwl_delta *d) { return d ? d->d.deleted.size() : 0; }
void rwl_delta_added(const rwl_delta *d, uint32_t *us, uint32_t *vs) { split_edges(d->d.added, us, vs); }
void rwl_delta_deleted(const rwl_delta *d, uint32_t *us, uint32_t *vs) { split_edges(d->d.deleted, us, vs); }

rwl_status rwl_delta_inverse(const rwl_delta *d, rwl_delta **out) {
    RWL_REQUIRE(d && out, "null argument");
    return guarded([&] { *out = new rwl_delta{d->d.inverse()}; });
}

rwl_status rwl_apply_delta(const rwl_graph *g, const rwl_delta *d, rwl_graph **out) {
    RWL_REQUIRE(g && d && out, "null argument");
    return guarded([&] { *out = new rwl_graph{rwl::apply_delta(g->g, d->d)}; });
}

rwl_status rwl_delta_report(const rwl_delta *d, char **json) {
    RWL_REQUIRE(d && json, "null argument");
    return guarded([&] { *json = dup_string(rwl::report_from_delta(d->d).to_json().dump()); });
}

rwl_status rwl_nmi(size_t n, const uint32_t *a, const uint32_t *b, double *out) {
    RWL_REQUIRE(out && (n == 0 || (a && b)), "null argument");
    return guarded([&] { *out = rwl::metrics::nmi({a, n}, {b, n}); });
}

rwl_status rwl_edge_homophily(const rwl_graph *g, const rwl_labels *y, double *out) {
    RWL_REQUIRE(g && y && out, "null argument");
    return guarded([&] {
        rwl::io::check_paired(g->g, y->y);
        *out = rwl::metrics::edge_homophily(g->g, y->y);
    });
}

rwl_status rwl_adjusted_homophily(const rwl_graph *g, const rwl_labels *y, double *out, int *defined) {
    RWL_REQUIRE(g && y && out && defined, "null argument");
    return guarded([&] {
        rwl::io::check_paired(g->g, y->y);
        auto h = rwl::metrics::adjusted_homophily(g->g, y->y);
        *defined = h.has_value() ? 1 : 0;
        *out = h.value_or(0.0);
    });
}

rwl_status rwl_mean_edge_similarity(const rwl_graph *g, const rwl_features *x, double *out) {
    RWL_REQUIRE(g && x && out, "null argument");
    return guarded([&] {
        rwl::io::check_paired(g->g, x->x);
        *out = rwl::metrics::mean_edge_similarity(g->g, x->x);
    });
}

rwl_status rwl_alignment_matrix(const rwl_delta *d, const rwl_labels *y, const rwl_partition *p,
                                size_t added[4], size_t deleted[4]) {
    RWL_REQUIRE(d && y && p && added && deleted, "null argument");
    return guarded([&] {
        auto m = rwl::metrics::alignment_matrix(d->d, y->y, p->p);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                added[2 * i + j] = m.added[i][j];
                deleted[2 * i + j] = m.deleted[i][j];
            }
    });
}

rwl_sbm_params rwl_sbm_params_default(void) {
    rwl::sbm::Params p;
    return rwl_sbm_params{p.n, p.blocks, p.p, p.q, p.psi, p.mu0, p.sigma0};
}

rwl_status rwl_sbm_generate(const rwl_sbm_params *params, uint64_t seed, rwl_graph **graph,
                            rwl_features **features, rwl_labels **labels, rwl_partition **planted) {
    RWL_REQUIRE(params, "null parameters");
    return guarded([&] {
        auto s = rwl::sbm::generate(to_params(*params), seed);
        if (graph)
            *graph = new rwl_graph{std::move(s.graph)};
        if (features)
            *features = new rwl_features{std::move(s.features)};
        if (labels)
            *labels = new rwl_labels{std::move(s.labels)};
        if (planted)
            *planted = new rwl_partition{std::move(s.planted)};
    });
}

double rwl_normal_cdf(double x) { return rwl::sbm::normal_cdf(x); }

rwl_status rwl_theory_error_aligned(size_t n, double p, double q, double mu0, double sigma0, double *out) {
    RWL_REQUIRE(out, "null output pointer");
    return guarded([&] { *out = rwl::sbm::theory_error_aligned(n, p, q, mu0, sigma0); });
}

rwl_status rwl_theory_error(size_t n, double p, double q, double psi, double *out) {
    RWL_REQUIRE(out, "null output pointer");
    return guarded([&] { *out = rwl::sbm::theory_error(n, p, q, psi); });
}

rwl_status rwl_recoverability_threshold(size_t n, double q, double *out) {
    RWL_REQUIRE(out, "null output pointer");
    return guarded([&] { *out = rwl::sbm::recoverability_threshold(n, q); });
}

rwl_status rwl_aggregate_classify(const rwl_graph *g, const rwl_features *x, int mode, rwl_labels **out) {
    RWL_REQUIRE(g && x && out, "null argument");
    return guarded([&] { *out = new rwl_labels{rwl::sbm::aggregate_classify(g->g, x->x, to_mode(mode))}; });
}

rwl_status rwl_misclassification(const rwl_labels *predicted, const rwl_labels *truth, double *out) {
    RWL_REQUIRE(predicted && truth && out, "null argument");
    return guarded([&] { *out = rwl::sbm::misclassification(predicted->y, truth->y); });
}

rwl_status rwl_monte_carlo_error(const rwl_sbm_params *params, int mode, size_t trials, uint64_t seed,
                                 rwl_mc_result *out, double *per_trial) {
    RWL_REQUIRE(params && out, "null argument");
    return guarded([&] {
        auto r = rwl::sbm::monte_carlo_error(to_params(*params), to_mode(mode), trials, seed);
        *out = rwl_mc_result{r.estimate, r.stderr_, r.stderr_defined ? 1 : 0, r.trials};
        if (per_trial)
            std::copy(r.per_trial.begin(), r.per_trial.end(), per_trial);
    });
}

rwl_status rwl_sweep(const char *grid_json, int mode, size_t trials, uint64_t seed, char **csv, char **json) {
    RWL_REQUIRE(grid_json, "null grid");
    return guarded([&] {
        auto j = nlohmann::json::parse(grid_json);
        rwl::sbm::SweepGrid grid;
        grid.p = get_list<double>(j, "p");
        grid.q = get_list<double>(j, "q");
        grid.psi = get_list<double>(j, "psi");
        if (grid.psi.empty())
            grid.psi = {1.0};
        for (const auto &m : get_list<std::string>(j, "methods"))
            grid.methods.push_back(rwl::rewiring::parse_method(m));
        for (const auto &o : get_list<std::string>(j, "ops"))
            grid.ops.push_back(rwl::rewiring::parse_op(o));
        grid.ks = get_list<rwl::count>(j, "k");
        grid.n = j.value("n", grid.n);
        grid.mu0 = j.value("mu0", grid.mu0);
        grid.sigma0 = j.value("sigma0", grid.sigma0);
        grid.planted = j.value("planted", grid.planted);
        grid.compute_gap = j.value("gap", grid.compute_gap);
        grid.compute_nmi = j.value("nmi", grid.compute_nmi);
        auto rows = rwl::sbm::sweep(grid, to_mode(mode), trials, seed);
        if (csv)
            *csv = dup_string(rwl::sbm::sweep_csv(rows));
        if (json)
            *json = dup_string(rwl::sbm::sweep_json(rows).dump());
    });
}

rwl_status rwl_report_save(const char *json, const char *path) {
    RWL_REQUIRE(json && path, "null argument");
    return guarded([&] {
        auto j = nlohmann::ordered_json::parse(json);
        rwl::Report::from_json(j); // schema check
        rwl::io::write_file(path, j.dump(2) + "\n");
    });
}

rwl_status rwl_report_load(const char *path, char **json) {
    RWL_REQUIRE(path && json, "null argument");
    return guarded([&] { *json = dup_string(rwl::load_report(path).to_json().dump()); });
}

} // extern "C"
