#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "rewirelab/graph.hpp"
#include "rewirelab/rewiring.hpp"

namespace rwl::sbm {

/// (p, q) stochastic block model with label alignment psi and 1-d Gaussian
/// features. Blocks are equal, contiguous index ranges.
struct Params {
    count n = 1000;
    count blocks = 2;
    double p = 0.5;
    double q = 0.1;
    double psi = 1.0;
    double mu0 = 1.0;
    double sigma0 = 1.0;

    /// Throws ValidationError. Edge probabilities may be 0 or 1 here.
    void validate() const;
};

struct Sample {
    Graph graph;
    FeatureMatrix features;
    LabelVector labels;
    Partition planted;
    std::uint64_t seed = 0;
};

/// Edges are independent Bernoulli draws (p inside a block, q across). Each
/// node's label equals its block with probability psi, else (two blocks) the
/// other class or (more blocks) a uniformly chosen other class. Features are
/// drawn from Normal(-mu0, sigma0^2) for class 0 and Normal(+mu0, sigma0^2) for
/// class 1; with more classes the means are spread evenly over [-mu0, mu0].
Sample generate(const Params &params, std::uint64_t seed);

/// Standard normal CDF via erfc.
double normal_cdf(double x);

/// Misclassification rate after one sum-aggregation step on a perfectly
/// aligned two-block model: Phi(-mu1 / sigma1) with
/// mu1 = mu0 (1 + Ep - Eq), sigma1^2 = sigma0^2 (1 + Ep + Eq),
/// Ep = p (n/2 - 1), Eq = q n/2.
double theory_error_aligned(count n, double p, double q, double mu0 = 1.0, double sigma0 = 1.0);

/// Normal approximation of the misclassification rate at alignment psi:
/// 1 - psi + (2 psi - 1) Phi(-(n/2)(2 psi - 1)(p - q) / s),
/// s^2 = (n/2)(p + q + p(1-p) + q(1-q) + 2 (p-q)^2 psi (1-psi)).
double theory_error(count n, double p, double q, double psi);

/// Community-detection threshold on p for the given q:
/// (sqrt(q n / ln n) + sqrt 2)^2 ln(n) / n.
double recoverability_threshold(count n, double q);

enum class Aggregation { Sum, Mean };

/// One round of aggregation including the node itself, then a threshold at 0:
/// class 1 if the aggregate is positive, class 0 otherwise.
LabelVector aggregate_classify(const Graph &g, const FeatureMatrix &x, Aggregation mode);

/// Fraction of positions where the labelings differ.
double misclassification(const LabelVector &predicted, const LabelVector &truth);

/// Per-trial sample seed; shared by monte_carlo_error and sweep.
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t cell, std::uint64_t trial);

struct MonteCarloResult {
    double estimate = 0.0;
    double stderr_ = 0.0;
    bool stderr_defined = false; ///< false for a single trial
    count trials = 0;
    std::vector<double> per_trial;
};

MonteCarloResult monte_carlo_error(const Params &params, Aggregation mode, count trials,
                                   std::uint64_t seed);

struct SweepGrid {
    std::vector<double> p;
    std::vector<double> q;
    std::vector<double> psi;
    std::vector<rewiring::Method> methods;
    std::vector<rewiring::Op> ops;
    std::vector<count> ks;
    count n = 200;
    count blocks = 2;
    double mu0 = 1.0;
    double sigma0 = 1.0;
    /// Rewire with the planted blocks instead of Louvain communities.
    bool planted = false;
    bool compute_gap = true;
    bool compute_nmi = true;
};

struct SweepRow {
    double p = 0, q = 0, psi = 0;
    std::string method; ///< "none" for k = 0
    std::string op;
    count k = 0;
    count trials = 0;
    double error = 0, error_stderr = 0;
    double accuracy = 0;
    double gap = 0;
    double expected_gap = 0; ///< NaN when not a 2-block grid point
    double structure = 0;    ///< -(p - q) / (p + q)
    double edge_homophily = 0;
    double nmi = 0;
    double modifications = 0; ///< mean realized edits per trial
};

/// Runs every grid cell. Rows with k = 0 are emitted once per (p, q, psi).
std::vector<SweepRow> sweep(const SweepGrid &grid, Aggregation mode, count trials, std::uint64_t seed);

std::string sweep_csv(const std::vector<SweepRow> &rows);
nlohmann::ordered_json sweep_json(const std::vector<SweepRow> &rows);

} // namespace rwl::sbm
