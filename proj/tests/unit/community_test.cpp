#include <gtest/gtest.h>

#include "../oracles/dense.hpp"
#include "rewirelab/community.hpp"
#include "rewirelab/metrics.hpp"
#include "rewirelab/sbm.hpp"

using namespace rwl;

TEST(Louvain, CliqueIsOneCommunity) {
    auto p = community::louvain(oracle::complete(6), 1);
    EXPECT_EQ(p.num_communities(), 1u);
}

TEST(Louvain, RecoversPlantedBlocks) {
    sbm::Params params;
    params.n = 200;
    params.p = 0.9;
    params.q = 0.05;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto s = sbm::generate(params, seed);
        auto part = community::louvain(s.graph, seed);
        EXPECT_GE(metrics::nmi(part.values(), s.planted.values()), 0.95) << "seed " << seed;
    }
}

TEST(Louvain, DeterministicForSeed) {
    sbm::Params params;
    params.n = 300;
    params.p = 0.1;
    params.q = 0.02;
    auto s = sbm::generate(params, 4);
    EXPECT_EQ(community::louvain(s.graph, 9), community::louvain(s.graph, 9));
}

TEST(Louvain, LevelModularityNonDecreasing) {
    sbm::Params params;
    params.n = 400;
    params.blocks = 4;
    params.p = 0.08;
    params.q = 0.01;
    auto s = sbm::generate(params, 2);
    std::vector<double> levels;
    auto part = community::louvain(s.graph, 3, 1.0, &levels);
    ASSERT_FALSE(levels.empty());
    for (std::size_t i = 1; i < levels.size(); ++i)
        EXPECT_GE(levels[i], levels[i - 1] - 1e-12);
    EXPECT_NEAR(levels.back(), community::modularity(s.graph, part), 1e-12);
}

TEST(Louvain, IsolatedNodesAreSingletons) {
    Graph g(5, {{0, 1}, {1, 2}, {0, 2}});
    auto p = community::louvain(g, 0);
    EXPECT_NE(p[3], p[4]);
    EXPECT_NE(p[3], p[0]);
    EXPECT_EQ(community::louvain(Graph(3, {}), 0).num_communities(), 3u);
}

TEST(Modularity, HandValues) {
    Graph two(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
    EXPECT_NEAR(community::modularity(two, Partition({0, 0, 0, 1, 1, 1})), 0.5, 1e-15);
    EXPECT_NEAR(community::modularity(two, Partition({0, 0, 0, 0, 0, 0})), 0.0, 1e-15);
    EXPECT_EQ(community::modularity(Graph(3, {}), Partition({0, 1, 2})), 0.0);
}

TEST(Modularity, TwoTrianglesSplitIsBestPartition) {
    Graph two(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
    // brute force over all assignments with ids < 6
    double best = -1;
    std::vector<std::uint32_t> a(6, 0);
    for (int code = 0; code < 46656; ++code) {
        int c = code;
        for (auto &x : a) {
            x = c % 6;
            c /= 6;
        }
        best = std::max(best, community::modularity(two, Partition::compacted(a)));
    }
    EXPECT_NEAR(best, 0.5, 1e-12);
    EXPECT_NEAR(community::modularity(two, community::louvain(two, 0)), 0.5, 1e-12);
}
