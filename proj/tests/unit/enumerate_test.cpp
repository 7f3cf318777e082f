#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "shadowblade/weights.hpp"

using namespace shadowblade;
using namespace testing_support;

namespace {

std::vector<oracle::Path> as_paths(const std::vector<AttackVector>& vectors) {
    std::vector<oracle::Path> out;
    for (const auto& v : vectors) out.push_back({v.node_ids, v.edge_ids});
    return out;
}

} // namespace

TEST(Enumerate, RootOnlyGraphIsEmpty) {
    EXPECT_TRUE(enumerate_vectors(new_graph("t", "a.htb")).empty());
}

TEST(Enumerate, ArmageddonPostNmapHasTwoLengthTwoVectors) {
    const auto g = armageddon_post_nmap();
    const auto vectors = enumerate_vectors(g);
    ASSERT_EQ(vectors.size(), 2u);
    for (const auto& v : vectors) {
        EXPECT_EQ(v.length(), 2u);
        EXPECT_EQ(g.node(v.node_ids.back()).kind, NodeKind::Service);
        EXPECT_FALSE(v.score.has_value());
    }
    EXPECT_EQ(g.node(vectors[0].node_ids[1]).label, "22/tcp");
}

TEST(Enumerate, MarkedNodesOverrideLeaves) {
    auto g = armageddon_post_nmap();
    const auto p80 = find_by_label(g, "80/tcp")->id;
    mark_success(g, p80, true);
    const auto vectors = enumerate_vectors(g);
    ASSERT_EQ(vectors.size(), 1u);
    EXPECT_EQ(vectors[0].node_ids, (std::vector<std::string>{g.root().id, p80}));
}

TEST(Enumerate, DiamondYieldsBothPaths) {
    auto g = new_graph("t", "a.htb");
    const auto a = add_custom_node(g, g.root().id, "a");
    const auto b = add_custom_node(g, g.root().id, "b");
    const auto c = add_custom_node(g, a, "c");
    g.add_edge(b, c, "pivot");
    const auto vectors = enumerate_vectors(g);
    ASSERT_EQ(vectors.size(), 2u);
    EXPECT_EQ(vectors[0].node_ids[1], a);
    EXPECT_EQ(vectors[1].node_ids[1], b);
}

TEST(Enumerate, ScoredOnlyWhenFullyWeighted) {
    auto g = armageddon_post_nmap();
    g.set_edge_weight(g.edges()[0].id, 0.5);
    for (const auto& v : enumerate_vectors(g)) EXPECT_FALSE(v.score.has_value());
    apply_weights(g, compute_weights(g));
    for (const auto& v : enumerate_vectors(g)) EXPECT_NEAR(*v.score, 0.30, 1e-12);
}

TEST(Enumerate, ShorterBeforeLongerWhenUnweighted) {
    auto g = new_graph("t", "a.htb");
    const auto z = add_custom_node(g, g.root().id, "z");
    const auto a = add_custom_node(g, g.root().id, "a");
    add_custom_node(g, a, "a2");
    const auto vectors = enumerate_vectors(g);
    ASSERT_EQ(vectors.size(), 2u);
    EXPECT_EQ(vectors[0].node_ids.back(), z);
}

TEST(Enumerate, RandomDagsMatchBruteForceOracle) {
    std::mt19937_64 rng(20260101);
    for (int i = 0; i < 200; ++i) {
        auto g = oracle::random_graph(rng);
        if (i % 2) apply_weights(g, compute_weights(g));
        auto expected = oracle::all_paths(g);
        oracle::sort_documented(g, expected);
        const auto actual = as_paths(enumerate_vectors(g));
        ASSERT_EQ(actual, expected) << "graph #" << i;
    }
}
