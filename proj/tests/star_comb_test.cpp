#include <gtest/gtest.h>

#include <random>

#include "halin/star_comb.hpp"
#include "oracles.hpp"

using namespace halin;

namespace {

FiniteGraph graph_of(std::vector<Edge> es) { return FiniteGraph::from_edges({}, es); }

std::vector<VertexId> all_vertices(const FiniteGraph& g) {
    const auto vs = g.vertices();
    return {vs.begin(), vs.end()};
}

}  // namespace

TEST(StarComb, SpiderGivesStar) {
    // centre 0, legs 0-1-2, 0-3-4, 0-5-6, 0-7-8; U = leg ends
    const auto g = graph_of({{0, 1}, {1, 2}, {0, 3}, {3, 4}, {0, 5}, {5, 6}, {0, 7}, {7, 8}});
    const std::vector<VertexId> u{2, 4, 6, 8};
    const auto got = star_or_comb(g, u, 4);
    ASSERT_TRUE(std::holds_alternative<Star>(got));
    const auto& s = std::get<Star>(got);
    EXPECT_EQ(s.center, 0u);
    EXPECT_EQ(s.leaves.size(), 4u);
    EXPECT_TRUE(verify_star(g, s, u, 4).empty());
}

TEST(StarComb, PathGivesCombWithZeroLengthTeeth) {
    const auto g = graph_of({{0, 1}, {1, 2}, {2, 3}, {3, 4}});
    const auto u = all_vertices(g);
    const auto got = star_or_comb(g, u, 5);
    ASSERT_TRUE(std::holds_alternative<Comb>(got));
    const auto& c = std::get<Comb>(got);
    EXPECT_EQ(c.spine, (Path{0, 1, 2, 3, 4}));
    for (const auto& a : c.attachments) EXPECT_EQ(a.size(), 1u);
    EXPECT_TRUE(verify_comb(g, c, u, 5).empty());
}

TEST(StarComb, ExhaustedWhenTooSmall) {
    const auto g = graph_of({{0, 1}, {1, 2}});
    const auto got = star_or_comb(g, std::vector<VertexId>{0, 2}, 3);
    ASSERT_TRUE(std::holds_alternative<Exhausted>(got));
    EXPECT_EQ(std::get<Exhausted>(got).best_comb, 2u);
}

TEST(StarComb, DisconnectedIsDomainError) {
    const auto g = graph_of({{0, 1}, {2, 3}});
    EXPECT_THROW(star_or_comb(g, std::vector<VertexId>{0}, 1), std::domain_error);
    EXPECT_THROW(star_or_comb(graph_of({{0, 1}}), std::vector<VertexId>{0}, 0), std::invalid_argument);
}

TEST(StarComb, CenterLeafCanBeDisabled) {
    // star K_{1,2} with every vertex marked: three leaves only when the centre counts
    const auto g = graph_of({{0, 1}, {0, 2}});
    const auto u = all_vertices(g);
    EXPECT_TRUE(std::holds_alternative<Star>(star_or_comb(g, u, 3)));
    const auto strict = star_or_comb(g, u, 3, StarCombOptions{false});
    ASSERT_TRUE(std::holds_alternative<Comb>(strict));
    EXPECT_TRUE(verify_comb(g, std::get<Comb>(strict), u, 3).empty());
}

TEST(VerifyStar, SpokesSharingAVertexRejected) {
    const auto g = graph_of({{0, 1}, {1, 2}, {1, 3}});
    Star s{0, {2, 3}, {{0, 1, 2}, {0, 1, 3}}};
    const std::vector<VertexId> u{2, 3};
    EXPECT_FALSE(verify_star(g, s, u, 2).empty());
}

TEST(VerifyComb, AttachmentTouchingSpineTwiceRejected) {
    // spine 0-1-2, attachment 0-3-2 meets the spine at both ends
    const auto g = graph_of({{0, 1}, {1, 2}, {0, 3}, {3, 2}, {1, 4}});
    Comb c{{0, 1, 2}, {2, 4}, {{0, 3, 2}, {1, 4}}};
    const std::vector<VertexId> u{2, 4};
    EXPECT_FALSE(verify_comb(g, c, u, 2).empty());
    Comb good{{0, 1, 2}, {2, 4}, {{2}, {1, 4}}};
    EXPECT_TRUE(verify_comb(g, good, u, 2).empty());
}

TEST(StarComb, SoundOnRandomConnectedGraphs) {
    std::mt19937_64 rng(31337);
    int certificates = 0;
    for (int round = 0; round < 1000; ++round) {
        const std::size_t n = 1 + rng() % 20;
        const auto g = oracle::random_connected(rng, n, 0.08);
        auto u = oracle::random_subset(rng, n, 0.4);
        if (u.empty()) u.push_back(rng() % n);
        const std::size_t k = 1 + rng() % 5;
        for (bool centre_leaf : {true, false}) {
            const auto got = star_or_comb(g, u, k, StarCombOptions{centre_leaf});
            if (const auto* s = std::get_if<Star>(&got)) {
                ASSERT_TRUE(verify_star(g, *s, u, k).empty()) << "round " << round;
                if (!centre_leaf) {
                    for (auto leaf : s->leaves) EXPECT_NE(leaf, s->center);
                }
                ++certificates;
            } else if (const auto* c = std::get_if<Comb>(&got)) {
                ASSERT_TRUE(verify_comb(g, *c, u, k).empty()) << "round " << round;
                ++certificates;
            }
        }
    }
    EXPECT_GT(certificates, 500);
}

TEST(StarComb, AgreesWithBruteForceOnTrees) {
    std::mt19937_64 rng(4242);
    for (int round = 0; round < 300; ++round) {
        const std::size_t n = 1 + rng() % 14;
        const auto tree = oracle::random_tree(rng, n);
        auto u = oracle::random_subset(rng, n, 0.5);
        if (u.empty()) u.push_back(rng() % n);
        const std::size_t k = 1 + rng() % 5;
        const bool exists = oracle::tree_has_star(tree, u, k) || oracle::tree_has_comb(tree, u, k);
        const auto got = star_or_comb(tree, u, k);
        EXPECT_EQ(!std::holds_alternative<Exhausted>(got), exists) << "round " << round;
    }
}

TEST(StarComb, Deterministic) {
    std::mt19937_64 rng(8);
    const auto g = oracle::random_connected(rng, 18, 0.1);
    const auto u = oracle::random_subset(rng, 18, 0.5);
    const auto a = star_or_comb(g, u, 3);
    const auto b = star_or_comb(g, u, 3);
    ASSERT_EQ(a.index(), b.index());
    if (const auto* s = std::get_if<Star>(&a)) {
        EXPECT_EQ(s->spokes, std::get<Star>(b).spokes);
    }
    if (const auto* c = std::get_if<Comb>(&a)) {
        EXPECT_EQ(c->attachments, std::get<Comb>(b).attachments);
    }
}
