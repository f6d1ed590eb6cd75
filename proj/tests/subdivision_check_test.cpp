#include <gtest/gtest.h>

#include <algorithm>

#include "halin/embedding.hpp"
#include "halin/subdivision_check.hpp"

using namespace halin;

namespace {

Embedding identity(HexPrefixSpec spec) {
    Embedding e;
    e.pattern = spec;
    for (std::int64_t i = 0; i < spec.cols; ++i)
        for (std::int64_t j = 0; j < spec.depth; ++j) e.branch[{i, j}] = encode({i, j});
    for (const auto& [a, b] : hex_pattern_edges(spec)) e.edge_paths[PatternEdge::make(a, b)] = {encode(a), encode(b)};
    return e;
}

// subdivided hex prefix: every pattern edge becomes a path of length 2 through a fresh vertex
std::pair<FiniteGraph, Embedding> subdivided(HexPrefixSpec spec) {
    Embedding e;
    e.pattern = spec;
    std::vector<Edge> es;
    VertexId next = 1'000'000;
    for (std::int64_t i = 0; i < spec.cols; ++i)
        for (std::int64_t j = 0; j < spec.depth; ++j) e.branch[{i, j}] = encode({i, j});
    for (const auto& [a, b] : hex_pattern_edges(spec)) {
        const auto mid = next++;
        es.emplace_back(encode(a), mid);
        es.emplace_back(mid, encode(b));
        e.edge_paths[PatternEdge::make(a, b)] = {encode(a), mid, encode(b)};
    }
    std::vector<VertexId> vs;
    for (const auto& [c, v] : e.branch) vs.push_back(v);
    return {FiniteGraph::from_edges(vs, es), e};
}

bool has_kind(const std::vector<Violation>& vs, ViolationKind k) {
    return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) { return v.kind == k; });
}

}  // namespace

TEST(Verify, IdentityEmbeddingIsOk) {
    for (const HexPrefixSpec spec : {HexPrefixSpec{1, 1}, HexPrefixSpec{1, 5}, HexPrefixSpec{3, 8}, HexPrefixSpec{4, 16}})
        EXPECT_TRUE(verify_embedding(hex_prefix(spec), identity(spec)).empty());
}

TEST(Verify, SubdividedIsOk) {
    const auto [host, emb] = subdivided({3, 7});
    EXPECT_TRUE(verify_embedding(host, emb).empty());
}

TEST(Verify, RungsThroughSharedVertex) {
    // host: hex_prefix(3,8) plus a hub adjacent to the ends of rungs (0,0)-(1,0) and (1,1)-(2,1)
    const HexPrefixSpec spec{3, 8};
    const VertexId hub = 999'999;
    auto es = hex_prefix(spec).edges();
    for (Coord c : {Coord{0, 0}, Coord{1, 0}, Coord{1, 1}, Coord{2, 1}}) es.emplace_back(encode(c), hub);
    const auto host = FiniteGraph::from_edges({}, es);
    auto e = identity(spec);
    e.edge_paths[PatternEdge::make({0, 0}, {1, 0})] = {encode({0, 0}), hub, encode({1, 0})};
    e.edge_paths[PatternEdge::make({1, 1}, {2, 1})] = {encode({1, 1}), hub, encode({2, 1})};
    const auto vs = verify_embedding(host, e);
    ASSERT_EQ(vs.size(), 1u);
    EXPECT_EQ(vs[0].kind, ViolationKind::paths_intersect);
}

TEST(Verify, EachKindIsReachable) {
    const HexPrefixSpec spec{2, 4};
    const auto host = hex_prefix(spec);

    auto e = identity(spec);
    e.branch[{1, 1}] = encode({0, 0});
    EXPECT_TRUE(has_kind(verify_embedding(host, e), ViolationKind::branch_not_injective));

    e = identity(spec);
    e.edge_paths[PatternEdge::make({0, 0}, {0, 1})] = {encode({0, 0}), encode({1, 1}), encode({0, 1})};
    EXPECT_TRUE(has_kind(verify_embedding(host, e), ViolationKind::path_not_in_host));

    e = identity(spec);
    e.edge_paths[PatternEdge::make({0, 0}, {0, 1})] = {encode({0, 0})};
    EXPECT_TRUE(has_kind(verify_embedding(host, e), ViolationKind::endpoint_mismatch));

    e = identity(spec);
    e.edge_paths.erase(PatternEdge::make({0, 2}, {1, 2}));
    EXPECT_TRUE(has_kind(verify_embedding(host, e), ViolationKind::pattern_edge_missing));

    e = identity(spec);
    e.edge_paths[PatternEdge::make({0, 0}, {0, 1})] = {encode({0, 0}), encode({1, 0}), encode({1, 1}),
                                                      encode({1, 2}), encode({0, 2}), encode({0, 1})};
    EXPECT_TRUE(has_kind(verify_embedding(host, e), ViolationKind::interior_hits_branch));

    e = identity(spec);
    e.branch.erase({1, 3});
    EXPECT_TRUE(has_kind(verify_embedding(host, e), ViolationKind::branch_missing));

    e = identity(spec);
    e.edge_paths[PatternEdge::make({0, 1}, {1, 1})] = {encode({0, 1}), encode({1, 1})};
    EXPECT_TRUE(has_kind(verify_embedding(host, e), ViolationKind::unexpected_entry));
}

TEST(Verify, StableUnderReversalAndReordering) {
    const auto [host, emb] = subdivided({3, 6});
    Embedding flipped = emb;
    for (auto& [key, p] : flipped.edge_paths) std::reverse(p.begin(), p.end());
    EXPECT_TRUE(verify_embedding(host, flipped).empty());

    // a broken certificate reports the same violations whichever way its paths are listed
    Embedding broken = emb;
    broken.edge_paths.erase(broken.edge_paths.begin());
    Embedding broken_flipped = broken;
    for (auto& [key, p] : broken_flipped.edge_paths) std::reverse(p.begin(), p.end());
    EXPECT_EQ(verify_embedding(host, broken), verify_embedding(host, broken_flipped));
}

TEST(Verify, OutputIsSorted) {
    const HexPrefixSpec spec{3, 6};
    auto e = identity(spec);
    e.edge_paths.erase(PatternEdge::make({2, 5}, {2, 4}));
    e.edge_paths.erase(PatternEdge::make({0, 0}, {0, 1}));
    const auto vs = verify_embedding(hex_prefix(spec), e);
    ASSERT_EQ(vs.size(), 2u);
    EXPECT_EQ(vs[0].at, (Coord{0, 0}));
    EXPECT_EQ(vs[1].at, (Coord{2, 4}));
    EXPECT_EQ(describe(vs[0]), "pattern_edge_missing at (0,0)-(0,1)");
}

TEST(Mutate, DropOnSingleEdgePathGivesEndpointMismatch) {
    const HexPrefixSpec spec{2, 3};
    const auto emb = identity(spec);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Mutation m{};
        const auto bad = mutate_embedding(emb, seed, &m);
        if (m != Mutation::drop_vertex) continue;
        EXPECT_TRUE(has_kind(verify_embedding(hex_prefix(spec), bad), ViolationKind::endpoint_mismatch));
    }
}

TEST(Mutate, DeletePathGivesPatternEdgeMissing) {
    const HexPrefixSpec spec{3, 5};
    const auto emb = identity(spec);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Mutation m{};
        const auto bad = mutate_embedding(emb, seed, &m);
        if (m != Mutation::delete_path) continue;
        EXPECT_TRUE(has_kind(verify_embedding(hex_prefix(spec), bad), ViolationKind::pattern_edge_missing));
    }
}

TEST(Mutate, DeterministicPerSeed) {
    const auto [host, emb] = subdivided({3, 6});
    for (std::uint64_t seed = 0; seed < 50; ++seed) EXPECT_EQ(mutate_embedding(emb, seed), mutate_embedding(emb, seed));
}

TEST(Mutate, NoEdgesIsRejected) { EXPECT_THROW(mutate_embedding(identity({1, 1}), 0), std::invalid_argument); }

TEST(Mutate, EveryKindRejectedAcrossBases) {
    std::vector<std::pair<FiniteGraph, Embedding>> bases;
    for (const HexPrefixSpec spec : {HexPrefixSpec{1, 2}, HexPrefixSpec{2, 3}, HexPrefixSpec{3, 8}, HexPrefixSpec{4, 12}})
        bases.emplace_back(hex_prefix(spec), identity(spec));
    bases.push_back(subdivided({3, 7}));
    bases.push_back(subdivided({2, 9}));
    std::map<Mutation, int> seen;
    for (const auto& [host, emb] : bases) {
        ASSERT_TRUE(verify_embedding(host, emb).empty());
        for (std::uint64_t seed = 0; seed < 400; ++seed) {
            Mutation m{};
            const auto bad = mutate_embedding(emb, seed, &m);
            ++seen[m];
            ASSERT_FALSE(verify_embedding(host, bad).empty()) << "seed " << seed << " kind " << static_cast<int>(m);
        }
    }
    EXPECT_EQ(seen.size(), 4u);
}

TEST(Certificate, RoundTripIsBitExact) {
    const auto [host, emb] = subdivided({3, 6});
    const auto text = store_certificate(emb);
    EXPECT_EQ(text.rfind("hexprefix cols=3 depth=6\nb 0 0 0\n", 0), 0u);
    const auto back = load_certificate(text);
    EXPECT_EQ(back, emb);
    EXPECT_EQ(store_certificate(back), text);
}

TEST(Certificate, ReversedKeyIsNormalised) {
    const auto e = load_certificate("hexprefix cols=2 depth=1\nb 0 0 5\nb 1 0 7\np 1 0 0 0 : 7 6 5\n");
    EXPECT_EQ(e.edge_paths.at(PatternEdge::make({0, 0}, {1, 0})), (Path{5, 6, 7}));
}

TEST(Certificate, ParseErrorsCarryLineNumbers) {
    const std::vector<std::pair<std::string, std::size_t>> cases{
        {"", 1},
        {"hexprefix cols=2\n", 1},
        {"hexprefix cols=2 depth=2\nb 0 0\n", 2},
        {"hexprefix cols=2 depth=2\nb 0 0 1\nb 0 0 2\n", 3},
        {"hexprefix cols=2 depth=2\np 0 0 0 1 1 2\n", 2},
        {"hexprefix cols=2 depth=2\nq 1\n", 2},
    };
    for (const auto& [text, line] : cases) {
        try {
            load_certificate(text);
            ADD_FAILURE() << "accepted: " << text;
        } catch (const ParseError& e) {
            EXPECT_EQ(e.line(), line) << text;
        }
    }
}
