#include <gtest/gtest.h>

#include <unordered_set>

#include "halin/rays_ends.hpp"

using namespace halin;

namespace {

Ray column_ray(std::int64_t i, int radius) {
    // column i from its lowest vertex on the distance-(i+j) branch up to the sphere
    Ray r;
    r.frontier = true;
    for (std::int64_t j = std::max<std::int64_t>(0, i - 1); i + j <= radius; ++j) r.vertices.push_back(encode({i, j}));
    return r;
}

Ray axis_ray(bool horizontal, int radius) {
    Ray r;
    r.frontier = true;
    for (std::int64_t s = 0; s <= radius; ++s) r.vertices.push_back(encode(horizontal ? Coord{s, 0} : Coord{0, s}));
    return r;
}

Ray leftmost(VertexId start, int radius) {
    Ray r;
    r.frontier = true;
    VertexId v = start;
    int depth = 0;
    for (VertexId x = v; x > 0; x = (x - 1) / 2) ++depth;
    for (; depth <= radius; ++depth, v = 2 * v + 1) r.vertices.push_back(v);
    return r;
}

void expect_disjoint_frontier(const Truncation& t, const std::vector<Ray>& rays) {
    std::unordered_set<VertexId> seen;
    for (const auto& r : rays) {
        EXPECT_TRUE(r.frontier);
        EXPECT_TRUE(is_path_in(t.graph, r.vertices));
        EXPECT_EQ(t.distance_of(r.vertices.back()), t.radius);
        for (auto v : r.vertices) EXPECT_TRUE(seen.insert(v).second);
    }
}

}  // namespace

TEST(Ray, PositionIsIndexOrder) {
    const Ray r{{5, 9, 2}, false};
    EXPECT_EQ(r.position(9), 1u);
    EXPECT_FALSE(r.position(4).has_value());
    EXPECT_EQ(position_index(r).at(2), 2u);
}

TEST(FindDisjointRays, HexThree) {
    const auto g = LazyGraph::hex_quarter_grid();
    const auto got = find_disjoint_rays(g, 0, 3, 16);
    ASSERT_TRUE(std::holds_alternative<std::vector<Ray>>(got));
    const auto& rays = std::get<std::vector<Ray>>(got);
    EXPECT_EQ(rays.size(), 3u);
    expect_disjoint_frontier(truncate(g, 0, 16), rays);
}

TEST(FindDisjointRays, LadderStopsAtTwo) {
    const auto got = find_disjoint_rays(LazyGraph::ladder(), 0, 3, 16);
    ASSERT_TRUE(std::holds_alternative<RaysNotFound>(got));
    const auto& nf = std::get<RaysNotFound>(got);
    EXPECT_EQ(nf.best, 2u);
    EXPECT_EQ(nf.separator_size, 2u);
    EXPECT_NE(nf.diagnostic.find("separator of size 2"), std::string::npos);
}

TEST(FindDisjointRays, SingleEdgeRay) {
    for (const auto& g : {LazyGraph::grid2d(), LazyGraph::binary_tree(), LazyGraph::ladder()}) {
        const auto got = find_disjoint_rays(g, g.origin(), 1, 1);
        ASSERT_TRUE(std::holds_alternative<std::vector<Ray>>(got));
        const auto& rays = std::get<std::vector<Ray>>(got);
        ASSERT_EQ(rays.size(), 1u);
        EXPECT_EQ(rays[0].vertices.size(), 2u);
        EXPECT_EQ(rays[0].vertices.front(), g.origin());
    }
}

TEST(FindDisjointRays, BadArgumentsRejected) {
    EXPECT_THROW(find_disjoint_rays(LazyGraph::grid2d(), 0, 0, 4), std::invalid_argument);
    EXPECT_THROW(find_disjoint_rays(LazyGraph::grid2d(), 0, 5, 4), std::invalid_argument);
}

TEST(FindDisjointRays, CountEqualsMengerValue) {
    // the system size is the Menger value from the chosen inner ball to the sphere
    for (const auto& g : {LazyGraph::hex_quarter_grid(), LazyGraph::grid2d(), LazyGraph::ladder()}) {
        const auto t = truncate(g, g.origin(), 20);
        for (std::size_t want : {1u, 2u, 4u, 6u}) {
            const auto sys = frontier_system(t, want);
            const auto inner = t.ball_vertices(sys.inner_radius);
            const auto value = menger(t.graph, inner, t.sphere(20), {}, EndpointPolicy::exclusive).paths.size();
            EXPECT_EQ(sys.rays.size(), value);
            EXPECT_EQ(sys.separator.size(), value);
        }
    }
}

TEST(SameEnd, Grid2dAxes) {
    const auto g = LazyGraph::grid2d();
    EXPECT_TRUE(same_end(g, 0, axis_ray(true, 24), axis_ray(false, 24), 3, 24));
}

TEST(SameEnd, BinaryTreeSubtreesDiffer) {
    const auto g = LazyGraph::binary_tree();
    EXPECT_FALSE(same_end(g, 0, leftmost(1, 16), leftmost(2, 16), 0, 16));
}

TEST(SameEnd, ReflexiveAndSymmetric) {
    const auto t = truncate(LazyGraph::hex_quarter_grid(), 0, 24);
    std::vector<Ray> rays;
    for (std::int64_t i = 0; i < 5; ++i) rays.push_back(column_ray(i, 24));
    for (int r = 0; r < 24; r += 5)
        for (const auto& a : rays) {
            EXPECT_TRUE(same_end(t, a, a, r));
            for (const auto& b : rays) EXPECT_EQ(same_end(t, a, b, r), same_end(t, b, a, r));
        }
}

TEST(SameEnd, ClassesRefineAsRadiusGrows) {
    const auto t = truncate(LazyGraph::binary_tree(), 0, 10);
    std::vector<Ray> rays;
    for (VertexId start : {3u, 4u, 5u, 6u, 15u, 22u}) rays.push_back(leftmost(start, 10));
    for (int r = 1; r < 10; ++r)
        for (const auto& a : rays)
            for (const auto& b : rays)
                if (same_end(t, a, b, r)) {
                    EXPECT_TRUE(same_end(t, a, b, r - 1));
                }
}

TEST(SameEnd, NonFrontierIsDomainError) {
    const auto t = truncate(LazyGraph::grid2d(), 0, 6);
    Ray shortray{{0, encode({1, 0})}, true};
    EXPECT_THROW(same_end(t, shortray, axis_ray(true, 6), 1), std::domain_error);
    EXPECT_THROW(same_end(t, axis_ray(true, 6), axis_ray(true, 6), 6), std::domain_error);
}

TEST(ThickEnd, HexFourRays) {
    const auto g = LazyGraph::hex_quarter_grid();
    const auto got = thick_end_witness(g, 0, 4, 4, 32);
    ASSERT_TRUE(std::holds_alternative<EndWitness>(got));
    const auto& w = std::get<EndWitness>(got);
    EXPECT_EQ(w.rays.size(), 4u);
    EXPECT_TRUE(validate_witness(truncate(g, 0, 32), w).empty());
}

TEST(ThickEnd, BinaryTreeHasNone) {
    const auto got = thick_end_witness(LazyGraph::binary_tree(), 0, 2, 2, 32);
    ASSERT_TRUE(std::holds_alternative<RaysNotFound>(got));
    const auto& nf = std::get<RaysNotFound>(got);
    EXPECT_EQ(nf.best, 1u);
    EXPECT_NE(nf.diagnostic.find("clamped"), std::string::npos);
}

TEST(ThickEnd, LadderHasDegreeTwo) {
    const auto got = thick_end_witness(LazyGraph::ladder(), 0, 2, 3, 16);
    ASSERT_TRUE(std::holds_alternative<EndWitness>(got));
    EXPECT_FALSE(std::holds_alternative<EndWitness>(thick_end_witness(LazyGraph::ladder(), 0, 3, 3, 16)));
}

TEST(ThickEnd, BadArgumentsRejected) {
    EXPECT_THROW(thick_end_witness(LazyGraph::grid2d(), 0, 1, 2, 8), std::invalid_argument);
    EXPECT_THROW(thick_end_witness(LazyGraph::grid2d(), 0, 2, 8, 8), std::invalid_argument);
}

TEST(ThickEnd, EveryWitnessRevalidates) {
    for (const auto& g : {LazyGraph::hex_quarter_grid(), LazyGraph::grid2d(), LazyGraph::ladder()})
        for (std::size_t k = 2; k <= 5; ++k)
            for (int r : {1, 3, 5}) {
                const auto t = truncate(g, g.origin(), 28);
                const auto got = thick_end_witness(t, k, r);
                if (const auto* w = std::get_if<EndWitness>(&got)) {
                    EXPECT_EQ(w->rays.size(), k);
                    EXPECT_TRUE(validate_witness(t, *w).empty()) << g.name() << " k=" << k << " r=" << r;
                }
            }
}

TEST(Witness, ValidateCatchesBrokenWitness) {
    const auto t = truncate(LazyGraph::hex_quarter_grid(), 0, 16);
    EndWitness w{0, {column_ray(0, 16), column_ray(0, 16)}, 16, 2};
    EXPECT_FALSE(validate_witness(t, w).empty());
    w.rays[1] = column_ray(1, 16);
    EXPECT_TRUE(validate_witness(t, w).empty());
    w.rays[1].vertices.pop_back();
    EXPECT_FALSE(validate_witness(t, w).empty());
}

TEST(Witness, TextRoundTrip) {
    const auto g = LazyGraph::hex_quarter_grid();
    const auto w = std::get<EndWitness>(thick_end_witness(g, 0, 3, 2, 20));
    const auto text = store_witness(w);
    EXPECT_EQ(text.rfind("witness k=3 r=2 R=20\n", 0), 0u);
    const auto back = load_witness(text, 0);
    EXPECT_EQ(back.rays, w.rays);
    EXPECT_EQ(store_witness(back), text);
    EXPECT_THROW(load_witness("witness k=2 r=1 R=4\n1 2 3\n", 0), ParseError);
    EXPECT_THROW(load_witness("wit k=1\n", 0), ParseError);
}
