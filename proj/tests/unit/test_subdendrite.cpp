#include "dendro/errors.hpp"
#include "dendro/subdendrite.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace dendro;

namespace {

// Random connected subset: hull of a few random points.
Subdendrite random_subtree(const Dendrite& X, std::mt19937_64& rng, std::vector<DPoint>* seeds = nullptr) {
    std::vector<DPoint> pts;
    const int k = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < k; ++i) pts.push_back(random_point(X, rng));
    if (seeds) *seeds = pts;
    return convex_hull(X, pts);
}

} // namespace

TEST(Subdendrite, WholeAndSingleton) {
    const auto X = fixture::star3();
    const Subdendrite W = whole(*X);
    EXPECT_EQ(W.vertices.size(), 4u);
    EXPECT_EQ(W.intervals.size(), 3u);
    EXPECT_DOUBLE_EQ(length(*X, W), 3.0);
    const Subdendrite S = singleton(*X, X->point(1, 0.5));
    EXPECT_EQ(S.intervals.size(), 1u);
    EXPECT_DOUBLE_EQ(length(*X, S), 0.0);
    EXPECT_TRUE(contains(*X, S, X->point(1, 0.5)));
    EXPECT_FALSE(contains(*X, S, X->point(1, 0.6)));
}

TEST(Subdendrite, ArcOnStar) {
    const auto X = fixture::star3();
    const Arc a = arc(*X, DPoint::at_vertex(1), DPoint::at_vertex(2));
    EXPECT_DOUBLE_EQ(a.length, 2.0);
    EXPECT_TRUE(contains(*X, a.set, DPoint::at_vertex(0)));
    EXPECT_FALSE(contains(*X, a.set, X->point(2, 0.5)));
    EXPECT_EQ(endpoints(*X, a.set).size(), 2u);
}

TEST(Subdendrite, FirstPointMapOnStar) {
    const auto X = fixture::star3();
    const Subdendrite Y = arc(*X, DPoint::at_vertex(1), DPoint::at_vertex(2)).set;
    EXPECT_EQ(first_point_map(*X, Y, X->point(2, 0.5)), DPoint::at_vertex(0));
    EXPECT_EQ(first_point_map(*X, Y, DPoint::at_vertex(3)), DPoint::at_vertex(0));
    const DPoint inside = X->point(0, 0.3);
    EXPECT_EQ(first_point_map(*X, Y, inside), inside);
    EXPECT_DOUBLE_EQ(distance_to(*X, Y, DPoint::at_vertex(3)), 1.0);
    EXPECT_THROW(first_point_map(*X, Subdendrite{}, inside), DomainError);
}

TEST(Subdendrite, HullOfLeavesIsWholeStar) {
    const auto X = fixture::star3();
    const std::vector<DPoint> leaves{DPoint::at_vertex(1), DPoint::at_vertex(2), DPoint::at_vertex(3)};
    EXPECT_TRUE(is_subset(*X, whole(*X), convex_hull(*X, leaves)));
    EXPECT_EQ(order_in(*X, convex_hull(*X, leaves), DPoint::at_vertex(0)), 3);
}

TEST(Subdendrite, ComponentsMinusHub) {
    const auto X = fixture::star3();
    const auto comps = components_minus(*X, singleton(*X, DPoint::at_vertex(0)));
    ASSERT_EQ(comps.size(), 3u);
    for (const auto& c : comps) {
        EXPECT_EQ(c.attachment, DPoint::at_vertex(0));
        EXPECT_DOUBLE_EQ(length(*X, c.closure), 1.0);
    }
}

TEST(Subdendrite, ComponentsWithinAmbientSet) {
    const auto X = fixture::star3();
    const Subdendrite within = SubdendriteBuilder(*X).add_interval(0, 0.0, 0.5).add_edge(1).build();
    const auto comps = components_minus(*X, singleton(*X, DPoint::at_vertex(0)), &within);
    ASSERT_EQ(comps.size(), 2u);
    double total = 0.0;
    for (const auto& c : comps) total += length(*X, c.closure);
    EXPECT_DOUBLE_EQ(total, 1.5);
}

TEST(Subdendrite, IntersectionAndGap) {
    const auto X = fixture::star3();
    const Subdendrite A = arc(*X, DPoint::at_vertex(1), DPoint::at_vertex(2)).set;
    const Subdendrite B = arc(*X, DPoint::at_vertex(0), DPoint::at_vertex(3)).set;
    const Subdendrite I = intersect(*X, A, B);
    EXPECT_DOUBLE_EQ(length(*X, I), 0.0);
    EXPECT_TRUE(contains(*X, I, DPoint::at_vertex(0)));
    EXPECT_DOUBLE_EQ(gap(*X, A, B), 0.0);
    const Subdendrite C = SubdendriteBuilder(*X).add_interval(2, 0.5, 1.0).build();
    EXPECT_DOUBLE_EQ(gap(*X, A, C), 0.5);
}

TEST(SubdendriteProperty, FirstPointMapIsRetraction) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 300; ++trial) {
        const Dendrite X = random_dendrite(2 + trial % 20, trial);
        const Subdendrite Y = random_subtree(X, rng);
        const DPoint x = random_point(X, rng);
        const DPoint r = first_point_map(X, Y, x);
        EXPECT_TRUE(contains(X, Y, r));
        EXPECT_TRUE(X.same_point(first_point_map(X, Y, r), r));
        // r lies on every arc from x to Y: check against the nodes of Y.
        for (const DPoint& y : nodes(X, Y)) {
            EXPECT_NEAR(X.distance(x, r) + X.distance(r, y), X.distance(x, y), 1e-9);
        }
    }
}

TEST(SubdendriteProperty, HullIsOrderIndependentAndTight) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        const Dendrite X = random_dendrite(2 + trial % 25, 500 + trial);
        std::vector<DPoint> F;
        const int k = 1 + static_cast<int>(rng() % 5);
        for (int i = 0; i < k; ++i) F.push_back(random_point(X, rng));
        const Subdendrite H = convex_hull(X, F);
        for (std::size_t a = 0; a < F.size(); ++a) {
            const Subdendrite Ha = convex_hull_from(X, F, a);
            EXPECT_TRUE(is_subset(X, H, Ha) && is_subset(X, Ha, H));
        }
        // Union of pairwise arcs, built independently.
        SubdendriteBuilder b(X);
        for (const DPoint& p : F) {
            for (const DPoint& q : F) b.add_arc(X.path(p, q));
        }
        const Subdendrite U = b.build();
        EXPECT_TRUE(is_subset(X, H, U) && is_subset(X, U, H));
        for (const DPoint& e : endpoints(X, H)) {
            EXPECT_TRUE(std::any_of(F.begin(), F.end(), [&](const DPoint& p) { return X.same_point(p, e); }));
        }
    }
}

TEST(SubdendriteProperty, DiameterMatchesNodePairs) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const Dendrite X = random_dendrite(2 + trial % 20, 900 + trial);
        const Subdendrite Y = random_subtree(X, rng);
        const auto ns = nodes(X, Y);
        double best = 0.0;
        for (const DPoint& a : ns) {
            for (const DPoint& b : ns) best = std::max(best, X.distance(a, b));
        }
        EXPECT_NEAR(diameter(X, Y), best, 1e-12);
    }
}

TEST(SubdendriteProperty, ComponentsPartitionTheComplement) {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 100; ++trial) {
        const Dendrite X = random_dendrite(2 + trial % 20, 300 + trial);
        const Subdendrite Y = random_subtree(X, rng);
        const auto comps = components_minus(X, Y);
        double total = length(X, Y);
        for (const auto& c : comps) {
            total += length(X, c.closure);
            EXPECT_TRUE(contains(X, Y, c.attachment));
            EXPECT_DOUBLE_EQ(length(X, intersect(X, c.closure, Y)), 0.0);
        }
        EXPECT_NEAR(total, X.total_length(), 1e-9);
        // Each sample point outside Y lies in exactly one component.
        for (int k = 0; k < 20; ++k) {
            const DPoint p = random_point(X, rng);
            if (distance_to(X, Y, p) < 1e-9) continue;
            int hits = 0;
            for (const auto& c : comps) hits += contains(X, c.closure, p) ? 1 : 0;
            EXPECT_EQ(hits, 1);
        }
    }
}

TEST(SubdendriteProperty, GridSpacing) {
    const Dendrite X = random_dendrite(15, 4);
    const auto g = grid(X, whole(X), 0.05);
    for (int e = 0; e < X.edge_count(); ++e) {
        std::vector<double> ts;
        for (const DPoint& p : g) {
            if (p.edge == e) ts.push_back(p.t);
        }
        ts.push_back(0.0);
        ts.push_back(1.0);
        std::sort(ts.begin(), ts.end());
        for (std::size_t i = 1; i < ts.size(); ++i) EXPECT_LE((ts[i] - ts[i - 1]) * X.edge(e).length, 0.05 + 1e-12);
    }
}
