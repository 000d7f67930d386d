#include "dendro/dynamics.hpp"
#include "dendro/errors.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

using namespace dendro;

TEST(Entropy, LogSlopeOfConstantIsExactlyZero) {
    const std::vector<double> v(6, std::log(37.0));
    EXPECT_EQ(log_slope(v, 4), 0.0);
}

TEST(Entropy, LogSlopeOfGeometricSequence) {
    std::vector<double> v;
    for (int n = 3; n <= 9; ++n) v.push_back(n * std::log(2.0) + 1.7);
    EXPECT_NEAR(log_slope(v, 3), std::log(2.0), 1e-12);
}

TEST(Entropy, IsometriesGiveExactlyZero) {
    for (const DendriteMap& f : {identity_map(fixture::star3()), fixture::rotation()}) {
        const auto e = entropy_estimate(f, 0.05, 8);
        EXPECT_EQ(e.estimate, 0.0);
        for (auto s : e.separated) EXPECT_EQ(s, e.separated.front());
    }
}

TEST(Entropy, SeparatedSetsOfIdentityMatchPacking) {
    // On a unit interval with eps = 0.1 the greedy set keeps every point more
    // than 0.1 past the previous pick; the grid has spacing 0.025.
    const auto e = entropy_estimate(identity_map(fixture::unit_path()), 0.1, 3);
    EXPECT_EQ(e.separated.front(), 8);
}

TEST(Entropy, TentGrowsLikeTwoToTheN) {
    // Oracle: the n-step itineraries of the tent map (left/right lap) are all
    // 2^n words, so sep(n, eps) >= c 2^n once 2^-n is above the grid spacing.
    const auto e = entropy_estimate(fixture::tent(), 0.01, 9, 500.0);
    for (int n = 1; n <= 9; ++n) EXPECT_GE(e.separated[n - 1], std::int64_t{1} << (n - 1)) << n;
    EXPECT_NEAR(e.estimate, std::log(2.0), 0.1);
}

TEST(Entropy, TentItineraryOracle) {
    // Direct itinerary count on a fine grid, independent of the estimator.
    for (int n = 1; n <= 10; ++n) {
        std::set<std::uint64_t> words;
        const int m = 1 << 16;
        for (int i = 0; i < m; ++i) {
            double x = (i + 0.5) / m;
            std::uint64_t w = 0;
            for (int j = 0; j < n; ++j) {
                w = (w << 1) | (x > 0.5 ? 1u : 0u);
                x = x <= 0.5 ? 2 * x : 2 - 2 * x;
            }
            words.insert(w);
        }
        EXPECT_EQ(words.size(), std::size_t{1} << n);
    }
}

TEST(Entropy, Validation) {
    const DendriteMap f = fixture::tent();
    EXPECT_THROW(entropy_estimate(f, 0.0, 5), DomainError);
    EXPECT_THROW(entropy_estimate(f, 0.1, 1), DomainError);
    EXPECT_THROW(entropy_estimate(f, 0.1, 5, 2.0), ConfigError);
}
