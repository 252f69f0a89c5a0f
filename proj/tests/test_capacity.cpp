#include "sandnet/capacity.hpp"
#include "sandnet/error.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace sandnet;
using testing_support::Q;
using testing_support::Qs;

TEST(Capacities, TriangleSharesEquallyForEveryP) {
    for (int P = -2; P <= 2; ++P) {
        EXPECT_EQ(capacities(testing_support::triangle(), Rational(9), P), Qs({"3", "3", "3"}));
    }
}

TEST(Capacities, StarSquared) {
    EXPECT_EQ(capacities(star_graph(3), Rational(24), 2), Qs({"18", "2", "2", "2"}));
}

TEST(Capacities, StarInverse) {
    // sum deg^-1 = 1/3 + 3 = 10/3, so k_center = 10 * (1/3) / (10/3) = 1 and k_leaf = 10 / (10/3) = 3
    Rational sum = Rational(1, 3) + 3;
    Rational centre = Rational(10) * Rational(1, 3) / sum;
    Rational leaf = Rational(10) / sum;
    EXPECT_EQ(capacities(star_graph(3), Rational(10), -1), (std::vector<Rational>{centre, leaf, leaf, leaf}));
    EXPECT_EQ(centre, 1);
    EXPECT_EQ(leaf, 3);
}

TEST(Capacities, RejectsIsolatedNodesAndNonPositiveK) {
    Graph g(3);
    g.add_edge(0, 1);
    EXPECT_THROW(capacities(g, Rational(10), 1), ValidationError);
    EXPECT_THROW(capacities(path_graph(3), Rational(0), 1), ValidationError);
    EXPECT_THROW(capacities(path_graph(3), Rational(-4), 1), ValidationError);
}

TEST(Capacities, RealExponentAgreesWithExact) {
    Graph g = random_connected_graph(30, 0.1, 4);
    for (int P = -2; P <= 2; ++P) {
        auto exact = capacities(g, Rational(880), P);
        auto real = capacities_real(g, 880.0, P);
        for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(real[i], to_double(exact[i]), 1e-9);
    }
}

TEST(MinKBound, PrintedFormula) {
    EXPECT_EQ(paper_min_K(testing_support::triangle(), 1, Q("0.1")), Q("6.3"));
    EXPECT_EQ(paper_min_K(star_graph(3), 0, Q("0.1")), Q("4.4"));
    EXPECT_EQ(paper_min_K(star_graph(3), -1, Q("0.1")), Q("11/9"));
}

TEST(ValidateCapacities, StarSquaredPasses) {
    auto k = capacities(star_graph(3), Rational(24), 2);
    auto report = validate_capacities(star_graph(3), k, Q("0.1"));
    EXPECT_TRUE(report.ok());
    EXPECT_DOUBLE_EQ(report.nodes[0].required, 3.1);
    EXPECT_DOUBLE_EQ(report.nodes[1].required, 1.1);
}

TEST(ValidateCapacities, StarInverseFailsAtCentre) {
    auto k = capacities(star_graph(3), Rational(10), -1);
    auto report = validate_capacities(star_graph(3), k, Q("0.1"));
    EXPECT_FALSE(report.ok());
    EXPECT_EQ(report.violations(), std::vector<NodeId>{0});
    EXPECT_DOUBLE_EQ(report.nodes[0].capacity, 1.0);
}

TEST(ValidateCapacities, PrintedBoundIsNotSufficient) {
    Graph star = star_graph(3);
    Rational K = paper_min_K(star, -1, Q("0.1"));
    auto k = capacities(star, K, -1);
    EXPECT_EQ(k[0], Rational(11, 90));
    auto report = validate_capacities(star, k, Q("0.1"));
    EXPECT_FALSE(report.ok());
    EXPECT_FALSE(report.nodes[0].ok);  // 0.1222 < 3.1; the leaves (11/30 < 1.1) fail as well
}

TEST(MinimumFeasibleK, IsTight) {
    const Rational g01 = Q("0.1");
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        Graph g = random_connected_graph(12, 0.25, seed);
        for (int P = -2; P <= 2; ++P) {
            const Rational K = minimum_feasible_K(g, P, g01);
            EXPECT_TRUE(validate_capacities(g, capacities(g, K, P), g01).ok()) << seed << " P=" << P;
            const Rational below = K * Rational(999999, 1000000);
            EXPECT_FALSE(validate_capacities(g, capacities(g, below, P), g01).ok()) << seed << " P=" << P;
        }
    }
}

TEST(MinimumFeasibleK, StarInverse) {
    // centre needs (3 + 0.1) * (1/3 + 3) / (1/3) = 31
    EXPECT_EQ(minimum_feasible_K(star_graph(3), -1, Q("0.1")), Rational(31));
    EXPECT_GT(minimum_feasible_K(star_graph(3), -1, Q("0.1")), paper_min_K(star_graph(3), -1, Q("0.1")));
}

TEST(ValidateCapacities, BoundaryIsInclusive) {
    // k exactly deg + g passes
    Graph p = path_graph(2);
    std::vector<Rational> k{Q("1.1"), Q("1.1")};
    EXPECT_TRUE(validate_capacities(p, k, Q("0.1")).ok());
    k[1] = Q("1.0999");
    EXPECT_FALSE(validate_capacities(p, k, Q("0.1")).ok());
}

class CapacityProperty : public ::testing::TestWithParam<int> {};

TEST_P(CapacityProperty, SumUniformityAndMonotonicity) {
    const int P = GetParam();
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Graph g = random_connected_graph(2 + seed % 30, 0.15, seed * 31 + 7);
        const Rational K = Rational(880);
        auto k = capacities(g, K, P);
        Rational sum = 0;
        for (const auto& v : k) sum += v;
        ASSERT_EQ(sum, K);
        for (NodeId i = 0; i < g.size(); ++i) {
            for (NodeId j = 0; j < g.size(); ++j) {
                auto di = g.degree(i);
                auto dj = g.degree(j);
                if (P == 0 || di == dj) {
                    ASSERT_EQ(k[i], k[j]);
                } else if ((di < dj) == (P > 0)) {
                    ASSERT_LT(k[i], k[j]);
                } else {
                    ASSERT_GT(k[i], k[j]);
                }
            }
        }
    }
}

INSTANTIATE_TEST_SUITE_P(Exponents, CapacityProperty, ::testing::Values(-2, -1, 0, 1, 2, 3));
