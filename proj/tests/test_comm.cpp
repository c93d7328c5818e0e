#include <ensbox/boxgen.hpp>
#include <ensbox/comm.hpp>
#include <ensbox/relabeling.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

using namespace ensbox;

namespace {

// Every (alice output map, message map, Bob table) triple, without any
// deduplication, turned into behaviors.
std::set<Behavior> brute_force_strategies(const Scenario& s, int d) {
    std::set<Behavior> out;
    auto counter = [](std::vector<int>& digits, int base) {
        for (std::size_t i = digits.size(); i-- > 0;) {
            if (++digits[i] < base)
                return true;
            digits[i] = 0;
        }
        return false;
    };
    std::vector<int> alice(s.X, 0);
    do {
        std::vector<int> msg(s.X, 0);
        do {
            std::vector<int> bob(static_cast<std::size_t>(s.Y) * d, 0);
            do {
                CommStrategy c{s, d, alice, msg, {}};
                for (int y = 0; y < s.Y; ++y)
                    c.bob_out.emplace_back(bob.begin() + y * d, bob.begin() + (y + 1) * d);
                out.insert(strategy_behavior(c));
            } while (counter(bob, s.B));
        } while (counter(msg, d));
    } while (counter(alice, s.A));
    return out;
}

std::set<Behavior> as_set(const std::vector<Behavior>& v) { return {v.begin(), v.end()}; }

} // namespace

TEST(Strategies, MatchBruteForce) {
    for (Scenario s : {Scenario(2, 2, 2, 2), Scenario(3, 3, 2, 2), Scenario(2, 3, 3, 2)})
        for (int d = 1; d <= 2; ++d) {
            auto list = strategy_behaviors(s, d);
            auto set = as_set(list);
            EXPECT_EQ(set.size(), list.size()) << "duplicates in " << s.to_string();
            EXPECT_EQ(set, brute_force_strategies(s, d)) << s.to_string() << " d=" << d;
            EXPECT_EQ(double(list.size()), strategy_behavior_count(s, d));
        }
}

TEST(Strategies, OneValueMessagesAreTheLocalPolytope) {
    for (Scenario s : {Scenario(2, 2, 2, 2), Scenario(3, 2, 2, 3)})
        EXPECT_EQ(as_set(strategy_behaviors(s, 1)), as_set(local_deterministic_boxes(s)));
}

TEST(Strategies, NestedInAlphabetSize) {
    Scenario s(3, 3, 2, 2);
    auto one = as_set(strategy_behaviors(s, 1));
    auto two = as_set(strategy_behaviors(s, 2));
    auto three = as_set(strategy_behaviors(s, 3));
    EXPECT_TRUE(std::includes(two.begin(), two.end(), one.begin(), one.end()));
    EXPECT_TRUE(std::includes(three.begin(), three.end(), two.begin(), two.end()));
    EXPECT_LT(one.size(), two.size());
}

TEST(Strategies, GuardsAndChecks) {
    CommOptions opt;
    opt.max_strategies = 10;
    EXPECT_THROW(enumerate_strategies({2, 2, 2, 2}, 2, opt), GuardExceeded);
    EXPECT_THROW(enumerate_strategies({2, 2, 2, 2}, 0), DomainError);
    CommStrategy bad{Scenario(2, 2, 2, 2), 2, {0, 0}, {0, 2}, {{0, 0}, {0, 0}}};
    EXPECT_THROW(bad.check(), DomainError);
    opt = {};
    opt.max_alice_strategies = 3;
    EXPECT_THROW(lhvd_value(build_F(3), {3, 3, 2, 2}, 2, opt), GuardExceeded);
    EXPECT_THROW(lhvd_value(build_F(3), {2, 2, 2, 2}, 2), ShapeError);
}

TEST(LhvdValue, AgreesWithVertexMaximum) {
    std::mt19937_64 rng(3);
    for (Scenario s : {Scenario(2, 2, 2, 2), Scenario(3, 3, 2, 2), Scenario(2, 3, 3, 2)})
        for (int d = 1; d <= 3; ++d)
            for (int t = 0; t < 5; ++t) {
                BellFunctional f(s);
                for (std::size_t i = 0; i < f.size(); ++i)
                    f[i] = frac(long(rng() % 11) - 5, long(1 + rng() % 3));
                auto vertices = strategy_behaviors(s, d);
                EXPECT_EQ(lhvd_value(f, s, d), maximize_functional(f, vertices).first)
                    << s.to_string() << " d=" << d;
            }
}

TEST(DiagonalFunctional, ClosedFormBound) {
    for (int m = 2; m <= 5; ++m) {
        Scenario s(m, m, 2, 2);
        auto f = build_F(m);
        EXPECT_EQ(f.value(diagonal_box(m)), m * m);
        for (int d = 1; d <= m; ++d)
            EXPECT_EQ(lhvd_value(f, s, d), F_bound(m, d)) << m << " " << d;
    }
}

TEST(DiagonalBox, ValidAndPrForTwoInputs) {
    for (int m = 2; m <= 5; ++m)
        EXPECT_TRUE(validate(diagonal_box(m)).ok());
    EXPECT_EQ(canonical_form(diagonal_box(2)), canonical_form(pr_box()));
    EXPECT_THROW(diagonal_box(1), DomainError);
    EXPECT_THROW(build_F(1), DomainError);
}

TEST(MinDit, PrNeedsOneBit) {
    auto r = min_dit(pr_box(), 3);
    ASSERT_TRUE(r.min_dit.has_value());
    EXPECT_EQ(*r.min_dit, 2);
    ASSERT_EQ(r.per_d.size(), 2u);
    auto outside = r.last_outside();
    ASSERT_NE(outside, nullptr);
    ASSERT_TRUE(outside->functional.has_value());
    EXPECT_TRUE(verify_membership(pr_box(), strategy_behaviors(pr_box().scenario(), 1), *outside));
    EXPECT_TRUE(verify_membership(pr_box(), strategy_behaviors(pr_box().scenario(), 2), r.per_d[1]));
}

TEST(MinDit, LocalBoxNeedsNoCommunication) {
    auto det = local_deterministic_boxes({2, 2, 2, 2});
    auto r = min_dit(mix({{frac(1, 3), det[1]}, {frac(2, 3), det[6]}}), 2);
    ASSERT_TRUE(r.min_dit.has_value());
    EXPECT_EQ(*r.min_dit, 1);
    EXPECT_EQ(r.last_outside(), nullptr);
}

TEST(CommVisibility, PrAgainstLocal) {
    auto r = comm_visibility_witness(pr_box(), 1);
    EXPECT_EQ(r.visibility, frac(1, 2));
    EXPECT_TRUE(verify_visibility(pr_box(), strategy_behaviors(pr_box().scenario(), 1), r));
    EXPECT_EQ(comm_visibility(pr_box(), 2), 1);
}
