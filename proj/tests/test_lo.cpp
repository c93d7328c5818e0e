#include <ensbox/boxgen.hpp>
#include <ensbox/lo.hpp>
#include <ensbox/relabeling.hpp>

#include "lo_cliques.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace ensbox;

namespace {

CopyEvent relabel(const CopyEvent& e, const Relabeling& r) {
    CopyEvent u = e;
    if (r.swap_parties)
        u = {e.b, e.a, e.y, e.x};
    return {r.alice_output_perms[u.x][u.a], r.bob_output_perms[u.y][u.b], r.alice_input_perm[u.x],
            r.bob_input_perm[u.y]};
}

JointEvent relabel(const JointEvent& e, const Relabeling& r) {
    JointEvent out;
    for (const auto& c : e.copies)
        out.copies.push_back(relabel(c, r));
    return out;
}

std::vector<JointEvent> parse_all(const PublishedClique& pc, const Scenario& s) {
    std::vector<JointEvent> out;
    for (const auto& ev : pc.events)
        out.push_back(parse_event(ev, s, 2));
    return out;
}

JointEvent weighted(const Rational& w) {
    JointEvent e;
    e.copies = {CopyEvent{}, CopyEvent{}};
    e.weight = w;
    return e;
}

} // namespace

TEST(ExclusivityGraph, PrSingleCopy) {
    auto g = build_exclusivity_graph(pr_box(), 1);
    ASSERT_EQ(g.size(), 8u);
    for (const auto& v : g.vertices())
        EXPECT_EQ(v.weight, frac(1, 2));
    for (std::size_t i = 0; i < g.size(); ++i)
        EXPECT_FALSE(g.adjacent(i, i));
}

TEST(ExclusivityGraph, TwoCopyWeightClasses) {
    auto g1 = build_exclusivity_graph(box1(), 2);
    for (const auto& v : g1.vertices())
        EXPECT_TRUE(v.weight == frac(1, 4) || v.weight == frac(1, 16) || v.weight == frac(1, 8));
    auto g2 = build_exclusivity_graph(box2(), 2);
    for (const auto& v : g2.vertices())
        EXPECT_EQ(v.weight, frac(1, 9));
}

TEST(ExclusivityGraph, JointWeightIsProductOfCopies) {
    std::mt19937_64 rng(5);
    for (const char* name : {"box1", "box3", "p_ms"}) {
        auto p = *named_fixture(name);
        auto g = build_exclusivity_graph(p, 2);
        for (int t = 0; t < 50; ++t) {
            const auto& e = g.vertex(rng() % g.size());
            const auto& c0 = e.copies[0];
            const auto& c1 = e.copies[1];
            EXPECT_EQ(e.weight, p(c0.x, c0.y, c0.a, c0.b) * p(c1.x, c1.y, c1.a, c1.b));
            EXPECT_EQ(e.weight, event_weight(p, e));
        }
    }
}

TEST(ExclusivityGraph, OrthogonalitySymmetricAndRelabelingInvariant) {
    auto p = box1();
    auto g = build_exclusivity_graph(p, 2);
    std::mt19937_64 rng(9);
    for (int t = 0; t < 300; ++t) {
        const auto& e = g.vertex(rng() % g.size());
        const auto& f = g.vertex(rng() % g.size());
        EXPECT_EQ(locally_orthogonal(e, f), locally_orthogonal(f, e));
        EXPECT_FALSE(locally_orthogonal(e, e));
        auto r = random_relabeling(p.scenario(), rng);
        EXPECT_EQ(locally_orthogonal(e, f), locally_orthogonal(relabel(e, r), relabel(f, r)));
    }
}

TEST(ExclusivityGraph, Guards) {
    LOOptions opt;
    opt.max_graph_vertices = 100;
    EXPECT_THROW(build_exclusivity_graph(box1(), 2, opt), GuardExceeded);
    EXPECT_THROW(build_exclusivity_graph(pr_box(), 3), GuardExceeded);
    EXPECT_THROW(build_exclusivity_graph(pr_box(), 0), DomainError);
    EXPECT_THROW(build_exclusivity_graph(Behavior(Scenario(2, 2, 2, 2)), 1), DomainError);
}

TEST(Events, ParseConventionAndRoundTrip) {
    Scenario s(3, 3, 3, 2);
    auto e = parse_event("1120|0011", s, 2);
    ASSERT_EQ(e.k(), 2u);
    EXPECT_EQ(e.copies[0], (CopyEvent{1, 1, 0, 0}));
    EXPECT_EQ(e.copies[1], (CopyEvent{2, 0, 1, 1}));
    EXPECT_EQ(format_event(e), "1120|0011");
    for (const auto& pc : published_cliques()) {
        auto p = *named_fixture(pc.box);
        for (const auto& ev : pc.events)
            EXPECT_EQ(format_event(parse_event(ev, p.scenario(), 2)), ev);
    }
}

TEST(Events, ParseErrors) {
    Scenario s(3, 3, 3, 2);
    EXPECT_THROW(parse_event("1130|0011", s, 2), ParseError); // b = 3 with B = 2
    EXPECT_THROW(parse_event("1120|0031", s, 2), ParseError); // x = 3 with X = 3
    EXPECT_THROW(parse_event("112|0011", s, 2), ParseError);
    EXPECT_THROW(parse_event("11200011", s, 2), ParseError);
    EXPECT_THROW(parse_event("11a0|0011", s, 2), ParseError);
    EXPECT_THROW(parse_event("11|00", s, 0), ParseError);
}

TEST(Cliques, PublishedSetsVerify) {
    for (const auto& pc : published_cliques()) {
        auto p = *named_fixture(pc.box);
        auto g = build_exclusivity_graph(p, 2);
        auto w = verify_clique(g, parse_all(pc, p.scenario()));
        EXPECT_TRUE(w.violates()) << pc.box;
        EXPECT_EQ(w.events.size(), pc.events.size());
        if (std::string(pc.box) == "box2") {
            EXPECT_EQ(w.total_weight, frac(10, 9));
        }
    }
}

TEST(Cliques, VerifyNamesOffendingPair) {
    auto p = box1();
    auto g = build_exclusivity_graph(p, 2);
    auto a = parse_event("1120|0011", p.scenario(), 2);
    try {
        verify_clique(g, {a, a});
        FAIL() << "duplicate event accepted";
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("1120|0011"), std::string::npos);
    }
    auto other = std::find_if(g.vertices().begin(), g.vertices().end(), [&](const JointEvent& v) {
        return !locally_orthogonal(v, a) && v.copies != a.copies;
    });
    ASSERT_NE(other, g.vertices().end());
    EXPECT_THROW(verify_clique(g, {a, *other}), DomainError);
}

TEST(Cliques, SingleCopyNeverViolates) {
    for (const auto& name : fixture_names()) {
        auto p = *named_fixture(name);
        auto r = find_violating_clique(build_exclusivity_graph(p, 1));
        EXPECT_FALSE(r.witness.has_value()) << name;
        ASSERT_TRUE(r.max_weight.has_value()) << name;
        EXPECT_LE(*r.max_weight, 1) << name;
    }
    auto local = local_deterministic_boxes({2, 2, 2, 2});
    auto r = max_weight_clique(build_exclusivity_graph(local[5], 1));
    EXPECT_TRUE(r.proven_optimal);
    EXPECT_EQ(r.max_weight, 1);
}

TEST(Cliques, SearchFindsVerifiedViolations) {
    for (const char* name : {"box1", "box2", "box4", "box5"}) {
        auto p = *named_fixture(name);
        auto g = build_exclusivity_graph(p, 2);
        auto r = find_violating_clique(g);
        ASSERT_TRUE(r.witness.has_value()) << name;
        EXPECT_TRUE(r.complete);
        auto w = verify_clique(g, r.witness->events);
        EXPECT_EQ(w.total_weight, r.witness->total_weight);
        EXPECT_TRUE(w.violates());
        EXPECT_TRUE(std::is_sorted(r.witness->indices.begin(), r.witness->indices.end()));
        if (std::string(name) == "box2") {
            EXPECT_EQ(w.total_weight, frac(int(w.events.size()), 9));
            EXPECT_GE(w.events.size(), 10u);
        }
    }
}

TEST(Cliques, MaxWeightOnSmallGraph) {
    // PR single copy: the two events of one input pair form a clique of weight 1.
    auto g = build_exclusivity_graph(pr_box(), 1);
    auto r = max_weight_clique(g);
    EXPECT_TRUE(r.proven_optimal);
    EXPECT_EQ(r.max_weight, 1);
    EXPECT_TRUE(std::is_sorted(r.best.indices.begin(), r.best.indices.end()));
    EXPECT_NO_THROW(verify_clique(g, r.best.events));
}

TEST(Profile, WeightClassInequality) {
    for (int x = 0; x <= 12; ++x)
        for (int y = 0; x + y <= 12; ++y)
            for (int z = 0; x + y + z <= 12; ++z) {
                CliqueWitness w;
                for (int i = 0; i < x; ++i)
                    w.events.push_back(weighted(frac(1, 4)));
                for (int i = 0; i < y; ++i)
                    w.events.push_back(weighted(frac(1, 16)));
                for (int i = 0; i < z; ++i)
                    w.events.push_back(weighted(frac(1, 8)));
                auto prof = clique_condition_profile(w);
                EXPECT_EQ(prof.x, x);
                EXPECT_EQ(prof.y, y);
                EXPECT_EQ(prof.z, z);
                Rational direct = frac(x, 4) + frac(y, 16) + frac(z, 8);
                EXPECT_EQ(prof.violation(), direct > 1);
                if (x + y + z <= 4) {
                    EXPECT_FALSE(prof.violation());
                }
            }
    EXPECT_FALSE((CliqueProfile{4, 0, 0}).violation());
    EXPECT_TRUE((CliqueProfile{4, 1, 0}).violation());
}

TEST(Profile, PublishedBox1Clique) {
    auto p = box1();
    auto g = build_exclusivity_graph(p, 2);
    const auto& pc = published_cliques().front();
    auto w = verify_clique(g, parse_all(pc, p.scenario()));
    auto prof = clique_condition_profile(g, w);
    EXPECT_EQ(prof.x + prof.y + prof.z, int(pc.events.size()));
    EXPECT_TRUE(prof.violation());
    CliqueWitness bad;
    bad.events.push_back(weighted(frac(1, 9)));
    EXPECT_THROW(clique_condition_profile(bad), DomainError);
}
