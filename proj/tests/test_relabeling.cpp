#include <ensbox/boxgen.hpp>
#include <ensbox/relabeling.hpp>

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace ensbox;

namespace {

// Every element of the relabeling group of a small scenario, by brute force.
std::vector<Relabeling> whole_group(const Scenario& s) {
    std::vector<Relabeling> out;
    auto px = all_permutations(s.X), py = all_permutations(s.Y);
    auto pa = all_permutations(s.A), pb = all_permutations(s.B);
    std::size_t na = 1, nb = 1;
    for (int i = 0; i < s.X; ++i)
        na *= pa.size();
    for (int i = 0; i < s.Y; ++i)
        nb *= pb.size();
    for (int swap = 0; swap < (s.symmetric() ? 2 : 1); ++swap)
        for (const auto& ix : px)
            for (const auto& iy : py)
                for (std::size_t ca = 0; ca < na; ++ca)
                    for (std::size_t cb = 0; cb < nb; ++cb) {
                        Relabeling r;
                        r.swap_parties = swap == 1;
                        r.alice_input_perm = ix;
                        r.bob_input_perm = iy;
                        for (std::size_t c = ca, x = 0; x < std::size_t(s.X); ++x, c /= pa.size())
                            r.alice_output_perms.push_back(pa[c % pa.size()]);
                        for (std::size_t c = cb, y = 0; y < std::size_t(s.Y); ++y, c /= pb.size())
                            r.bob_output_perms.push_back(pb[c % pb.size()]);
                        out.push_back(std::move(r));
                    }
    return out;
}

std::vector<Behavior> sample_boxes() {
    auto [p1, p2] = magic_square_p1_p2();
    Scenario s322(3, 3, 2, 2);
    return {pr_box(), box1(), box2(), box3(), box4(), box5(), p1, p2,
            mix({{frac(1, 3), box1()}, {frac(2, 3), local_deterministic_boxes({3, 3, 3, 2})[7]}}),
            mix({{frac(1, 5), pr_box()}, {frac(4, 5), uniform_box({2, 2, 2, 2})}})};
}

} // namespace

TEST(Relabeling, IdentityActsTrivially) {
    for (const auto& p : sample_boxes())
        EXPECT_EQ(apply_relabeling(p, Relabeling::identity(p.scenario())), p);
}

TEST(Relabeling, GroupAxiomsOnRandomElements) {
    std::mt19937 rng(7);
    for (const auto& p : sample_boxes()) {
        const auto& s = p.scenario();
        for (int k = 0; k < 20; ++k) {
            auto r = random_relabeling(s, rng);
            auto q = random_relabeling(s, rng);
            auto rp = apply_relabeling(p, r);
            EXPECT_TRUE(validate(rp).ok());
            EXPECT_EQ(apply_relabeling(rp, inverse(r)), p);
            EXPECT_EQ(apply_relabeling(rp, q), apply_relabeling(p, compose(q, r)));
            EXPECT_EQ(compose(inverse(r), r), Relabeling::identity(s));
        }
    }
}

TEST(Relabeling, IllegalSwapRejected) {
    Relabeling r = Relabeling::identity({2, 3, 3, 3});
    r.swap_parties = true;
    EXPECT_THROW(apply_relabeling(box3(), r), DomainError);
}

TEST(Relabeling, GroupOrderMatchesBruteForce) {
    for (Scenario s : {Scenario(2, 2, 2, 2), Scenario(2, 3, 2, 2), Scenario(2, 2, 3, 2)}) {
        auto g = whole_group(s);
        EXPECT_EQ(g.size(), relabeling_group_order(s));
    }
}

TEST(CanonicalForm, PrOrbitHasEightElementsAndOneForm) {
    std::set<std::vector<Rational>> orbit;
    for (const auto& r : whole_group({2, 2, 2, 2}))
        orbit.insert(apply_relabeling(pr_box(), r).values());
    EXPECT_EQ(orbit.size(), 8u);
    std::set<std::vector<Rational>> forms;
    for (const auto& v : orbit)
        forms.insert(canonical_form(Behavior({2, 2, 2, 2}, v)).values());
    EXPECT_EQ(forms.size(), 1u);
}

TEST(CanonicalForm, IsLexMinimumOfWholeOrbit) {
    std::mt19937 rng(3);
    for (Scenario s : {Scenario(2, 2, 2, 2), Scenario(2, 3, 2, 2), Scenario(2, 2, 3, 2)}) {
        auto group = whole_group(s);
        auto det = local_deterministic_boxes(s);
        for (int trial = 0; trial < 5; ++trial) {
            // random rational mixture of three deterministic boxes and a PR-like term
            std::vector<std::pair<Rational, Behavior>> terms;
            for (int j = 0; j < 3; ++j)
                terms.emplace_back(frac(j + 1, 6), det[rng() % det.size()]);
            auto p = mix(terms);
            std::vector<Rational> best = p.values();
            for (const auto& r : group)
                best = std::min(best, apply_relabeling(p, r).values());
            auto res = canonical_form_with_witness(p);
            EXPECT_EQ(res.table, best) << s.to_string();
            EXPECT_EQ(apply_relabeling(p, res.witness).values(), res.table);
        }
    }
}

TEST(CanonicalForm, ConstantOnOrbitsAndIdempotent) {
    std::mt19937 rng(11);
    for (const auto& p : sample_boxes()) {
        auto c = canonical_form(p);
        EXPECT_EQ(canonical_form(c), c);
        for (int k = 0; k < 100; ++k)
            ASSERT_EQ(canonical_form(apply_relabeling(p, random_relabeling(p.scenario(), rng))), c);
    }
}

TEST(Classify, LocalDeterministicBoxesFormOneClass) {
    for (Scenario s : {Scenario(2, 2, 2, 2), Scenario(3, 3, 3, 2), Scenario(2, 3, 3, 3)}) {
        auto classes = classify(local_deterministic_boxes(s));
        ASSERT_EQ(classes.size(), 1u) << s.to_string();
        EXPECT_EQ(classes[0].count, local_deterministic_boxes(s).size());
    }
}

TEST(Classify, SingleAndMixed) {
    auto one = classify({box1()});
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one[0].members, std::vector<std::size_t>{0});
    EXPECT_THROW(classify({box1(), pr_box()}), ShapeError);
}
