#include <ensbox/behavior.hpp>
#include <ensbox/boxgen.hpp>
#include <ensbox/io.hpp>
#include <ensbox/linalg.hpp>

#include <gtest/gtest.h>

using namespace ensbox;

namespace {

// Affine rank of a point set: rank of the differences to the first point.
std::size_t affine_rank(const std::vector<Behavior>& pts) {
    RationalMatrix m(pts.size() - 1, pts.front().size());
    for (std::size_t i = 1; i < pts.size(); ++i)
        for (std::size_t j = 0; j < m.cols; ++j)
            m(i - 1, j) = pts[i][j] - pts[0][j];
    return rank(m);
}

} // namespace

TEST(Scenario, RejectsSmallCardinalities) {
    EXPECT_THROW(Scenario(1, 2, 2, 2), DomainError);
    EXPECT_THROW(Scenario(2, 2, 2, 0), DomainError);
}

TEST(Scenario, FlatIndexOrder) {
    Scenario s(3, 2, 4, 3);
    EXPECT_EQ(s.index(0, 0, 0, 1), 1u);
    EXPECT_EQ(s.index(0, 0, 1, 0), 3u);
    EXPECT_EQ(s.index(0, 1, 0, 0), 12u);
    EXPECT_EQ(s.index(1, 0, 0, 0), 24u);
    for (std::size_t i = 0; i < s.size(); ++i) {
        auto e = unflatten(s, i);
        EXPECT_EQ(s.index(e.x, e.y, e.a, e.b), i);
    }
}

TEST(NsDimension, MatchesAffineRankOfDeterministicBoxes) {
    for (Scenario s : {Scenario(2, 2, 2, 2), Scenario(3, 3, 3, 2), Scenario(2, 3, 2, 3),
                       Scenario(2, 2, 3, 3)}) {
        auto det = local_deterministic_boxes(s);
        EXPECT_EQ(ns_dimension(s), affine_rank(det)) << s.to_string();
    }
    EXPECT_EQ(ns_dimension({2, 2, 2, 2}), 8u);
    EXPECT_EQ(ns_dimension({3, 3, 3, 2}), 27u);
    EXPECT_EQ(ns_dimension(Scenario(2, 3, 3, 2)), ns_dimension(Scenario(3, 2, 2, 3)));
}

TEST(Validate, FixturesAndUniformBoxesPass) {
    for (const auto& name : fixture_names())
        EXPECT_TRUE(validate(*named_fixture(name)).ok()) << name;
    for (Scenario s : {Scenario(2, 2, 2, 2), Scenario(3, 3, 3, 2), Scenario(2, 4, 3, 5)}) {
        auto u = uniform_box(s);
        EXPECT_TRUE(validate(u).ok());
        for (std::size_t i = 0; i < u.size(); ++i)
            EXPECT_EQ(u[i], frac(1, s.A * s.B));
    }
}

TEST(Validate, NamesViolatedConstraints) {
    Behavior p = box1();
    p(0, 0, 0, 1) = 0;
    auto report = validate(p);
    ASSERT_FALSE(report.ok());
    bool normalization = false, signaling = false;
    for (const auto& v : report.violations) {
        normalization = normalization || v.find("normalization") != std::string::npos;
        signaling = signaling || v.find("no-signaling") != std::string::npos;
    }
    EXPECT_TRUE(normalization);
    EXPECT_TRUE(signaling);

    Behavior q = pr_box();
    q(0, 0, 0, 0) = -frac(1, 2);
    q(0, 0, 1, 0) = frac(3, 2);
    bool positivity = false;
    for (const auto& v : validate(q).violations)
        positivity = positivity || v.find("positivity") != std::string::npos;
    EXPECT_TRUE(positivity);
}

TEST(Validate, ShapeMismatchThrows) {
    EXPECT_THROW(Behavior(Scenario(2, 2, 2, 2), std::vector<Rational>(15)), ShapeError);
}

TEST(Transpose, InvolutionAndValidity) {
    auto t = transpose_parties(box3());
    EXPECT_EQ(t.scenario(), Scenario(3, 2, 3, 3));
    EXPECT_TRUE(validate(t).ok());
    EXPECT_EQ(transpose_parties(t), box3());
    EXPECT_EQ(transpose_parties(uniform_box({2, 3, 4, 5})), uniform_box({3, 2, 5, 4}));
    auto p = box3();
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 3; ++y)
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b)
                    EXPECT_EQ(t(y, x, b, a), p(x, y, a, b));
}

TEST(Rational, ParseAndFormat) {
    EXPECT_EQ(parse_rational("2/4"), frac(1, 2));
    EXPECT_EQ(parse_rational("-3"), Rational(-3));
    EXPECT_EQ(format_rational(frac(6, 8)), "3/4");
    EXPECT_EQ(format_rational(Rational(0)), "0");
    for (auto bad : {"", "1/0", "a", "1/", "/2", "1.5", "1 /2", "3/-2"})
        EXPECT_THROW(parse_rational(bad), ParseError) << bad;
}

TEST(TextFormat, RoundTripIsBitExact) {
    for (const auto& name : fixture_names()) {
        auto p = *named_fixture(name);
        auto text = to_text(p);
        auto q = behavior_from_text(text);
        EXPECT_EQ(p, q) << name;
        EXPECT_EQ(to_text(q), text);
    }
    auto text = to_text(pr_box());
    EXPECT_EQ(text, "2 2 2 2\n1/2 0 0 1/2\n1/2 0 0 1/2\n1/2 0 0 1/2\n0 1/2 1/2 0\n");
}

TEST(TextFormat, RejectsMalformedInput) {
    EXPECT_THROW(behavior_from_text("2 2 2\n"), ParseError);
    EXPECT_THROW(behavior_from_text("2 2 2 2\n1/2 0 0 1/2\n"), ParseError);
    EXPECT_THROW(behavior_from_text("2 2 2 2\n1/2 0 0 1/2 0\n1/2 0 0 1/2\n1/2 0 0 1/2\n0 1/2 1/2 0\n"),
                 ParseError);
    EXPECT_THROW(behavior_from_text("2 2 2 2\nx 0 0 1\n1 0 0 0\n1 0 0 0\n1 0 0 0\n"), ParseError);
}

TEST(JsonFormat, RoundTrip) {
    auto p = box2();
    auto j = table_to_json(p);
    EXPECT_EQ(j["scenario"], json::array({3, 3, 3, 2}));
    EXPECT_EQ(j["table"][1], "1/3");
    EXPECT_EQ(behavior_from_json(j), p);
    EXPECT_EQ(behavior_from_string(j.dump()), p);
    auto f = magic_square_functional();
    auto fj = functional_to_json(f, Rational(8));
    auto [g, bound] = functional_from_json(fj);
    EXPECT_EQ(g, f);
    EXPECT_EQ(bound, Rational(8));
}

TEST(Mix, ConvexCombination) {
    Scenario s(2, 2, 2, 2);
    auto det = local_deterministic_boxes(s);
    auto m = mix({{frac(1, 2), pr_box()}, {frac(1, 2), det[0]}});
    EXPECT_TRUE(validate(m).ok());
    EXPECT_EQ(m(0, 0, 0, 0), frac(3, 4));
}

TEST(BellFunctional, ValueAndShapeCheck) {
    auto f = magic_square_functional();
    EXPECT_EQ(f.value(magic_square_behavior()), Rational(9));
    EXPECT_THROW(f.value(pr_box()), ShapeError);
}
