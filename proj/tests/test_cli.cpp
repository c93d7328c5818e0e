#include <ensbox/cli.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

using namespace ensbox;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "ensbox");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
  protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("ensbox_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
        ASSERT_EQ(run({"generate", "fixtures", "--dir", dir_.string()}).code, 0);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }
    std::string fixture(const std::string& name) const { return path(name + ".txt"); }

    fs::path dir_;
};

} // namespace

TEST_F(Cli, GeneratedFixturesRoundTrip) {
    for (const auto& name : fixture_names()) {
        EXPECT_EQ(load_behavior(fixture(name)), *named_fixture(name)) << name;
        EXPECT_EQ(run({"validate", fixture(name)}).code, 0) << name;
    }
    auto one = run({"generate", "fixtures", "--name", "box2"});
    EXPECT_EQ(one.out, to_text(box2()));
    EXPECT_EQ(run({"generate", "fixtures", "--name", "box9"}).code, 2);
}

TEST_F(Cli, ValidateExitCodes) {
    write_file(path("signaling.txt"), "2 2 2 2\n1/2 0 0 1/2\n1/2 0 0 1/2\n1/2 0 0 1/2\n1/2 0 1/2 0\n");
    auto bad = run({"validate", path("signaling.txt")});
    EXPECT_EQ(bad.code, 1);
    EXPECT_NE(bad.out.find("no-signaling"), std::string::npos);
    write_file(path("corrupt.txt"), "2 2 2 2\n1/2 0 0 1/2\n");
    EXPECT_EQ(run({"validate", path("corrupt.txt")}).code, 2);
    EXPECT_EQ(run({"validate", path("missing.txt")}).code, 2);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"validate"}).code, 2);
}

TEST_F(Cli, ExtremalWritesPerturbation) {
    auto r = run({"extremal", fixture("p_ms"), "-o", path("v.txt")});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("non-extremal"), std::string::npos);
    auto p = magic_square_behavior();
    auto text = read_file(path("v.txt"));
    Table v = behavior_from_text(text); // parsed without validation
    auto cert = extremality_certificate(p);
    ExtremalityCertificate check{Extremality::NonExtremal, v, cert.alpha, cert.beta};
    EXPECT_TRUE(verify_perturbation(p, check));
    EXPECT_EQ(run({"extremal", fixture("box5")}).code, 0);
    write_file(path("uniform.txt"), to_text(uniform_box({2, 2, 2, 2})));
    EXPECT_EQ(run({"extremal", path("uniform.txt")}).code, 1);
}

TEST_F(Cli, EnumerateDatabase) {
    auto r = run({"enumerate", "2", "2", "2", "2", "-o", path("db.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("vertices 24"), std::string::npos);
    EXPECT_NE(r.out.find("classes 2 (nonlocal 1"), std::string::npos);
    auto j = json::parse(read_file(path("db.json")));
    EXPECT_EQ(j.at("format").get<int>(), 1);
    auto [reps, vertices] = database_from_json(j);
    EXPECT_EQ(reps.size(), 2u);
    EXPECT_EQ(vertices, enumerate_vertices({2, 2, 2, 2}));

    auto r2 = run({"enumerate", "2", "3", "3", "2"});
    EXPECT_NE(r2.out.find("classes 4 (nonlocal 3"), std::string::npos);
    EXPECT_EQ(run({"enumerate", "2", "3", "3", "3", "--max-rays", "10"}).code, 3);
    EXPECT_EQ(run({"enumerate", "2", "2", "2"}).code, 2);
}

TEST_F(Cli, EnumerateWithSeed) {
    auto r = run({"enumerate", "2", "2", "2", "2", "--seed", fixture("pr")});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(run({"enumerate", "2", "2", "2", "2", "--seed", fixture("box1")}).code, 2);
}

TEST_F(Cli, Lo2Reports) {
    auto r = run({"lo2", fixture("box2"), "--json", path("w.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("violation"), std::string::npos);
    auto j = json::parse(read_file(path("w.json")));
    std::vector<JointEvent> events;
    for (const auto& e : j.at("events")) {
        EXPECT_EQ(e.at("weight").get<std::string>(), "1/9");
        events.push_back(parse_event(e.at("event").get<std::string>(), box2().scenario(), 2));
    }
    auto w = verify_clique(build_exclusivity_graph(box2(), 2), events);
    EXPECT_EQ(format_rational(w.total_weight), j.at("total_weight").get<std::string>());
    EXPECT_TRUE(w.violates());

    auto single = run({"lo2", fixture("box1"), "-k", "1"});
    EXPECT_EQ(single.code, 1);
    EXPECT_NE(single.out.find("maximum clique weight 1"), std::string::npos);
    EXPECT_EQ(run({"lo2", fixture("box1"), "--max-graph-vertices", "10"}).code, 3);
}

TEST_F(Cli, CommcheckReports) {
    auto r = run({"commcheck", fixture("pr"), "--json", path("c.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("visibility 1/2"), std::string::npos);
    EXPECT_NE(r.out.find("min_dit 2"), std::string::npos);
    auto j = json::parse(read_file(path("c.json")));
    EXPECT_EQ(j.at("min_dit").get<int>(), 2);
    EXPECT_EQ(j.at("per_d")[0].at("verdict").get<std::string>(), "outside");
    auto [f, bound] = functional_from_json(j.at("per_d")[0].at("functional"));
    EXPECT_GT(f.value(pr_box()), bound);

    auto det = local_deterministic_boxes({2, 2, 2, 2});
    write_file(path("local.txt"), to_text(det[3]));
    auto l = run({"commcheck", path("local.txt")});
    EXPECT_EQ(l.code, 0);
    EXPECT_NE(l.out.find("min_dit 1"), std::string::npos);
    EXPECT_EQ(run({"commcheck", fixture("pr"), "--d-max", "1"}).code, 1);
    EXPECT_EQ(run({"commcheck", fixture("box1"), "--max-strategies", "5"}).code, 3);
}

TEST_F(Cli, DecomposeMagicSquare) {
    auto r = run({"decompose", fixture("p_ms"), "-o", path("d.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    auto d = decomposition_from_json(json::parse(read_file(path("d.json"))));
    EXPECT_NO_THROW(verify_decomposition(magic_square_behavior(), d));
    for (const auto& t : d.terms) {
        auto label = cli::class_label(t.vertex);
        EXPECT_TRUE(label == "p1" || label == "p2") << label;
    }
    auto v = run({"decompose", fixture("box5")});
    EXPECT_NE(v.out.find("terms 1"), std::string::npos);
}

TEST_F(Cli, DecomposeMixOfFixtures) {
    auto det = local_deterministic_boxes({3, 3, 3, 2});
    auto p = mix({{frac(1, 2), box1()}, {frac(1, 3), det[17]}, {frac(1, 6), det[40]}});
    write_file(path("mix.txt"), to_text(p));
    auto r = run({"decompose", path("mix.txt"), "-o", path("mix.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    auto d = decomposition_from_json(json::parse(read_file(path("mix.json"))));
    EXPECT_NO_THROW(verify_decomposition(p, d));
    for (const auto& t : d.terms)
        EXPECT_TRUE(is_extremal(t.vertex));
}

TEST_F(Cli, GenerateFamilies) {
    auto r = run({"generate", "nsdd", "2", "2", "3", "3", "--dir", path("nsdd")});
    ASSERT_EQ(r.code, 0);
    std::istringstream lines(r.out);
    std::string file;
    int n = 0;
    while (std::getline(lines, file)) {
        EXPECT_EQ(run({"extremal", file}).code, 0) << file;
        ++n;
    }
    EXPECT_EQ(n, int(enumerate_nsdd_specs({2, 2, 3, 3}).size()));
    auto e = run({"generate", "eq1", "2", "2", "4", "4", "--coprime", "--dir", path("eq1")});
    EXPECT_EQ(e.code, 0);
    EXPECT_EQ(std::count(e.out.begin(), e.out.end(), '\n'), 2);
    EXPECT_EQ(run({"generate", "eq1", "2", "2", "3", "2"}).code, 2);
}

TEST_F(Cli, OutputIsReproducible) {
    auto a = run({"lo2", fixture("box5")});
    auto b = run({"lo2", fixture("box5")});
    EXPECT_EQ(a.out, b.out);
    run({"decompose", fixture("p_ms"), "-o", path("d1.json")});
    run({"decompose", fixture("p_ms"), "-o", path("d2.json")});
    EXPECT_EQ(read_file(path("d1.json")), read_file(path("d2.json")));
}
