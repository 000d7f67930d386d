#include "cli.hpp"
#include "dendro/arith.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = dendro::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(DENDRO_TEST_DATA) + "/" + name; }

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> v;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) v.push_back(l);
    return v;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    const auto p = std::filesystem::temp_directory_path() / name;
    std::ofstream(p) << content;
    return p;
}

} // namespace

TEST(Cli, SieveMertens) {
    const auto r = run({"sieve", "--n", "100", "--emit", "mertens"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto ls = lines(r.out);
    EXPECT_EQ(ls.front(), "N,M");
    EXPECT_EQ(ls.back(), "100,1");
    EXPECT_EQ(ls.size(), 101u);
}

TEST(Cli, SieveMu) {
    const auto r = run({"sieve", "--n", "12", "--emit", "mu"});
    ASSERT_EQ(r.code, 0);
    const auto ls = lines(r.out);
    EXPECT_EQ(ls[0], "n,mu");
    EXPECT_EQ(ls[6], "6,1");
    EXPECT_EQ(ls[12], "12,0");
}

TEST(Cli, DecomposeStar) {
    const auto r = run({"decompose", "--dendrite", data("star3.json"), "--delta", "0.6"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto ls = lines(r.out);
    EXPECT_EQ(ls[0], "cell_id,diameter,boundary_size,boundary_points");
    EXPECT_GT(ls.size(), 4u);
    for (std::size_t i = 1; i < ls.size(); ++i) {
        std::istringstream row(ls[i]);
        std::string id, diam, bsize;
        std::getline(row, id, ',');
        std::getline(row, diam, ',');
        std::getline(row, bsize, ',');
        EXPECT_LT(std::stod(diam), 0.6);
        EXPECT_LE(std::stoi(bsize), 2);
    }
}

TEST(Cli, SarnakConstantIsMertensAverage) {
    const auto r = run({"sarnak", "--map", data("rotation.json"), "--point", "[1]", "--obs", "const", "--N", "1000",
                        "--checkpoints", "10,1000"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 3u);
    EXPECT_EQ(ls[0], "N,S_N");
    const dendro::SieveTable t(1000);
    const double s = std::stod(ls[2].substr(ls[2].find(',') + 1));
    EXPECT_NEAR(s, dendro::mertens(t, 1000) / 1000.0, 1e-15);
}

TEST(Cli, OrbitRotation) {
    const auto r = run({"orbit", "--map", data("rotation.json"), "--point", "[1]", "--N", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 5u);
    EXPECT_EQ(ls[0], "n,vertex,edge,t");
    EXPECT_EQ(ls[1].substr(0, 4), "0,1,");
    EXPECT_EQ(ls[2].substr(0, 4), "1,2,");
    EXPECT_EQ(ls[4].substr(0, 4), "3,1,");
}

TEST(Cli, EntropyIdentityIsZero) {
    const auto r = run({"entropy", "--map", data("identity.json"), "--eps", "0.1", "--n-max", "6"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(lines(r.out).back(), "estimate,0");
}

TEST(Cli, VerifyStructureRotation) {
    const auto r = run({"verify-structure", "--map", data("rotation.json"), "--structure",
                        data("rotation_structure.json"), "--point", "[1]"});
    EXPECT_EQ(r.code, 0) << r.out << r.err;
    EXPECT_EQ(lines(r.out).size(), 6u);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"sieve"}).code, 2);
    EXPECT_EQ(run({"sieve", "--n", "0"}).code, 2);
    EXPECT_EQ(run({"decompose", "--dendrite", data("star3.json"), "--delta", "-1"}).code, 2);
    const auto bad = run({"orbit", "--map", data("bad_image.json"), "--point", "[1]", "--N", "3"});
    EXPECT_EQ(bad.code, 2);
    EXPECT_NE(bad.err.find("\"error\""), std::string::npos) << bad.err;
    EXPECT_EQ(run({"orbit", "--map", data("nope.json"), "--point", "[1]", "--N", "3"}).code, 2);
}

TEST(Cli, ReportAggregates) {
    const auto good = temp_file("dendro_good.ndjson", "{\"id\":\"AC1\",\"pass\":true,\"value\":1}\n");
    const auto bad = temp_file("dendro_bad.ndjson", "{\"id\":\"AC2\",\"pass\":false}\n");
    const auto empty = temp_file("dendro_empty.ndjson", "");
    auto r = run({"report", "--results", good.string()});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(lines(r.out).size(), 2u);
    EXPECT_EQ(run({"report", "--results", empty.string()}).code, 0);
    r = run({"report", "--results", good.string(), bad.string()});
    EXPECT_EQ(r.code, 3);
    EXPECT_EQ(lines(r.out).size(), 3u);
    EXPECT_EQ(run({"report", "--results", "/nonexistent/x.ndjson"}).code, 2);
}

TEST(Cli, DeterministicWithSeed) {
    const std::vector<std::string> args{"--seed", "7", "decompose", "--random", "30", "--delta", "0.3"};
    const auto a = run(args), b = run(args);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    const auto c = run({"--seed", "8", "decompose", "--random", "30", "--delta", "0.3"});
    EXPECT_NE(a.out, c.out);
}

TEST(Cli, GehmanReport) {
    const auto r = run({"gehman", "--spec", "full", "--depth", "6", "--emit", "report"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("\"conjugacy_failures\":0"), std::string::npos) << r.out;
}

TEST(Cli, OutFile) {
    const auto p = std::filesystem::temp_directory_path() / "dendro_out.csv";
    std::filesystem::remove(p);
    const auto r = run({"--out", p.string(), "sieve", "--n", "5"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(p);
    std::string first;
    std::getline(in, first);
    EXPECT_EQ(first, "n,mu");
}
