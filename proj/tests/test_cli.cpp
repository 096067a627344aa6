#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "qprism/cli.hpp"

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "qprism");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = qprism::cli::run_command(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str()};
}

std::string fixture(const std::string& name) { return std::string(QPRISM_FIXTURES) + "/" + name + ".json"; }

}  // namespace

TEST(Cli, QIntPlainText) {
    const auto r = run({"q-int", "5"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "1+q+q^2+q^3+q^4\n");
    EXPECT_EQ(run({"q-int", "3", "--r", "2"}).out, "1+q^2+q^4\n");
}

TEST(Cli, QIntJson) {
    const auto j = qprism::Json::parse(run({"q-int", "2", "--json"}).out);
    EXPECT_EQ(j["schema"], "qprism/1");
    EXPECT_EQ(j["report"]["polynomial"], "1+q");
}

TEST(Cli, ParseErrorsExitTwo) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"q-int"}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
}

TEST(Cli, RankMismatchNamesField) {
    const auto r = run({"cohomology", "--spec", fixture("bad_rank")});
    EXPECT_EQ(r.code, 2);
    const auto j = qprism::Json::parse(r.out);
    EXPECT_EQ(j["status"], "error");
    EXPECT_EQ(j["error"]["field"], "rank");
}

TEST(Cli, MissingSpecFile) {
    const auto r = run({"adic", "--spec", "/nonexistent/spec.json"});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(qprism::Json::parse(r.out)["error"]["kind"], "ParseError");
}

TEST(Cli, CartierFixturePasses) {
    const auto r = run({"cartier", "--spec", fixture("p3_rank2_mixed")});
    EXPECT_EQ(r.code, 0);
    const auto j = qprism::Json::parse(r.out);
    EXPECT_EQ(j["status"], "pass");
    EXPECT_EQ(j["windows"]["effective"], 5);
    EXPECT_EQ(j["windows"]["raised"], 17);
    EXPECT_TRUE(j["report"]["cone_acyclic"].get<bool>());
}

TEST(Cli, CohomologyOfTrivialFixture) {
    const auto r = run({"cohomology", "--spec", fixture("p2_rank1_trivial")});
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(qprism::Json::parse(r.out)["checks"]["cardinality_identity"].get<bool>());
}

TEST(Cli, BatchKeepsInputOrder) {
    const auto r = run({"adic", "--spec", fixture("adic_z_torsion"), fixture("adic_w_free")});
    EXPECT_EQ(r.code, 0);
    const auto j = qprism::Json::parse(r.out);
    ASSERT_TRUE(j.is_array());
    ASSERT_EQ(j.size(), 2u);
    EXPECT_EQ(j[0]["report"]["torsion"]["bound"], 2);
}

TEST(Cli, DeterministicOutput) {
    const std::vector<std::string> args = {"cartier", "--grow", "--spec", fixture("p2_rank2_random"),
                                           fixture("p3_rank1_random")};
    EXPECT_EQ(run(args).out, run(args).out);
}

TEST(Cli, DimensionCapFromEnvironment) {
    ::setenv("QPRISM_MAX_DIM", "10", 1);
    const auto r = run({"cartier", "--spec", fixture("p2_rank1_trivial")});
    ::unsetenv("QPRISM_MAX_DIM");
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(qprism::Json::parse(r.out)["error"]["kind"], "DimensionCap");
}

TEST(Cli, EnvelopeRelations) {
    const auto r = run({"envelope", "--p", "2", "--order", "1"});
    EXPECT_EQ(r.code, 0);
    const auto j = qprism::Json::parse(r.out);
    EXPECT_EQ(j["report"]["relations"][1]["polynomial"], "w1-x*w0-q*w0^2-q*x*w0+q^2*w1");
}
