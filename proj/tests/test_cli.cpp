#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

#include "diracbc/io.hpp"

namespace {

struct Run {
    std::string out;
    int code = -1;
};

/// Runs the CLI with `args`, capturing stdout; stderr is discarded.
Run run(const std::string& args)
{
    const std::string cmd = std::string(DIRACBC_CLI) + " " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe)
        return r;
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        r.out.append(buf.data(), got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string spec(const std::string& name) { return std::string(DIRACBC_SPECS) + "/" + name; }

diracbc::Json json_of(const Run& r) { return diracbc::Json::parse(r.out); }

} // namespace

TEST(Cli, CheckSampleSpecs)
{
    const std::vector<std::pair<std::string, diracbc::Json>> cases{
        {"mit_bag.json", true},          {"zigzag.json", false},     {"berry_mondragon.json", true},
        {"generalized_mit.json", true},  {"chiral_bag.json", false}, {"d5_family.json", false},
        {"d4n4.json", true},             {"mit_subspace.json", true}, {"delta_shell.json", true},
        {"transmission_identity.json", true},
    };
    for (const auto& [file, regular] : cases) {
        const auto r = run("check " + spec(file) + " --json --cross-check");
        ASSERT_EQ(r.code, 0) << file;
        const auto j = json_of(r);
        EXPECT_EQ(j["regular"], regular) << file;
        EXPECT_TRUE(j["self_adjoint"].get<bool>()) << file;
        if (j.contains("cross_check")) {
            EXPECT_TRUE(j["cross_check"]["agree"].get<bool>()) << file;
        }
    }
}

TEST(Cli, ExitCodesOnBadInput)
{
    for (const auto* file : {"malformed_frame.json", "bad_version.json", "family_mismatch.json", "truncated.json"})
        EXPECT_EQ(run("check " + spec(file)).code, 2) << file;
    EXPECT_EQ(run("check " + spec("missing.json")).code, 2);
    EXPECT_EQ(run("check").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
    EXPECT_EQ(run("check " + spec("zigzag.json") + " --tol -1").code, 2);
    EXPECT_EQ(run("sweep --family nope --grid x=0:1:2").code, 2);
    EXPECT_EQ(run("sweep --family generalized_mit --grid theta=0:1").code, 2);
    EXPECT_EQ(run("witness " + spec("mit_bag.json")).code, 2);
    EXPECT_EQ(run("--help").code, 0);
}

TEST(Cli, QuietPrintsNothing)
{
    const auto r = run("check " + spec("zigzag.json") + " --quiet");
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
}

TEST(Cli, ByteIdenticalReruns)
{
    for (const auto& args : {"check " + spec("mit_subspace.json") + " --json --cross-check",
                             "check " + spec("d5_family.json") + " --json",
                             std::string("sweep --family delta_shell --grid eta=-3:3:5 --grid lambda=-3:3:5 --json")}) {
        const auto a = run(args), b = run(args);
        EXPECT_EQ(a.code, 0);
        EXPECT_FALSE(a.out.empty());
        EXPECT_EQ(a.out, b.out) << args;
    }
}

TEST(Cli, TimingIsOptIn)
{
    EXPECT_FALSE(json_of(run("check " + spec("zigzag.json") + " --json")).contains("timing_ms"));
    EXPECT_TRUE(json_of(run("check " + spec("zigzag.json") + " --json --timing")).contains("timing_ms"));
}

TEST(Cli, SweepGeneralizedMit)
{
    const auto r = run("sweep --family generalized_mit --grid theta=0:6.283185307179586:41 --json");
    ASSERT_EQ(r.code, 0);
    const auto j = json_of(r);
    ASSERT_EQ(j["rows"].size(), 41u);
    for (std::size_t i = 0; i < 41; ++i)
        EXPECT_EQ(j["rows"][i]["regular"], !(i == 0 || i == 20 || i == 40)) << i;
}

TEST(Cli, SweepFixedParamsAndRep)
{
    const auto r = run("sweep --family delta_shell --grid eta=0:2:3 --param lambda=0 --param tau=0 --rep 3,4 --json");
    ASSERT_EQ(r.code, 0);
    const auto j = json_of(r);
    ASSERT_EQ(j["rows"].size(), 3u);
    // eta = 2, lambda = 0 sits on the exceptional surface
    EXPECT_EQ(j["rows"][2]["regular"], false);
    EXPECT_EQ(run("sweep --family delta_shell --grid eta=0:2:3 --param lambda").code, 2);
}

TEST(Cli, WitnessSlopes)
{
    const auto r = run("witness " + spec("chiral_bag.json") + " --json --n 4,16,64,256");
    ASSERT_EQ(r.code, 0);
    const auto j = json_of(r);
    EXPECT_NEAR(j["l2_slope"].get<double>(), -1.0, 0.15);
    EXPECT_NEAR(j["ratio_slope"].get<double>(), 1.0, 0.2);
    EXPECT_EQ(run("witness " + spec("zigzag.json") + " --cutoff flat").code, 0);
    EXPECT_EQ(run("witness " + spec("zigzag.json") + " --cutoff square").code, 2);
    EXPECT_EQ(run("witness " + spec("zigzag.json") + " --n 4,x").code, 2);
}
