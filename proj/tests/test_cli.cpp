#include <gtest/gtest.h>
#include <json.hpp>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args)
{
    std::string cmd = std::string(ERLAB_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    std::string out;
    std::array<char, 4096> buf{};
    size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), got);
    int st = pclose(p);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

} // namespace

TEST(Cli, UsageErrors)
{
    EXPECT_EQ(run("no-such-command").code, 1);
    EXPECT_EQ(run("").code, 1);
    EXPECT_EQ(run("certify --case 3x5").code, 1);
    EXPECT_EQ(run("certify --case 3x7 --pipeline x.json").code, 1);
    EXPECT_EQ(run("rb-region --a 1/2 --b nope").code, 1);
    EXPECT_EQ(run("count --graph /nonexistent --k 3,3").code, 1);
}

TEST(Cli, CertifySevenColours)
{
    auto r = run("certify --case 3x7 --no-timing");
    ASSERT_EQ(r.code, 0) << r.out;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["subcommand"], "certify");
    EXPECT_TRUE(j["claim_holds"].get<bool>());
    EXPECT_FALSE(j.contains("timing"));
    bool found = false;
    for (const auto& s : j["results"]["steps"])
        if (s["name"] == "I3") {
            EXPECT_EQ(s["detail"]["bound"]["exact"], "7/4");
            found = true;
        }
    EXPECT_TRUE(found);
}

TEST(Cli, PipelineFileAndBadFile)
{
    std::string path = ::testing::TempDir() + "bad_pipeline.json";
    std::ofstream(path) << "{ not json";
    EXPECT_EQ(run("certify --pipeline " + path).code, 1);
    std::ofstream(path) << R"({"case":"tiny","k":"3;2","candidate":"1","steps":[
        {"name":"c","op":"certificate","constraints":[{"kind":"basic"}],"multipliers":["1/2"],"expect_bound":"1/2"}]})";
    auto r = run("certify --no-timing --pipeline " + path);
    EXPECT_EQ(r.code, 0) << r.out;
}

TEST(Cli, FailingClaimExitsTwo)
{
    auto r = run("verify-36-neighbours --no-timing");
    EXPECT_EQ(r.code, 2);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_FALSE(j["claim_holds"].get<bool>());
    EXPECT_FALSE(j["mismatches"].empty());
}

TEST(Cli, NoTimingIsByteIdentical)
{
    auto a = run("extend --case 3x6 --no-timing"), b = run("extend --case 3x6 --no-timing");
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    auto c = run("rb-search --n 12 --iters 2000 --seed 4 --restarts 2 --no-timing");
    auto d = run("rb-search --n 12 --iters 2000 --seed 4 --restarts 2 --threads 2 --no-timing");
    EXPECT_EQ(c.code, 0);
    EXPECT_EQ(c.out, d.out);
}

TEST(Cli, TableCsv)
{
    auto r = run("--format csv table --kmin 3 --kmax 5 --no-timing");
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(r.out.rfind("k,j=0", 0), 0u) << r.out;
    EXPECT_NE(r.out.find("\n4,3,2,2"), std::string::npos) << r.out;
}

TEST(Cli, CountAndOutputFile)
{
    std::string g = ::testing::TempDir() + "k4.graph";
    std::ofstream(g) << "4\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n";
    std::string o = ::testing::TempDir() + "count.json";
    auto r = run("count --graph " + g + " --k 3,3 --no-timing -o " + o);
    ASSERT_EQ(r.code, 0);
    std::ifstream in(o);
    auto j = nlohmann::json::parse(in);
    EXPECT_EQ(j["results"]["count"], "18");
}

TEST(Cli, BudgetFromEnvironment)
{
    EXPECT_EQ(run("qstar --k 3,3,3 --rmax 6 --budget 10").code, 1);
    auto r = run("qstar --k 3,3 --rmax 3 --no-timing");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(system((std::string("ERLAB_BUDGET=abc ") + ERLAB_CLI_PATH + " qstar --k 3,3 >/dev/null 2>&1").c_str()) >> 8, 1);
}
