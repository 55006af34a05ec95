#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "ddeq/problem_io.hpp"

namespace fs = std::filesystem;
using namespace ddeq;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

fs::path work_dir()
{
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / ("ddeq_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

Run run(const std::string& args)
{
    const auto log = work_dir() / "stdout.txt";
    const std::string cmd = "cd '" + work_dir().string() + "' && '" + DDEQ_CLI + "' " + args + " > '" +
                            log.string() + "' 2>&1";
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(log);
    std::stringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
}

std::string problem(const std::string& name) { return std::string(DDEQ_PROBLEMS) + "/" + name; }

std::string write_file(const std::string& name, const std::string& text)
{
    const auto p = work_dir() / name;
    std::ofstream(p) << text;
    return p.string();
}

std::string read_file(const std::string& name)
{
    std::ifstream in(work_dir() / name, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

} // namespace

TEST(ProblemIo, ParsesAndCanonicalizes)
{
    const auto pf = parse_problem(R"({"N": 1, "b": ["2/4", 0, "1"], "k": 1,
        "f0": [{"interval": ["0", "2"], "coeffs": ["1", "1"], "basis": "global"}], "f1": ["3"]})");
    EXPECT_EQ(pf.problem.stencil.coeffs[0], Rational(1, 2));
    EXPECT_EQ(pf.problem.f0.piece_count(), 2u); // refined at t = 1
    EXPECT_EQ(pf.problem.f0.value(Rational(3, 2)), Rational(5, 2));
    const auto text = serialize_problem(pf);
    EXPECT_TRUE(contains(text, "\"1/2\""));
    EXPECT_EQ(serialize_problem(parse_problem(text)), text);
}

TEST(ProblemIo, FieldPreciseErrors)
{
    auto message = [](const std::string& text) {
        try {
            parse_problem(text);
        } catch (const ParseError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    EXPECT_TRUE(contains(message(R"({"N": 1, "b": ["1", "0"], "f0": []})"), "field 'b'"));
    EXPECT_TRUE(contains(message(R"({"N": 1, "b": ["1", "0", 0.5], "f0": []})"), "b[2]"));
    EXPECT_TRUE(contains(message("{\"N\": 1,\n \"b\": [1, 0 1]}"), "line 2"));
    EXPECT_TRUE(contains(
        message(R"({"N": 1, "b": [1, 0, 1], "f0": [{"interval": ["0", "1"], "coeffs": ["1"]}]})"), "N+1"));
    EXPECT_TRUE(contains(message(R"({"N": 1, "b": [1, 0, 1]})"), "missing field 'f0'"));
    EXPECT_TRUE(contains(message(R"({"N": 1, "b": [1, 0, 1], "f0": [{"interval": ["0", "2"], "coeffs": ["1/0"]}]})"),
                         "f0[0].coeffs[0]"));
}

TEST(Cli, AnalyzeSwapStencil)
{
    const auto r = run("analyze '" + problem("swap.json") + "'");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_TRUE(contains(r.out, "m: 1"));
    EXPECT_TRUE(contains(r.out, "gamma1_1 = 1"));
    EXPECT_TRUE(contains(r.out, "end columns: dependent"));
    EXPECT_TRUE(contains(r.out, "codim Im R_Q^k: 3"));
    EXPECT_FALSE(contains(r.out, "REFUTED"));
}

TEST(Cli, OtherRegimeExitsWithTwo)
{
    const auto r = run("analyze '" + problem("identity.json") + "'");
    EXPECT_EQ(r.code, 2);
    EXPECT_TRUE(contains(r.out, "NonsingularBoth"));
    EXPECT_TRUE(contains(r.out, "Chapter I"));
    EXPECT_EQ(run("solve '" + problem("identity.json") + "'").code, 2);
}

TEST(Cli, MalformedFileExitsWithOne)
{
    const auto f = write_file("bad.json", R"({"N": 2, "b": ["1", "0", "1"], "f0": []})");
    const auto r = run("analyze '" + f + "'");
    EXPECT_EQ(r.code, 1);
    EXPECT_TRUE(contains(r.out, "field 'b'"));
    EXPECT_EQ(run("analyze '" + (work_dir() / "missing.json").string() + "'").code, 1);
}

TEST(Cli, SolveWorkedExample)
{
    const auto r = run("solve '" + problem("swap.json") + "' --out swap --samples 0.25");
    ASSERT_EQ(r.code, 0) << r.out;
    const auto csv = read_file("swap-solution.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,v,dv,w,f0");
    EXPECT_TRUE(contains(csv, "\n1,-0.5,-1,0,1\n1,-0.5,1,0,1\n"));
    const auto report = read_file("swap-report");
    EXPECT_TRUE(contains(report, "d1: 1\nd2: -1/2"));
    EXPECT_TRUE(contains(report, "t = 1, order 1: 2"));
}

TEST(Cli, ZeroDataGivesZeroCsv)
{
    const auto f = write_file("zero.json", R"({"N": 2, "b": [0, 1, 1, 1, 2],
        "f0": [{"interval": ["0", "3"], "coeffs": ["0"]}]})");
    ASSERT_EQ(run("solve '" + f + "' --out zero").code, 0);
    std::istringstream csv(read_file("zero-solution.csv"));
    std::string line;
    std::getline(csv, line);
    int rows = 0;
    while (std::getline(csv, line)) {
        EXPECT_EQ(line.substr(line.find(',')), ",0,0,0,0") << line;
        ++rows;
    }
    EXPECT_GT(rows, 20);
}

TEST(Cli, InfeasibleExitsWithThree)
{
    const auto r = run("solve '" + problem("rank_one_infeasible.json") + "' --out infeasible");
    EXPECT_EQ(r.code, 3);
    EXPECT_TRUE(contains(r.out, "status: Infeasible"));
    EXPECT_TRUE(contains(r.out, "anchor relation at m=1] = -1/2"));
    EXPECT_TRUE(fs::exists(work_dir() / "infeasible-report"));
}

TEST(Cli, ReportRoundTripIsByteIdentical)
{
    ASSERT_EQ(run("solve '" + problem("dependent_boundary.json") + "' --out first --samples 0.1").code, 0);
    ASSERT_EQ(run("solve '" + (work_dir() / "first-report").string() + "' --out second --samples 0.1").code, 0);
    EXPECT_EQ(read_file("first-solution.csv"), read_file("second-solution.csv"));
    EXPECT_EQ(read_file("first-report"), read_file("second-report"));
    ASSERT_EQ(run("solve '" + problem("dependent_boundary.json") + "' --out third --samples 0.1").code, 0);
    EXPECT_EQ(read_file("first-solution.csv"), read_file("third-solution.csv"));
}

TEST(Cli, SpectrumAndVerify)
{
    const auto s = run("spectrum '" + problem("independent.json") + "' --n 8");
    EXPECT_EQ(s.code, 0) << s.out;
    EXPECT_TRUE(contains(s.out, "agreement within 1e-8: yes"));
    const auto v = run("verify --level fast");
    EXPECT_EQ(v.code, 0) << v.out;
    EXPECT_FALSE(contains(v.out, "[FAIL]"));
    EXPECT_TRUE(contains(v.out, "[PASS] 10."));
}
