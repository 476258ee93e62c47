#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli_app.hpp"

using isoprofile::cli::json;
using isoprofile::cli::run;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

json parse(const Result& r) { return json::parse(r.out); }

const json* row_at(const json& doc, double beta, double tol = 1e-9) {
    for (const auto& row : doc["table"]["rows"])
        if (std::abs(row[0].get<double>() - beta) <= tol) return &row;
    return nullptr;
}

} // namespace

TEST(Cli, ProfileOfTheTwoSphereContainsTheEquator) {
    const Result r = invoke({"profile", "--spaceform", "n=2", "kappa=1", "--grid", "9"});
    ASSERT_EQ(r.code, 0) << r.err;
    const json doc = parse(r);
    EXPECT_EQ(doc["schema"], 1);
    EXPECT_EQ(doc["table"]["rows"].size(), 9u);
    const json* row = row_at(doc, 0.5);
    ASSERT_NE(row, nullptr);
    EXPECT_NEAR((*row)[1].get<double>(), 0.5, 1e-12);
    EXPECT_NEAR((*row)[2].get<double>(), 0.0, 1e-12);
}

TEST(Cli, WarpProfileUsesAbsoluteVolume) {
    const Result r = invoke({"profile", "--warp", "sin", "--n", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    const json doc = parse(r);
    const json* row = row_at(doc, 2.0 * std::numbers::pi, 1e-9);
    ASSERT_NE(row, nullptr);
    EXPECT_NEAR((*row)[1].get<double>(), 2.0 * std::numbers::pi, 1e-9);
    EXPECT_TRUE((*row)[3].is_null());
}

TEST(Cli, EuclideanDiskPerimeter) {
    const Result r = invoke({"profile", "--spaceform", "n=2", "kappa=0", "--h2"});
    ASSERT_EQ(r.code, 0) << r.err;
    const json doc = parse(r);
    const json* row = row_at(doc, std::numbers::pi, 1e-12);
    ASSERT_NE(row, nullptr);
    EXPECT_NEAR((*row)[1].get<double>(), 2.0 * std::numbers::pi, 1e-12);
}

TEST(Cli, ConstantsTable) {
    const auto value = [](const std::vector<std::string>& args, std::size_t col) {
        const Result r = invoke(args);
        EXPECT_EQ(r.code, 0) << r.err;
        return json::parse(r.out)["table"]["rows"][0][col].get<double>();
    };
    EXPECT_NEAR(value({"constants", "--n", "2", "--d", "3.141592653589793"}, 5), 1.0, 1e-12);
    EXPECT_NEAR(value({"constants", "--n", "2", "--d", "1.5707963267948966"}, 5), 1.189207, 1e-6);
    EXPECT_NEAR(value({"constants", "--n", "2", "--kappa", "0", "--d", "1"}, 4), 1.147793, 1e-6);
}

TEST(Cli, ConstantsOutsideBonnetMyersRange) {
    const Result r = invoke({"constants", "--n", "2", "--d", "4"});
    EXPECT_NE(r.code, 0);
    EXPECT_NE(r.err.find("diameter"), std::string::npos);
}

TEST(Cli, VerifyExitCodesFollowGlobalPass) {
    const Result pass = invoke({"verify", "supersolution-2nd", "--spaceform", "n=3", "kappa=1"});
    EXPECT_EQ(pass.code, 0);
    EXPECT_TRUE(parse(pass)["global_pass"].get<bool>());
    EXPECT_EQ(parse(pass)["verdicts"].size(), 512u);

    const Result fail = invoke({"verify", "supersolution-1st", "--spaceform", "n=2", "kappa=1", "--d", "1.5707963"});
    EXPECT_EQ(fail.code, 1);
    const json doc = parse(fail);
    EXPECT_FALSE(doc["global_pass"].get<bool>());
    for (const auto& v : doc["verdicts"]) {
        EXPECT_EQ(v["verdict"], "violation");
        EXPECT_NEAR(v["residual"].get<double>(), -0.207107, 1e-4);
    }
}

TEST(Cli, MorganJohnsonOnThePerturbedSphere) {
    const Result r = invoke({"verify", "morgan-johnson", "--warp", "sin-perturbed", "--eps", "0.05"});
    EXPECT_EQ(r.code, 0) << r.err;
    const json doc = parse(r);
    EXPECT_EQ(doc["verdicts"].size(), 256u);
    EXPECT_NEAR(doc["config"]["target"]["ricci_lower_bound"].get<double>(), 1.0, 1e-9);
}

TEST(Cli, CandidateSuitesNeedTheMinimizerFlag) {
    const Result r = invoke({"verify", "levy-gromov", "--warp", "sin-perturbed", "--grid", "32"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("--assume-minimizer"), std::string::npos);
    const Result ok = invoke({"verify", "levy-gromov", "--warp", "sin-perturbed", "--grid", "32", "--assume-minimizer"});
    EXPECT_EQ(ok.code, 0) << ok.err;
    EXPECT_EQ(parse(ok)["verdicts"][0]["witness"]["candidate"]["kind"], "cap@0");
}

TEST(Cli, BbgStatesTheConservativeDiameter) {
    const Result r = invoke({"verify", "bbg", "--warp", "sin-perturbed", "--eps", "0.02", "--grid", "32",
                             "--assume-minimizer"});
    EXPECT_EQ(r.code, 0) << r.err;
    const json doc = parse(r);
    EXPECT_TRUE(doc["config"].contains("note"));
    EXPECT_NEAR(doc["config"]["d"].get<double>(), doc["config"]["target"]["length"].get<double>(), 1e-15);
}

TEST(Cli, HeintzeKarcherCapsOfTheSphere) {
    const Result r = invoke({"verify", "heintze-karcher", "--spaceform", "n=3", "kappa=1", "--grid", "16"});
    EXPECT_EQ(r.code, 0) << r.err;
    for (const auto& v : parse(r)["verdicts"]) EXPECT_NEAR(v["residual"].get<double>(), 0.0, 1e-8);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(invoke({}).code, 2);
    EXPECT_EQ(invoke({"verify", "no-such-suite", "--spaceform", "n=2"}).code, 2);
    EXPECT_EQ(invoke({"verify", "levy-gromov"}).code, 2);
    EXPECT_EQ(invoke({"profile", "--spaceform", "n=2", "--warp", "sin"}).code, 2);
    EXPECT_EQ(invoke({"profile", "--spaceform", "n=2", "kappa=0"}).code, 2);
    EXPECT_EQ(invoke({"profile", "--spaceform", "dim=2"}).code, 2);
    EXPECT_EQ(invoke({"profile", "--spaceform", "n=two"}).code, 2);
    EXPECT_EQ(invoke({"profile", "--warp", "torus"}).code, 2);
    EXPECT_EQ(invoke({"profile", "--spaceform", "n=2", "--format", "xml"}).code, 2);
    EXPECT_EQ(invoke({"verify", "two-sided", "--spaceform", "n=2", "kappa=-1"}).code, 2);
    EXPECT_EQ(invoke({"verify", "supersolution-1st", "--spaceform", "n=2", "kappa=0", "--h2"}).code, 2);
    EXPECT_EQ(invoke({"profile", "--spaceform", "n=2", "--grid", "2"}).code, 2);
}

TEST(Cli, HelpExitsCleanly) {
    const Result r = invoke({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("verify"), std::string::npos);
}

TEST(Cli, CsvMirrorsVerdicts) {
    const Result r = invoke({"verify", "supersolution-2nd", "--spaceform", "n=2", "kappa=1", "--grid", "5",
                             "--format", "csv"});
    ASSERT_EQ(r.code, 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "beta,verdict,residual,witness");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        EXPECT_NE(line.find(",pass,"), std::string::npos);
        EXPECT_NE(line.find("p="), std::string::npos);
    }
    EXPECT_EQ(rows, 5);
    EXPECT_EQ(r.out.find('\r'), std::string::npos);
}

TEST(Cli, NumbersUseTwelveDigitExponentFormat) {
    const Result r = invoke({"profile", "--spaceform", "n=2", "kappa=1", "--grid", "3", "--format", "csv"});
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    EXPECT_EQ(line.substr(0, line.find(',')), "1.464466094067e-01");
}

TEST(Cli, OutputFileAndThreadsAreByteStable) {
    const auto dir = std::filesystem::temp_directory_path();
    const auto a = (dir / "isoprofile_cli_a.json").string();
    const auto b = (dir / "isoprofile_cli_b.json").string();
    const std::vector<std::string> base{"verify", "supersolution-2nd", "--warp", "sin-perturbed", "--eps", "0.02",
                                        "--grid", "64", "--assume-minimizer"};
    auto with = [&](std::vector<std::string> extra) {
        std::vector<std::string> args = base;
        args.insert(args.end(), extra.begin(), extra.end());
        return args;
    };
    EXPECT_EQ(invoke(with({"--output", a, "--threads", "1"})).code, 0);
    EXPECT_EQ(invoke(with({"--output", b, "--threads", "4"})).code, 0);
    std::ifstream fa(a), fb(b);
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    EXPECT_FALSE(sa.str().empty());
    EXPECT_EQ(sa.str(), sb.str());
    std::filesystem::remove(a);
    std::filesystem::remove(b);
}

TEST(Cli, ThreadsEnvironmentFallback) {
    ::setenv("ISO_PROFILE_THREADS", "zero", 1);
    EXPECT_EQ(invoke({"profile", "--spaceform", "n=2", "--grid", "5"}).code, 2);
    ::setenv("ISO_PROFILE_THREADS", "3", 1);
    EXPECT_EQ(invoke({"profile", "--spaceform", "n=2", "--grid", "5"}).code, 0);
    ::unsetenv("ISO_PROFILE_THREADS");
}

TEST(Cli, BinaryExitStatus) {
    const std::string bin = ISOPROFILE_CLI_PATH;
    const std::string quiet = " > /dev/null 2>&1";
    const int pass = std::system((bin + " verify supersolution-2nd --spaceform n=3 kappa=1" + quiet).c_str());
    const int fail =
        std::system((bin + " verify supersolution-1st --spaceform n=2 kappa=1 --d 1.5707963" + quiet).c_str());
    ASSERT_TRUE(WIFEXITED(pass) && WIFEXITED(fail));
    EXPECT_EQ(WEXITSTATUS(pass), 0);
    EXPECT_EQ(WEXITSTATUS(fail), 1);
}
