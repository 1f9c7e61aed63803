#include <trigger/cli.hpp>

#include <json.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using trigger::cli::run;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string config(const std::string& name) {
    return std::string(TRIGGER_CONFIG_DIR) + "/" + name;
}

fs::path write_temp(const std::string& name, const std::string& text) {
    const fs::path path = fs::temp_directory_path() / ("trigger_cli_" + name);
    std::ofstream(path) << text;
    return path;
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        out.push_back(line);
    return out;
}

} // namespace

TEST(Cli, SurvivalConstantCase) {
    const auto r = invoke({"survival", "--config", config("constant.cfg")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0], "t,survival");
    EXPECT_EQ(rows[1].rfind("2,0.670320", 0), 0u) << rows[1];
}

TEST(Cli, PriceBlocks) {
    const auto r = invoke({"price", "--config", config("constant.cfg")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0], "block,price");
    EXPECT_EQ(rows[1].rfind("terminal,0.60653", 0), 0u) << rows[1];
}

TEST(Cli, MgfRows) {
    const auto r = invoke({"mgf", "--config", config("basket.cfg")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 5u);
    EXPECT_EQ(rows[0], "state,mgf");
}

TEST(Cli, TwoFirmGrid) {
    const auto r = invoke({"two-firm", "--config", config("two_firm.cfg")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 12u);
    EXPECT_EQ(rows[0], "t,density_A,density_B,survival_A,survival_B,first_default_survival,bond_A,bond_B");
    EXPECT_EQ(rows[1].rfind("0,", 0), 0u);
}

TEST(Cli, BasketSinglePremium) {
    const auto r = invoke({"basket", "--config", config("basket.cfg")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0], "k,b,c,premium");
    EXPECT_EQ(rows[1].rfind("1,0.1,1,0.73756", 0), 0u) << rows[1];
}

TEST(Cli, SweepSkipsDegenerateContagion) {
    const auto r = invoke({"sweep", "--config", config("basket.cfg")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = lines(r.out);
    EXPECT_EQ(rows[0], "k,b,c,premium");
    // 11 contagion values less b = 0.2, 0.25, 0.5; 3 shapes; 10 seniorities
    EXPECT_EQ(rows.size(), 1u + 8u * 3u * 10u);
    EXPECT_NE(r.err.find("skipped b = 0.2"), std::string::npos);
    EXPECT_NE(r.err.find("skipped b = 0.5"), std::string::npos);
}

TEST(Cli, JsonOutput) {
    const auto r = invoke({"basket", "--config", config("basket.cfg"), "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = nlohmann::json::parse(r.out);
    ASSERT_TRUE(doc.is_array());
    ASSERT_EQ(doc.size(), 1u);
    EXPECT_EQ(doc[0]["k"], 1);
    EXPECT_NEAR(doc[0]["premium"].get<double>(), 0.7376, 1e-4);
}

TEST(Cli, OutputFile) {
    const fs::path path = fs::temp_directory_path() / "trigger_cli_out.csv";
    fs::remove(path);
    const auto r = invoke({"survival", "--config", config("constant.cfg"), "--output", path.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(path);
    std::stringstream text;
    text << in.rdbuf();
    EXPECT_EQ(lines(text.str()).front(), "t,survival");
    fs::remove(path);
}

TEST(Cli, SimulateEchoesSeedAndIsReproducible) {
    const std::vector<std::string> args{"simulate", "--config", config("constant.cfg"), "--paths", "20000"};
    const auto a = invoke(args);
    const auto b = invoke(args);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_NE(a.err.find("seed: 7 paths: 20000"), std::string::npos);
    EXPECT_EQ(a.out, b.out);
    auto threaded = args;
    threaded.insert(threaded.end(), {"--workers", "3"});
    EXPECT_EQ(invoke(threaded).out, a.out);
    auto reseeded = args;
    reseeded.insert(reseeded.end(), {"--seed", "8"});
    const auto c = invoke(reseeded);
    EXPECT_NE(c.out, a.out);
    EXPECT_NE(c.err.find("seed: 8 paths: 20000"), std::string::npos);
}

TEST(Cli, ValidatePasses) {
    const auto r = invoke({"validate", "--config", config("constant.cfg")});
    EXPECT_EQ(r.code, 0) << r.out << r.err;
    const auto rows = lines(r.out);
    EXPECT_EQ(rows[0], "item,analytic,mc_mean,mc_std_error,z,status");
    for (std::size_t i = 1; i < rows.size(); ++i)
        EXPECT_NE(rows[i].find(",PASS"), std::string::npos) << rows[i];
}

TEST(Cli, ValidateFailureExitCode) {
    // One path has no sampling spread, so any discrepancy fails.
    const auto r = invoke({"validate", "--config", config("constant.cfg"), "--paths", "1"});
    EXPECT_EQ(r.code, trigger::cli::kValidationFailed);
    EXPECT_NE(r.out.find(",FAIL"), std::string::npos);
}

TEST(Cli, ConfigErrorNamesSectionAndKey) {
    const auto path = write_temp("unknown.cfg", "[chain]\nstates = [1]\nspeed = 3\n");
    const auto r = invoke({"survival", "--config", path.string()});
    EXPECT_EQ(r.code, trigger::cli::kConfigError);
    EXPECT_NE(r.err.find("chain.speed"), std::string::npos) << r.err;
    EXPECT_TRUE(r.out.empty());
    fs::remove(path);
}

TEST(Cli, MissingConfigFile) {
    const auto r = invoke({"survival", "--config", "/nonexistent/x.cfg"});
    EXPECT_EQ(r.code, trigger::cli::kConfigError);
}

TEST(Cli, DegenerateContagionExitCode) {
    const auto path = write_temp("degenerate.cfg", "[chain]\nstates = [0.3]\n[contract]\nn = 10\nb = 0.25\nc = 1\nT = 5\n");
    const auto r = invoke({"basket", "--config", path.string()});
    EXPECT_EQ(r.code, trigger::cli::kDegenerate);
    EXPECT_NE(r.err.find("1/4"), std::string::npos) << r.err;
    fs::remove(path);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(invoke({"survival"}).code, trigger::cli::kFailure);
    EXPECT_EQ(invoke({"price-all", "--config", config("constant.cfg")}).code, trigger::cli::kFailure);
    EXPECT_EQ(invoke({"survival", "--config", config("constant.cfg"), "--format", "xml"}).code,
              trigger::cli::kFailure);
    EXPECT_EQ(invoke({"--help"}).code, trigger::cli::kSuccess);
}

TEST(Cli, MissingSectionForCommand) {
    const auto r = invoke({"two-firm", "--config", config("constant.cfg")});
    EXPECT_EQ(r.code, trigger::cli::kConfigError);
    EXPECT_NE(r.err.find("two_firm"), std::string::npos) << r.err;
}
