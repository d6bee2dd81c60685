#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const fs::path kFixtures{FLATTOP_FIXTURES};

int run(const std::string& args) {
    const std::string cmd = std::string(FLATTOP_CLI) + " " + args + " 2>/dev/null >/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("flattop_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string out(const std::string& name) const { return (dir_ / name).string(); }
    static std::string fixture(const std::string& name) { return (kFixtures / name).string(); }

    fs::path dir_;
};

nlohmann::json spectrum_header(const std::string& path) {
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    return nlohmann::json::parse(line.substr(2));
}

}  // namespace

TEST_F(Cli, AcfMatchesBruteForceValues) {
    for (const char* input : {"ramp4.csv", "ramp4_noheader.csv"}) {
        ASSERT_EQ(run("acf " + fixture(input) + " --out " + out("acf.csv")), 0);
        std::ifstream in(out("acf.csv"));
        std::string header;
        std::getline(in, header);
        EXPECT_EQ(header, "lag,gamma,rho,threshold");
        const double expected[] = {1.25, 0.3125, -0.375, -0.5625};
        for (double g : expected) {
            std::string line;
            ASSERT_TRUE(std::getline(in, line));
            std::stringstream ss(line);
            std::string lag, gamma;
            std::getline(ss, lag, ',');
            std::getline(ss, gamma, ',');
            EXPECT_NEAR(std::stod(gamma), g, 1e-14);
        }
    }
}

TEST_F(Cli, AcfErrors) {
    EXPECT_EQ(run("acf " + fixture("empty.csv")), 2);
    EXPECT_EQ(run("acf " + fixture("constant.csv")), 3);
    EXPECT_EQ(run("acf " + fixture("ramp4.csv") + " --max-lag 9"), 2);
    EXPECT_EQ(run("acf /nonexistent/file.csv"), 2);
    EXPECT_EQ(run("frobnicate"), 2);
}

TEST_F(Cli, EstimateMovingAverageFixture) {
    ASSERT_EQ(run("estimate " + fixture("ma1_n10000.csv") + " --out " + out("spec.csv")), 0);
    const auto header = spectrum_header(out("spec.csv"));
    EXPECT_EQ(header["N"], 10000);
    EXPECT_EQ(header["m_hat"], 1);
    EXPECT_EQ(header["M_hat"], 2);
    EXPECT_EQ(header["c_thresh"], 2.0);
    EXPECT_EQ(header["k_n"], 5);
    EXPECT_EQ(header["capped"], false);

    std::ifstream in(out("spec.csv"));
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    EXPECT_EQ(line, "omega,f_hat");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 512);
}

TEST_F(Cli, EstimateClipAndBreakpoint) {
    ASSERT_EQ(run("estimate " + fixture("ma1_n10000.csv") + " --clip --grid 128 --k-n 2 --c-thresh 0.5 --out " +
                  out("clip.csv")),
              0);
    std::ifstream in(out("clip.csv"));
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    while (std::getline(in, line)) EXPECT_GE(std::stod(line.substr(line.find(',') + 1)), 0.0);

    ASSERT_EQ(run("estimate " + fixture("ma1_n10000.csv") + " --c-break 0.4 --out " + out("cb.csv")), 0);
    const auto header = spectrum_header(out("cb.csv"));
    const int m = header["m_hat"];
    EXPECT_EQ(header["M_hat"], static_cast<int>(std::ceil(m / 0.4)));
    EXPECT_EQ(header["c_break"], 0.4);
}

TEST_F(Cli, ConfigFileAndFlagOverride) {
    ASSERT_EQ(run("estimate " + fixture("ma1_n10000.csv") + " --config " + fixture("estimate_config.json") +
                  " --k-n 3 --out " + out("cfg.csv")),
              0);
    const auto header = spectrum_header(out("cfg.csv"));
    EXPECT_EQ(header["k_n"], 3);
    int rows = -2;
    std::ifstream in(out("cfg.csv"));
    for (std::string line; std::getline(in, line);) ++rows;
    EXPECT_EQ(rows, 64);
    EXPECT_EQ(run("estimate " + fixture("ma1_n10000.csv") + " --c-break 1.5"), 2);
    EXPECT_EQ(run("estimate " + fixture("constant.csv")), 3);
}

TEST_F(Cli, SimulateIsDeterministic) {
    ASSERT_EQ(run("simulate " + fixture("white_noise.json") + " --n 1000 --seed 3 --out " + out("a.csv")), 0);
    ASSERT_EQ(run("simulate " + fixture("white_noise.json") + " --n 1000 --seed 3 --out " + out("b.csv")), 0);
    EXPECT_EQ(slurp(out("a.csv")), slurp(out("b.csv")));
    std::ifstream in(out("a.csv"));
    int count = 0;
    for (std::string line; std::getline(in, line); ++count) EXPECT_TRUE(std::isfinite(std::stod(line)));
    EXPECT_EQ(count, 1000);
    EXPECT_EQ(run("simulate " + fixture("bad_xi.json") + " --n 100 --seed 1"), 2);
}

TEST_F(Cli, SimulateFeedsEstimate) {
    ASSERT_EQ(run("simulate " + fixture("ma1_model.json") + " --n 5000 --seed 11 --out " + out("x.csv")), 0);
    const std::string cmd = std::string(FLATTOP_CLI) + " estimate " + out("x.csv") + " --out " + out("s.csv") +
                            " 2>" + out("err.txt");
    ASSERT_EQ(std::system(cmd.c_str()), 0);
    EXPECT_EQ(slurp(out("err.txt")), "");
}

TEST_F(Cli, ExperimentOutputs) {
    ASSERT_EQ(run("experiment " + fixture("ar1_rate.json") + " --out-dir " + out("e1")), 0);
    ASSERT_EQ(run("experiment " + fixture("ar1_rate.json") + " --out-dir " + out("e2") + " --threads 3"), 0);
    for (const char* f : {"replicates.csv", "summary.csv", "fit.json"}) {
        EXPECT_EQ(slurp(dir_ / "e1" / f), slurp(dir_ / "e2" / f)) << f;
    }
    const auto fit = nlohmann::json::parse(slurp(dir_ / "e1" / "fit.json"));
    EXPECT_TRUE(fit["fit"].contains("fitted_A2"));
    EXPECT_NEAR(fit["fit"]["reference_A2"].get<double>(), 9.4912, 1e-4);
    EXPECT_EQ(run("experiment " + fixture("two_n.json") + " --out-dir " + out("e3")), 2);
    EXPECT_FALSE(fs::exists(dir_ / "e3"));
}
