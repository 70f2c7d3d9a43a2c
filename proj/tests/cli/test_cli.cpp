#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "config.hpp"
#include "metriplectic/error.hpp"

namespace fs = std::filesystem;
namespace cli = metriplectic::cli;

namespace {

const fs::path kConfigs = METRIPLECTIC_CONFIG_DIR;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("metriplectic_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_config(const std::string& name, const std::string& text) {
    fs::create_directories(dir_ / "cfg");
    const auto path = dir_ / "cfg" / name;
    std::ofstream(path) << text;
    return path;
  }

  int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv = {"metriplectic"};
    for (const auto& a : args) argv.push_back(a.c_str());
    out_.str("");
    err_.str("");
    return cli::run_cli(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> comments;

  [[nodiscard]] std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw std::runtime_error("no column " + name);
  }
};

Csv read_csv(const fs::path& path) {
  Csv csv;
  std::ifstream is(path);
  std::string line;
  std::getline(is, line);
  std::stringstream hs(line);
  for (std::string cell; std::getline(hs, cell, ',');) csv.header.push_back(cell);
  while (std::getline(is, line)) {
    if (!line.empty() && line[0] == '#') {
      csv.comments.push_back(line);
      continue;
    }
    std::stringstream ls(line);
    std::vector<double> row;
    for (std::string cell; std::getline(ls, cell, ',');) row.push_back(std::stod(cell));
    csv.rows.push_back(std::move(row));
  }
  return csv;
}

std::string slurp(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_F(CliTest, ConservativePistonKeepsEnergy) {
  ASSERT_EQ(run({"simulate", "--config", (kConfigs / "piston_conservative.yaml").string(), "--out", dir_.string()}),
            0)
      << err_.str();
  const auto csv = read_csv(dir_ / "piston_conservative.csv");
  const auto h = csv.column("H");
  const double h0 = csv.rows.front()[h];
  EXPECT_LE(std::abs(csv.rows.back()[h] - h0) / std::abs(h0), 1e-8);
  EXPECT_EQ(csv.header.front(), "t");
  EXPECT_EQ(csv.header[1], "q_1");
  EXPECT_TRUE(fs::exists(dir_ / "piston_conservative_summary.json"));
}

TEST_F(CliTest, TwoPistonEntropyNondecreasing) {
  ASSERT_EQ(run({"simulate", "--config", (kConfigs / "two_pistons.yaml").string(), "--out", dir_.string()}), 0)
      << err_.str();
  const auto csv = read_csv(dir_ / "two_pistons.csv");
  const auto s = csv.column("S_total");
  EXPECT_NO_THROW((void)csv.column("T_2"));
  for (std::size_t k = 1; k < csv.rows.size(); ++k) EXPECT_GE(csv.rows[k][s] - csv.rows[k - 1][s], -1e-12) << k;
}

TEST_F(CliTest, NegativeMassIsConfigErrorWithoutOutput) {
  const auto cfg = write_config("neg.yaml", "system: piston\nparameters: {mass: -1.0}\n");
  EXPECT_EQ(run({"simulate", "--config", cfg.string(), "--out", (dir_ / "out").string()}), 1);
  EXPECT_FALSE(fs::exists(dir_ / "out"));
  const std::string diagnostics = err_.str();
  EXPECT_NE(diagnostics.find("code=ConfigError"), std::string::npos);
  EXPECT_EQ(std::count(diagnostics.begin(), diagnostics.end(), '\n'), 1);
}

TEST_F(CliTest, MalformedYamlIsConfigError) {
  const auto cfg = write_config("broken.yaml", "system: [piston\n");
  EXPECT_EQ(run({"simulate", "--config", cfg.string(), "--out", (dir_ / "out").string()}), 1);
  EXPECT_FALSE(fs::exists(dir_ / "out"));
}

TEST_F(CliTest, UnknownKeyIsConfigError) {
  const auto cfg = write_config("typo.yaml", "system: piston\nparameters: {mas: 1.0}\n");
  EXPECT_EQ(run({"simulate", "--config", cfg.string(), "--out", (dir_ / "out").string()}), 1);
  EXPECT_NE(err_.str().find("mas"), std::string::npos);
}

TEST_F(CliTest, InadmissibleInitialStateIsConfigError) {
  const auto cfg = write_config("wall.yaml", "system: piston\ninitial_state: {q: [-1.0], p: [0.0], S: 0.0}\n");
  EXPECT_EQ(run({"simulate", "--config", cfg.string(), "--out", (dir_ / "out").string()}), 1);
}

TEST_F(CliTest, DomainViolationKeepsPartialCsv) {
  const auto cfg = write_config("crash.yaml",
                                "system: piston\n"
                                "parameters: {friction: 0.0}\n"
                                "initial_state: {q: [0.5], p: [-40.0], S: 0.0}\n"
                                "integrator: {dt: 0.05, t_final: 5.0}\n"
                                "output: {prefix: crash}\n");
  EXPECT_EQ(run({"simulate", "--config", cfg.string(), "--out", dir_.string()}), 2);
  const auto csv = read_csv(dir_ / "crash.csv");
  ASSERT_EQ(csv.comments.size(), 1u);
  EXPECT_EQ(csv.comments.front().rfind("# truncated", 0), 0u);
  EXPECT_FALSE(csv.rows.empty());
  EXPECT_NE(err_.str().find("code="), std::string::npos);
}

TEST_F(CliTest, CsvIsBitIdenticalAcrossRuns) {
  const auto a = dir_ / "a";
  const auto b = dir_ / "b";
  ASSERT_EQ(run({"simulate", "--config", (kConfigs / "rigid_body.yaml").string(), "--out", a.string()}), 0);
  ASSERT_EQ(run({"simulate", "--config", (kConfigs / "rigid_body.yaml").string(), "--out", b.string()}), 0);
  EXPECT_EQ(slurp(a / "rigid_body.csv"), slurp(b / "rigid_body.csv"));
  EXPECT_EQ(slurp(a / "rigid_body.csv").find('\r'), std::string::npos);
}

TEST(CsvFormat, SeventeenSignificantDigits) {
  EXPECT_EQ(cli::format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(cli::format_number(2.0), "2");
  EXPECT_EQ(std::stod(cli::format_number(1.0 / 3.0)), 1.0 / 3.0);
}

TEST_F(CliTest, VerifyEquivalencePiston) {
  EXPECT_EQ(run({"verify", "--system", "piston", "--suite", "equivalence", "--seed", "42", "-n", "100"}), 0);
  EXPECT_NE(out_.str().find("\"pass\": true"), std::string::npos);
}

TEST_F(CliTest, VerifyUnknownSuitePrintsUsage) {
  EXPECT_EQ(run({"verify", "--system", "piston", "--suite", "bogus"}), 2);
  EXPECT_NE(err_.str().find("Usage"), std::string::npos);
}

TEST_F(CliTest, VerifyUnsupportedPairIsConfigurationError) {
  EXPECT_EQ(run({"verify", "--system", "fluid1d", "--suite", "jacobi", "-n", "2"}), 2);
  EXPECT_NE(err_.str().find("UnsupportedSuite"), std::string::npos);
}

TEST_F(CliTest, VerifyFlagsPlantedViolation) {
  EXPECT_EQ(run({"verify", "--spec", (kConfigs / "bad_lambda.yaml").string(), "--suite", "conservation", "-n",
                 "20"}),
            1);
  EXPECT_NE(out_.str().find("\"pass\": false"), std::string::npos);
}

TEST_F(CliTest, VerifyJobsDoNotChangeReport) {
  ASSERT_EQ(run({"verify", "--system", "two_pistons", "--suite", "symmetry", "-n", "30", "--jobs", "1"}), 0);
  const std::string serial = out_.str();
  ASSERT_EQ(run({"verify", "--system", "two_pistons", "--suite", "symmetry", "-n", "30", "--jobs", "3"}), 0);
  EXPECT_EQ(serial, out_.str());
}

TEST_F(CliTest, ComparePistonEngines) {
  const auto cfg = write_config("piston.yaml",
                                "system: piston\n"
                                "integrator: {dt: 1.0e-3, t_final: 1.0}\n"
                                "compare: {tolerance: 1.0e-8}\n");
  EXPECT_EQ(run({"compare", "--config", cfg.string(), "--out", dir_.string()}), 0) << out_.str();
  EXPECT_TRUE(fs::exists(dir_ / "piston_euler_lagrange.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "piston_bracket.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "piston_compare.json"));
}

TEST_F(CliTest, CompareChemicalIdentical) {
  const auto cfg = write_config("chem.yaml",
                                "system: chemical\n"
                                "integrator: {dt: 1.0e-2, t_final: 5.0}\n"
                                "compare: {tolerance: 1.0e-10}\n");
  EXPECT_EQ(run({"compare", "--config", cfg.string(), "--out", dir_.string()}), 0) << out_.str();
}

TEST_F(CliTest, CompareFluidEngines) {
  EXPECT_EQ(run({"compare", "--config", (kConfigs / "fluid1d.yaml").string(), "--out", dir_.string()}), 0)
      << out_.str();
  for (const char* file : {"fluid1d_euler_lagrange.csv", "fluid1d_bracket.csv"}) {
    const auto csv = read_csv(dir_ / file);
    const auto s = csv.column("S_total");
    for (std::size_t k = 1; k < csv.rows.size(); ++k) {
      ASSERT_GE(csv.rows[k][s] - csv.rows[k - 1][s], -1e-12) << file << " row " << k;
    }
  }
}

TEST(Config, DefaultsForEverySystem) {
  for (const auto& name : cli::system_names()) {
    EXPECT_NO_THROW((void)cli::default_system(name)) << name;
  }
  try {
    (void)cli::default_system("nope");
    FAIL();
  } catch (const metriplectic::Error& e) {
    EXPECT_EQ(e.code(), metriplectic::ErrorCode::ConfigError);
  }
}

TEST(Config, FirstFormOnlyForSimpleSystems) {
  YAML::Node root = YAML::Load("system: chemical\nbracket_form: first\n");
  EXPECT_THROW((void)cli::scenario_from_yaml(root), metriplectic::Error);
  root = YAML::Load("system: piston\nbracket_form: first\n");
  EXPECT_EQ(cli::scenario_from_yaml(root).integrator.engine_options.bracket_form, metriplectic::BracketForm::First);
}

TEST(Config, ShippedConfigsLoad) {
  for (const char* name : {"piston.yaml", "piston_conservative.yaml", "two_pistons.yaml", "chemical.yaml",
                           "rigid_body.yaml", "fluid1d.yaml"}) {
    EXPECT_NO_THROW((void)cli::load_scenario(kConfigs / name)) << name;
  }
}
