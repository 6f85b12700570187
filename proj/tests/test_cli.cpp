#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "cholesteric/errors.hpp"
#include "cholesteric/kernel_io.hpp"
#include "cholesteric/kernels.hpp"
#include "run_config.hpp"

using namespace chol;
using namespace chol::cli;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("chol_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }

  static std::string slurp(const std::string& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
  }

  int exec(const RunConfig& cfg) {
    out_.str("");
    err_.str("");
    return run(cfg, out_, err_);
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

RunConfig command(const std::string& name) {
  RunConfig c;
  c.command = name;
  return c;
}

}  // namespace

TEST_F(Cli, BulkSolveEqualCouplingGivesUnitRatio) {
  RunConfig c = command("bulk-solve");
  c.tau = 0.12;
  c.alpha = 1.0;
  ASSERT_EQ(exec(c), kOk);
  EXPECT_NE(out_.str().find(" htp=1 "), std::string::npos) << out_.str();
  EXPECT_NE(out_.str().find("s0=0.70410776462"), std::string::npos) << out_.str();
}

TEST_F(Cli, BulkSolveIsotropicIsNumericalFailure) {
  RunConfig c = command("bulk-solve");
  c.tau = 0.5;
  c.alpha = 1.0;
  EXPECT_EQ(exec(c), kNumericalFailure);
  EXPECT_NE(err_.str().find("isotropic"), std::string::npos);
}

TEST_F(Cli, BulkMapEqualCouplingRowIsOnes) {
  RunConfig c = command("bulk-map");
  c.tau_range = parse_range("0.02:0.14:7", "tau");
  c.alpha_range = parse_range("0.5:1.5:3", "alpha");
  ASSERT_EQ(exec(c), kOk);
  std::istringstream is(out_.str());
  const HtpMap m = read_htp_csv(is);
  ASSERT_EQ(m.htp.rows(), 3);
  ASSERT_EQ(m.htp.cols(), 7);
  for (int j = 0; j < 7; ++j) EXPECT_NEAR(m.htp(1, j), 1.0, 1e-8);
}

TEST_F(Cli, BulkMapAllIsotropicFails) {
  RunConfig c = command("bulk-map");
  c.tau_range = parse_range("0.5:0.6:3", "tau");
  EXPECT_EQ(exec(c), kNumericalFailure);
  EXPECT_NE(err_.str().find("empty nematic range"), std::string::npos);
}

TEST_F(Cli, PlotDataRoundTrip) {
  RunConfig c = command("bulk-map");
  c.tau_range = parse_range("0.1:0.2:3", "tau");  // last column isotropic
  c.alpha_range = parse_range("0.15:2:4", "alpha");
  c.out = path("map.csv");
  ASSERT_EQ(exec(c), kOk);
  std::ifstream csv(path("map.csv")), mat(path("map.matrix"));
  ASSERT_TRUE(csv && mat);
  const HtpMap a = read_htp_csv(csv), b = read_htp_matrix(mat);
  ASSERT_EQ(a.taus, b.taus);
  ASSERT_EQ(a.alphas, b.alphas);
  for (Eigen::Index i = 0; i < a.htp.size(); ++i) {
    const double x = a.htp.data()[i], y = b.htp.data()[i];
    if (std::isnan(x)) {
      EXPECT_TRUE(std::isnan(y));
    } else {
      EXPECT_EQ(x, y);
    }
  }
  EXPECT_TRUE(std::isnan(a.htp(0, 2)));
  EXPECT_TRUE(fs::exists(path("map.csv.manifest.json")));
}

TEST_F(Cli, PlotDataUnwritablePathNamesIt) {
  const HtpMap m = htp_map({0.1}, {1.0});
  try {
    emit_plotdata(m, path("missing/dir/map.csv"));
    FAIL() << "expected runtime_error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("missing/dir/map.csv"), std::string::npos);
  }
}

TEST_F(Cli, MalformedKernelNamesTheKey) {
  write("bad.json", R"({"HH": {"k1": {"family": "gaussian", "amplitude": 1, "widht": 1}},
                       "envelope": {"family": "zero"}})");
  RunConfig c = command("frank");
  c.kernel = path("bad.json");
  EXPECT_EQ(exec(c), kConfigError);
  EXPECT_NE(err_.str().find("HH.k1.widht"), std::string::npos) << err_.str();
}

TEST_F(Cli, MissingKernelFileIsConfigError) {
  RunConfig c = command("frank");
  c.kernel = path("nope.json");
  EXPECT_EQ(exec(c), kConfigError);
}

TEST_F(Cli, FrankOnDemoKernelFile) {
  write("demo.json", kernel_config_json(KernelSet::demo(), kDemoRho0));
  RunConfig a = command("frank");
  RunConfig b = a;
  b.kernel = path("demo.json");
  ASSERT_EQ(exec(a), kOk);
  const std::string builtin = out_.str();
  ASSERT_EQ(exec(b), kOk);
  EXPECT_EQ(out_.str(), builtin);
  EXPECT_EQ(builtin.substr(0, builtin.find('\n')), "K11,K22,K33,beta,q");
}

TEST_F(Cli, ValidateKernelsExitCodes) {
  ASSERT_EQ(exec(command("validate-kernels")), kOk);
  EXPECT_NE(out_.str().find("PASS"), std::string::npos);
  KernelSet bad = KernelSet::demo();
  bad.HD = bad.HD.scaled(-1.0);
  write("neg.json", kernel_config_json(bad, 0.2));
  RunConfig c = command("validate-kernels");
  c.kernel = path("neg.json");
  EXPECT_EQ(exec(c), kAssumptionViolation);
  EXPECT_NE(out_.str().find("FAIL"), std::string::npos);
  c.command = "gamma";
  c.grid = 8;
  EXPECT_EQ(exec(c), kAssumptionViolation);
}

TEST_F(Cli, GammaWritesCsvAndManifest) {
  RunConfig c = command("gamma");
  c.grid = 16;
  c.eps_list = {0.5, 0.25};
  c.out = path("g");
  ASSERT_EQ(exec(c), kOk) << err_.str();
  const std::string csv = slurp(path("g.csv"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "eps,F_eps_recovery,F_OF,gap,m_minimizer,s0_dev,xi_lock_dev,status");
  const auto man = nlohmann::json::parse(slurp(path("g.manifest.json")));
  EXPECT_EQ(man["command"], "gamma");
  EXPECT_EQ(man["derived"]["m_star"], 0.5);
  EXPECT_EQ(man["outputs"][0], path("g.csv"));
}

TEST_F(Cli, MinimizeFromHelixKeepsWinding) {
  RunConfig c = command("minimize");
  c.grid = 16;
  c.eps = 0.5;
  c.init = "helix:0.5";
  c.out = path("m");
  ASSERT_EQ(exec(c), kOk) << err_.str();
  EXPECT_NE(out_.str().find(" m=0.5 "), std::string::npos) << out_.str();
  EXPECT_TRUE(fs::exists(path("m.bin")));
  EXPECT_TRUE(fs::exists(path("m.trace.csv")));
  EXPECT_TRUE(fs::exists(path("m.manifest.json")));
}

TEST_F(Cli, SeededRunsAreByteIdentical) {
  RunConfig c = command("gamma");
  c.grid = 16;
  c.eps_list = {0.5};
  c.run_minimizer = true;
  c.starts = 2;
  c.seed = 7;
  c.max_iterations = 150;
  c.out = path("a");
  ASSERT_EQ(exec(c), kOk) << err_.str();
  c.out = path("b");
  ASSERT_EQ(exec(c), kOk) << err_.str();
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));

  RunConfig m = command("minimize");
  m.grid = 16;
  m.eps = 0.5;
  m.seed = 3;
  m.max_iterations = 100;
  m.out = path("ma");
  ASSERT_EQ(exec(m), kOk);
  m.out = path("mb");
  ASSERT_EQ(exec(m), kOk);
  EXPECT_EQ(slurp(path("ma.trace.csv")), slurp(path("mb.trace.csv")));
  EXPECT_EQ(slurp(path("ma.bin")), slurp(path("mb.bin")));
}

TEST(RunConfig, StrictParsing) {
  auto key_of = [](const char* text) {
    try {
      parse_run_config(nlohmann::json::parse(text));
    } catch (const ConfigError& e) {
      return e.key();
    }
    return std::string("<none>");
  };
  EXPECT_EQ(key_of(R"({"command": "frank", "tua": 0.1})"), "tua");
  EXPECT_EQ(key_of(R"({"command": "frank", "grid": 7})"), "grid");
  EXPECT_EQ(key_of(R"({"command": "frank", "grid": 8.5})"), "grid");
  EXPECT_EQ(key_of(R"({"command": "frank", "init": "helix:0.3"})"), "init");
  EXPECT_EQ(key_of(R"({"command": "fly"})"), "command");
  EXPECT_EQ(key_of(R"({"tau": 0.1})"), "command");
  EXPECT_EQ(key_of(R"({"command": "gamma", "eps_list": [0.5, -1]})"), "eps_list");
  EXPECT_EQ(key_of(R"({"command": "bulk-map", "tau_range": "0.1:0.2"})"), "tau_range");
  EXPECT_EQ(key_of(R"({"command": "minimize", "seed": -3})"), "seed");
  EXPECT_EQ(key_of(R"({"command": "minimize", "quad_degree": 5})"), "quad_degree");
  EXPECT_EQ(key_of(R"({"command": "frank", "eps": 0.25, "tau": 0.1})"), "<none>");
}

TEST(RunConfig, JsonRoundTrip) {
  RunConfig c;
  c.command = "gamma";
  c.tau = 0.08;
  c.eps_list = {0.5, 0.125};
  c.seed = 99;
  c.init = "helix:1.5";
  c.quad_degree = 63;
  const RunConfig d = parse_run_config(c.to_json());
  EXPECT_EQ(d.to_json(), c.to_json());
}

TEST(Range, ParseAndValues) {
  const Range r = parse_range("0.1:0.3:3", "tau");
  const auto v = r.values();
  ASSERT_EQ(v.size(), 3u);
  EXPECT_DOUBLE_EQ(v[1], 0.2);
  EXPECT_EQ(parse_range("0.5:0.9:1", "x").values(), std::vector<double>{0.5});
  EXPECT_THROW(parse_range("0.1:x:3", "tau"), ConfigError);
  EXPECT_THROW(parse_range("0.1:0.2:0", "tau"), ConfigError);
  EXPECT_THROW(parse_range("0.1:0.2:2.5", "tau"), ConfigError);
}
