#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>

namespace fs = std::filesystem;

namespace {
const std::string kCli = YMHK_CLI_PATH;
const std::string kConfigs = YMHK_CONFIG_DIR;

struct Result {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Unique per process so parallel ctest runs do not collide.
fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ymhk_cli_test_" + std::to_string(::getpid()) + "_" + name);
  fs::remove_all(p);
  return p;
}

Result invoke(const std::string& args, const std::string& env = "") {
  static int calls = 0;
  const fs::path dir = scratch("io" + std::to_string(calls++));
  fs::create_directories(dir);
  const std::string cmd = env + " \"" + kCli + "\" " + args + " >" + (dir / "out").string() + " 2>" +
                          (dir / "err").string();
  const int status = std::system(cmd.c_str());
  return {WEXITSTATUS(status), slurp(dir / "out"), slurp(dir / "err")};
}
}  // namespace

TEST(Cli, MissingConfigIsAUsageError) {
  const auto r = invoke("run --config /no/such/file.cfg");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("/no/such/file.cfg"), std::string::npos);
}

TEST(Cli, BadArgumentsAreUsageErrors) {
  EXPECT_EQ(invoke("").code, 2);
  EXPECT_EQ(invoke("gradcheck SU3 1 3 42").code, 2);
  EXPECT_EQ(invoke("gradcheck SU2 1 9 42").code, 2);
  EXPECT_EQ(invoke("diag nonsense").code, 2);
  EXPECT_EQ(invoke("oracle " + kConfigs + "/su2_k1.cfg").code, 2);
}

TEST(Cli, DryRunTouchesNothing) {
  const auto out = scratch("dry");
  const auto r = invoke("run " + kConfigs + "/u1_k1.cfg --dry-run --out-dir " + out.string());
  EXPECT_EQ(r.code, 0);
  EXPECT_FALSE(fs::exists(out));
}

TEST(Cli, RunWritesTrajectorySnapshotsAndManifest) {
  const auto out = scratch("run");
  const auto r = invoke("run --config " + kConfigs + "/u1_k1.cfg --out-dir " + out.string());
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream csv(slurp(out / "trajectory.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "t,e_kF,e_ku,e_0F,e_0u,total_k,total_0,sup_F,sup_gradu,sup_blowup,u_l2,F_lp,gradu_lp,dt");
  double prev = -1.0;
  int rows = 0;
  while (std::getline(csv, line)) {
    const double t = std::stod(line.substr(0, line.find(',')));
    EXPECT_GT(t, prev);
    prev = t;
    ++rows;
  }
  EXPECT_GT(rows, 10);
  EXPECT_TRUE(fs::exists(out / "snapshot_000000.bin"));
  const std::string manifest = slurp(out / "manifest.json");
  EXPECT_NE(manifest.find("\"status\": \"completed\""), std::string::npos);
  EXPECT_NE(manifest.find("\"seed\": 7"), std::string::npos);
  EXPECT_NE(manifest.find("wall_seconds"), std::string::npos);
}

TEST(Cli, OutDirFallsBackToEnvironment) {
  const auto out = scratch("env");
  const auto r = invoke("run " + kConfigs + "/su2_k1.cfg", "YMHK_OUT_DIR=" + out.string());
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(out / "trajectory.csv"));
}

TEST(Cli, SingleWorkerRunsAreBitwiseIdentical) {
  const auto a = scratch("det_a"), b = scratch("det_b");
  ASSERT_EQ(invoke("run " + kConfigs + "/su2_k1.cfg --workers 1 --out-dir " + a.string()).code, 0);
  ASSERT_EQ(invoke("run " + kConfigs + "/su2_k1.cfg --workers 1 --out-dir " + b.string()).code, 0);
  EXPECT_EQ(slurp(a / "trajectory.csv"), slurp(b / "trajectory.csv"));
  for (const auto& entry : fs::directory_iterator(a)) {
    if (entry.path().extension() == ".bin") {
      EXPECT_EQ(slurp(entry.path()), slurp(b / entry.path().filename())) << entry.path();
    }
  }
}

TEST(Cli, SeedOverrideChangesTheRun) {
  const auto a = scratch("seed_a"), b = scratch("seed_b");
  ASSERT_EQ(invoke("run " + kConfigs + "/su2_k1.cfg --out-dir " + a.string()).code, 0);
  ASSERT_EQ(invoke("run " + kConfigs + "/su2_k1.cfg --seed 12 --out-dir " + b.string()).code, 0);
  EXPECT_NE(slurp(a / "trajectory.csv"), slurp(b / "trajectory.csv"));
}

TEST(Cli, GradcheckReport) {
  const auto out = scratch("grad");
  const auto r = invoke("gradcheck SU2 1 3 42 --out-dir " + out.string());
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("\"pass\": true"), std::string::npos);
  EXPECT_TRUE(fs::exists(out / "gradcheck.json"));
}

TEST(Cli, GreenReport) {
  const auto r = invoke("green 8");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("\"name\": \"green\""), std::string::npos);
}

TEST(Cli, ScaleReport) {
  const auto r = invoke("scale 1 2 7");
  EXPECT_EQ(r.code, 0) << r.out;
}

TEST(Cli, OracleReport) {
  const auto r = invoke("oracle --config " + kConfigs + "/u1_k1.cfg");
  EXPECT_EQ(r.code, 0) << r.out;
}

TEST(Cli, DiagnosticSuites) {
  for (const std::string suite : {"kato", "blowup", "lp"}) {
    const auto r = invoke("diag " + suite);
    EXPECT_EQ(r.code, 0) << suite << '\n' << r.out;
  }
}
