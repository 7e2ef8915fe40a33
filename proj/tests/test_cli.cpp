// Runs the plateau_cli binary and checks exit codes, outputs and determinism.

#include <gtest/gtest.h>
#include <json.hpp>
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct CliRun {
  int code = -1;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::path(::testing::TempDir()) / (std::string("plateau_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  // `env` is prepended verbatim, e.g. "PLATEAU_SEED=3 ".
  CliRun run(const std::string& args, const std::string& env = "") {
    const fs::path o = dir_ / "stdout.txt", e = dir_ / "stderr.txt";
    const std::string cmd = env + "'" PLATEAU_CLI_PATH "' " + args + " >'" + o.string() + "' 2>'" + e.string() + "'";
    const int st = std::system(cmd.c_str());
    CliRun r;
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    r.out = slurp(o);
    r.err = slurp(e);
    return r;
  }
  std::string out(const std::string& name) const { return "--out '" + (dir_ / name).string() + "'"; }
  json load(const std::string& rel) const { return json::parse(slurp(dir_ / rel)); }
  fs::path dir_;
};

// Real root of k^3 - k + 1: minus the plastic number, by Cardano.
double plastic_root() {
  const double s = std::sqrt(69.0);
  return -(std::cbrt((9 + s) / 18) + std::cbrt((9 - s) / 18));
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ULL;
  return h;
}

TEST_F(Cli, HelpExitsZero) {
  const auto r = run("--help");
  EXPECT_EQ(r.code, 0);
  for (const char* g : {"elastica", "boundary", "bjorling", "helicoid", "audit", "sweep"})
    EXPECT_NE(r.out.find(g), std::string::npos) << g;
}

TEST_F(Cli, CirclesSingleRoot) {
  const auto r = run("elastica circles --sigma 1 --alpha 1 --beta 1 " + out("c"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = load("c/circles.json");
  ASSERT_EQ(j["roots"].size(), 1u);
  EXPECT_NEAR(j["roots"][0]["kappa"].get<double>(), plastic_root(), 1e-12);
  EXPECT_NEAR(j["roots"][0]["kappa"].get<double>(), -1.3247179572, 1e-10);
  EXPECT_EQ(j["case"], "single");
  EXPECT_EQ(json::parse(r.out), j);
}

TEST_F(Cli, ProvenanceHashesArtifacts) {
  ASSERT_EQ(run("elastica circles " + out("p")).code, 0);
  const auto prov = load("p/provenance.json");
  EXPECT_EQ(prov["command"], "elastica circles");
  EXPECT_EQ(prov["exit_code"], 0);
  EXPECT_EQ(prov["config_hash"].get<std::string>().size(), 16u);
  const auto text = slurp(dir_ / "p/circles.json");
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a(text)));
  EXPECT_EQ(prov["artifacts"]["circles.json"], hex);
  EXPECT_EQ(prov["config"]["sigma"], 1.0);
}

TEST_F(Cli, ConfigErrorsExitTwoWithFieldPath) {
  struct Case {
    std::string args, field;
  };
  std::ofstream(dir_ / "wrong_cmd.json") << R"({"command": "audit el", "sigma": 1})";
  std::ofstream(dir_ / "bad_type.json") << R"({"alpha": [1, 2]})";
  std::ofstream(dir_ / "bad_line.conf") << "sigma 1\n";
  const Case cases[] = {
      {"elastica circles --sigma abc", "config.sigma"},
      {"elastica circles -D nosuch=1", "config.nosuch"},
      {"boundary integrate --sheet 0", "config.sheet"},
      {"audit el --fixture torus", "config.fixture"},
      {"audit variation --epsilons 1e-2,x", "config.epsilons[1]"},
      {"bjorling fig1 --set 1.5", "config.set"},
      {"elastica circles --config " + (dir_ / "wrong_cmd.json").string(), "config.command"},
      {"elastica circles --config " + (dir_ / "bad_type.json").string(), "config.alpha"},
      {"elastica circles --config " + (dir_ / "bad_line.conf").string(), "bad_line.conf:1"},
      {"helicoid fit --boundaries 1", "config.eta"},
  };
  for (const auto& c : cases) {
    const auto r = run(c.args + " " + out("x"));
    EXPECT_EQ(r.code, 2) << c.args;
    EXPECT_NE(r.err.find(c.field), std::string::npos) << c.args << " -> " << r.err;
    EXPECT_FALSE(fs::exists(dir_ / "x" / "provenance.json")) << c.args;
  }
}

TEST_F(Cli, UnknownFlagExitsTwo) { EXPECT_EQ(run("elastica circles --nosuch 1 " + out("x")).code, 2); }

TEST_F(Cli, PreconditionExitsTwo) {
  const auto r = run("elastica circles --sigma -1 " + out("x"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("precondition"), std::string::npos) << r.err;
  EXPECT_EQ(run("elastica circles --sigma -1 --allow-nonphysical true " + out("y")).code, 0);
}

TEST_F(Cli, AlphaZeroCirclesIsDistinctFailure) {
  const auto r = run("elastica circles --alpha 0 " + out("x"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("alpha-zero"), std::string::npos) << r.err;
  EXPECT_EQ(load("x/provenance.json")["status"], "fail");
}

TEST_F(Cli, FailedChecksExitOne) {
  EXPECT_EQ(run("audit scaling --fixture hemisphere " + out("a")).code, 1);
  EXPECT_EQ(run("audit el --R 2 " + out("b")).code, 1);
  EXPECT_EQ(run("boundary alpha-zero --eta -1 --beta 2 " + out("c")).code, 1);
  EXPECT_EQ(run("helicoid fit --beta 0 --sheet 1 " + out("d")).code, 1);
  EXPECT_FALSE(load("a/scaling.json")["audit"]["scaling.identity"]["pass"].get<bool>());
}

TEST_F(Cli, PassingAuditsExitZero) {
  for (const std::string a :
       {"audit el", "audit scaling", "audit flux", "audit gauss-bonnet --fixture holed-square --holes 2",
        "audit el --fixture fitted-helicoid", "boundary alpha-zero", "helicoid make", "helicoid fit"}) {
    const auto r = run(a + " --quiet " + out("o"));
    EXPECT_EQ(r.code, 0) << a << ": " << r.err;
  }
}

TEST_F(Cli, AlphaZeroDiskRadius) {
  // tau_g = 0 and alpha = 0 leave sigma - beta kappa_g = 0 with kappa_g = -1/R,
  // so R = -beta / sigma = 2 for the defaults sigma = 1, beta = -2.
  ASSERT_EQ(run("boundary alpha-zero --quiet " + out("z")).code, 0);
  const auto j = load("z/alpha_zero.json");
  EXPECT_NEAR(j["radius"].get<double>(), 2.0, 1e-14);
  EXPECT_TRUE(j["valid"].get<bool>());
}

TEST_F(Cli, RepeatedRunsAreByteIdentical) {
  for (const std::string cmd : {"elastica integrate --length 5", "boundary integrate --length 5",
                                "audit variation --seed 4", "bjorling fig1 --set 2 --ns 200 --nt 40"}) {
    fs::remove_all(dir_ / "r1");
    fs::remove_all(dir_ / "r2");
    ASSERT_EQ(run(cmd + " --quiet " + out("r1")).code, 0) << cmd;
    ASSERT_EQ(run(cmd + " --quiet " + out("r2")).code, 0) << cmd;
    int files = 0;
    for (const auto& e : fs::directory_iterator(dir_ / "r1")) {
      ++files;
      EXPECT_EQ(slurp(e.path()), slurp(dir_ / "r2" / e.path().filename())) << cmd << " " << e.path().filename();
    }
    EXPECT_GE(files, 2) << cmd;
  }
}

TEST_F(Cli, KeyValueAndJsonConfigsAgree) {
  std::ofstream(dir_ / "a.conf") << "# circle roots\nsigma = 2\nbeta=3   # edge tension\n\n";
  std::ofstream(dir_ / "b.json") << R"({"command": "elastica circles", "sigma": 2, "beta": 3})";
  ASSERT_EQ(run("elastica circles --config " + (dir_ / "a.conf").string() + " " + out("a")).code, 0);
  ASSERT_EQ(run("elastica circles --config " + (dir_ / "b.json").string() + " " + out("b")).code, 0);
  EXPECT_EQ(slurp(dir_ / "a/circles.json"), slurp(dir_ / "b/circles.json"));
  EXPECT_EQ(load("a/provenance.json")["config_hash"], load("b/provenance.json")["config_hash"]);
  EXPECT_EQ(load("a/circles.json")["params"]["beta"], 3.0);
}

TEST_F(Cli, FlagsOverrideDefinesOverrideConfig) {
  std::ofstream(dir_ / "a.conf") << "sigma = 2\nbeta = 3\neta = 4\n";
  const auto cfg = "--config " + (dir_ / "a.conf").string();
  ASSERT_EQ(run("elastica circles " + cfg + " -D beta=5 -D eta=6 --eta 7 " + out("a")).code, 0);
  const auto p = load("a/circles.json")["params"];
  EXPECT_EQ(p["sigma"], 2.0);
  EXPECT_EQ(p["beta"], 5.0);
  EXPECT_EQ(p["eta"], 7.0);
}

TEST_F(Cli, SeedEnvironmentOverridesConfig) {
  ASSERT_EQ(run("audit variation --seed 5 --quiet " + out("a")).code, 0);
  ASSERT_EQ(run("audit variation --seed 9 --quiet " + out("b"), "PLATEAU_SEED=5 ").code, 0);
  ASSERT_EQ(run("audit variation --seed 9 --quiet " + out("c")).code, 0);
  EXPECT_EQ(slurp(dir_ / "a/variation.json"), slurp(dir_ / "b/variation.json"));
  EXPECT_NE(slurp(dir_ / "a/variation.json"), slurp(dir_ / "c/variation.json"));
  EXPECT_EQ(load("b/provenance.json")["config"]["seed"], 5);
  EXPECT_EQ(run("audit variation --quiet " + out("d"), "PLATEAU_SEED=abc ").code, 2);
}

TEST_F(Cli, GaussBonnetOnWrittenMesh) {
  ASSERT_EQ(run("audit gauss-bonnet --fixture holed-square --holes 1 --write-mesh true --quiet " + out("m")).code, 0);
  ASSERT_TRUE(fs::exists(dir_ / "m/mesh.obj"));
  ASSERT_EQ(run("audit gauss-bonnet --in " + (dir_ / "m/mesh.obj").string() + " --quiet " + out("g")).code, 0);
  const auto a = load("g/gauss_bonnet.json")["audit"];
  EXPECT_EQ(a["gb.chi"]["value"], 0.0);
  EXPECT_EQ(load("g/gauss_bonnet.json")["source"]["loops"], 2);
}

TEST_F(Cli, MissingMeshIsAnError) {
  const auto r = run("audit gauss-bonnet --in " + (dir_ / "nope.obj").string() + " " + out("g"));
  EXPECT_NE(r.code, 0);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(Cli, ReferenceSurfaceWritesMeshAndAudit) {
  const auto r = run("bjorling fig1 --set 1 --ns 100 --nt 24 --write-strip false --quiet " + out("f"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "f/fig1_set1.obj"));
  const auto j = load("f/fig1_set1.json");
  EXPECT_EQ(j["set"], 1);
  EXPECT_TRUE(j["audit"]["bjorling.grid_H"]["pass"].get<bool>());
}

TEST_F(Cli, SweepRunsGridInOrder) {
  const auto r = run("sweep elastica circles --grid beta=0,1,3 --grid sigma=1,2 --quiet " + out("s"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto s = load("s/sweep.json");
  ASSERT_EQ(s["runs"].size(), 6u);
  EXPECT_EQ(s["runs"][1]["point"], (json{{"beta", "0"}, {"sigma", "2"}}));
  EXPECT_EQ(s["runs"][4]["point"], (json{{"beta", "3"}, {"sigma", "1"}}));
  for (int i = 0; i < 6; ++i) {
    char name[16];
    std::snprintf(name, sizeof name, "run_%04d", i);
    EXPECT_TRUE(fs::exists(dir_ / "s" / name / "circles.json")) << name;
  }
  EXPECT_EQ(load("s/run_0005/circles.json")["params"]["beta"], 3.0);
}

TEST_F(Cli, SweepExitCodeIsWorstRun) {
  EXPECT_EQ(run("sweep audit el --grid R=1,2 --quiet " + out("a")).code, 1);
  EXPECT_EQ(run("sweep elastica circles --grid sigma=1,x --quiet " + out("b")).code, 2);
  EXPECT_FALSE(fs::exists(dir_ / "b"));
}

TEST_F(Cli, SweepJobsDoNotChangeResults) {
  ASSERT_EQ(run("sweep audit variation --grid seed=1,2,3 --jobs 1 --quiet " + out("a")).code, 0);
  ASSERT_EQ(run("sweep audit variation --grid seed=1,2,3 --jobs 3 --quiet " + out("b")).code, 0);
  EXPECT_EQ(slurp(dir_ / "a/sweep.json"), slurp(dir_ / "b/sweep.json"));
  for (const char* d : {"run_0000", "run_0001", "run_0002"})
    EXPECT_EQ(slurp(dir_ / "a" / d / "variation.json"), slurp(dir_ / "b" / d / "variation.json")) << d;
}

}  // namespace
