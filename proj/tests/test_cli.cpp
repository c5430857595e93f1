#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include <gtest/gtest.h>

#include "bfpp/cli.hpp"
#include "json.hpp"

using namespace bfpp;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("bfpp_test_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST(Config, ValidFlags) {
  auto c = parse_config({"mu", "--dim", "2", "--lambda", "0.3", "--law", "dirac:1", "--seed", "7"});
  EXPECT_EQ(c.dim, 2);
  EXPECT_EQ(c.lambda, 0.3);
  EXPECT_EQ(c.seed, 7u);
  EXPECT_NO_THROW(c.model().validate());
}

TEST(Config, Rejections) {
  try {
    parse_config({"mu", "--law", "pareto:1.5:1", "--dim", "2"});
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "law");
  }
  try {
    parse_config({"mu", "--lambda", "-1"});
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "lambda");
  }
  EXPECT_THROW(parse_config({"mu", "--r", "10,5"}), ConfigError);
  EXPECT_THROW(parse_config({"mu", "--multiplier", "1.5"}), ConfigError);
  EXPECT_THROW(parse_config({"walk"}), ConfigError);
  EXPECT_THROW(parse_config({"mu", "--nope", "1"}), ConfigError);
  EXPECT_THROW(parse_config({"scan", "--lambda-grid", "0.3"}), ConfigError);
}

TEST(Config, ExitCodes) {
  EXPECT_EQ(run_main({"mu", "--lambda", "-1"}), 2);
  EXPECT_EQ(run_main({"mu", "--bogus", "1"}), 2);
}

TEST(Config, FileThenFlags) {
  auto dir = fresh_dir("config");
  fs::create_directories(dir);
  auto file = dir / "run.cfg";
  std::ofstream(file) << "# comment\nlambda = 0.2\nseed = 11\nr = 4, 8\n";
  auto c = parse_config({"mu", "--config", file.string(), "--seed", "12"});
  EXPECT_EQ(c.lambda, 0.2);
  EXPECT_EQ(c.seed, 12u);
  EXPECT_EQ(c.r, (std::vector<double>{4, 8}));
  std::ofstream(file) << "colour = blue\n";
  try {
    parse_config({"mu", "--config", file.string()});
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "colour");
  }
}

TEST(Config, EmitParseRoundTrip) {
  RunConfig c;
  c.command = "scan";
  c.lambda = 0.1 + 0.2;
  c.law = "mix:0.5*dirac:1,0.5*uniform:0.5:2";
  c.lambda_grid = {0.25, 1.0 / 3.0, 0.5};
  c.r = {5, 10.5};
  c.multiplier = {2, 3};
  c.seed = 123456789012345ull;
  c.out = "some/dir";
  RunConfig back;
  back.command = "scan";
  for (const auto& [k, v] : read_config_text(emit_config(c))) apply_setting(back, k, v);
  EXPECT_EQ(back, c);
}

TEST(Config, FingerprintTracksMeaningfulFields) {
  RunConfig a;
  a.command = "mu";
  auto base = config_fingerprint(a);
  RunConfig b = a;
  b.out = "elsewhere";
  b.threads = 4;
  EXPECT_EQ(config_fingerprint(b), base);
  for (auto change : std::vector<std::function<void(RunConfig&)>>{
           [](RunConfig& c) { c.seed += 1; }, [](RunConfig& c) { c.lambda *= 2; },
           [](RunConfig& c) { c.replicas += 1; }, [](RunConfig& c) { c.r.push_back(80); },
           [](RunConfig& c) { c.law = "dirac:2"; }, [](RunConfig& c) { c.command = "crossing"; }}) {
    RunConfig c = a;
    change(c);
    EXPECT_NE(config_fingerprint(c), base);
  }
}

TEST(Cli, MuTinyIntensity) {
  auto dir = fresh_dir("mu");
  ASSERT_EQ(run_main({"mu", "--lambda", "1e-12", "--r", "10", "--replicas", "10", "--out", dir.string()}), 0);
  std::istringstream csv(slurp(dir / "mu.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "quantity,dim,lambda,scale,multiplier,direction,mean,stderr,replicas");
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    auto fields = std::vector<std::string>();
    std::stringstream ls(line);
    for (std::string f; std::getline(ls, f, ',');) fields.push_back(f);
    EXPECT_EQ(std::stod(fields[6]), 1.0);
  }
  EXPECT_GT(rows, 0);
  auto manifest = nlohmann::json::parse(slurp(dir / "mu.manifest.json"));
  EXPECT_EQ(manifest["command"], "mu");
  EXPECT_EQ(manifest["config"]["replicas"], "10");
  EXPECT_TRUE(manifest.contains("units"));
}

TEST(Cli, SampleSchema) {
  auto dir = fresh_dir("sample");
  ASSERT_EQ(run_main({"sample", "--lambda", "0.4", "--r", "4", "--seed", "3", "--out", dir.string()}), 0);
  std::istringstream in(slurp(dir / "sample.csv"));
  std::string header, columns, line;
  std::getline(in, header);
  auto h = nlohmann::json::parse(header);
  std::getline(in, columns);
  EXPECT_EQ(columns, "x1,x2,radius");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, h["balls"].get<std::size_t>());
}

TEST(Cli, ByteIdenticalReruns) {
  for (std::string cmd : {"sample", "crossing", "mu", "pi", "greedy", "diagnostics", "travel-time"}) {
    auto d1 = fresh_dir("rerun1"), d2 = fresh_dir("rerun2");
    std::vector<std::string> common{cmd, "--lambda", "0.3", "--r", "4", "--alpha", "0.5", "--replicas", "8",
                                    "--region", "3", "--seed", "5"};
    auto a = common, b = common;
    a.insert(a.end(), {"--out", d1.string()});
    b.insert(b.end(), {"--out", d2.string()});
    ASSERT_EQ(run_main(a), 0) << cmd;
    ASSERT_EQ(run_main(b), 0) << cmd;
    for (const auto& entry : fs::directory_iterator(d1)) {
      auto name = entry.path().filename();
      if (name.extension() == ".json" && name.string().find("manifest") != std::string::npos) continue;
      EXPECT_EQ(slurp(entry.path()), slurp(d2 / name)) << cmd << " " << name;
      EXPECT_EQ(slurp(entry.path()).find('\r'), std::string::npos);
    }
  }
}

TEST(Cli, ScanAndTravelTimeOutputs) {
  auto dir = fresh_dir("scan");
  ASSERT_EQ(run_main({"scan", "--lambda-grid", "0.1,0.4,1.2", "--r", "3,6", "--multiplier", "2", "--replicas", "6",
                      "--out", dir.string()}),
            0);
  auto m = nlohmann::json::parse(slurp(dir / "scan.manifest.json"));
  EXPECT_TRUE(m.contains("lambda_c_hat"));
  EXPECT_TRUE(m.contains("mu_zero_rule"));
  EXPECT_TRUE(fs::exists(dir / "scan_summary.csv"));
  ASSERT_EQ(run_main({"travel-time", "--lambda", "0.3", "--r", "5", "--out", dir.string()}), 0);
  auto t = nlohmann::json::parse(slurp(dir / "travel-time.json"));
  EXPECT_GE(t["value"].get<double>(), 0.0);
  EXPECT_LE(t["value"].get<double>(), 5.0);
  EXPECT_GE(t["witness"].size(), 2u);
}

TEST(Cli, RuntimeFailureRemovesOutputs) {
  auto dir = fresh_dir("fail");
  // sample file that does not exist
  EXPECT_EQ(run_main({"travel-time", "--sample", (dir / "missing.csv").string(), "--out", dir.string()}), 1);
  if (fs::exists(dir)) EXPECT_TRUE(fs::is_empty(dir));
  // terminal outside the completeness region of a stored sample
  ASSERT_EQ(run_main({"sample", "--r", "2", "--out", dir.string()}), 0);
  auto other = fresh_dir("fail2");
  EXPECT_EQ(run_main({"travel-time", "--sample", (dir / "sample.csv").string(), "--r", "5", "--out", other.string()}),
            1);
  if (fs::exists(other)) EXPECT_TRUE(fs::is_empty(other));
}
