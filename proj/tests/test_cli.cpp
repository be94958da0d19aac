#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliRun {
  int code = -1;
  std::string err;
};

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("mind_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CliRun mind(const std::string& args) {
  static int calls = 0;
  const fs::path err =
      fs::temp_directory_path() / ("mind_cli_stderr_" + std::to_string(getpid()) + "_" + std::to_string(calls++));
  const std::string cmd = std::string(MIND_CLI) + " " + args + " > /dev/null 2> " + err.string();
  CliRun r;
  int status = std::system(cmd.c_str());
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err);
  fs::remove(err);
  return r;
}

const std::string kTri = MIND_DATA_DIR "/tri1.json";

}  // namespace

TEST(Cli, PresetIsByteIdenticalToFixture) {
  auto dir = scratch("preset");
  ASSERT_EQ(mind("gen --preset tri1 --out " + (dir / "t.json").string()).code, 0);
  EXPECT_EQ(slurp(dir / "t.json"), slurp(kTri));
}

TEST(Cli, GenWritesManifestWithEveryParameter) {
  auto dir = scratch("gen");
  const auto out = (dir / "g.json").string();
  ASSERT_EQ(mind("gen --rows 3 --cols 3 --requests 5 --scenarios 2 --seed 7 --out " + out).code, 0);
  json man = json::parse(slurp(out + ".manifest.json"));
  for (const char* k : {"rows", "cols", "spacing", "lines", "requests", "scenarios", "seed", "instance_hash"})
    EXPECT_TRUE(man.contains(k)) << k;
  EXPECT_EQ(man["seed"], 7);
  // Same seed, same bytes.
  const auto again = (dir / "h.json").string();
  ASSERT_EQ(mind("gen --rows 3 --cols 3 --requests 5 --scenarios 2 --seed 7 --out " + again).code, 0);
  EXPECT_EQ(slurp(out), slurp(again));
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(mind("").code, 2);
  EXPECT_EQ(mind("solve").code, 2);
  EXPECT_EQ(mind("gen --rows 3").code, 2);
  EXPECT_EQ(mind("solve --instance " + kTri + " --method bogus").code, 2);
  EXPECT_EQ(mind("solve --instance " + kTri + " --pricing bogus").code, 2);
  EXPECT_EQ(mind("frobnicate").code, 2);
}

TEST(Cli, DataErrorsExitThree) {
  auto dir = scratch("bad");
  EXPECT_EQ(mind("solve --instance " + (dir / "missing.json").string()).code, 3);
  std::ofstream(dir / "broken.json") << "{\"stations\": [";
  CliRun r = mind("solve --instance " + (dir / "broken.json").string() + " --out " + dir.string());
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("parse error"), std::string::npos) << r.err;
  json j = json::parse(slurp(kTri));
  j["requests"][0]["origin"] = 42;
  std::ofstream(dir / "invalid.json") << j.dump();
  r = mind("solve --instance " + (dir / "invalid.json").string() + " --out " + dir.string());
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("request.origin.unknown"), std::string::npos) << r.err;
}

TEST(Cli, SolveWritesResultIterationsAndMetrics) {
  auto dir = scratch("solve");
  ASSERT_EQ(mind("solve --instance " + kTri + " --method dd-ils --out " + dir.string()).code, 0);
  json r = json::parse(slurp(dir / "result.json"));
  EXPECT_EQ(r["method"], "dd-ils");
  EXPECT_NEAR(r["objective"].get<double>(), -9988.5, 1e-6);
  EXPECT_NEAR(r["recomputed_objective"].get<double>(), r["objective"].get<double>(), 1e-6);
  EXPECT_GE(r["gap"].get<double>(), 0.0);
  EXPECT_TRUE(r["certified"].get<bool>());
  EXPECT_TRUE(r.contains("wall_time_s"));
  ASSERT_TRUE(r.contains("solution"));
  EXPECT_EQ(r["solution"]["blocks"][0]["assigned"], json::array({2}));
  const std::string it = slurp(dir / "iterations.csv");
  EXPECT_EQ(it.substr(0, it.find('\n')), "iter,phase,lower,upper,cuts,columns,seconds");
  const std::string met = slurp(dir / "metrics.csv");
  EXPECT_NE(met.find("\n0,"), std::string::npos);
  EXPECT_NE(met.find("\naggregate,"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "manifest.json"));
}

TEST(Cli, EveryMethodRunsOnTriangle) {
  for (const char* m : {"dd", "extensive-subpath", "extensive-path", "extensive-segment", "extensive-compact", "transit"}) {
    auto dir = scratch(std::string("m_") + m);
    ASSERT_EQ(mind("solve --instance " + kTri + " --method " + m + " --out " + dir.string()).code, 0) << m;
    json r = json::parse(slurp(dir / "result.json"));
    EXPECT_NEAR(r["objective"].get<double>(), -9988.5, 1e-6) << m;
  }
  for (const char* p : {"exact", "heuristic", "heuristic-only", "milp"}) {
    auto dir = scratch(std::string("p_") + p);
    ASSERT_EQ(mind("solve --instance " + kTri + " --method dd --pricing " + p + " --out " + dir.string()).code, 0);
  }
  for (const char* m : {"rideshare-1", "rideshare-2", "rideshare-4"}) {
    auto dir = scratch(m);
    ASSERT_EQ(mind("solve --instance " + kTri + " --method " + m + " --out " + dir.string()).code, 0) << m;
    json r = json::parse(slurp(dir / "result.json"));
    EXPECT_NEAR(r["metrics"]["coverage"].get<double>(), 1.0, 1e-12);
  }
}

TEST(Cli, LimitsExitFourAndStillWriteResult) {
  auto dir = scratch("limit");
  const auto inst = (dir / "big.json").string();
  ASSERT_EQ(mind("gen --rows 4 --cols 4 --requests 12 --scenarios 2 --seed 3 --out " + inst).code, 0);
  EXPECT_EQ(mind("solve --instance " + inst + " --method extensive-compact --time-limit 0.01 --out " + dir.string()).code, 4);
  json r = json::parse(slurp(dir / "result.json"));
  EXPECT_EQ(r["status"], "time_limit");
  EXPECT_FALSE(r["certified"].get<bool>());
  auto d2 = scratch("limit_iter");
  EXPECT_EQ(mind("solve --instance " + inst + " --method dd --max-iter 1 --out " + d2.string()).code, 4);
  EXPECT_TRUE(fs::exists(d2 / "result.json"));
}

TEST(Cli, DeterministicRunsAreByteIdentical) {
  auto a = scratch("det_a"), b = scratch("det_b");
  const std::string common = "solve --instance " + kTri + " --method dd-ils --threads 1 --deterministic --out ";
  ASSERT_EQ(mind(common + a.string()).code, 0);
  ASSERT_EQ(mind(common + b.string()).code, 0);
  EXPECT_EQ(slurp(a / "iterations.csv"), slurp(b / "iterations.csv"));
  EXPECT_EQ(slurp(a / "result.json"), slurp(b / "result.json"));
}

TEST(Cli, CompareNormalizesToBest) {
  auto dir = scratch("compare");
  json a = {{"instance_hash", "abc"}, {"method", "x"}, {"objective", 10.0}};
  json b = {{"instance_hash", "abc"}, {"method", "y"}, {"objective", 12.0}};
  std::ofstream(dir / "a.json") << a.dump();
  std::ofstream(dir / "b.json") << b.dump();
  const auto table = dir / "table.csv";
  ASSERT_EQ(mind("compare " + (dir / "a.json").string() + " " + (dir / "b.json").string() + " --out " + table.string() +
                 " --plot " + (dir / "plot.csv").string())
                .code,
            0);
  std::istringstream in(slurp(table));
  std::string header, row1, row2;
  std::getline(in, header);
  std::getline(in, row1);
  std::getline(in, row2);
  EXPECT_EQ(header.rfind("file,method,objective,sol,", 0), 0u);
  EXPECT_NE(row1.find(",x,10,100,"), std::string::npos) << row1;
  EXPECT_NE(row2.find(",y,12,120,"), std::string::npos) << row2;
  EXPECT_EQ(slurp(dir / "plot.csv").rfind("method,metric,value\n", 0), 0u);
}

TEST(Cli, CompareRejectsDifferentInstances) {
  auto dir = scratch("mismatch");
  std::ofstream(dir / "a.json") << json{{"instance_hash", "1111"}, {"objective", 1.0}}.dump();
  std::ofstream(dir / "b.json") << json{{"instance_hash", "2222"}, {"objective", 1.0}}.dump();
  CliRun r = mind("compare " + (dir / "a.json").string() + " " + (dir / "b.json").string());
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("1111"), std::string::npos);
  EXPECT_NE(r.err.find("2222"), std::string::npos);
}

TEST(Cli, LinesEmitsSelection) {
  auto dir = scratch("lines");
  const auto inst = (dir / "g.json").string();
  ASSERT_EQ(mind("gen --rows 4 --cols 4 --requests 6 --seed 2 --out " + inst).code, 0);
  const auto out = (dir / "lines.json").string();
  ASSERT_EQ(mind("lines --instance " + inst + " --budget 2 --out " + out).code, 0);
  json j = json::parse(slurp(out));
  ASSERT_EQ(j["lines"].size(), 2u);
  for (const auto& l : j["lines"]) EXPECT_EQ(l["checkpoints"].back(), 15);
}
