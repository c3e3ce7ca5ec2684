#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

struct ToolRun {
  int status = -1;
  std::string out;
};

ToolRun nectool(const std::string& args) {
  const std::string cmd = std::string(NECTOOL_PATH) + " " + args + " 2>/dev/null";
  ToolRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

nlohmann::json json_of(const ToolRun& r) { return nlohmann::json::parse(r.out); }

}  // namespace

TEST(Cli, BoundsFig11) {
  const ToolRun r = nectool("bounds --fixture fig11 --z 2");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(json_of(r)["min_over_cuts"]["generalized"]["value"], 7);
}

TEST(Cli, BoundsFig6DrawnCut) {
  const ToolRun r = nectool("bounds --fixture fig6 --z 4");
  ASSERT_EQ(r.status, 0);
  const auto j = json_of(r);
  EXPECT_EQ(j["min_cut"], 37);
  EXPECT_EQ(j["drawn_cut"]["singleton"]["value"], 27);
  EXPECT_EQ(j["drawn_cut"]["bound1"]["value"], 19);
}

TEST(Cli, BoundsFromNetworkFile) {
  const std::string path = ::testing::TempDir() + "cli_net.json";
  std::ofstream(path) << R"({"nodes":["s","t"],"source":"s","sink":"t","edges":[)"
                      << R"({"id":"e1","from":"s","to":"t","cap":1},{"id":"e2","from":"s","to":"t","cap":1},)"
                      << R"({"id":"e3","from":"s","to":"t","cap":1}]})";
  const ToolRun r = nectool("bounds --network " + path + " --z 1");
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_EQ(json_of(r)["min_over_cuts"]["generalized"]["value"], 1);
  EXPECT_EQ(nectool("bounds --network " + path).status, 2);
}

TEST(Cli, LpFig14a) {
  const ToolRun r = nectool("lp --fixture fig14a");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(json_of(r)["h"], "3");
  const ToolRun free = nectool("lp --fixture fig14a --free-bt");
  EXPECT_EQ(json_of(free)["free_bt"], true);
}

TEST(Cli, GreedyFig9) {
  const ToolRun r = nectool("greedy --fixture fig9 --candidates Y3,Y4");
  ASSERT_EQ(r.status, 0);
  const auto j = json_of(r);
  ASSERT_EQ(j["steps"].size(), 2u);
  EXPECT_EQ(j["steps"][0]["mds"], nlohmann::json::array({4, 2}));
}

TEST(Cli, FixturesCheckAllMatch) {
  const ToolRun r = nectool("fixtures --check");
  ASSERT_EQ(r.status, 0);
  for (const auto& f : json_of(r)["fixtures"])
    for (const auto& [name, c] : f["check"].items()) EXPECT_TRUE(c["ok"].get<bool>()) << f["id"] << " " << name;
}

TEST(Cli, CertifyLinear) {
  const ToolRun r = nectool("certify-linear --k 3 --n 2 --seed 5");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(json_of(r)["verified"], true);
  EXPECT_EQ(json_of(r)["seed"], 5);
  EXPECT_EQ(nectool("certify-linear --k 4 --n 3").status, 2);
}

TEST(Cli, SimulateIsDeterministicAndEchoesSeed) {
  const std::string args = "simulate --fixture fig14a --q 11 --rounds 2 --value-cap 4 --seed 17";
  const ToolRun a = nectool(args), b = nectool(args);
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(json_of(a)["seed"], 17);
  EXPECT_EQ(json_of(a)["summary"]["all_correct"], true);
  EXPECT_EQ(a.out.find("elapsed_ms"), std::string::npos);
  EXPECT_NE(nectool(args + " --timing").out.find("elapsed_ms"), std::string::npos);
}

TEST(Cli, SimulateTwoNodeAndStrategy) {
  const ToolRun two = nectool("simulate --two-node 1,1,1/1 --z 1 --value-cap 10");
  ASSERT_EQ(two.status, 0) << two.out;
  EXPECT_EQ(json_of(two)["protocol"], "two-node");
  const ToolRun fig8 = nectool("simulate --fixture fig8 --rounds 1 --value-cap 10");
  ASSERT_EQ(fig8.status, 0);
  EXPECT_EQ(json_of(fig8)["summary"]["all_correct"], true);
}

TEST(Cli, ZigZag) {
  const ToolRun r = nectool("zigzag --spec 'F=2,2,2/1,1,1,1,1;m=1' --z 2");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(json_of(r)["rate"], 7);
  EXPECT_EQ(nectool("zigzag --spec 'F=1/1/1/1/1/1/1/1;m=1,1,1,1,1,1,1' --z 1").status, 3);
}

TEST(Cli, TextFormat) {
  const ToolRun r = nectool("lp --fixture fig14a --format text");
  ASSERT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("h: 3\n"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(nectool("").status, 2);
  EXPECT_EQ(nectool("bounds --bogus").status, 2);
  EXPECT_EQ(nectool("bounds --fixture nope").status, 2);
  EXPECT_EQ(nectool("bounds --fixture fig9 --limit-cutsize 4").status, 3);
  EXPECT_EQ(nectool("oracle --two-node 1,1,1,1,1,1,1 --z 1").status, 3);
  EXPECT_EQ(nectool("oracle --two-node 1,1,1 --z 1").status, 0);
  EXPECT_EQ(nectool("greedy --fixture fig4 --candidates A").status, 2);
}
