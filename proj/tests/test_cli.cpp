#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int status = -1;
  std::string out;
};

CliResult run(const std::string& args) {
  const std::string cmd = std::string(PATROL_CLI) + " " + args + " 2>/dev/null";
  CliResult r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int raw = pclose(p);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& path, const std::string& text) { std::ofstream(path, std::ios::binary) << text; }

bool has_line(const std::string& out, const std::string& line) {
  std::istringstream ss(out);
  std::string l;
  while (std::getline(ss, l)) {
    if (l == line) return true;
  }
  return false;
}

std::size_t count(const std::string& text, const std::string& what) {
  std::size_t n = 0;
  for (auto pos = text.find(what); pos != std::string::npos; pos = text.find(what, pos + 1)) ++n;
  return n;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("patrol_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, GenerateA1MatchesGolden) {
  const CliResult g = run("generate --algo a1 --length 1 --speeds 1,1/3 -o " + path("a1.json"));
  ASSERT_EQ(g.status, 0);
  EXPECT_TRUE(has_line(g.out, "predicted_idle=3/2"));
  EXPECT_EQ(slurp(path("a1.json")), slurp(fs::path(PATROL_TEST_DATA) / "a1_1_one_third.json"));
  EXPECT_EQ(run("verify " + path("a1.json") + " --expect 3/2").status, 0);
  EXPECT_EQ(run("verify " + path("a1.json") + " --expect 1").status, 3);
}

TEST_F(Cli, GenerateMetadata) {
  const CliResult b = run("generate --algo blocks --x 2 -o " + path("b2.json"));
  ASSERT_EQ(b.status, 0);
  EXPECT_TRUE(has_line(b.out, "k=9"));
  EXPECT_TRUE(has_line(b.out, "predicted_idle=1"));
  EXPECT_TRUE(has_line(b.out, "rho=99/100"));
  const CliResult a2 = run("generate --algo a2 --speeds 3,2,2 -o " + path("r.json"));
  EXPECT_TRUE(has_line(a2.out, "predicted_idle=1/6"));
  const CliResult greedy = run("generate --algo greedy --tau 2/3 --t 2/3 -o " + path("g.json"));
  EXPECT_TRUE(has_line(greedy.out, "k=85"));
}

TEST_F(Cli, RoundTripEveryAlgorithm) {
  const std::pair<std::string, std::string> cases[] = {
      {"a1 --length 2 --speeds 1,1/2,1/5", "40/17"},
      {"a2 --speeds 1,1/2,1/3", "1"},
      {"train --a 1 --b 1/5 --k 5", "25/27"},
      {"harmonic6", "1"},
      {"harmonic32", "61/62"},
      {"blocks --x 3", "1"},
      {"zigzag", "4/3"},
  };
  for (const auto& [args, idle] : cases) {
    ASSERT_EQ(run("generate --algo " + args + " -o " + path("s.json")).status, 0) << args;
    const CliResult v = run("verify " + path("s.json") + " --expect " + idle);
    EXPECT_EQ(v.status, 0) << args << "\n" << v.out;
  }
}

TEST_F(Cli, VerifyOutput) {
  ASSERT_EQ(run("generate --algo harmonic32 -o " + path("h.json")).status, 0);
  const CliResult v = run("verify " + path("h.json") + " --json " + path("r.json"));
  EXPECT_EQ(v.status, 0);
  EXPECT_TRUE(has_line(v.out, "idle=61/62"));
  EXPECT_TRUE(has_line(v.out, "idle<1: true"));
  EXPECT_TRUE(has_line(v.out, "valid=true agents_ok=32/32"));
  EXPECT_NE(slurp(path("r.json")).find("\"idle\": \"61/62\""), std::string::npos);
}

TEST_F(Cli, ExitCodes) {
  spit(path("fast.json"),
       R"({"fence":{"kind":"segment","length":"1"},"time_model":{"periodic":"2"},"direction":"none",)"
       R"("agents":[{"id":4,"max_speed":"1","breakpoints":[["0","0"],["1/2","1"],["2","0"]]}]})");
  const CliResult fast = run("verify " + path("fast.json"));
  EXPECT_EQ(fast.status, 2);
  EXPECT_NE(fast.out.find("SPEED_EXCEEDED agent=4 piece=0"), std::string::npos) << fast.out;

  EXPECT_EQ(run("verify " + path("missing.json")).status, 1);
  EXPECT_EQ(run("generate --algo harmonic6 -o " + path("no/such/dir.json")).status, 1);
  EXPECT_EQ(run("generate --algo a2 --speeds 1,2 -o " + path("x.json")).status, 2);
  EXPECT_EQ(run("generate --algo blocks --x 1 -o " + path("x.json")).status, 2);
  EXPECT_EQ(run("generate --algo nope -o " + path("x.json")).status, 2);
  EXPECT_EQ(run("verify").status, 2);
  EXPECT_EQ(run("frobnicate").status, 2);

  spit(path("empty.json"),
       R"({"fence":{"kind":"segment","length":"1"},"time_model":{"periodic":"1"},"direction":"none","agents":[]})");
  EXPECT_EQ(run("verify " + path("empty.json")).status, 2);
  EXPECT_EQ(run("plot " + path("empty.json") + " --out " + path("e.svg")).status, 2);
  EXPECT_EQ(run("compare " + path("empty.json")).status, 2);

  spit(path("horizon.json"),
       R"({"fence":{"kind":"circle","length":"1"},"time_model":{"horizon":"1"},"direction":"none",)"
       R"("agents":[{"id":1,"max_speed":"1","breakpoints":[["0","0"],["1","1"]]}]})");
  EXPECT_EQ(run("verify " + path("horizon.json") + " --expect 1").status, 0);
  EXPECT_EQ(run("gaps " + path("horizon.json") + " --idle 1").status, 2);
}

TEST_F(Cli, Gaps) {
  ASSERT_EQ(run("generate --algo zigzag -o " + path("z.json")).status, 0);
  const CliResult z = run("gaps " + path("z.json") + " --idle 1 --out " + path("g.json"));
  EXPECT_EQ(z.status, 0);
  EXPECT_TRUE(has_line(z.out, "regions=2"));
  EXPECT_TRUE(has_line(z.out, "total_area=5/18"));
  EXPECT_EQ(count(slurp(path("g.json")), "\"area\": \"5/36\""), 2u);

  ASSERT_EQ(run("generate --algo blocks --x 2 -o " + path("b.json")).status, 0);
  EXPECT_TRUE(has_line(run("gaps " + path("b.json") + " --idle 1").out, "regions=0"));
}

TEST_F(Cli, Compare) {
  ASSERT_EQ(run("generate --algo blocks --x 39 -o " + path("b.json")).status, 0);
  EXPECT_TRUE(has_line(run("compare " + path("b.json")).out, "rho_vs_A1=25/26"));
  ASSERT_EQ(run("generate --algo train --a 1 --b 1/5 --k 5 -o " + path("t.json")).status, 0);
  const CliResult t = run("compare " + path("t.json"));
  EXPECT_TRUE(has_line(t.out, "idle=25/27"));
  EXPECT_TRUE(has_line(t.out, "rho_vs_A2=25/27"));
  ASSERT_EQ(run("generate --algo a2 --speeds 1,1/2,1/3,1/4 -o " + path("h.json")).status, 0);
  EXPECT_TRUE(has_line(run("compare " + path("h.json")).out, "rho_vs_A2=1"));
}

TEST_F(Cli, PlotIsDeterministic) {
  ASSERT_EQ(run("generate --algo harmonic6 -o " + path("h.json")).status, 0);
  ASSERT_EQ(run("plot " + path("h.json") + " --periods 1 --out " + path("a.svg")).status, 0);
  ASSERT_EQ(run("plot " + path("h.json") + " --periods 1 --out " + path("b.svg")).status, 0);
  const std::string svg = slurp(path("a.svg"));
  EXPECT_EQ(svg, slurp(path("b.svg")));
  EXPECT_EQ(count(svg, "class=\"agent\""), 6u);
  const auto first = svg.find("data-agent=\"1\"");
  ASSERT_NE(first, std::string::npos);
  const auto close = svg.find("/>", first);
  const auto open = svg.rfind("<path", first);
  EXPECT_EQ(count(svg.substr(open, close - open), "M"), 8u);
  EXPECT_NE(svg.find(">position<"), std::string::npos);
  EXPECT_NE(svg.find(">time<"), std::string::npos);

  ASSERT_EQ(run("generate --algo blocks --x 2 -o " + path("b.json")).status, 0);
  ASSERT_EQ(run("plot " + path("b.json") + " --idle 1 --out " + path("c.svg")).status, 0);
  const std::string blocks = slurp(path("c.svg"));
  const auto gaps = blocks.find("<g id=\"gaps\"");
  ASSERT_NE(gaps, std::string::npos);
  EXPECT_EQ(blocks.find("<polygon", gaps), std::string::npos);
  EXPECT_EQ(run("plot " + path("b.json") + " --periods 0 --out " + path("d.svg")).status, 2);
}
