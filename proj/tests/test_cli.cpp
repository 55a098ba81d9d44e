#include <gtest/gtest.h>

#include <json.hpp>

#include <array>
#include <cstdio>
#include <fstream>
#include <sys/wait.h>

#include "test_support.hpp"

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(FOURVERTEX_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const std::string& name) { return fvtest::data_path(name); }

nlohmann::json json_of(const Run& r) { return nlohmann::json::parse(r.out); }

}  // namespace

TEST(Cli, Exact) {
  const auto r = run("exact -i " + data("theta4.fv") + " --json");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json_of(r)["Z"], "10");
  EXPECT_EQ(json_of(run("exact -i " + data("theta4.fv") + " --beta 1/2 --json"))["Z"], "5/2");
  EXPECT_EQ(json_of(run("exact -i " + data("theta4.fv") + " --a 2 --c 1 --json"))["Z"], "10");
}

TEST(Cli, Verify) {
  const auto r = run("verify -i " + data("octahedron.fv") + " --json");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json_of(r)["Z"], "216");
  EXPECT_EQ(run("verify -i " + data("theta4.fv") + " --json").code, 0);
}

TEST(Cli, ExitCodes) {
  const auto parity = run("solve-parity -i " + data("odd_cycle.fv") + " --json");
  EXPECT_EQ(parity.code, 3);
  EXPECT_FALSE(json_of(parity)["feasible"].get<bool>());
  EXPECT_FALSE(json_of(parity)["odd_cycle"].empty());
  EXPECT_EQ(run("estimate -i " + data("odd_cycle.fv")).code, 3);
  EXPECT_EQ(run("exact -i " + data("octahedron.fv") + " --cap 16").code, 4);
  EXPECT_EQ(run("exact --bogus").code, 1);
  EXPECT_EQ(run("exact -i /nonexistent/file.fv").code, 2);

  const std::string bad = ::testing::TempDir() + "bad.fv";
  std::ofstream(bad) << "n 2\nbeta 2\ne 0 1 1 1\ne 0 1 1 2\ne 0 3 1 3\ne 0 4 1 4\n";
  EXPECT_EQ(run("exact -i " + bad).code, 2);
  EXPECT_EQ(run("planar partition -i " + data("theta4.fv")).code, 2);
}

TEST(Cli, Deterministic) {
  const std::string est = "estimate -i " + data("octahedron.fv") + " --steps 40 --epsilon 0.3 --json";
  const auto a = run(est), b = run(est + " --threads 2");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const std::string smp = "sample -i " + data("octahedron.fv") + " --steps 100 --count 20 --seed 5 --json";
  EXPECT_EQ(run(smp).out, run(smp).out);
  EXPECT_NE(run(smp).out, run(smp + " --seed 6").out);
}

TEST(Cli, SampleOut) {
  const std::string path = ::testing::TempDir() + "samples.txt";
  ASSERT_EQ(run("sample -i " + data("theta4.fv") + " --steps 20 --count 5 --out " + path).code, 0);
  std::ifstream in(path);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    ++lines;
    EXPECT_EQ(line.size(), 11u);  // four edges, "01" or "10" each
  }
  EXPECT_EQ(lines, 5);
}

TEST(Cli, Windable) {
  EXPECT_TRUE(json_of(run("windable --fstar 1 1 --json"))["windable"].get<bool>());
  EXPECT_FALSE(json_of(run("windable --fstar 2 1 --json"))["windable"].get<bool>());
}

TEST(Cli, MixingBound) {
  const auto r = json_of(run("mixing-bound --m 2 --edges 1 --x-min 3/5 --json"));
  EXPECT_NEAR(r["bound"].get<double>(), 537.5622, 1e-3);
}

TEST(Cli, WormReports) {
  const auto r = run("worm -i " + data("octahedron.fv") + " --chains 50 --steps 60 --report histogram --json");
  ASSERT_EQ(r.code, 0);
  std::uint64_t total = 0;
  const auto j = json_of(r);
  for (const auto& v : j["histogram"]) total += v.get<std::uint64_t>();
  EXPECT_EQ(total, 50u);
  EXPECT_EQ(run("worm -i " + data("octahedron.fv") + " --report nope").code, 1);
}
