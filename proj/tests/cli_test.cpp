// Copyright 2026 The ffext Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct Result {
  int status = -1;
  std::string out;
};

Result run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + FFEXT_CLI_PATH + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string table(const std::string& csv, const std::string& name) {
  const auto start = csv.find("## table: " + name + "\n");
  if (start == std::string::npos) return "";
  const auto end = csv.find("\n\n", start);
  return csv.substr(start, end == std::string::npos ? std::string::npos : end - start);
}

std::size_t count(const std::string& s, const std::string& what) {
  std::size_t n = 0;
  for (auto pos = s.find(what); pos != std::string::npos; pos = s.find(what, pos + 1)) ++n;
  return n;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("ffext_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST_F(Cli, GaussAllPass) {
  const auto r = run("gauss --q 3,5,7,9,11,13");
  EXPECT_EQ(r.status, 0);
  const auto t = table(r.out, "gauss");
  EXPECT_EQ(count(t, ",pass\n") + (t.ends_with(",pass") ? 1 : 0), 6u);
  EXPECT_EQ(count(t, "fail"), 0u);
}

TEST_F(Cli, SigmaCheckRows) {
  const auto r = run("sigma-check --q 3 --d 3");
  EXPECT_EQ(r.status, 0);
  const auto t = table(r.out, "sigma-check");
  EXPECT_EQ(count(t, "\n3,3,"), 27u);
  EXPECT_EQ(count(t, "fail"), 0u);
}

TEST_F(Cli, JsonFromExtension) {
  const auto path = dir_ / "g.json";
  EXPECT_EQ(run("gauss --q 5 --out " + path.string()).status, 0);
  const auto text = slurp(path);
  EXPECT_NE(text.find("\"tables\""), std::string::npos);
  EXPECT_NE(text.find("\"seed\": 7"), std::string::npos);
}

TEST_F(Cli, ConfigErrorsExitTwo) {
  EXPECT_EQ(run("gauss --q 6").status, 2);
  EXPECT_EQ(run("sigma-check --q 3").status, 2);
  EXPECT_EQ(run("sigma-check --q 3 --d 1").status, 2);
  EXPECT_EQ(run("norms --q 5 --d 5").status, 2);
  EXPECT_EQ(run("frobnicate --q 5").status, 2);
  EXPECT_EQ(run("").status, 2);
}

TEST_F(Cli, CapRefusalExitsTwo) {
  EXPECT_EQ(run("sigma-check --q 3,31 --d 6").status, 2);
  EXPECT_EQ(run("sigma-check --q 3 --d 3 --cap 26").status, 2);
}

TEST_F(Cli, FailVerdictsExitOne) {
  EXPECT_EQ(run("energy --q 3 --d 4 --samples 5 --desk-constant 0.5").status, 1);
}

TEST_F(Cli, ReportsAreNeverOverwritten) {
  const auto path = dir_ / "r.csv";
  EXPECT_EQ(run("gauss --q 3 --out " + path.string()).status, 0);
  const auto before = slurp(path);
  EXPECT_EQ(run("gauss --q 5 --out " + path.string()).status, 2);
  EXPECT_EQ(slurp(path), before);
}

TEST_F(Cli, OutputDirectoryFromEnvironment) {
  const std::string env = "FFEXT_OUT_DIR=" + dir_.string();
  EXPECT_EQ(run("gauss --q 3", env).status, 0);
  EXPECT_EQ(run("gauss --q 3", env).status, 0);
  EXPECT_TRUE(fs::exists(dir_ / "gauss-seed7-1.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "gauss-seed7-2.csv"));
}

TEST_F(Cli, SweepReproducible) {
  const auto a = dir_ / "a.csv", b = dir_ / "b.csv";
  EXPECT_EQ(run("sweep --q 3 --d 4 --seed 7 --out " + a.string()).status, 0);
  EXPECT_EQ(run("sweep --q 3 --d 4 --seed 7 --out " + b.string()).status, 0);
  const std::regex stamp("# timestamp: [^\n]*");
  const auto ta = std::regex_replace(slurp(a), stamp, ""), tb = std::regex_replace(slurp(b), stamp, "");
  EXPECT_FALSE(ta.empty());
  EXPECT_EQ(ta, tb);
  for (const char* name : {"gauss", "completed-square", "sigma-check-summary", "identities", "stein-tomas",
                           "proof-trace", "energy", "energy-summary", "norms", "norms-summary"}) {
    EXPECT_FALSE(table(ta, name).empty()) << name;
  }
}

}  // namespace
