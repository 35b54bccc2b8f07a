// Copyright 2026 The datacast Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Drives the datacast executable as a user would.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "datacast/fixture.hpp"
#include "datacast/package.hpp"
#include "oracles.hpp"

namespace {

namespace fs = std::filesystem;
using namespace dcast;

struct Run {
  int status;
  std::string output;
};

Run datacast(const std::string& args) {
  const std::string cmd = std::string(DATACAST_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  char buf[4096];
  while (auto n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("datacast_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write_tree(const std::string& root, const std::vector<FileEntry>& files) const {
    for (const auto& f : files) {
      const auto p = dir_ / root / f.name;
      fs::create_directories(p.parent_path());
      write_file(p, f.data);
    }
  }

  void expect_same_tree(const std::string& root, const std::vector<FileEntry>& files) const {
    std::size_t count = 0;
    for (const auto& e : fs::recursive_directory_iterator(dir_ / root))
      if (e.is_regular_file()) ++count;
    EXPECT_EQ(count, files.size());
    for (const auto& f : files) EXPECT_EQ(read_file(dir_ / root / f.name), f.data) << f.name;
  }

  fs::path dir_;
};

TEST_F(CliTest, HelpExitsZero) {
  const auto r = datacast("--help");
  EXPECT_EQ(r.status, 0);
  for (const char* sub : {"pack", "broadcast", "receive", "simulate", "estimate"})
    EXPECT_NE(r.output.find(sub), std::string::npos) << sub;
}

TEST_F(CliTest, EstimatePrintsReferenceArithmetic) {
  const auto r = datacast("estimate --bytes 8724 --bitrate 5000");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.output.find("bits 69792"), std::string::npos);
  EXPECT_NE(r.output.find("seconds 13.9584\n"), std::string::npos);
  EXPECT_EQ(datacast("estimate --bytes 1 --bitrate 0").status, 2);
}

TEST_F(CliTest, PackReferenceDirectory) {
  write_tree("app", fixture::reference_files());
  const auto r = datacast("pack --input-dir " + path("app") + " --entry demo1.ncl --codec none "
                          "--assume-compressed-size 8724 --bitrate 5000 -o " + path("app.gpkg"));
  ASSERT_EQ(r.status, 0) << r.output;
  EXPECT_NE(r.output.find("uncompressed 14141\n"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("compressed 8724"), std::string::npos);
  EXPECT_NE(r.output.find("13.9584 s"), std::string::npos);
  const auto pkg = decode_package(read_file(path("app.gpkg")));
  EXPECT_EQ(pkg.header.compressed_size, 8724u);
  EXPECT_EQ(pkg.header.entry_point, "demo1.ncl");
}

TEST_F(CliTest, PackErrors) {
  fs::create_directories(dir_ / "empty");
  EXPECT_EQ(datacast("pack --input-dir " + path("empty") + " --entry a.ncl -o " + path("x.gpkg")).status, 2);

  write_tree("app", {{"main.ncl", {1, 2}}});
  const auto r = datacast("pack --input-dir " + path("app") + " --entry missing.ncl -o " + path("x.gpkg"));
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.output.find("missing.ncl"), std::string::npos);
  EXPECT_EQ(datacast("pack --input-dir " + path("app") + " --entry main.ncl --codec zstd -o " + path("x.gpkg")).status, 2);
  EXPECT_EQ(datacast("pack --input-dir " + path("nowhere") + " --entry a -o " + path("x.gpkg")).status, 1);
}

TEST_F(CliTest, CleanRoundtripWithExecHook) {
  const auto files = fixture::reference_files();
  write_tree("app", files);
  ASSERT_EQ(datacast("pack --input-dir " + path("app") + " --entry demo1.ncl --app-id 0xEBC01 -o " + path("a.gpkg")).status, 0);
  const auto b = datacast("broadcast -p " + path("a.gpkg") + " -o " + path("s.gfrm") + " --cycles 2");
  ASSERT_EQ(b.status, 0) << b.output;
  EXPECT_NE(b.output.find("frame_capacity 250"), std::string::npos);

  const auto r = datacast("receive -i " + path("s.gfrm") + " -o " + path("out") + " --exec 'echo launched >" +
                          path("marker") + " && echo'");
  ASSERT_EQ(r.status, 0) << r.output;
  expect_same_tree("out", files);
  EXPECT_NE(r.output.find("launch app_id=00000000000ebc01 entry=demo1.ncl autostart=1"), std::string::npos);
  EXPECT_NE(r.output.find(path("out") + "/demo1.ncl"), std::string::npos) << r.output;
  EXPECT_TRUE(fs::exists(path("marker")));
  EXPECT_NE(r.output.find("outcome=complete"), std::string::npos);
}

TEST_F(CliTest, BroadcastIsDeterministic) {
  write_tree("app", {{"i.ncl", Bytes(900, 'x')}});
  ASSERT_EQ(datacast("pack --input-dir " + path("app") + " --entry i.ncl -o " + path("a.gpkg")).status, 0);
  ASSERT_EQ(datacast("broadcast -p " + path("a.gpkg") + " -o " + path("1.gfrm") + " --frames 40").status, 0);
  ASSERT_EQ(datacast("broadcast -p " + path("a.gpkg") + " -o " + path("2.gfrm") + " --frames 40").status, 0);
  const auto one = read_file(path("1.gfrm"));
  EXPECT_EQ(one, read_file(path("2.gfrm")));
  EXPECT_EQ(one.size(), 16u + 40 * 250);
  EXPECT_EQ(to_string(std::span(one).first(4)), "GFRM");
  ASSERT_EQ(datacast("broadcast -p " + path("a.gpkg") + " -o " + path("0.gfrm") + " --frames 0").status, 0);
  EXPECT_EQ(read_file(path("0.gfrm")).size(), 16u);
}

TEST_F(CliTest, TotalLossTimesOut) {
  write_tree("app", {{"i.ncl", Bytes(300, 'y')}});
  ASSERT_EQ(datacast("pack --input-dir " + path("app") + " --entry i.ncl -o " + path("a.gpkg")).status, 0);
  ASSERT_EQ(datacast("broadcast -p " + path("a.gpkg") + " -o " + path("s.gfrm")).status, 0);
  const auto r = datacast("receive -i " + path("s.gfrm") + " -o " + path("out") + " --loss 1");
  EXPECT_EQ(r.status, 3);
  EXPECT_NE(r.output.find("outcome=timed_out"), std::string::npos);
}

TEST_F(CliTest, LossyReceiveIsReproducible) {
  write_tree("app", fixture::reference_files());
  ASSERT_EQ(datacast("pack --input-dir " + path("app") + " --entry demo1.ncl -o " + path("a.gpkg")).status, 0);
  ASSERT_EQ(datacast("broadcast -p " + path("a.gpkg") + " -o " + path("s.gfrm") + " --cycles 30").status, 0);
  const std::string args = " --loss 0.3 --seed 99 --report-json ";
  const auto a = datacast("receive -i " + path("s.gfrm") + " -o " + path("o1") + args + path("r1.json"));
  const auto b = datacast("receive -i " + path("s.gfrm") + " -o " + path("o2") + args + path("r2.json"));
  EXPECT_EQ(a.status, b.status);
  EXPECT_EQ(a.output, b.output);
  EXPECT_EQ(read_file(path("r1.json")), read_file(path("r2.json")));
  if (a.status == 0) expect_same_tree("o1", fixture::reference_files());
}

TEST_F(CliTest, RandomTreesRoundtrip) {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<FileEntry> files;
    const auto n = 1 + rng() % 5;
    for (std::size_t i = 0; i < n; ++i) {
      std::string name = (rng() % 2 ? "sub" + std::to_string(rng() % 2) + "/" : "") + "f" + std::to_string(i);
      Bytes data = oracle::random_bytes(rng, rng() % 2000);
      if (rng() % 2) std::fill(data.begin(), data.begin() + static_cast<std::ptrdiff_t>(data.size() / 2), 'z');
      files.push_back({name, data});
    }
    const auto t = std::to_string(trial);
    write_tree("in" + t, files);
    const std::string codec = trial % 3 == 0 ? "none" : trial % 3 == 1 ? "deflate" : "lzma";
    ASSERT_EQ(datacast("pack --input-dir " + path("in" + t) + " --content files --codec " + codec + " -o " +
                       path(t + ".gpkg")).status, 0);
    ASSERT_EQ(datacast("broadcast -p " + path(t + ".gpkg") + " -o " + path(t + ".gfrm") + " --segment-size " +
                       std::to_string(16 + rng() % 1000) + " --bitrate " + std::to_string(1000 + rng() % 9000))
                  .status, 0);
    const auto r = datacast("receive -i " + path(t + ".gfrm") + " -o " + path("out" + t));
    ASSERT_EQ(r.status, 0) << r.output;
    expect_same_tree("out" + t, files);
  }
}

TEST_F(CliTest, SimulateJsonIsReproducible) {
  const std::string args = "simulate --reference-fixture --loss 0.2 --ber 1e-5 --seed 5 --report-json ";
  ASSERT_EQ(datacast(args + path("a.json")).status, 0);
  ASSERT_EQ(datacast(args + path("b.json")).status, 0);
  const auto a = read_file(path("a.json"));
  EXPECT_EQ(a, read_file(path("b.json")));
  EXPECT_NE(to_string(a).find("\"schema\": \"datacast.report/1\""), std::string::npos);
}

TEST_F(CliTest, SimulateSweepRows) {
  const auto r = datacast("simulate --reference-fixture --codec none --assume-compressed-size 8724 "
                          "--sweep bitrate=5000,10000");
  ASSERT_EQ(r.status, 0) << r.output;
  EXPECT_NE(r.output.find("5000\t13.9584\t"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("10000\t6.9792\t"), std::string::npos) << r.output;
  EXPECT_EQ(datacast("simulate --reference-fixture --sweep colour=1,2").status, 2);
}

TEST_F(CliTest, SimulateNeedsOneSource) {
  EXPECT_EQ(datacast("simulate").status, 2);
  EXPECT_EQ(datacast("simulate --reference-fixture --package x.gpkg").status, 2);
}

TEST_F(CliTest, ConfigFileMergesUnderFlags) {
  {
    std::ofstream os(path("c.ini"));
    os << "[simulate]\nbitrate = 10000\nreference-fixture = true\ncodec = none\nassume-compressed-size = 8724\n";
  }
  const auto from_file = datacast("simulate --config " + path("c.ini"));
  ASSERT_EQ(from_file.status, 0) << from_file.output;
  EXPECT_NE(from_file.output.find("/ 10000 bit/s"), std::string::npos);
  const auto overridden = datacast("simulate --config " + path("c.ini") + " --bitrate 20000");
  EXPECT_NE(overridden.output.find("/ 20000 bit/s"), std::string::npos);

  {
    std::ofstream os(path("bad.ini"));
    os << "[simulate]\nbitrat = 10000\n";
  }
  EXPECT_EQ(datacast("simulate --reference-fixture --config " + path("bad.ini")).status, 2);
}

}  // namespace
