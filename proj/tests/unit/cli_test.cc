// Copyright 2026 The hcap Authors
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


#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "hcap/errors.h"
#include "job.h"

namespace hcap::cli {
namespace {

namespace fs = std::filesystem;

class Hcapctl : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("hcapctl_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_job(const std::string& name, const json& j) const {
    const fs::path p = dir_ / name;
    std::ofstream(p) << j.dump();
    return p;
  }

  // Runs hcapctl with the given arguments; stderr goes to dir_/stderr.txt.
  int run(const std::string& args) const {
    const std::string cmd = std::string(HCAPCTL_PATH) + " " + args + " >" + (dir_ / "stdout.txt").string() + " 2>" +
                            (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string read(const fs::path& p) const {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  json summary(const fs::path& out) const { return json::parse(read(out / "summary.json")); }

  fs::path dir_;
};

json slit_job() {
  return {{"command", "hcap"},
          {"seed", 7},
          {"hull", {{"kind", "vertical_slit"}, {"base", 0.0}, {"height", 1.0}}},
          {"eta", 1.5},
          {"nodes", 64},
          {"n_per_node", 4000}};
}

TEST_F(Hcapctl, SlitJobEstimatesHalf) {
  const fs::path out = dir_ / "out";
  ASSERT_EQ(run("hcap --job " + write_job("job.json", slit_job()).string() + " --out " + out.string()), 0);
  const json s = summary(out);
  const double est = s["results"]["estimate"];
  const double se = s["results"]["stderr"];
  EXPECT_GT(se, 0.0);
  EXPECT_LT(se, 0.01);
  EXPECT_NEAR(est, 0.5, 3 * se + std::abs(s["results"]["tail_correction"].get<double>()) * 0.1);
  EXPECT_EQ(s["seed"], 7);
  EXPECT_EQ(s["config"]["walk"]["eps_absorb"], 1e-4);
  EXPECT_TRUE(s.contains("wall_time_seconds"));
  EXPECT_EQ(s["config_hash"].get<std::string>().size(), 16u);

  const std::string csv = read(out / "nodes.csv");
  EXPECT_EQ(csv.rfind("xi,weight,mean,std_error,n,truncated_fraction\r\n", 0), 0u);
  std::size_t lines = 0;
  for (std::size_t p = csv.find("\r\n"); p != std::string::npos; p = csv.find("\r\n", p + 2)) ++lines;
  EXPECT_EQ(lines, 65u);
}

TEST_F(Hcapctl, EtaBelowHullExitsOne) {
  json job = slit_job();
  job["eta"] = 0.5;
  EXPECT_EQ(run("hcap --job " + write_job("job.json", job).string() + " --out " + (dir_ / "out").string()), 1);
  EXPECT_NE(read(dir_ / "stderr.txt").find("for any eta > Im F"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir_ / "out" / "summary.json"));
}

TEST_F(Hcapctl, IdenticalJobsGiveIdenticalCsv) {
  json job = slit_job();
  job["n_per_node"] = 500;
  const std::string path = write_job("job.json", job).string();
  ASSERT_EQ(run("hcap --job " + path + " --out " + (dir_ / "a").string()), 0);
  ASSERT_EQ(run("--workers 3 hcap --job " + path + " --out " + (dir_ / "b").string()), 0);
  EXPECT_EQ(read(dir_ / "a" / "nodes.csv"), read(dir_ / "b" / "nodes.csv"));
  EXPECT_EQ(summary(dir_ / "a")["config_hash"], summary(dir_ / "b")["config_hash"]);
  EXPECT_EQ(summary(dir_ / "a")["results"], summary(dir_ / "b")["results"]);
}

TEST_F(Hcapctl, SeedFlagOverridesFile) {
  json job = slit_job();
  job["n_per_node"] = 200;
  job["nodes"] = 16;
  const std::string path = write_job("job.json", job).string();
  ASSERT_EQ(run("hcap --job " + path + " --seed 8 --set n_per_node=300 --out " + (dir_ / "a").string()), 0);
  const json s = summary(dir_ / "a");
  EXPECT_EQ(s["seed"], 8);
  EXPECT_EQ(s["config"]["n_per_node"], 300);
}

TEST_F(Hcapctl, UnknownKeyExitsOne) {
  json job = slit_job();
  job["etaa"] = 2.0;
  EXPECT_EQ(run("hcap --job " + write_job("job.json", job).string()), 1);
  EXPECT_NE(read(dir_ / "stderr.txt").find("unknown key 'etaa'"), std::string::npos);
}

TEST_F(Hcapctl, MissingSeedExitsOne) {
  json job = slit_job();
  job.erase("seed");
  EXPECT_EQ(run("hcap --job " + write_job("job.json", job).string()), 1);
  EXPECT_NE(read(dir_ / "stderr.txt").find("'seed'"), std::string::npos);
}

TEST_F(Hcapctl, MalformedJsonExitsOne) {
  std::ofstream(dir_ / "bad.json") << "{\"seed\": 1,";
  EXPECT_EQ(run("hcap --job " + (dir_ / "bad.json").string()), 1);
}

TEST_F(Hcapctl, HelpExitsZero) { EXPECT_EQ(run("--help"), 0); }

TEST_F(Hcapctl, RunTakesCommandFromFile) {
  json job = slit_job();
  job["nodes"] = 16;
  job["n_per_node"] = 200;
  ASSERT_EQ(run("run " + write_job("job.json", job).string() + " --out " + (dir_ / "a").string()), 0);
  EXPECT_EQ(summary(dir_ / "a")["command"], "hcap");
}

TEST_F(Hcapctl, FailingHullValidationExitsOne) {
  const json job = {{"command", "validate"},
                    {"seed", 1},
                    {"hull", {{"kind", "polyline"}, {"points", {{3.0, 1.0}, {4.0, 1.0}}}}},
                    {"resolution", 0.05}};
  EXPECT_EQ(run("validate --job " + write_job("job.json", job).string() + " --out " + (dir_ / "a").string()), 1);
  EXPECT_FALSE(summary(dir_ / "a")["results"]["pass"].get<bool>());
}

TEST_F(Hcapctl, HarmonicSampleWritesExits) {
  const json job = {{"command", "hm-sample"}, {"seed", 3}, {"z", {0.0, 1.0}}, {"n", 2000}};
  ASSERT_EQ(run("hm-sample --job " + write_job("job.json", job).string() + " --out " + (dir_ / "a").string()), 0);
  const std::string csv = read(dir_ / "a" / "exits.csv");
  EXPECT_EQ(csv.rfind("re,im,tag,chunk,step_count\r\n", 0), 0u);
  EXPECT_EQ(summary(dir_ / "a")["results"]["walks"], 2000);
}

TEST_F(Hcapctl, BmdJobReportsChain) {
  const json job = {{"command", "bmd-hcap"},
                    {"seed", 5},
                    {"hull", {{"kind", "vertical_slit"}, {"base", 0.0}, {"height", 1.0}}},
                    {"slits", {{{"y", 1.0}, {"x_lo", 3.0}, {"x_hi", 5.0}}}},
                    {"nodes", 16},
                    {"n_per_node", 300},
                    {"n_per_slit", 2000}};
  ASSERT_EQ(run("bmd-hcap --job " + write_job("job.json", job).string() + " --out " + (dir_ / "a").string()), 0);
  const json chain = summary(dir_ / "a")["results"]["chain"];
  ASSERT_EQ(chain["p"].size(), 2u);
  for (const json& row : chain["p"]) {
    double sum = 0.0;
    for (const json& v : row) sum += v.get<double>();
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
  EXPECT_LT(chain["spectral_radius"].get<double>(), 1.0);
  EXPECT_TRUE(fs::exists(dir_ / "a" / "chain_p.csv"));
}

TEST_F(Hcapctl, ExperimentKindIsPositional) {
  const json job = {{"command", "experiment"}, {"seed", 1}, {"resolution", 0.05}, {"n_max", 64}};
  ASSERT_EQ(run("experiment monotone --family a --job " + write_job("job.json", job).string() + " --out " +
                (dir_ / "a").string()),
            0);
  const json s = summary(dir_ / "a");
  EXPECT_EQ(s["config"]["kind"], "monotone");
  EXPECT_TRUE(s["results"]["pass"].get<bool>());
}

TEST(ResolveJob, NestedOverrideAndTypes) {
  const json file = {{"seed", 1}, {"hull", {{"kind", "empty"}}}};
  const json c = resolve_job("hcap", file, {{"walk.eps_absorb", 1e-5}});
  EXPECT_EQ(c["walk"]["eps_absorb"], 1e-5);
  EXPECT_EQ(c["walk"]["chunk_size"], 1000);
  EXPECT_THROW(resolve_job("hcap", file, {{"walk.eps", 1e-5}}), PreconditionError);
  EXPECT_THROW(resolve_job("hcap", file, {{"nodes", "many"}}), PreconditionError);
  EXPECT_THROW(resolve_job("hcap", file, {{"nodes", 1.5}}), PreconditionError);
  EXPECT_THROW(resolve_job("hcap", file, {{"seed", -1}}), PreconditionError);
  EXPECT_THROW(resolve_job("hcap", file, {{"version", 2}}), PreconditionError);
  EXPECT_THROW(resolve_job("bmd-hcap", {{"seed", 1}, {"command", "hcap"}}, json::object()), PreconditionError);
}

TEST(ResolveJob, HashIgnoresOutputDirectory) {
  const json file = {{"seed", 1}, {"hull", {{"kind", "empty"}}}};
  const json a = resolve_job("hcap", file, {{"out", "x"}});
  const json b = resolve_job("hcap", file, {{"out", "y"}});
  const json c = resolve_job("hcap", file, {{"seed", 2}});
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_NE(config_hash(a), config_hash(c));
}

}  // namespace
}  // namespace hcap::cli
