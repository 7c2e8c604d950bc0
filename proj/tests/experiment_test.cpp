// Copyright 2026 The edgesched Authors
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

#include "edgesched/experiment.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "edgesched/errors.hpp"

namespace edgesched {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("edgesched_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

TEST(ExperimentConfig, ReadsEveryKey) {
  const auto spec = experiment_from_json(json::parse(R"({
    "synthetic": {"preset": "poisson", "arrival_rate": 4, "function_count": 7},
    "scheduler": ["esff", "fifo"],
    "capacity": [4, 8],
    "intensity": 2,
    "seed": 11,
    "limit": 50,
    "out": "somewhere",
    "events": true,
    "dump_requests": true,
    "cold_start_range": [100, 200],
    "eviction_range": [10, 20],
    "frp_instance_count": "completing"
  })"));
  EXPECT_EQ(spec.preset, "poisson");
  ASSERT_TRUE(spec.synthetic.has_value());
  EXPECT_EQ(spec.synthetic->function_count, 7u);
  EXPECT_EQ(spec.synthetic->arrival_rate, 4);
  EXPECT_EQ(spec.schedulers, (std::vector<SchedulerKind>{SchedulerKind::kEsff, SchedulerKind::kFifo}));
  EXPECT_EQ(spec.capacities, (std::vector<std::size_t>{4, 8}));
  EXPECT_EQ(spec.intensities, (std::vector<double>{2}));
  EXPECT_EQ(spec.base.rng_seed, 11u);
  EXPECT_EQ(spec.limit, 50u);
  EXPECT_EQ(spec.out_dir, fs::path("somewhere"));
  EXPECT_TRUE(spec.events);
  EXPECT_TRUE(spec.dump_requests);
  EXPECT_EQ(spec.base.cold_start_min, 100);
  EXPECT_EQ(spec.base.cold_start_max, 200);
  EXPECT_EQ(spec.base.eviction_min, 10);
  EXPECT_EQ(spec.base.eviction_max, 20);
  EXPECT_EQ(spec.options.frp_instance_count, FrpInstanceCount::kCompleting);
}

TEST(ExperimentConfig, PresetDecidesBaseConfig) {
  const auto spec = experiment_from_json(json::parse(R"({"synthetic": "blockers"})"));
  EXPECT_EQ(spec.base.capacity, 1u);
  EXPECT_EQ(spec.base.cold_start_min, 500);
  EXPECT_EQ(spec.base.cold_start_max, 500);
}

TEST(ExperimentConfig, RejectsBadInput) {
  EXPECT_THROW(experiment_from_json(json::parse(R"({"capcity": 4})")), ValidationError);
  EXPECT_THROW(experiment_from_json(json::parse(R"([1])")), ValidationError);
  EXPECT_THROW(experiment_from_json(json::parse(R"({"scheduler": "lru"})")), ValidationError);
  EXPECT_THROW(experiment_from_json(json::parse(R"({"capacity": 0})")), ValidationError);
  EXPECT_THROW(experiment_from_json(json::parse(R"({"intensity": -1})")), ValidationError);
  EXPECT_THROW(experiment_from_json(json::parse(R"({"synthetic": "zipf"})")), ValidationError);
  EXPECT_THROW(experiment_from_json(json::parse(R"({"capacity": "four"})")), ValidationError);
  EXPECT_THROW(experiment_from_json(json::parse(R"({"synthetic": {"shape": 3}})")),
               ValidationError);
  EXPECT_THROW(load_experiment_config("/nonexistent/config.json"), ValidationError);
}

ExperimentSpec small_sweep(const fs::path& out) {
  ExperimentSpec spec;
  spec.preset = "bursty";
  spec.limit = 1500;
  spec.schedulers = all_scheduler_kinds();
  spec.capacities = {8, 16, 24, 32};
  spec.out_dir = out;
  spec.events = true;
  spec.dump_requests = true;
  return spec;
}

TEST(RunExperiment, CapacitySweepWritesOneRowPerPoint) {
  const auto dir = scratch("sweep");
  const auto spec = small_sweep(dir);
  const auto runs = run_experiment(spec, nullptr);
  const std::size_t expected = spec.schedulers.size() * spec.capacities.size();
  ASSERT_EQ(runs.size(), expected);
  const auto rows = lines(slurp(dir / "metrics.csv"));
  ASSERT_EQ(rows.size(), expected + 1);
  EXPECT_EQ(rows[0], kMetricsHeader);
  for (std::size_t i = 0; i < runs.size(); ++i) {
    EXPECT_EQ(rows[i + 1], metrics_row(runs[i]));
    for (const char* prefix : {"cdf_", "per_minute_", "requests_"}) {
      EXPECT_TRUE(fs::exists(dir / (prefix + runs[i].name + ".csv"))) << runs[i].name;
    }
    EXPECT_TRUE(fs::exists(dir / ("events_" + runs[i].name + ".log")));
  }
  EXPECT_EQ(runs[0].name, "esff_c8_i1");
}

TEST(RunExperiment, OutputsAreByteIdenticalAcrossReruns) {
  const auto a = scratch("rerun_a");
  const auto b = scratch("rerun_b");
  auto spec = small_sweep(a);
  spec.capacities = {8, 16};
  run_experiment(spec, nullptr);
  spec.out_dir = b;
  run_experiment(spec, nullptr);
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    const auto name = entry.path().filename();
    ASSERT_TRUE(fs::exists(b / name)) << name;
    EXPECT_EQ(slurp(entry.path()), slurp(b / name)) << name;
    ++compared;
  }
  EXPECT_EQ(compared, 1 + spec.schedulers.size() * spec.capacities.size() * 4);
}

TEST(RunExperiment, MetricsAgreeWithRequestDump) {
  // Recompute the mean response from the per-request CSV.
  const auto dir = scratch("dump");
  ExperimentSpec spec;
  spec.preset = "poisson";
  spec.limit = 800;
  spec.out_dir = dir;
  spec.dump_requests = true;
  const auto runs = run_experiment(spec, nullptr);
  ASSERT_EQ(runs.size(), 1u);
  const auto rows = lines(slurp(dir / "requests_esff.csv"));
  ASSERT_EQ(rows.size(), 801u);
  double sum = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::vector<double> v;
    std::istringstream in(rows[i]);
    for (std::string field; std::getline(in, field, ',');) v.push_back(std::stod(field));
    ASSERT_EQ(v.size(), 6u);
    EXPECT_GE(v[3], v[2]);
    EXPECT_NEAR(v[4] - v[3], v[5], 1e-5);
    sum += v[4] - v[2];
  }
  EXPECT_NEAR(sum / 800, runs[0].metrics.avg_response_time, 1e-4);
}

TEST(RunExperiment, IntensitySweepCompressesArrivals) {
  const auto dir = scratch("intensity");
  ExperimentSpec spec;
  spec.preset = "poisson";
  spec.limit = 500;
  spec.intensities = {0.25, 1};
  spec.out_dir = dir;
  const auto runs = run_experiment(spec, nullptr);
  ASSERT_EQ(runs.size(), 2u);
  EXPECT_EQ(runs[0].name, "esff_c" + std::to_string(spec.base.capacity) + "_i0.25");
  // Packing the same requests four times tighter cannot make them faster.
  EXPECT_GT(runs[0].metrics.avg_response_time, runs[1].metrics.avg_response_time);
}

TEST(RunExperiment, BlockersFavourEsff) {
  const auto dir = scratch("blockers");
  ExperimentSpec spec;
  spec.preset = "blockers";
  spec.base = preset_config("blockers");
  spec.schedulers = {SchedulerKind::kEsff, SchedulerKind::kFifo};
  spec.out_dir = dir;
  const auto runs = run_experiment(spec, nullptr);
  ASSERT_EQ(runs.size(), 2u);
  EXPECT_EQ(runs[0].metrics.avg_response_time, 3380);
  EXPECT_EQ(runs[1].metrics.avg_response_time, 4120);
}

TEST(CheckSsfs, AllCasesMatch) {
  const auto r = check_ssfs(200, 8, 1);
  EXPECT_EQ(r.cases, 200u);
  EXPECT_EQ(r.uniform_matches, 200u);
  EXPECT_LE(r.refined_matches, r.cases);
  EXPECT_GE(r.worst_refined_gap, 0);
  EXPECT_THROW(check_ssfs(10, 2, 1), ValidationError);
  EXPECT_THROW(check_ssfs(10, 11, 1), ValidationError);
}

struct CliResult {
  int status;
  std::string out;
};

CliResult cli(const std::string& args) {
  const auto dir = fs::temp_directory_path() / "edgesched_cli_io";
  fs::create_directories(dir);
  const auto out = dir / "stdout.txt";
  const std::string cmd =
      std::string(EDGESCHED_CLI) + " " + args + " > " + out.string() + " 2>&1";
  const int raw = std::system(cmd.c_str());
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(out)};
}

TEST(Cli, CheckSsfsReportsAllMatches) {
  const auto r = cli("--check-ssfs --max-requests 8 --cases 200");
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("200/200 oracle matches"), std::string::npos) << r.out;
}

TEST(Cli, RunsASweepAndPrintsMetrics) {
  const auto dir = scratch("cli_sweep");
  const auto r = cli("--synthetic blockers --scheduler esff,fifo,openwhisk-v2 --out " +
                     dir.string());
  ASSERT_EQ(r.status, 0) << r.out;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 4u) << r.out;
  EXPECT_EQ(rows[0], kMetricsHeader);
  EXPECT_EQ(rows[1].rfind("esff,1,1,3380.000000,", 0), 0u) << rows[1];
  EXPECT_EQ(slurp(dir / "metrics.csv"), r.out);
}

TEST(Cli, ConfigFileAndFlagsCombine) {
  const auto dir = scratch("cli_config");
  const auto cfg = dir / "run.json";
  std::ofstream(cfg) << R"({"synthetic": "poisson", "limit": 200, "scheduler": "sff"})";
  const auto r = cli("--config " + cfg.string() + " --capacity 3 --out " + dir.string());
  ASSERT_EQ(r.status, 0) << r.out;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].rfind("sff,3,1,", 0), 0u) << rows[1];
}

TEST(Cli, ReadsTraceFiles) {
  const auto dir = scratch("cli_trace");
  const auto trace = dir / "trace.csv";
  std::ofstream(trace) << "func,end_timestamp,duration\na,1000,200\nb,1500,100\na,3000,300\n";
  const auto r = cli("--trace " + trace.string() + " --scheduler fifo --out " + dir.string() +
                     " --dump-requests");
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_EQ(lines(slurp(dir / "requests_fifo.csv")).size(), 4u);
}

TEST(Cli, SolvesSingleInstanceProblems) {
  const auto dir = scratch("cli_instance");
  const auto inst = dir / "inst.json";
  std::ofstream(inst) << R"({"charge": "own", "functions": [
    {"exec": 1, "cold_start": 1, "eviction": 1, "requests": 2},
    {"exec": 1, "cold_start": 1, "eviction": 1, "requests": 1}]})";
  const auto r = cli("--ssfs-instance " + inst.string());
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("sequence: 0 0 1"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("total_response_ms: 14"), std::string::npos) << r.out;
}

TEST(Cli, ErrorsExitNonZero) {
  EXPECT_EQ(cli("--scheduler lru").status, 1);
  EXPECT_EQ(cli("--trace /nonexistent.csv").status, 1);
  EXPECT_NE(cli("--capacity zero").status, 0);
  const auto r = cli("--synthetic zipf");
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.out.find("error: "), std::string::npos);
}

}  // namespace
}  // namespace edgesched
