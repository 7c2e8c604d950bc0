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

#include <fmt/format.h>

#include <CLI11.hpp>
#include <exception>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "edgesched/errors.hpp"
#include "edgesched/experiment.hpp"
#include "edgesched/ssfs.hpp"

namespace {

using nlohmann::json;

int solve_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw edgesched::ValidationError("cannot open instance " + path);
  const json j = json::parse(in);
  std::vector<edgesched::ssfs::Function> fs;
  for (const auto& item : j.at("functions")) {
    edgesched::ssfs::Function f;
    f.id = edgesched::FunctionId{static_cast<std::uint32_t>(fs.size())};
    f.exec_time = item.at("exec").get<double>();
    f.cold_start = item.at("cold_start").get<double>();
    f.eviction = item.at("eviction").get<double>();
    f.request_count = item.at("requests").get<std::uint32_t>();
    fs.push_back(f);
  }
  const auto charge = j.value("charge", std::string("previous")) == "own"
                          ? edgesched::ssfs::SetupCharge::kOwnSetup
                          : edgesched::ssfs::SetupCharge::kPreviousEviction;
  const auto best = edgesched::ssfs::optimal(fs, charge);
  std::string seq;
  for (auto id : best.sequence) seq += (seq.empty() ? "" : " ") + std::to_string(id.value);
  fmt::print("sequence: {}\ntotal_response_ms: {}\n", seq, best.total_response_time);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-event simulator for serverless scheduling on an edge server"};

  std::string config_path;
  std::optional<std::string> trace;
  std::optional<std::string> synthetic;
  std::optional<std::string> schedulers;
  std::vector<std::size_t> capacities;
  std::vector<double> intensities;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> limit;
  std::optional<std::string> out;
  bool events = false;
  bool dump_requests = false;
  bool check_ssfs = false;
  std::size_t max_requests = 8;
  std::size_t cases = 200;
  std::string instance;
  std::optional<std::string> frp;

  app.add_option("--config", config_path, "JSON file whose keys mirror these flags")
      ->check(CLI::ExistingFile);
  app.add_option("--trace", trace, "CSV trace (func,end_timestamp,duration)");
  app.add_option("--synthetic", synthetic, "Synthetic preset: poisson, bursty, blockers, handoff");
  app.add_option("--scheduler", schedulers,
                 "Comma-separated list of esff, fifo, openwhisk-v2, faascache, sff");
  app.add_option("--capacity", capacities, "Capacity or comma-separated sweep")->delimiter(',');
  app.add_option("--intensity", intensities, "Intensity ratio or comma-separated sweep")
      ->delimiter(',');
  app.add_option("--seed", seed, "Base random seed");
  app.add_option("--limit", limit, "Keep only the first n requests");
  app.add_option("--out", out, "Output directory");
  app.add_flag("--events", events, "Write events_<run>.log");
  app.add_flag("--dump-requests", dump_requests, "Write requests_<run>.csv");
  app.add_option("--frp-instance-count", frp,
                 "Instance count used for replacement candidates: candidate or completing");
  app.add_flag("--check-ssfs", check_ssfs, "Compare weight order with exhaustive search");
  app.add_option("--max-requests", max_requests, "Largest instance for --check-ssfs")
      ->check(CLI::Range(3, 10));
  app.add_option("--cases", cases, "Random instances for --check-ssfs");
  app.add_option("--ssfs-instance", instance, "Solve a JSON single-instance problem")
      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    json j = json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      j = json::parse(in);
      if (!j.is_object()) throw edgesched::ValidationError("config must be a JSON object");
    }
    if (synthetic) {
      // A preset named on the command line replaces any synthetic block.
      j["synthetic"] = *synthetic;
      j.erase("trace");
    }
    if (trace) j["trace"] = *trace;
    if (schedulers) j["scheduler"] = *schedulers;
    if (!capacities.empty()) j["capacity"] = capacities;
    if (!intensities.empty()) j["intensity"] = intensities;
    if (seed) j["seed"] = *seed;
    if (limit) j["limit"] = *limit;
    if (out) j["out"] = *out;
    if (events) j["events"] = true;
    if (dump_requests) j["dump_requests"] = true;
    if (frp) j["frp_instance_count"] = *frp;
    if (check_ssfs) j["check_ssfs"] = true;
    if (app.count("--max-requests") > 0) j["max_requests"] = max_requests;
    if (app.count("--cases") > 0) j["cases"] = cases;

    if (!instance.empty()) return solve_instance(instance);

    if (j.value("check_ssfs", false)) {
      const auto n = j.value("cases", cases);
      const auto report = edgesched::check_ssfs(n, j.value("max_requests", max_requests),
                                                j.value("seed", std::uint64_t{1}));
      fmt::print("{}/{} oracle matches\n", report.uniform_matches, report.cases);
      fmt::print("first-block-free accounting: {}/{} matches, worst gap {}\n",
                 report.refined_matches, report.cases, report.worst_refined_gap);
      return report.uniform_matches == report.cases ? 0 : 1;
    }

    const auto spec = edgesched::experiment_from_json(j);
    fmt::print("{}\n", edgesched::kMetricsHeader);
    std::cout.flush();
    edgesched::run_experiment(spec, &std::cout);
    return 0;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
}
