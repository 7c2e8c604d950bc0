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

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "edgesched/errors.hpp"
#include "edgesched/ssfs.hpp"

namespace edgesched {
namespace {

using nlohmann::json;

template <typename T>
std::vector<T> scalar_or_list(const json& j) {
  if (j.is_array()) return j.get<std::vector<T>>();
  return {j.get<T>()};
}

std::vector<SchedulerKind> parse_schedulers(const json& j) {
  std::vector<std::string> names;
  if (j.is_array()) {
    names = j.get<std::vector<std::string>>();
  } else {
    std::stringstream ss(j.get<std::string>());
    for (std::string item; std::getline(ss, item, ',');) names.push_back(item);
  }
  std::vector<SchedulerKind> out;
  for (const auto& n : names) out.push_back(parse_scheduler_kind(n));
  return out;
}

std::pair<Time, Time> range(const json& j, std::string_view key) {
  auto v = j.get<std::vector<Time>>();
  if (v.size() != 2) throw ValidationError(fmt::format("{} must be [min, max]", key));
  return {v[0], v[1]};
}

SyntheticSpec synthetic_from_json(const json& j, std::uint64_t seed) {
  SyntheticSpec s = synthetic_preset(j.value("preset", std::string("bursty")), seed);
  for (const auto& [key, v] : j.items()) {
    if (key == "preset") continue;
    else if (key == "function_count") s.function_count = v.get<std::size_t>();
    else if (key == "exec_min") s.exec_min = v.get<Time>();
    else if (key == "exec_max") s.exec_max = v.get<Time>();
    else if (key == "exec_jitter_sigma") s.exec_jitter_sigma = v.get<double>();
    else if (key == "popularity_skew") s.popularity_skew = v.get<double>();
    else if (key == "short_functions_popular") s.short_functions_popular = v.get<bool>();
    else if (key == "arrival_rate") s.arrival_rate = v.get<double>();
    else if (key == "burst_rate") s.burst_rate = v.get<double>();
    else if (key == "burst_size") s.burst_size = v.get<double>();
    else if (key == "burst_window") s.burst_window = v.get<Time>();
    else if (key == "horizon") s.horizon = v.get<Time>();
    else if (key == "max_requests") s.max_requests = v.get<std::size_t>();
    else if (key == "long_count") s.long_count = v.get<std::size_t>();
    else if (key == "short_count") s.short_count = v.get<std::size_t>();
    else if (key == "long_exec") s.long_exec = v.get<Time>();
    else if (key == "short_exec") s.short_exec = v.get<Time>();
    else if (key == "spacing") s.spacing = v.get<Time>();
    else if (key == "exec_hints") s.exec_hints = v.get<bool>();
    else throw ValidationError(fmt::format("unknown synthetic key '{}'", key));
  }
  return s;
}

std::string format_intensity(double x) { return fmt::format("{}", x); }

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << content;
}

}  // namespace

void ExperimentSpec::validate() const {
  if (schedulers.empty()) throw ValidationError("scheduler list is empty");
  std::set<SchedulerKind> seen(schedulers.begin(), schedulers.end());
  if (seen.size() != schedulers.size()) throw ValidationError("scheduler listed twice");
  for (std::size_t c : capacities) {
    if (c == 0) throw ValidationError("capacity must be positive");
  }
  for (double r : intensities) {
    if (!(r > 0)) throw ValidationError("intensity ratio must be positive");
  }
  if (!trace_path) {
    if (preset != "poisson" && preset != "bursty" && preset != "blockers" &&
        preset != "handoff") {
      throw ValidationError("unknown synthetic preset '" + preset + "'");
    }
  }
  if (limit && *limit == 0) throw ValidationError("limit must be positive");
  base.validate();
}

SimulationConfig preset_config(std::string_view preset) {
  if (preset == "blockers") return blockers_config();
  if (preset == "handoff") return handoff_config();
  return SimulationConfig{};
}

ExperimentSpec experiment_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  ExperimentSpec spec;
  // The preset decides the base config, so it is read before the overrides.
  std::optional<json> synthetic_object;
  if (j.contains("synthetic")) {
    const json& s = j.at("synthetic");
    if (s.is_string()) {
      spec.preset = s.get<std::string>();
    } else {
      spec.preset = s.value("preset", std::string("bursty"));
      synthetic_object = s;
    }
  }
  spec.base = preset_config(spec.preset);

  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "synthetic") continue;
      else if (key == "trace") spec.trace_path = v.get<std::string>();
      else if (key == "scheduler") spec.schedulers = parse_schedulers(v);
      else if (key == "capacity") spec.capacities = scalar_or_list<std::size_t>(v);
      else if (key == "intensity") spec.intensities = scalar_or_list<double>(v);
      else if (key == "seed") spec.base.rng_seed = v.get<std::uint64_t>();
      else if (key == "limit") spec.limit = v.get<std::size_t>();
      else if (key == "out") spec.out_dir = v.get<std::string>();
      else if (key == "events") spec.events = v.get<bool>();
      else if (key == "dump_requests") spec.dump_requests = v.get<bool>();
      else if (key == "cold_start_range") {
        std::tie(spec.base.cold_start_min, spec.base.cold_start_max) = range(v, key);
      } else if (key == "eviction_range") {
        std::tie(spec.base.eviction_min, spec.base.eviction_max) = range(v, key);
      } else if (key == "v2_wait_threshold") spec.base.v2_wait_threshold = v.get<Time>();
      else if (key == "exec_prior") spec.base.exec_prior = v.get<Time>();
      else if (key == "prior") {
        const auto mode = v.get<std::string>();
        if (mode == "global") spec.base.prior_mode = PriorMode::kGlobal;
        else if (mode == "constant") spec.base.prior_mode = PriorMode::kConstant;
        else throw ValidationError("prior must be 'global' or 'constant'");
      } else if (key == "frp_instance_count") {
        const auto mode = v.get<std::string>();
        if (mode == "candidate") spec.options.frp_instance_count = FrpInstanceCount::kCandidate;
        else if (mode == "completing") spec.options.frp_instance_count = FrpInstanceCount::kCompleting;
        else throw ValidationError("frp_instance_count must be 'candidate' or 'completing'");
      } else if (key == "check_ssfs" || key == "max_requests" || key == "cases") {
        // Consumed by the command-line front end.
      } else {
        throw ValidationError(fmt::format("unknown config key '{}'", key));
      }
    }
    if (synthetic_object) spec.synthetic = synthetic_from_json(*synthetic_object, spec.base.rng_seed);
  } catch (const json::exception& e) {
    throw ValidationError(fmt::format("bad config value: {}", e.what()));
  }
  spec.validate();
  if (spec.synthetic) spec.synthetic->validate();
  return spec;
}

ExperimentSpec load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(fmt::format("{}: {}", path.string(), e.what()));
  }
  return experiment_from_json(j);
}

Workload load_workload(const ExperimentSpec& spec) {
  if (spec.trace_path) {
    auto parsed = parse_trace_file(*spec.trace_path, spec.limit);
    Workload w;
    w.requests = std::move(parsed.requests);
    w.function_keys = std::move(parsed.function_keys);
    w.profiles = draw_profiles(w.function_keys.size(), spec.base,
                               derive_seed(spec.base.rng_seed, "profiles"));
    return w;
  }
  Workload w;
  if (spec.preset == "handoff") {
    w = handoff_scenario();
  } else {
    SyntheticSpec s = spec.synthetic ? *spec.synthetic
                                     : synthetic_preset(spec.preset, spec.base.rng_seed);
    s.rng_seed = spec.base.rng_seed;
    w = generate_synthetic(s, spec.base);
  }
  if (spec.limit && w.requests.size() > *spec.limit) w.requests.resize(*spec.limit);
  return w;
}

std::string metrics_row(const RunOutcome& run) {
  const auto& m = run.metrics;
  return fmt::format("{},{},{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f}", to_string(run.scheduler),
                     run.capacity, format_intensity(run.intensity), m.avg_response_time,
                     m.avg_slowdown, m.avg_cold_start_time, m.p50, m.p95, m.p99);
}

std::vector<RunOutcome> run_experiment(const ExperimentSpec& spec, std::ostream* progress) {
  spec.validate();
  const Workload workload = load_workload(spec);
  if (workload.requests.empty()) throw ValidationError("workload has no requests");

  const std::vector<std::size_t> capacities =
      spec.capacities.empty() ? std::vector<std::size_t>{spec.base.capacity} : spec.capacities;
  const std::vector<double> intensities =
      spec.intensities.empty() ? std::vector<double>{spec.base.intensity_ratio} : spec.intensities;
  const bool sweep = capacities.size() > 1 || intensities.size() > 1;

  std::filesystem::create_directories(spec.out_dir);
  std::vector<RunOutcome> runs;
  for (SchedulerKind kind : spec.schedulers) {
    for (std::size_t capacity : capacities) {
      for (double intensity : intensities) {
        SimulationConfig config = spec.base;
        config.capacity = capacity;
        config.intensity_ratio = intensity;
        config.warm_pool = workload.warm_pool;

        RunOutcome run;
        run.scheduler = kind;
        run.capacity = capacity;
        run.intensity = intensity;
        run.name = sweep ? fmt::format("{}_c{}_i{}", to_string(kind), capacity,
                                       format_intensity(intensity))
                         : std::string(to_string(kind));

        auto scheduler = make_scheduler(kind, spec.options);
        std::ostringstream events;
        auto result = edgesched::run(apply_intensity(workload.requests, intensity),
                                     workload.profiles, config, *scheduler,
                                     spec.events ? &events : nullptr);
        run.metrics = compute_metrics(result);

        std::string cdf = "rank,response_ms,slowdown\n";
        for (std::size_t i = 0; i < run.metrics.response_cdf.size(); ++i) {
          cdf += fmt::format("{},{:.6f},{:.6f}\n", i + 1, run.metrics.response_cdf[i],
                             run.metrics.slowdown_cdf[i]);
        }
        write_file(spec.out_dir / ("cdf_" + run.name + ".csv"), cdf);

        std::string minutes = "minute,arrivals,avg_response_ms,avg_exec_ms\n";
        for (const auto& b : run.metrics.per_minute) {
          minutes += fmt::format("{},{},{:.6f},{:.6f}\n", b.minute, b.arrivals, b.avg_response,
                                 b.avg_exec);
        }
        write_file(spec.out_dir / ("per_minute_" + run.name + ".csv"), minutes);
        if (spec.events) write_file(spec.out_dir / ("events_" + run.name + ".log"), events.str());
        if (spec.dump_requests) {
          write_file(spec.out_dir / ("requests_" + run.name + ".csv"), requests_csv(result.requests));
        }
        if (progress != nullptr) *progress << metrics_row(run) << '\n';
        runs.push_back(std::move(run));
      }
    }
  }

  std::string metrics = std::string(kMetricsHeader) + "\n";
  for (const auto& run : runs) metrics += metrics_row(run) + "\n";
  write_file(spec.out_dir / "metrics.csv", metrics);
  return runs;
}

SsfsCheckReport check_ssfs(std::size_t cases, std::size_t max_requests, std::uint64_t seed) {
  if (max_requests < 3 || max_requests > ssfs::kOracleMaxRequests) {
    throw ValidationError(fmt::format("max requests must be in [3, {}]", ssfs::kOracleMaxRequests));
  }
  std::mt19937_64 rng(derive_seed(seed, "ssfs-check"));
  std::uniform_int_distribution<int> time(1, 10);
  SsfsCheckReport report;
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t nf = std::uniform_int_distribution<std::size_t>(2, 4)(rng);
    const std::size_t total =
        std::uniform_int_distribution<std::size_t>(std::max<std::size_t>(nf, 3), max_requests)(rng);
    std::vector<ssfs::Function> fs(nf);
    for (std::size_t i = 0; i < nf; ++i) {
      fs[i].id = FunctionId{static_cast<std::uint32_t>(i)};
      fs[i].exec_time = time(rng);
      fs[i].cold_start = time(rng);
      fs[i].eviction = time(rng);
    }
    std::uniform_int_distribution<std::size_t> who(0, nf - 1);
    for (std::size_t extra = nf; extra < total; ++extra) ++fs[who(rng)].request_count;

    ++report.cases;
    const auto uniform = ssfs::SetupCharge::kOwnSetup;
    if (ssfs::optimal(fs, uniform).total_response_time ==
        ssfs::oracle(fs, uniform).total_response_time) {
      ++report.uniform_matches;
    }
    const auto refined = ssfs::SetupCharge::kPreviousEviction;
    const Time gap = ssfs::optimal(fs, refined).total_response_time -
                     ssfs::oracle(fs, refined).total_response_time;
    if (gap == 0) ++report.refined_matches;
    report.worst_refined_gap = std::max(report.worst_refined_gap, gap);
  }
  return report;
}

}  // namespace edgesched
