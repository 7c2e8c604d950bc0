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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "edgesched/engine.hpp"
#include "edgesched/scheduler.hpp"
#include "edgesched/stats.hpp"
#include "edgesched/trace.hpp"

namespace edgesched {

struct ExperimentSpec {
  // Exactly one source: a trace file, or a synthetic preset
  // (poisson, bursty, blockers, handoff) optionally refined by `synthetic`.
  std::optional<std::filesystem::path> trace_path;
  std::string preset = "bursty";
  std::optional<SyntheticSpec> synthetic;
  std::optional<std::size_t> limit;

  std::vector<SchedulerKind> schedulers = {SchedulerKind::kEsff};
  // Empty lists mean "the base value only".
  std::vector<std::size_t> capacities;
  std::vector<double> intensities;
  SimulationConfig base;
  SchedulerOptions options;

  std::filesystem::path out_dir = "out";
  bool events = false;
  bool dump_requests = false;

  /// Throws ValidationError on an invalid combination.
  void validate() const;
};

/// Reads a JSON object whose keys mirror the command-line flags. Unknown
/// keys are rejected.
ExperimentSpec experiment_from_json(const nlohmann::json& j);
ExperimentSpec load_experiment_config(const std::filesystem::path& path);

/// Base configuration implied by a preset (blockers and handoff fix the
/// capacity and the setup times); the default config otherwise.
SimulationConfig preset_config(std::string_view preset);

/// Builds the workload for `spec` with the base config.
Workload load_workload(const ExperimentSpec& spec);

struct RunOutcome {
  std::string name;
  SchedulerKind scheduler = SchedulerKind::kEsff;
  std::size_t capacity = 0;
  double intensity = 1.0;
  MetricsReport metrics;
};

inline constexpr const char* kMetricsHeader =
    "scheduler,capacity,intensity,avg_response_ms,avg_slowdown,avg_cold_start_ms,p50,p95,p99";

std::string metrics_row(const RunOutcome& run);

/// Runs every (scheduler, capacity, intensity) point and writes metrics.csv,
/// cdf_<run>.csv, per_minute_<run>.csv and, on request, events_<run>.log and
/// requests_<run>.csv under out_dir. `progress` gets one line per run.
std::vector<RunOutcome> run_experiment(const ExperimentSpec& spec, std::ostream* progress);

struct SsfsCheckReport {
  std::size_t cases = 0;
  // Weight order against the exhaustive search, per setup-charge convention.
  std::size_t uniform_matches = 0;
  std::size_t refined_matches = 0;
  Time worst_refined_gap = 0;
};

/// Random single-instance problems with 2..4 functions, 2..max_requests
/// requests, and times uniform in [1, 10].
SsfsCheckReport check_ssfs(std::size_t cases, std::size_t max_requests, std::uint64_t seed);

}  // namespace edgesched
