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
#include <string_view>
#include <vector>

#include "edgesched/core.hpp"
#include "edgesched/engine.hpp"

namespace edgesched {

/// One row of an invocation trace before conversion to a Request.
struct TraceRecord {
  std::string function_key;
  Time end_timestamp = 0;
  Time duration = 0;
};

struct ParsedTrace {
  std::vector<Request> requests;           // sorted by arrival, ids 0..n-1
  std::vector<std::string> function_keys;  // index = FunctionId
};

/// Reads a CSV trace with header `func,end_timestamp,duration` (arrival is
/// reconstructed as end - duration) or `func,arrival,duration`. Durations
/// of zero become 1 ms. Rows are stably sorted by arrival, truncated to
/// `limit`, and function keys are interned in order of first appearance.
ParsedTrace parse_trace(std::istream& in, std::optional<std::size_t> limit = std::nullopt);
ParsedTrace parse_trace_file(const std::filesystem::path& path,
                             std::optional<std::size_t> limit = std::nullopt);

/// Writes `func,arrival,duration`, readable by parse_trace.
void write_trace(std::ostream& out, const std::vector<Request>& requests,
                 const std::vector<std::string>& function_keys);

/// Multiplies every inter-arrival gap by `ratio`, keeping the first
/// arrival in place. Throws ValidationError unless ratio > 0.
std::vector<Request> apply_intensity(std::vector<Request> requests, double ratio);

enum class WorkloadShape : std::uint8_t {
  // Independent Poisson arrivals, function chosen by popularity.
  kPoisson,
  // Poisson background plus Poisson-timed bursts of one function each.
  kBursty,
  // A few long requests of one function followed by a burst of short
  // requests of another, on a server that starts with the long function
  // warm.
  kBlockers,
};

struct SyntheticSpec {
  WorkloadShape shape = WorkloadShape::kBursty;
  std::size_t function_count = 20;
  // Per-function mean execution time is log-uniform in [exec_min, exec_max];
  // each request scales it by a lognormal factor with this sigma.
  Time exec_min = 10;
  Time exec_max = 5000;
  double exec_jitter_sigma = 0.25;
  // Zipf exponent of function popularity.
  double popularity_skew = 1.0;
  // Rank functions for popularity in random order, or shortest mean
  // execution first.
  bool short_functions_popular = false;
  // Background arrivals per second.
  double arrival_rate = 2.0;
  // Bursts per second, mean requests per burst, and the window a burst's
  // requests are spread over.
  double burst_rate = 0.05;
  double burst_size = 40;
  Time burst_window = 2000;
  Time horizon = 600000;
  std::size_t max_requests = 0;  // 0 = no cap
  std::uint64_t rng_seed = 1;

  // kBlockers only.
  std::size_t long_count = 2;
  std::size_t short_count = 3;
  Time long_exec = 2000;
  Time short_exec = 100;
  Time spacing = 100;

  bool exec_hints = false;

  void validate() const;
};

/// A ready-to-simulate input: requests, per-function profiles and the
/// server's initial warm instances.
struct Workload {
  std::vector<Request> requests;
  std::vector<FunctionProfile> profiles;
  std::vector<std::string> function_keys;
  std::vector<FunctionId> warm_pool;
};

/// Pure function of (spec, config): profiles are drawn from the config's
/// cold-start and eviction ranges with a seed derived from spec.rng_seed.
Workload generate_synthetic(const SyntheticSpec& spec, const SimulationConfig& config);

/// Named presets: `poisson`, `bursty`, `blockers`.
SyntheticSpec synthetic_preset(std::string_view name, std::uint64_t seed);

/// Two functions, five requests, capacity two: one request triggers a
/// second instance, one queues behind a full server, and the first
/// completion hands its instance to the other function.
Workload handoff_scenario();
SimulationConfig handoff_config();

/// Long blockers followed by short requests on a one-slot server.
SimulationConfig blockers_config();

/// Independent seed for one purpose (splitmix64 over base ^ hash(purpose)).
std::uint64_t derive_seed(std::uint64_t base, std::string_view purpose, std::uint64_t index = 0);

}  // namespace edgesched
