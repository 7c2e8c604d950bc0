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
#include <optional>
#include <string>
#include <vector>

#include "edgesched/core.hpp"

namespace edgesched {

struct SimulationResult;

/// Incrementally maintained arithmetic mean.
class RunningMean {
 public:
  void add(double x) {
    ++count_;
    mean_ += (x - mean_) / static_cast<double>(count_);
  }
  double mean() const { return mean_; }
  std::uint64_t count() const { return count_; }
  bool empty() const { return count_ == 0; }

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0;
};

enum class PriorMode : std::uint8_t {
  // Mean over every function observed so far, else the configured constant.
  kGlobal,
  // Always the configured constant.
  kConstant,
};

struct EstimatorPrior {
  PriorMode mode = PriorMode::kGlobal;
  Time exec = 1000;
  Time cold_start = 1000;
  Time eviction = 1000;
};

/// The averaged quantities the weight formulas consume for one function.
struct Estimate {
  Time exec = 0;
  Time cold_start = 0;
  Time eviction = 0;
};

/// Per-function history of observed execution, cold-start and eviction
/// durations.
///
/// Before the first observation of a quantity for a function, estimate()
/// falls back in this order: the function's exec hint (execution only),
/// then the global running mean when the prior mode is kGlobal, then the
/// configured constant.
class Estimator {
 public:
  Estimator(std::size_t function_count, EstimatorPrior prior);

  void set_exec_hint(FunctionId f, Time hint);

  void record_execution(FunctionId f, Time observed);
  void record_cold_start(FunctionId f, Time observed);
  void record_eviction(FunctionId f, Time observed);

  Estimate estimate(FunctionId f) const;

  std::uint64_t execution_count(FunctionId f) const { return at(f).exec.count(); }
  std::uint64_t cold_start_count(FunctionId f) const { return at(f).cold_start.count(); }
  std::uint64_t eviction_count(FunctionId f) const { return at(f).eviction.count(); }
  std::size_t function_count() const { return per_function_.size(); }
  const EstimatorPrior& prior() const { return prior_; }

 private:
  struct History {
    RunningMean exec;
    RunningMean cold_start;
    RunningMean eviction;
    std::optional<Time> exec_hint;
  };

  const History& at(FunctionId f) const;
  History& at(FunctionId f);
  Time fallback(const RunningMean& global, Time constant) const;

  EstimatorPrior prior_;
  std::vector<History> per_function_;
  RunningMean global_exec_;
  RunningMean global_cold_start_;
  RunningMean global_eviction_;
};

struct MinuteBucket {
  std::int64_t minute = 0;
  std::size_t arrivals = 0;
  Time avg_response = 0;
  Time avg_exec = 0;
};

struct MetricsReport {
  std::size_t request_count = 0;
  Time avg_response_time = 0;
  double avg_slowdown = 0;
  // Total cold-start milliseconds divided by the number of requests.
  Time avg_cold_start_time = 0;
  // Mean duration of one cold start; zero when none happened.
  Time mean_cold_start_duration = 0;
  std::size_t cold_start_count = 0;
  Time total_eviction_time = 0;
  std::size_t eviction_count = 0;
  std::size_t replacement_count = 0;
  Time p50 = 0;
  Time p95 = 0;
  Time p99 = 0;
  std::vector<Time> response_cdf;  // ascending
  std::vector<double> slowdown_cdf;  // ascending
  std::vector<MinuteBucket> per_minute;

  std::string to_json() const;
  static std::string csv_header();
  std::string csv_row() const;
};

/// Nearest-rank percentile of an ascending sample, p in (0, 100].
double nearest_rank(const std::vector<double>& sorted, double p);

/// Throws ValidationError if any request is incomplete.
MetricsReport compute_metrics(const SimulationResult& result);

/// `request_id,function_id,arrival_ms,start_ms,completion_ms,exec_ms`
std::string requests_csv(const std::vector<Request>& requests);

}  // namespace edgesched
