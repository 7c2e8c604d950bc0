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

#include "edgesched/stats.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

#include <nlohmann/json.hpp>

#include "edgesched/engine.hpp"
#include "edgesched/errors.hpp"

namespace edgesched {

Estimator::Estimator(std::size_t function_count, EstimatorPrior prior)
    : prior_(prior), per_function_(function_count) {}

const Estimator::History& Estimator::at(FunctionId f) const {
  if (f.value >= per_function_.size()) {
    throw std::out_of_range("unknown function id " + std::to_string(f.value));
  }
  return per_function_[f.value];
}

Estimator::History& Estimator::at(FunctionId f) {
  return const_cast<History&>(std::as_const(*this).at(f));
}

void Estimator::set_exec_hint(FunctionId f, Time hint) {
  if (!(hint > 0)) throw ValidationError("exec hint must be positive");
  at(f).exec_hint = hint;
}

void Estimator::record_execution(FunctionId f, Time observed) {
  if (!(observed > 0)) throw ValidationError("execution time must be positive");
  at(f).exec.add(observed);
  global_exec_.add(observed);
}

void Estimator::record_cold_start(FunctionId f, Time observed) {
  if (!(observed >= 0)) throw ValidationError("cold start time must be non-negative");
  at(f).cold_start.add(observed);
  global_cold_start_.add(observed);
}

void Estimator::record_eviction(FunctionId f, Time observed) {
  if (!(observed >= 0)) throw ValidationError("eviction time must be non-negative");
  at(f).eviction.add(observed);
  global_eviction_.add(observed);
}

Time Estimator::fallback(const RunningMean& global, Time constant) const {
  if (prior_.mode == PriorMode::kGlobal && !global.empty()) return global.mean();
  return constant;
}

Estimate Estimator::estimate(FunctionId f) const {
  const auto& h = at(f);
  Estimate e;
  if (!h.exec.empty()) {
    e.exec = h.exec.mean();
  } else if (h.exec_hint) {
    e.exec = *h.exec_hint;
  } else {
    e.exec = fallback(global_exec_, prior_.exec);
  }
  e.cold_start = h.cold_start.empty() ? fallback(global_cold_start_, prior_.cold_start)
                                      : h.cold_start.mean();
  e.eviction = h.eviction.empty() ? fallback(global_eviction_, prior_.eviction)
                                  : h.eviction.mean();
  return e;
}

double nearest_rank(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return 0;
  if (!(p > 0 && p <= 100)) throw ValidationError("percentile must be in (0, 100]");
  auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(sorted.size())));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

MetricsReport compute_metrics(const SimulationResult& result) {
  MetricsReport m;
  const auto& reqs = result.requests;
  m.request_count = reqs.size();
  m.replacement_count = result.replacement_count;
  m.cold_start_count = result.cold_start_events.size();
  m.eviction_count = result.eviction_events.size();

  Time total_cold = 0;
  for (const auto& c : result.cold_start_events) total_cold += c.duration;
  for (const auto& v : result.eviction_events) m.total_eviction_time += v.duration;
  if (m.cold_start_count > 0) {
    m.mean_cold_start_duration = total_cold / static_cast<double>(m.cold_start_count);
  }
  if (reqs.empty()) return m;

  m.response_cdf.reserve(reqs.size());
  m.slowdown_cdf.reserve(reqs.size());
  double sum_response = 0;
  double sum_slowdown = 0;
  std::map<std::int64_t, MinuteBucket> minutes;
  for (const auto& r : reqs) {
    if (!r.completed()) {
      throw ValidationError("request " + std::to_string(r.id.value) + " did not complete");
    }
    const Time response = r.response_time();
    const double slowdown = response / r.exec_time;
    sum_response += response;
    sum_slowdown += slowdown;
    m.response_cdf.push_back(response);
    m.slowdown_cdf.push_back(slowdown);

    const auto minute = static_cast<std::int64_t>(std::floor(r.arrival / 60000.0));
    auto& b = minutes[minute];
    b.minute = minute;
    ++b.arrivals;
    b.avg_response += (response - b.avg_response) / static_cast<double>(b.arrivals);
    b.avg_exec += (r.exec_time - b.avg_exec) / static_cast<double>(b.arrivals);
  }
  const auto n = static_cast<double>(reqs.size());
  m.avg_response_time = sum_response / n;
  m.avg_slowdown = sum_slowdown / n;
  m.avg_cold_start_time = total_cold / n;

  std::sort(m.response_cdf.begin(), m.response_cdf.end());
  std::sort(m.slowdown_cdf.begin(), m.slowdown_cdf.end());
  m.p50 = nearest_rank(m.response_cdf, 50);
  m.p95 = nearest_rank(m.response_cdf, 95);
  m.p99 = nearest_rank(m.response_cdf, 99);

  m.per_minute.reserve(minutes.size());
  for (auto& [_, b] : minutes) m.per_minute.push_back(b);
  return m;
}

std::string MetricsReport::to_json() const {
  nlohmann::ordered_json j;
  j["request_count"] = request_count;
  j["avg_response_ms"] = avg_response_time;
  j["avg_slowdown"] = avg_slowdown;
  j["avg_cold_start_ms"] = avg_cold_start_time;
  j["mean_cold_start_duration_ms"] = mean_cold_start_duration;
  j["cold_start_count"] = cold_start_count;
  j["total_eviction_ms"] = total_eviction_time;
  j["eviction_count"] = eviction_count;
  j["replacement_count"] = replacement_count;
  j["p50_ms"] = p50;
  j["p95_ms"] = p95;
  j["p99_ms"] = p99;
  return j.dump();
}

std::string MetricsReport::csv_header() {
  return "request_count,avg_response_ms,avg_slowdown,avg_cold_start_ms,p50,p95,p99,"
         "cold_start_count,replacement_count";
}

std::string MetricsReport::csv_row() const {
  return fmt::format("{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{},{}", request_count,
                     avg_response_time, avg_slowdown, avg_cold_start_time, p50, p95, p99,
                     cold_start_count, replacement_count);
}

std::string requests_csv(const std::vector<Request>& requests) {
  std::string out = "request_id,function_id,arrival_ms,start_ms,completion_ms,exec_ms\n";
  for (const auto& r : requests) {
    out += fmt::format("{},{},{:.6f},{:.6f},{:.6f},{:.6f}\n", r.id.value, r.function.value,
                       r.arrival, r.start.value_or(-1), r.completion.value_or(-1), r.exec_time);
  }
  return out;
}

}  // namespace edgesched
