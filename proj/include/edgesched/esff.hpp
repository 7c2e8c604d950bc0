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
#include <string_view>
#include <vector>

#include "edgesched/scheduler.hpp"

namespace edgesched {

/// History-based inputs of the weight formulas for one function.
struct WeightInputs {
  Time avg_exec = 0;
  Time avg_cold_start = 0;
  Time avg_eviction = 0;
  std::size_t instance_count = 0;  // |K^j|
  std::size_t waiting_count = 0;   // n^w_j
};

WeightInputs weight_inputs(FunctionId f, const SchedulerContext& ctx);

/// Requests of `f` still expected to be waiting once a fresh instance
/// finishes its cold start, counting the one that just arrived.
double remaining_after_cold_start(const WeightInputs& f);

/// Same estimate when the new instance must first wait for an eviction
/// taking `victim_eviction`. `instances` is the instance count that drains
/// the queue meanwhile.
double remaining_after_replacement(const WeightInputs& f, Time victim_eviction,
                                   std::size_t instances);

/// Urgency of keeping an instance on its current function; +inf when the
/// function has nothing waiting.
double incumbent_weight(const WeightInputs& f);

/// Urgency of switching one instance of the completing function (which
/// holds `completing_instances` slots) over to the candidate `f`.
double challenger_weight(const WeightInputs& f, double remaining,
                         std::size_t completing_instances);

/// Enhanced Shortest Function First.
///
/// On arrival (creation policy): run the request on an idle instance when
/// the queue is empty; otherwise queue it, and cold-start a new instance
/// if a slot is free and the estimate says one would still find work, or,
/// at capacity, replace an idle instance of the longest-running function
/// whose eviction still leaves work.
///
/// On completion (replacement policy): hand the instance to the waiting
/// function with the smallest weight if that weight is strictly below the
/// current function's, else keep draining the current queue, else idle.
class EsffScheduler final : public Scheduler {
 public:
  explicit EsffScheduler(SchedulerOptions options = {}) : options_(options) {}

  std::string_view name() const override { return "esff"; }

  std::vector<Action> on_arrival(const Request& request, const SchedulerContext& ctx) override;
  std::vector<Action> on_completion(InstanceId instance, const SchedulerContext& ctx) override;

 private:
  SchedulerOptions options_;
};

}  // namespace edgesched
