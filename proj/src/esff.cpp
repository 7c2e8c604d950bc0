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

#include "edgesched/esff.hpp"

#include <limits>
#include <optional>

namespace edgesched {

WeightInputs weight_inputs(FunctionId f, const SchedulerContext& ctx) {
  const Estimate e = ctx.stats().estimate(f);
  WeightInputs w;
  w.avg_exec = e.exec;
  w.avg_cold_start = e.cold_start;
  w.avg_eviction = e.eviction;
  w.instance_count = ctx.server().instance_count(f);
  w.waiting_count = ctx.server().waiting_count(f);
  return w;
}

double remaining_after_cold_start(const WeightInputs& f) {
  return static_cast<double>(f.waiting_count) + 1.0 -
         f.avg_cold_start * static_cast<double>(f.instance_count) / f.avg_exec;
}

double remaining_after_replacement(const WeightInputs& f, Time victim_eviction,
                                   std::size_t instances) {
  return static_cast<double>(f.waiting_count) + 1.0 -
         (f.avg_cold_start + victim_eviction) * static_cast<double>(instances) / f.avg_exec;
}

double incumbent_weight(const WeightInputs& f) {
  if (f.waiting_count == 0) return std::numeric_limits<double>::infinity();
  return f.avg_exec +
         f.avg_eviction * static_cast<double>(f.instance_count) /
             static_cast<double>(f.waiting_count);
}

double challenger_weight(const WeightInputs& f, double remaining,
                         std::size_t completing_instances) {
  return f.avg_exec + (f.avg_cold_start + f.avg_eviction) *
                          static_cast<double>(completing_instances + 1) / remaining;
}

std::vector<Action> EsffScheduler::on_arrival(const Request& request,
                                              const SchedulerContext& ctx) {
  const auto& server = ctx.server();
  const FunctionId fj = request.function;
  const WeightInputs self = weight_inputs(fj, ctx);

  if (self.waiting_count == 0 && server.idle_count(fj) > 0) {
    return {DispatchToIdle{*server.mru_idle(fj), request.id}};
  }

  std::vector<Action> actions;
  if (server.has_free_slot()) {
    if (remaining_after_cold_start(self) > 0) actions.emplace_back(InitializeNew{fj});
  } else {
    // Candidate victims: functions with an idle instance whose eviction
    // still leaves fj with queued work. Pick the longest-running one.
    std::optional<FunctionId> victim_fn;
    Time victim_exec = 0;
    for (std::uint32_t i = 0; i < server.function_count(); ++i) {
      const FunctionId f{i};
      if (f == fj || server.idle_count(f) == 0) continue;
      const Estimate other = ctx.stats().estimate(f);
      if (remaining_after_replacement(self, other.eviction, self.instance_count) <= 0) continue;
      if (!victim_fn || other.exec > victim_exec) {
        victim_fn = f;
        victim_exec = other.exec;
      }
    }
    if (victim_fn) actions.emplace_back(Replace{*server.lru_idle(*victim_fn), fj});
  }
  actions.emplace_back(Enqueue{request.id});
  return actions;
}

std::vector<Action> EsffScheduler::on_completion(InstanceId instance,
                                                 const SchedulerContext& ctx) {
  const auto& server = ctx.server();
  const FunctionId fj = server.instance(instance).function;
  const WeightInputs self = weight_inputs(fj, ctx);

  std::optional<FunctionId> best;
  double best_weight = incumbent_weight(self);
  for (std::uint32_t i = 0; i < server.function_count(); ++i) {
    const FunctionId f{i};
    if (f == fj || server.waiting_count(f) == 0) continue;
    const WeightInputs cand = weight_inputs(f, ctx);
    const std::size_t draining = options_.frp_instance_count == FrpInstanceCount::kCandidate
                                     ? cand.instance_count
                                     : self.instance_count;
    const double remaining = remaining_after_replacement(cand, self.avg_eviction, draining);
    if (remaining <= 0) continue;
    const double w = challenger_weight(cand, remaining, self.instance_count);
    if (w < best_weight) {
      best = f;
      best_weight = w;
    }
  }

  if (best) return {Replace{instance, *best}};
  if (self.waiting_count > 0) return {TakeFromQueue{instance, server.queue(fj).front()}};
  return {GoIdle{instance}};
}

}  // namespace edgesched
