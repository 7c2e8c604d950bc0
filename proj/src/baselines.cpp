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

#include "edgesched/baselines.hpp"

#include <algorithm>
#include <tuple>

namespace edgesched {

std::size_t ProvisionPlan::uncovered(FunctionId f) const {
  const auto& server = ctx_.server();
  const std::size_t waiting = server.waiting_count(f);
  auto it = added_.find(f.value);
  const std::size_t covered =
      server.incoming_count(f) + (it == added_.end() ? 0 : it->second);
  return waiting > covered ? waiting - covered : 0;
}

std::optional<RequestId> ProvisionPlan::first_uncovered(FunctionId f) const {
  if (uncovered(f) == 0) return std::nullopt;
  const auto& q = ctx_.server().queue(f);
  return q[q.size() - uncovered(f)];
}

bool ProvisionPlan::slot_available() const {
  return ctx_.server().total_slots() + new_slots_ < ctx_.server().capacity();
}

bool ProvisionPlan::is_chosen(InstanceId k) const {
  return std::find(victims_.begin(), victims_.end(), k) != victims_.end();
}

void ProvisionPlan::take_head(InstanceId k, FunctionId f) {
  victims_.push_back(k);
  ++added_[f.value];
}

bool ProvisionPlan::provision(FunctionId f, std::optional<InstanceId> victim,
                              std::vector<Action>& out) {
  if (slot_available()) {
    out.emplace_back(InitializeNew{f});
    ++new_slots_;
  } else if (victim) {
    out.emplace_back(Replace{*victim, f});
    victims_.push_back(*victim);
  } else {
    return false;
  }
  ++added_[f.value];
  return true;
}

std::optional<InstanceId> lru_victim(FunctionId target, const ProvisionPlan& plan,
                                     const SchedulerContext& ctx) {
  const Instance* best = nullptr;
  for (const auto& k : ctx.server().instances()) {
    if (k.state != InstanceState::kIdle || k.function == target || plan.is_chosen(k.id)) continue;
    if (best == nullptr || k.state_entered_at < best->state_entered_at) best = &k;
  }
  if (best == nullptr) return std::nullopt;
  return best->id;
}

double CentralQueueScheduler::order_key(RequestId r, const SchedulerContext& ctx) const {
  return ctx.arrival_of(r);
}

std::optional<InstanceId> CentralQueueScheduler::pick_victim(FunctionId target,
                                                             const ProvisionPlan& plan,
                                                             const SchedulerContext& ctx) const {
  return lru_victim(target, plan, ctx);
}

RequestId CentralQueueScheduler::pick_from_own_queue(FunctionId f,
                                                     const SchedulerContext& ctx) const {
  return ctx.server().queue(f).front();
}

std::vector<Action> CentralQueueScheduler::on_arrival(const Request& request,
                                                      const SchedulerContext& ctx) {
  const auto& server = ctx.server();
  const FunctionId f = request.function;
  if (server.idle_count(f) > 0) return {DispatchToIdle{*server.mru_idle(f), request.id}};

  on_enqueue(request, ctx);
  std::vector<Action> actions;
  ProvisionPlan plan(ctx);
  // The arriving request is not queued yet: it is uncovered when every
  // incoming instance already has a queued request waiting for it.
  if (server.waiting_count(f) >= server.incoming_count(f)) {
    plan.provision(f, plan.slot_available() ? std::nullopt : pick_victim(f, plan, ctx), actions);
  }
  actions.emplace_back(Enqueue{request.id});
  return actions;
}

std::vector<Action> CentralQueueScheduler::on_completion(InstanceId instance,
                                                         const SchedulerContext& ctx) {
  const auto& server = ctx.server();
  const FunctionId f = server.instance(instance).function;
  if (server.waiting_count(f) > 0) return {TakeFromQueue{instance, pick_from_own_queue(f, ctx)}};

  std::vector<Action> actions;
  ProvisionPlan plan(ctx);
  for (;;) {
    std::optional<std::tuple<double, Time, RequestId>> head;
    for (std::uint32_t i = 0; i < server.function_count(); ++i) {
      auto r = plan.first_uncovered(FunctionId{i});
      if (!r) continue;
      auto key = std::tuple(order_key(*r, ctx), ctx.arrival_of(*r), *r);
      if (!head || key < *head) head = key;
    }
    if (!head) break;
    const FunctionId g = ctx.function_of(std::get<2>(*head));
    auto victim = plan.slot_available() ? std::nullopt : pick_victim(g, plan, ctx);
    if (!plan.provision(g, victim, actions)) break;
  }
  if (!plan.is_chosen(instance)) actions.emplace_back(GoIdle{instance});
  return actions;
}

void SffScheduler::on_enqueue(const Request& request, const SchedulerContext& ctx) {
  keys_[request.id.value] = ctx.stats().estimate(request.function).exec;
}

double SffScheduler::order_key(RequestId r, const SchedulerContext& ctx) const {
  auto it = keys_.find(r.value);
  if (it != keys_.end()) return it->second;
  return ctx.stats().estimate(ctx.function_of(r)).exec;
}

RequestId SffScheduler::pick_from_own_queue(FunctionId f, const SchedulerContext& ctx) const {
  const auto& q = ctx.server().queue(f);
  return *std::min_element(q.begin(), q.end(), [&](RequestId a, RequestId b) {
    return std::tuple(order_key(a, ctx), ctx.arrival_of(a), a) <
           std::tuple(order_key(b, ctx), ctx.arrival_of(b), b);
  });
}

double FaasCacheScheduler::keep_alive_priority(const Instance& k, const SchedulerContext& ctx) {
  const Estimate e = ctx.stats().estimate(k.function);
  return k.state_entered_at + e.exec + e.cold_start;
}

std::optional<InstanceId> FaasCacheScheduler::pick_victim(FunctionId target,
                                                          const ProvisionPlan& plan,
                                                          const SchedulerContext& ctx) const {
  const Instance* best = nullptr;
  double best_priority = 0;
  for (const auto& k : ctx.server().instances()) {
    if (k.state != InstanceState::kIdle || k.function == target || plan.is_chosen(k.id)) continue;
    const double p = keep_alive_priority(k, ctx);
    if (best == nullptr || p < best_priority) {
      best = &k;
      best_priority = p;
    }
  }
  if (best == nullptr) return std::nullopt;
  return best->id;
}

void OpenWhiskV2Scheduler::sweep(const SchedulerContext& ctx, ProvisionPlan& plan,
                                 std::vector<Action>& out) {
  const auto& server = ctx.server();
  const Time threshold = ctx.config().v2_wait_threshold;
  for (;;) {
    std::optional<std::pair<Time, RequestId>> oldest;
    for (std::uint32_t i = 0; i < server.function_count(); ++i) {
      auto r = plan.first_uncovered(FunctionId{i});
      if (!r || ctx.now() - ctx.arrival_of(*r) < threshold) continue;
      auto key = std::pair(ctx.arrival_of(*r), *r);
      if (!oldest || key < *oldest) oldest = key;
    }
    if (!oldest) return;
    const FunctionId g = ctx.function_of(oldest->second);
    auto victim = plan.slot_available() ? std::nullopt : lru_victim(g, plan, ctx);
    if (!plan.provision(g, victim, out)) return;
  }
}

std::vector<Action> OpenWhiskV2Scheduler::on_arrival(const Request& request,
                                                     const SchedulerContext& ctx) {
  const auto& server = ctx.server();
  const FunctionId f = request.function;
  if (server.waiting_count(f) == 0 && server.idle_count(f) > 0) {
    return {DispatchToIdle{*server.mru_idle(f), request.id}};
  }
  std::vector<Action> actions{Enqueue{request.id}};
  const Time threshold = ctx.config().v2_wait_threshold;
  if (threshold <= 0 && server.waiting_count(f) >= server.incoming_count(f)) {
    ProvisionPlan plan(ctx);
    plan.provision(f, plan.slot_available() ? std::nullopt : lru_victim(f, plan, ctx), actions);
  } else {
    actions.emplace_back(ArmTimer{request.arrival + threshold, request.id.value});
  }
  return actions;
}

std::vector<Action> OpenWhiskV2Scheduler::on_completion(InstanceId instance,
                                                        const SchedulerContext& ctx) {
  const auto& server = ctx.server();
  const FunctionId f = server.instance(instance).function;
  std::vector<Action> actions;
  ProvisionPlan plan(ctx);
  if (server.waiting_count(f) > 0) {
    actions.emplace_back(TakeFromQueue{instance, server.queue(f).front()});
    plan.take_head(instance, f);
    sweep(ctx, plan, actions);
    return actions;
  }
  sweep(ctx, plan, actions);
  if (!plan.is_chosen(instance)) actions.emplace_back(GoIdle{instance});
  return actions;
}

std::vector<Action> OpenWhiskV2Scheduler::on_timer(std::uint64_t /*tag*/,
                                                   const SchedulerContext& ctx) {
  std::vector<Action> actions;
  ProvisionPlan plan(ctx);
  sweep(ctx, plan, actions);
  return actions;
}

}  // namespace edgesched
