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

#include <cstdint>
#include <optional>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "edgesched/scheduler.hpp"

namespace edgesched {

// Comparison schedulers. None of them looks at the weight formulas; they
// differ in queue discipline and in which idle instance they sacrifice.
//
// Shared vocabulary: a waiting request of function g is "covered" when an
// instance already on its way to g (initializing, or evicting with g
// pending) will pick it up. Only uncovered requests trigger provisioning.

/// Tracks provisioning decided within one hook, before the engine has
/// applied it.
class ProvisionPlan {
 public:
  explicit ProvisionPlan(const SchedulerContext& ctx) : ctx_(ctx) {}

  std::size_t uncovered(FunctionId f) const;
  /// First uncovered request of `f` in queue order.
  std::optional<RequestId> first_uncovered(FunctionId f) const;

  bool slot_available() const;
  bool is_chosen(InstanceId k) const;
  /// Records that `k` serves the head of its own queue in this hook: `k`
  /// is no longer a victim candidate and that request no longer needs
  /// provisioning.
  void take_head(InstanceId k, FunctionId f);

  /// Free slot if any, else replace `victim`. Returns false when neither
  /// is possible.
  bool provision(FunctionId f, std::optional<InstanceId> victim, std::vector<Action>& out);

 private:
  const SchedulerContext& ctx_;
  std::unordered_map<std::uint32_t, std::size_t> added_;
  std::vector<InstanceId> victims_;
  std::size_t new_slots_ = 0;
};

/// Arrival-order (or key-order) central queue over per-function FIFO
/// queues. On arrival: idle instance, else queue and provision a new or
/// replaced instance. On completion: own queue first, then provision for
/// the best uncovered request elsewhere, else idle.
class CentralQueueScheduler : public Scheduler {
 public:
  std::vector<Action> on_arrival(const Request& request, const SchedulerContext& ctx) override;
  std::vector<Action> on_completion(InstanceId instance, const SchedulerContext& ctx) override;

 protected:
  /// Lower is served first; ties by arrival then id.
  virtual double order_key(RequestId r, const SchedulerContext& ctx) const;
  virtual void on_enqueue(const Request& /*request*/, const SchedulerContext& /*ctx*/) {}
  /// Idle instance to sacrifice for `target`, skipping ones already chosen.
  virtual std::optional<InstanceId> pick_victim(FunctionId target, const ProvisionPlan& plan,
                                                const SchedulerContext& ctx) const;
  virtual RequestId pick_from_own_queue(FunctionId f, const SchedulerContext& ctx) const;
};

/// OpenWhisk-style: strict arrival order, LRU victim.
class FifoScheduler final : public CentralQueueScheduler {
 public:
  std::string_view name() const override { return "fifo"; }
};

/// Shortest Function First: central order by the function's mean
/// execution time as estimated when the request was queued.
class SffScheduler final : public CentralQueueScheduler {
 public:
  std::string_view name() const override { return "sff"; }

 protected:
  double order_key(RequestId r, const SchedulerContext& ctx) const override;
  void on_enqueue(const Request& request, const SchedulerContext& ctx) override;
  RequestId pick_from_own_queue(FunctionId f, const SchedulerContext& ctx) const override;

 private:
  std::unordered_map<std::uint64_t, double> keys_;
};

/// Keep-alive cache flavour: arrival order, but the victim is the idle
/// instance with the lowest Greedy-Dual-like priority
/// last_use + (avg_exec + avg_cold_start).
class FaasCacheScheduler final : public CentralQueueScheduler {
 public:
  std::string_view name() const override { return "faascache"; }

  static double keep_alive_priority(const Instance& k, const SchedulerContext& ctx);

 protected:
  std::optional<InstanceId> pick_victim(FunctionId target, const ProvisionPlan& plan,
                                        const SchedulerContext& ctx) const override;
};

/// Per-function queues; an instance keeps draining its own queue, and a
/// function gets a new (or replaced) instance only once its first
/// uncovered request has waited for the configured threshold.
class OpenWhiskV2Scheduler final : public Scheduler {
 public:
  std::string_view name() const override { return "openwhisk-v2"; }

  std::vector<Action> on_arrival(const Request& request, const SchedulerContext& ctx) override;
  std::vector<Action> on_completion(InstanceId instance, const SchedulerContext& ctx) override;
  std::vector<Action> on_timer(std::uint64_t tag, const SchedulerContext& ctx) override;

 private:
  static void sweep(const SchedulerContext& ctx, ProvisionPlan& plan, std::vector<Action>& out);
};

/// LRU idle instance not running `target` and not already chosen.
std::optional<InstanceId> lru_victim(FunctionId target, const ProvisionPlan& plan,
                                     const SchedulerContext& ctx);

}  // namespace edgesched
