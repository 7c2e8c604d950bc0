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
#include <iosfwd>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "edgesched/core.hpp"
#include "edgesched/stats.hpp"

namespace edgesched {

class Scheduler;

// Events at equal timestamps are processed in this order, then by seq.
enum class EventKind : std::uint8_t {
  kExecutionDone = 0,
  kEvictionDone = 1,
  kColdStartDone = 2,
  kTimer = 3,
  kArrival = 4,
};

std::string_view to_string(EventKind kind);

struct Event {
  Time time = 0;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::kArrival;
  std::optional<RequestId> request;
  std::optional<InstanceId> instance;
  std::optional<FunctionId> function;  // pending function for kEvictionDone
  std::uint64_t timer_tag = 0;

  /// Total order: (time, kind priority, seq).
  bool before(const Event& other) const;
};

struct SimulationConfig {
  std::size_t capacity = 16;
  std::uint64_t rng_seed = 1;
  Time cold_start_min = 500;
  Time cold_start_max = 1500;
  Time eviction_min = 500;
  Time eviction_max = 1500;
  double intensity_ratio = 1.0;
  Time v2_wait_threshold = 100;
  PriorMode prior_mode = PriorMode::kGlobal;
  Time exec_prior = 1000;
  // Functions with one Idle instance each at time zero.
  std::vector<FunctionId> warm_pool;

  /// Throws ValidationError when a field is out of range.
  void validate() const;
  EstimatorPrior estimator_prior() const;
};

struct TimedDuration {
  FunctionId function;
  Time time = 0;      // when the transition started
  Time duration = 0;
};

enum class Hook : std::uint8_t { kArrival, kCompletion, kTimer };

std::string_view to_string(Hook hook);

// Scheduler decisions. Hooks return an ordered list; the engine applies
// them one at a time and rejects any that is invalid in the current state.
struct DispatchToIdle {
  InstanceId instance;
  RequestId request;
  friend bool operator==(const DispatchToIdle&, const DispatchToIdle&) = default;
};
struct Enqueue {
  RequestId request;
  friend bool operator==(const Enqueue&, const Enqueue&) = default;
};
struct InitializeNew {
  FunctionId function;
  friend bool operator==(const InitializeNew&, const InitializeNew&) = default;
};
struct Replace {
  InstanceId victim;
  FunctionId function;
  friend bool operator==(const Replace&, const Replace&) = default;
};
struct TakeFromQueue {
  InstanceId instance;
  RequestId request;
  friend bool operator==(const TakeFromQueue&, const TakeFromQueue&) = default;
};
struct GoIdle {
  InstanceId instance;
  friend bool operator==(const GoIdle&, const GoIdle&) = default;
};
struct ArmTimer {
  Time at = 0;
  std::uint64_t tag = 0;
  friend bool operator==(const ArmTimer&, const ArmTimer&) = default;
};

using Action =
    std::variant<DispatchToIdle, Enqueue, InitializeNew, Replace, TakeFromQueue, GoIdle, ArmTimer>;

std::string describe(const Action& action);

struct ActionRecord {
  Time time = 0;
  Hook hook = Hook::kArrival;
  Action action;
};

struct SimulationResult {
  std::vector<Request> requests;  // ascending id
  std::vector<TimedDuration> cold_start_events;
  std::vector<TimedDuration> eviction_events;
  std::size_t replacement_count = 0;
  std::vector<ActionRecord> actions;
  std::size_t events_processed = 0;
  std::size_t peak_slots = 0;
};

/// Read-only view of the run a scheduler gets inside a hook.
class SchedulerContext {
 public:
  SchedulerContext(Time now, const ServerState& server, const Estimator& stats,
                   std::span<const Request> requests, const SimulationConfig& config)
      : now_(now), server_(server), stats_(stats), requests_(requests), config_(config) {}

  Time now() const { return now_; }
  const ServerState& server() const { return server_; }
  const Estimator& stats() const { return stats_; }
  const SimulationConfig& config() const { return config_; }

  Time arrival_of(RequestId r) const { return requests_[r.value].arrival; }
  FunctionId function_of(RequestId r) const { return requests_[r.value].function; }
  bool started(RequestId r) const { return requests_[r.value].start.has_value(); }

 private:
  Time now_;
  const ServerState& server_;
  const Estimator& stats_;
  std::span<const Request> requests_;
  const SimulationConfig& config_;
};

/// Draws one cold-start and one eviction time per function, uniformly from
/// the configured ranges, with a generator seeded from `seed`.
std::vector<FunctionProfile> draw_profiles(std::size_t function_count,
                                           const SimulationConfig& config,
                                           std::uint64_t seed);

/// Discrete-event simulation of one edge server under one scheduler.
///
/// Requests must be sorted by arrival with ids 0..n-1 in that order, and
/// every function id must have a profile at index id. Throws
/// ValidationError on bad input and ContractViolation when the scheduler
/// breaks an invariant (capacity, idle-with-queue, dropped request,
/// unfinished work at the end).
class Simulation {
 public:
  Simulation(std::vector<Request> trace, std::vector<FunctionProfile> profiles,
             SimulationConfig config, Scheduler& scheduler);

  /// Writes one `time_ms,kind,function_id,instance_id,request_id` line per
  /// processed event.
  void set_event_log(std::ostream* out) { event_log_ = out; }

  SimulationResult run();

  // Mechanism used by action application; exposed for tests.
  InstanceId schedule_cold_start(FunctionId f);
  void schedule_replacement(InstanceId victim, FunctionId f);

  const ServerState& server() const { return server_; }
  const Estimator& stats() const { return stats_; }
  Time now() const { return now_; }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const { return b.before(a); }
  };

  void push(Event e);
  void handle(const Event& e);
  void apply(std::span<const Action> actions, Hook hook, std::optional<RequestId> arriving);
  void start_request(InstanceId k, RequestId r);
  void log_event(const Event& e);
  void check_quiescent() const;
  SchedulerContext context() const;

  std::vector<Request> requests_;
  std::vector<FunctionProfile> profiles_;
  SimulationConfig config_;
  Scheduler& scheduler_;
  ServerState server_;
  Estimator stats_;
  std::priority_queue<Event, std::vector<Event>, Later> events_;
  std::uint64_t next_seq_ = 0;
  Time now_ = 0;
  SimulationResult result_;
  std::ostream* event_log_ = nullptr;
  bool ran_ = false;
};

/// Convenience wrapper around Simulation.
SimulationResult run(std::vector<Request> trace, std::vector<FunctionProfile> profiles,
                     const SimulationConfig& config, Scheduler& scheduler,
                     std::ostream* event_log = nullptr);

}  // namespace edgesched
