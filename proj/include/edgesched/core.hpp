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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace edgesched {

/// Simulated wall-clock time in milliseconds. All timestamps of one run
/// share the same epoch.
using Time = double;

/// Tagged integer id; keeps function, request and instance ids apart.
template <typename Tag, typename Rep>
struct Id {
  Rep value{};

  constexpr Id() = default;
  constexpr explicit Id(Rep v) : value(v) {}

  constexpr auto operator<=>(const Id&) const = default;
};

using FunctionId = Id<struct FunctionTag, std::uint32_t>;
using RequestId = Id<struct RequestTag, std::uint64_t>;
using InstanceId = Id<struct InstanceTag, std::uint64_t>;

struct Request {
  RequestId id;
  FunctionId function;
  Time arrival = 0;
  // Ground truth; schedulers never see it before completion.
  Time exec_time = 0;
  std::optional<Time> start;
  std::optional<Time> completion;

  bool completed() const { return start.has_value() && completion.has_value(); }
  Time response_time() const { return *completion - arrival; }
};

struct FunctionProfile {
  FunctionId id;
  Time cold_start = 0;
  Time eviction = 0;
  // Historical mean execution time known before the run starts, if any.
  // Used only as the estimator prior for this function.
  std::optional<Time> exec_hint;
};

enum class InstanceState : std::uint8_t { kInitializing, kIdle, kBusy, kEvicting };

std::string_view to_string(InstanceState state);

struct Instance {
  InstanceId id;
  FunctionId function;
  InstanceState state = InstanceState::kInitializing;
  Time state_entered_at = 0;
  std::optional<RequestId> current_request;
  // Function that will be cold-started in this slot once eviction finishes.
  std::optional<FunctionId> pending;
};

/// The edge server: a bounded set of instance slots plus one FIFO queue of
/// waiting requests per function.
///
/// ServerState checks the lifecycle state machine on every mutation but
/// knows nothing about events or time advancing; the engine drives it.
class ServerState {
 public:
  ServerState(std::size_t capacity, std::size_t function_count);

  std::size_t capacity() const { return capacity_; }
  std::size_t function_count() const { return queues_.size(); }

  /// Instances in any lifecycle state, including transitioning slots.
  std::size_t total_slots() const { return instances_.size(); }
  bool has_free_slot() const { return instances_.size() < capacity_; }

  std::size_t idle_count(FunctionId f) const;
  std::size_t busy_count(FunctionId f) const;

  /// Slots committed to `f`: its Initializing, Idle and Busy instances plus
  /// Evicting slots whose pending cold start is for `f`.
  std::size_t instance_count(FunctionId f) const;

  /// Slots that will become available to `f` without further decisions:
  /// Initializing instances of `f` and Evicting slots pending for `f`.
  std::size_t incoming_count(FunctionId f) const;

  std::size_t waiting_count(FunctionId f) const { return queue(f).size(); }
  std::size_t total_waiting() const;
  const std::deque<RequestId>& queue(FunctionId f) const;

  std::span<const Instance> instances() const { return instances_; }
  const Instance& instance(InstanceId id) const;
  bool contains(InstanceId id) const;

  /// Idle instance of `f` that has been idle the longest (ties: lowest id).
  std::optional<InstanceId> lru_idle(FunctionId f) const;
  /// Idle instance of `f` that became idle most recently (ties: lowest id).
  std::optional<InstanceId> mru_idle(FunctionId f) const;

  // Mutators. Each validates the transition and throws StateError or
  // CapacityError on misuse.
  InstanceId add_initializing(FunctionId f, Time now);
  InstanceId add_idle(FunctionId f, Time now);
  void mark_idle(InstanceId id, Time now);
  void mark_busy(InstanceId id, RequestId request, Time now);
  void mark_evicting(InstanceId id, std::optional<FunctionId> pending, Time now);
  /// Removes an Evicting instance once its teardown has finished.
  Instance remove_evicted(InstanceId id);

  void enqueue(FunctionId f, RequestId r);
  RequestId pop_front(FunctionId f);
  /// Removes `r` from q_f wherever it sits. Returns false if absent.
  bool remove_waiting(FunctionId f, RequestId r);

 private:
  Instance& mutable_instance(InstanceId id);
  void check_function(FunctionId f) const;
  InstanceId add(FunctionId f, InstanceState state, Time now);

  std::size_t capacity_;
  std::uint64_t next_instance_id_ = 0;
  std::vector<Instance> instances_;  // ascending id
  std::vector<std::deque<RequestId>> queues_;
};

}  // namespace edgesched

template <typename Tag, typename Rep>
struct std::hash<edgesched::Id<Tag, Rep>> {
  std::size_t operator()(const edgesched::Id<Tag, Rep>& id) const noexcept {
    return std::hash<Rep>{}(id.value);
  }
};
