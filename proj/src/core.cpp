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

#include "edgesched/core.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>

#include "edgesched/errors.hpp"

namespace edgesched {

std::string_view to_string(InstanceState state) {
  switch (state) {
    case InstanceState::kInitializing:
      return "initializing";
    case InstanceState::kIdle:
      return "idle";
    case InstanceState::kBusy:
      return "busy";
    case InstanceState::kEvicting:
      return "evicting";
  }
  return "unknown";
}

ServerState::ServerState(std::size_t capacity, std::size_t function_count)
    : capacity_(capacity), queues_(function_count) {
  if (capacity == 0) throw ValidationError("server capacity must be at least 1");
}

void ServerState::check_function(FunctionId f) const {
  if (f.value >= queues_.size()) {
    throw std::out_of_range("unknown function id " + std::to_string(f.value));
  }
}

std::size_t ServerState::idle_count(FunctionId f) const {
  check_function(f);
  return static_cast<std::size_t>(std::count_if(
      instances_.begin(), instances_.end(), [f](const Instance& k) {
        return k.function == f && k.state == InstanceState::kIdle;
      }));
}

std::size_t ServerState::busy_count(FunctionId f) const {
  check_function(f);
  return static_cast<std::size_t>(std::count_if(
      instances_.begin(), instances_.end(), [f](const Instance& k) {
        return k.function == f && k.state == InstanceState::kBusy;
      }));
}

std::size_t ServerState::instance_count(FunctionId f) const {
  check_function(f);
  std::size_t n = 0;
  for (const auto& k : instances_) {
    if (k.state == InstanceState::kEvicting) {
      n += k.pending == f ? 1 : 0;
    } else {
      n += k.function == f ? 1 : 0;
    }
  }
  return n;
}

std::size_t ServerState::incoming_count(FunctionId f) const {
  check_function(f);
  std::size_t n = 0;
  for (const auto& k : instances_) {
    if (k.state == InstanceState::kEvicting) {
      n += k.pending == f ? 1 : 0;
    } else if (k.state == InstanceState::kInitializing) {
      n += k.function == f ? 1 : 0;
    }
  }
  return n;
}

std::size_t ServerState::total_waiting() const {
  std::size_t n = 0;
  for (const auto& q : queues_) n += q.size();
  return n;
}

const std::deque<RequestId>& ServerState::queue(FunctionId f) const {
  check_function(f);
  return queues_[f.value];
}

const Instance& ServerState::instance(InstanceId id) const {
  auto it = std::lower_bound(
      instances_.begin(), instances_.end(), id,
      [](const Instance& k, InstanceId v) { return k.id < v; });
  if (it == instances_.end() || it->id != id) {
    throw std::out_of_range("unknown instance id " + std::to_string(id.value));
  }
  return *it;
}

Instance& ServerState::mutable_instance(InstanceId id) {
  return const_cast<Instance&>(std::as_const(*this).instance(id));
}

bool ServerState::contains(InstanceId id) const {
  return std::any_of(instances_.begin(), instances_.end(),
                     [id](const Instance& k) { return k.id == id; });
}

std::optional<InstanceId> ServerState::lru_idle(FunctionId f) const {
  check_function(f);
  const Instance* best = nullptr;
  for (const auto& k : instances_) {
    if (k.function != f || k.state != InstanceState::kIdle) continue;
    if (best == nullptr || k.state_entered_at < best->state_entered_at) best = &k;
  }
  if (best == nullptr) return std::nullopt;
  return best->id;
}

std::optional<InstanceId> ServerState::mru_idle(FunctionId f) const {
  check_function(f);
  const Instance* best = nullptr;
  for (const auto& k : instances_) {
    if (k.function != f || k.state != InstanceState::kIdle) continue;
    if (best == nullptr || k.state_entered_at > best->state_entered_at) best = &k;
  }
  if (best == nullptr) return std::nullopt;
  return best->id;
}

InstanceId ServerState::add(FunctionId f, InstanceState state, Time now) {
  check_function(f);
  if (!has_free_slot()) {
    throw CapacityError("no free slot for function " + std::to_string(f.value) +
                        " (capacity " + std::to_string(capacity_) + ")");
  }
  Instance k;
  k.id = InstanceId{next_instance_id_++};
  k.function = f;
  k.state = state;
  k.state_entered_at = now;
  instances_.push_back(k);
  return k.id;
}

InstanceId ServerState::add_initializing(FunctionId f, Time now) {
  return add(f, InstanceState::kInitializing, now);
}

InstanceId ServerState::add_idle(FunctionId f, Time now) {
  return add(f, InstanceState::kIdle, now);
}

void ServerState::mark_idle(InstanceId id, Time now) {
  auto& k = mutable_instance(id);
  if (k.state != InstanceState::kInitializing && k.state != InstanceState::kBusy) {
    throw StateError("instance " + std::to_string(id.value) + " cannot go idle from " +
                     std::string(to_string(k.state)));
  }
  k.state = InstanceState::kIdle;
  k.state_entered_at = now;
  k.current_request.reset();
}

void ServerState::mark_busy(InstanceId id, RequestId request, Time now) {
  auto& k = mutable_instance(id);
  if (k.state != InstanceState::kIdle && k.state != InstanceState::kInitializing) {
    throw StateError("instance " + std::to_string(id.value) + " cannot start a request while " +
                     std::string(to_string(k.state)));
  }
  k.state = InstanceState::kBusy;
  k.state_entered_at = now;
  k.current_request = request;
}

void ServerState::mark_evicting(InstanceId id, std::optional<FunctionId> pending, Time now) {
  if (pending) check_function(*pending);
  auto& k = mutable_instance(id);
  if (k.state != InstanceState::kIdle) {
    throw StateError("instance " + std::to_string(id.value) + " cannot be evicted while " +
                     std::string(to_string(k.state)));
  }
  k.state = InstanceState::kEvicting;
  k.state_entered_at = now;
  k.pending = pending;
}

Instance ServerState::remove_evicted(InstanceId id) {
  auto it = std::find_if(instances_.begin(), instances_.end(),
                         [id](const Instance& k) { return k.id == id; });
  if (it == instances_.end()) {
    throw std::out_of_range("unknown instance id " + std::to_string(id.value));
  }
  if (it->state != InstanceState::kEvicting) {
    throw StateError("instance " + std::to_string(id.value) + " removed while " +
                     std::string(to_string(it->state)));
  }
  Instance removed = *it;
  instances_.erase(it);
  return removed;
}

void ServerState::enqueue(FunctionId f, RequestId r) {
  check_function(f);
  queues_[f.value].push_back(r);
}

RequestId ServerState::pop_front(FunctionId f) {
  check_function(f);
  auto& q = queues_[f.value];
  if (q.empty()) throw StateError("queue of function " + std::to_string(f.value) + " is empty");
  RequestId r = q.front();
  q.pop_front();
  return r;
}

bool ServerState::remove_waiting(FunctionId f, RequestId r) {
  check_function(f);
  auto& q = queues_[f.value];
  auto it = std::find(q.begin(), q.end(), r);
  if (it == q.end()) return false;
  q.erase(it);
  return true;
}

}  // namespace edgesched
