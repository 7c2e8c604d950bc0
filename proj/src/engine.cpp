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

#include "edgesched/engine.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <ostream>
#include <random>
#include <tuple>
#include <utility>

#include "edgesched/errors.hpp"
#include "edgesched/scheduler.hpp"

namespace edgesched {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kExecutionDone:
      return "execution_done";
    case EventKind::kEvictionDone:
      return "eviction_done";
    case EventKind::kColdStartDone:
      return "cold_start_done";
    case EventKind::kTimer:
      return "timer";
    case EventKind::kArrival:
      return "arrival";
  }
  return "unknown";
}

std::string_view to_string(Hook hook) {
  switch (hook) {
    case Hook::kArrival:
      return "arrival";
    case Hook::kCompletion:
      return "completion";
    case Hook::kTimer:
      return "timer";
  }
  return "unknown";
}

bool Event::before(const Event& other) const {
  return std::tuple(time, static_cast<int>(kind), seq) <
         std::tuple(other.time, static_cast<int>(other.kind), other.seq);
}

void SimulationConfig::validate() const {
  if (capacity < 1) throw ValidationError("capacity must be at least 1");
  if (!(cold_start_min >= 0) || cold_start_min > cold_start_max) {
    throw ValidationError("cold start range must satisfy 0 <= min <= max");
  }
  if (!(eviction_min >= 0) || eviction_min > eviction_max) {
    throw ValidationError("eviction range must satisfy 0 <= min <= max");
  }
  if (!(intensity_ratio > 0)) throw ValidationError("intensity ratio must be positive");
  if (!(v2_wait_threshold >= 0)) throw ValidationError("wait threshold must be non-negative");
  if (!(exec_prior > 0)) throw ValidationError("execution prior must be positive");
  if (warm_pool.size() > capacity) throw ValidationError("warm pool exceeds capacity");
}

EstimatorPrior SimulationConfig::estimator_prior() const {
  EstimatorPrior p;
  p.mode = prior_mode;
  p.exec = exec_prior;
  p.cold_start = (cold_start_min + cold_start_max) / 2;
  p.eviction = (eviction_min + eviction_max) / 2;
  return p;
}

std::string describe(const Action& action) {
  return std::visit(
      [](const auto& a) -> std::string {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, DispatchToIdle>) {
          return fmt::format("dispatch(instance={},request={})", a.instance.value,
                             a.request.value);
        } else if constexpr (std::is_same_v<T, Enqueue>) {
          return fmt::format("enqueue(request={})", a.request.value);
        } else if constexpr (std::is_same_v<T, InitializeNew>) {
          return fmt::format("initialize(function={})", a.function.value);
        } else if constexpr (std::is_same_v<T, Replace>) {
          return fmt::format("replace(victim={},function={})", a.victim.value, a.function.value);
        } else if constexpr (std::is_same_v<T, TakeFromQueue>) {
          return fmt::format("take(instance={},request={})", a.instance.value, a.request.value);
        } else if constexpr (std::is_same_v<T, GoIdle>) {
          return fmt::format("idle(instance={})", a.instance.value);
        } else {
          return fmt::format("timer(at={:.3f},tag={})", a.at, a.tag);
        }
      },
      action);
}

std::vector<FunctionProfile> draw_profiles(std::size_t function_count,
                                           const SimulationConfig& config,
                                           std::uint64_t seed) {
  config.validate();
  std::mt19937_64 rng(seed);
  auto draw = [&rng](Time lo, Time hi) {
    if (lo == hi) return lo;
    return std::uniform_real_distribution<Time>(lo, hi)(rng);
  };
  std::vector<FunctionProfile> profiles(function_count);
  for (std::size_t i = 0; i < function_count; ++i) {
    profiles[i].id = FunctionId{static_cast<std::uint32_t>(i)};
    profiles[i].cold_start = draw(config.cold_start_min, config.cold_start_max);
    profiles[i].eviction = draw(config.eviction_min, config.eviction_max);
  }
  return profiles;
}

Simulation::Simulation(std::vector<Request> trace, std::vector<FunctionProfile> profiles,
                       SimulationConfig config, Scheduler& scheduler)
    : requests_(std::move(trace)),
      profiles_(std::move(profiles)),
      config_(std::move(config)),
      scheduler_(scheduler),
      server_((config_.validate(), config_.capacity), profiles_.size()),
      stats_(profiles_.size(), config_.estimator_prior()) {
  for (std::size_t i = 0; i < profiles_.size(); ++i) {
    const auto& p = profiles_[i];
    if (p.id.value != i) throw ValidationError("profile ids must be dense and ordered");
    if (!(p.cold_start >= 0) || !(p.eviction >= 0)) {
      throw ValidationError("profile " + std::to_string(i) + " has a negative duration");
    }
    if (p.exec_hint) stats_.set_exec_hint(p.id, *p.exec_hint);
  }
  for (std::size_t i = 0; i < requests_.size(); ++i) {
    const auto& r = requests_[i];
    if (r.id.value != i) throw ValidationError("request ids must be 0..n-1 in trace order");
    if (r.function.value >= profiles_.size()) {
      throw ValidationError("request " + std::to_string(i) + " references unknown function " +
                            std::to_string(r.function.value));
    }
    if (!(r.exec_time > 0)) {
      throw ValidationError("request " + std::to_string(i) + " has non-positive exec time");
    }
    if (!(r.arrival >= 0)) throw ValidationError("request " + std::to_string(i) + " arrives before 0");
    if (i > 0 && r.arrival < requests_[i - 1].arrival) {
      throw ValidationError("trace is not sorted by arrival");
    }
    if (r.start || r.completion) {
      throw ValidationError("request " + std::to_string(i) + " is already scheduled");
    }
  }
  for (FunctionId f : config_.warm_pool) {
    if (f.value >= profiles_.size()) throw ValidationError("warm pool names unknown function");
    server_.add_idle(f, 0);
  }
  result_.peak_slots = server_.total_slots();
}

void Simulation::push(Event e) {
  e.seq = next_seq_++;
  events_.push(std::move(e));
}

SchedulerContext Simulation::context() const {
  return SchedulerContext(now_, server_, stats_, requests_, config_);
}

InstanceId Simulation::schedule_cold_start(FunctionId f) {
  InstanceId id = server_.add_initializing(f, now_);
  const Time l = profiles_.at(f.value).cold_start;
  result_.cold_start_events.push_back({f, now_, l});
  Event e;
  e.time = now_ + l;
  e.kind = EventKind::kColdStartDone;
  e.instance = id;
  e.function = f;
  push(e);
  return id;
}

void Simulation::schedule_replacement(InstanceId victim, FunctionId f) {
  if (f.value >= profiles_.size()) throw ValidationError("replacement for unknown function");
  const FunctionId old = server_.instance(victim).function;
  server_.mark_evicting(victim, f, now_);
  const Time v = profiles_[old.value].eviction;
  result_.eviction_events.push_back({old, now_, v});
  ++result_.replacement_count;
  Event e;
  e.time = now_ + v;
  e.kind = EventKind::kEvictionDone;
  e.instance = victim;
  e.function = f;
  push(e);
}

void Simulation::start_request(InstanceId k, RequestId r) {
  server_.mark_busy(k, r, now_);
  auto& req = requests_[r.value];
  req.start = now_;
  Event e;
  e.time = now_ + req.exec_time;
  e.kind = EventKind::kExecutionDone;
  e.instance = k;
  e.request = r;
  e.function = req.function;
  push(e);
}

void Simulation::apply(std::span<const Action> actions, Hook hook,
                       std::optional<RequestId> arriving) {
  bool placed = false;
  auto fail = [&](const Action& a, const std::string& why) {
    throw ContractViolation(fmt::format("{} at t={:.3f} ({} hook): {}", scheduler_.name(), now_,
                                        to_string(hook), describe(a) + ": " + why));
  };
  auto require_arriving = [&](const Action& a, RequestId r) {
    if (!arriving || *arriving != r) fail(a, "request is not the arriving one");
    if (placed) fail(a, "arriving request already placed");
  };
  auto require_idle = [&](const Action& a, InstanceId k) -> const Instance& {
    if (!server_.contains(k)) fail(a, "unknown instance");
    const auto& inst = server_.instance(k);
    if (inst.state != InstanceState::kIdle) fail(a, "instance is not idle");
    return inst;
  };

  for (const Action& action : actions) {
    result_.actions.push_back({now_, hook, action});
    std::visit(
        [&](const auto& a) {
          using T = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<T, DispatchToIdle>) {
            require_arriving(action, a.request);
            const auto& inst = require_idle(action, a.instance);
            if (inst.function != requests_[a.request.value].function) {
              fail(action, "instance serves another function");
            }
            start_request(a.instance, a.request);
            placed = true;
          } else if constexpr (std::is_same_v<T, Enqueue>) {
            require_arriving(action, a.request);
            server_.enqueue(requests_[a.request.value].function, a.request);
            placed = true;
          } else if constexpr (std::is_same_v<T, InitializeNew>) {
            if (a.function.value >= profiles_.size()) fail(action, "unknown function");
            if (!server_.has_free_slot()) fail(action, "server is at capacity");
            schedule_cold_start(a.function);
          } else if constexpr (std::is_same_v<T, Replace>) {
            if (a.function.value >= profiles_.size()) fail(action, "unknown function");
            const auto& inst = require_idle(action, a.victim);
            if (inst.function == a.function) fail(action, "victim already runs that function");
            schedule_replacement(a.victim, a.function);
          } else if constexpr (std::is_same_v<T, TakeFromQueue>) {
            const auto& inst = require_idle(action, a.instance);
            if (a.request.value >= requests_.size()) fail(action, "unknown request");
            if (!server_.remove_waiting(inst.function, a.request)) {
              fail(action, "request is not waiting in this instance's queue");
            }
            start_request(a.instance, a.request);
          } else if constexpr (std::is_same_v<T, GoIdle>) {
            require_idle(action, a.instance);
          } else if constexpr (std::is_same_v<T, ArmTimer>) {
            if (!(a.at >= now_)) fail(action, "timer set in the past");
            Event e;
            e.time = a.at;
            e.kind = EventKind::kTimer;
            e.timer_tag = a.tag;
            push(e);
          }
        },
        action);
  }
  if (arriving && !placed) {
    throw ContractViolation(fmt::format("{} at t={:.3f}: request {} was neither dispatched nor queued",
                                        scheduler_.name(), now_, arriving->value));
  }
}

void Simulation::log_event(const Event& e) {
  if (event_log_ == nullptr) return;
  auto opt = [](const auto& v) { return v ? std::to_string(v->value) : std::string(); };
  std::optional<FunctionId> f;
  switch (e.kind) {
    case EventKind::kArrival:
    case EventKind::kExecutionDone:
      f = requests_[e.request->value].function;
      break;
    case EventKind::kColdStartDone:
    case EventKind::kEvictionDone:
      f = server_.instance(*e.instance).function;
      break;
    case EventKind::kTimer:
      break;
  }
  *event_log_ << fmt::format("{:.3f},{},{},{},{}\n", e.time, to_string(e.kind), opt(f),
                             opt(e.instance), opt(e.request));
}

void Simulation::handle(const Event& e) {
  switch (e.kind) {
    case EventKind::kArrival: {
      const Request& req = requests_[e.request->value];
      auto actions = scheduler_.on_arrival(req, context());
      apply(actions, Hook::kArrival, req.id);
      break;
    }
    case EventKind::kExecutionDone: {
      auto& req = requests_[e.request->value];
      req.completion = now_;
      stats_.record_execution(req.function, req.exec_time);
      server_.mark_idle(*e.instance, now_);
      auto actions = scheduler_.on_completion(*e.instance, context());
      apply(actions, Hook::kCompletion, std::nullopt);
      break;
    }
    case EventKind::kColdStartDone: {
      const FunctionId f = server_.instance(*e.instance).function;
      stats_.record_cold_start(f, profiles_[f.value].cold_start);
      if (server_.waiting_count(f) > 0) {
        start_request(*e.instance, server_.pop_front(f));
      } else {
        server_.mark_idle(*e.instance, now_);
      }
      break;
    }
    case EventKind::kEvictionDone: {
      const Instance gone = server_.remove_evicted(*e.instance);
      stats_.record_eviction(gone.function, profiles_[gone.function.value].eviction);
      if (gone.pending) schedule_cold_start(*gone.pending);
      break;
    }
    case EventKind::kTimer: {
      auto actions = scheduler_.on_timer(e.timer_tag, context());
      apply(actions, Hook::kTimer, std::nullopt);
      break;
    }
  }
}

void Simulation::check_quiescent() const {
  if (server_.total_slots() > server_.capacity()) {
    throw ContractViolation(fmt::format("{} exceeded capacity at t={:.3f}", scheduler_.name(), now_));
  }
  for (const auto& k : server_.instances()) {
    if (k.state == InstanceState::kIdle && server_.waiting_count(k.function) > 0) {
      throw ContractViolation(fmt::format(
          "{} left instance {} of function {} idle with {} queued requests at t={:.3f}",
          scheduler_.name(), k.id.value, k.function.value, server_.waiting_count(k.function),
          now_));
    }
  }
}

SimulationResult Simulation::run() {
  if (ran_) throw std::logic_error("Simulation::run may only be called once");
  ran_ = true;
  for (const auto& r : requests_) {
    Event e;
    e.time = r.arrival;
    e.kind = EventKind::kArrival;
    e.request = r.id;
    push(e);
  }
  while (!events_.empty()) {
    Event e = events_.top();
    events_.pop();
    now_ = e.time;
    // EvictionDone removes the instance, so log first.
    log_event(e);
    handle(e);
    ++result_.events_processed;
    result_.peak_slots = std::max(result_.peak_slots, server_.total_slots());
    check_quiescent();
  }
  std::size_t unfinished = 0;
  for (const auto& r : requests_) unfinished += r.completed() ? 0 : 1;
  if (unfinished > 0) {
    throw ContractViolation(fmt::format("{} left {} request(s) unserved", scheduler_.name(),
                                        unfinished));
  }
  result_.requests = std::move(requests_);
  return std::move(result_);
}

SimulationResult run(std::vector<Request> trace, std::vector<FunctionProfile> profiles,
                     const SimulationConfig& config, Scheduler& scheduler,
                     std::ostream* event_log) {
  Simulation sim(std::move(trace), std::move(profiles), config, scheduler);
  sim.set_event_log(event_log);
  return sim.run();
}

}  // namespace edgesched
