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
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "edgesched/engine.hpp"

namespace edgesched {

/// Policy plugged into the engine at two points: a request arrives, and an
/// instance finishes a request. On completion the finished instance is
/// already Idle; the hook must either give it work, replace it, or leave
/// it idle, and must leave no Idle instance next to a non-empty queue of
/// the same function.
class Scheduler {
 public:
  virtual ~Scheduler() = default;

  virtual std::string_view name() const = 0;

  virtual std::vector<Action> on_arrival(const Request& request, const SchedulerContext& ctx) = 0;
  virtual std::vector<Action> on_completion(InstanceId instance, const SchedulerContext& ctx) = 0;
  /// Fires at the time requested by an earlier ArmTimer action.
  virtual std::vector<Action> on_timer(std::uint64_t /*tag*/, const SchedulerContext& /*ctx*/) {
    return {};
  }
};

enum class SchedulerKind : std::uint8_t { kEsff, kFifo, kOpenWhiskV2, kFaasCache, kSff };

/// Which instance count the remaining-work estimate uses when FRP evaluates a
/// candidate function: the candidate's own, or the completing function's.
enum class FrpInstanceCount : std::uint8_t { kCandidate, kCompleting };

struct SchedulerOptions {
  FrpInstanceCount frp_instance_count = FrpInstanceCount::kCandidate;
};

/// Accepts `esff | fifo | openwhisk-v2 | faascache | sff`.
SchedulerKind parse_scheduler_kind(std::string_view name);
std::string_view to_string(SchedulerKind kind);
const std::vector<SchedulerKind>& all_scheduler_kinds();

std::unique_ptr<Scheduler> make_scheduler(SchedulerKind kind, const SchedulerOptions& options = {});

}  // namespace edgesched
