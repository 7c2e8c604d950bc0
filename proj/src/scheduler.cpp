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

#include "edgesched/scheduler.hpp"

#include <string>

#include "edgesched/baselines.hpp"
#include "edgesched/errors.hpp"
#include "edgesched/esff.hpp"

namespace edgesched {

SchedulerKind parse_scheduler_kind(std::string_view name) {
  for (SchedulerKind k : all_scheduler_kinds()) {
    if (to_string(k) == name) return k;
  }
  throw ValidationError("unknown scheduler '" + std::string(name) +
                        "' (expected esff, fifo, openwhisk-v2, faascache or sff)");
}

std::string_view to_string(SchedulerKind kind) {
  switch (kind) {
    case SchedulerKind::kEsff:
      return "esff";
    case SchedulerKind::kFifo:
      return "fifo";
    case SchedulerKind::kOpenWhiskV2:
      return "openwhisk-v2";
    case SchedulerKind::kFaasCache:
      return "faascache";
    case SchedulerKind::kSff:
      return "sff";
  }
  return "unknown";
}

const std::vector<SchedulerKind>& all_scheduler_kinds() {
  static const std::vector<SchedulerKind> kinds = {
      SchedulerKind::kEsff, SchedulerKind::kFifo, SchedulerKind::kOpenWhiskV2,
      SchedulerKind::kFaasCache, SchedulerKind::kSff};
  return kinds;
}

std::unique_ptr<Scheduler> make_scheduler(SchedulerKind kind, const SchedulerOptions& options) {
  switch (kind) {
    case SchedulerKind::kEsff:
      return std::make_unique<EsffScheduler>(options);
    case SchedulerKind::kFifo:
      return std::make_unique<FifoScheduler>();
    case SchedulerKind::kOpenWhiskV2:
      return std::make_unique<OpenWhiskV2Scheduler>();
    case SchedulerKind::kFaasCache:
      return std::make_unique<FaasCacheScheduler>();
    case SchedulerKind::kSff:
      return std::make_unique<SffScheduler>();
  }
  throw ValidationError("unknown scheduler kind");
}

}  // namespace edgesched
