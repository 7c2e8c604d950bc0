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

#include <gtest/gtest.h>

#include <stdexcept>
#include <unordered_set>

#include "edgesched/errors.hpp"

namespace edgesched {
namespace {

constexpr FunctionId kF{0};
constexpr FunctionId kG{1};

TEST(Ids, CompareAndHash) {
  EXPECT_LT(FunctionId{1}, FunctionId{2});
  EXPECT_EQ(RequestId{4}, RequestId{4});
  std::unordered_set<InstanceId> seen = {InstanceId{1}, InstanceId{1}, InstanceId{2}};
  EXPECT_EQ(seen.size(), 2u);
}

TEST(Request, ResponseTime) {
  Request r{RequestId{0}, kF, 10, 5, 12.0, 17.0};
  EXPECT_TRUE(r.completed());
  EXPECT_DOUBLE_EQ(r.response_time(), 7);
}

TEST(ServerState, RejectsZeroCapacity) { EXPECT_THROW(ServerState(0, 1), ValidationError); }

TEST(ServerState, CapacityIsEnforced) {
  ServerState s(2, 2);
  s.add_initializing(kF, 0);
  s.add_idle(kG, 0);
  EXPECT_FALSE(s.has_free_slot());
  EXPECT_THROW(s.add_initializing(kF, 1), CapacityError);
  EXPECT_EQ(s.total_slots(), 2u);
}

TEST(ServerState, LifecycleTransitions) {
  ServerState s(1, 2);
  const InstanceId k = s.add_initializing(kF, 0);
  EXPECT_EQ(s.instance(k).state, InstanceState::kInitializing);
  EXPECT_THROW(s.mark_evicting(k, kG, 1), StateError);

  s.mark_busy(k, RequestId{3}, 5);
  EXPECT_EQ(s.instance(k).current_request, RequestId{3});
  EXPECT_EQ(s.busy_count(kF), 1u);
  EXPECT_THROW(s.mark_busy(k, RequestId{4}, 6), StateError);
  EXPECT_THROW(s.mark_evicting(k, kG, 6), StateError);

  s.mark_idle(k, 7);
  EXPECT_FALSE(s.instance(k).current_request.has_value());
  EXPECT_EQ(s.idle_count(kF), 1u);
  EXPECT_THROW(s.remove_evicted(k), StateError);

  s.mark_evicting(k, kG, 8);
  EXPECT_THROW(s.mark_idle(k, 9), StateError);
  EXPECT_THROW(s.mark_busy(k, RequestId{5}, 9), StateError);
  const Instance gone = s.remove_evicted(k);
  EXPECT_EQ(gone.pending, kG);
  EXPECT_FALSE(s.contains(k));
  EXPECT_TRUE(s.has_free_slot());
}

TEST(ServerState, InstanceCountIncludesPendingReplacements) {
  ServerState s(3, 2);
  s.add_initializing(kF, 0);
  const InstanceId idle = s.add_idle(kF, 0);
  s.add_idle(kG, 0);
  EXPECT_EQ(s.instance_count(kF), 2u);
  EXPECT_EQ(s.incoming_count(kF), 1u);

  // Evicting an f instance towards g moves its slot from f to g.
  s.mark_evicting(idle, kG, 1);
  EXPECT_EQ(s.instance_count(kF), 1u);
  EXPECT_EQ(s.instance_count(kG), 2u);
  EXPECT_EQ(s.incoming_count(kG), 1u);
  EXPECT_EQ(s.total_slots(), 3u);
}

TEST(ServerState, EvictionWithoutTargetCountsForNobody) {
  ServerState s(1, 1);
  const InstanceId k = s.add_idle(kF, 0);
  s.mark_evicting(k, std::nullopt, 1);
  EXPECT_EQ(s.instance_count(kF), 0u);
  EXPECT_EQ(s.total_slots(), 1u);
}

TEST(ServerState, LruAndMruIdle) {
  ServerState s(3, 1);
  const InstanceId a = s.add_idle(kF, 0);
  const InstanceId b = s.add_idle(kF, 0);
  const InstanceId c = s.add_initializing(kF, 0);
  s.mark_busy(a, RequestId{0}, 1);
  s.mark_idle(a, 5);
  s.mark_idle(c, 3);
  EXPECT_EQ(s.lru_idle(kF), b);
  EXPECT_EQ(s.mru_idle(kF), a);
  // Equal timestamps resolve to the lowest id either way.
  ServerState t(2, 1);
  const InstanceId x = t.add_idle(kF, 0);
  t.add_idle(kF, 0);
  EXPECT_EQ(t.lru_idle(kF), x);
  EXPECT_EQ(t.mru_idle(kF), x);
  EXPECT_FALSE(ServerState(1, 1).lru_idle(kF).has_value());
}

TEST(ServerState, QueuesAreFifo) {
  ServerState s(1, 2);
  s.enqueue(kF, RequestId{1});
  s.enqueue(kF, RequestId{2});
  s.enqueue(kG, RequestId{3});
  EXPECT_EQ(s.waiting_count(kF), 2u);
  EXPECT_EQ(s.total_waiting(), 3u);
  EXPECT_EQ(s.pop_front(kF), RequestId{1});
  EXPECT_TRUE(s.remove_waiting(kG, RequestId{3}));
  EXPECT_FALSE(s.remove_waiting(kG, RequestId{3}));
  EXPECT_EQ(s.pop_front(kF), RequestId{2});
  EXPECT_THROW(s.pop_front(kF), StateError);
}

TEST(ServerState, UnknownIdsThrow) {
  ServerState s(1, 1);
  EXPECT_THROW(s.instance(InstanceId{9}), std::out_of_range);
  EXPECT_THROW(s.queue(FunctionId{4}), std::out_of_range);
  EXPECT_THROW(s.add_idle(FunctionId{4}, 0), std::out_of_range);
  EXPECT_THROW(s.remove_evicted(InstanceId{9}), std::out_of_range);
}

TEST(ServerState, InstanceIdsAreNeverReused) {
  ServerState s(1, 1);
  const InstanceId a = s.add_idle(kF, 0);
  s.mark_evicting(a, kF, 1);
  s.remove_evicted(a);
  EXPECT_NE(s.add_initializing(kF, 2), a);
}

}  // namespace
}  // namespace edgesched
