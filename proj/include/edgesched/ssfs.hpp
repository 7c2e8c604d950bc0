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
#include <span>
#include <vector>

#include "edgesched/core.hpp"

// Offline sequencing on a server that holds a single instance at a time.
// All requests arrive at time zero, every request of a function runs for
// the same time, and all durations are known up front.
namespace edgesched::ssfs {

struct Function {
  FunctionId id;
  Time exec_time = 0;
  Time cold_start = 0;
  Time eviction = 0;
  std::uint32_t request_count = 1;
};

struct Schedule {
  std::vector<FunctionId> sequence;  // one entry per request
  Time total_response_time = 0;
};

/// How a switch between functions is charged.
enum class SetupCharge : std::uint8_t {
  // Eviction of the function being switched away from, plus cold start of
  // the new one. The very first run pays the cold start only.
  kPreviousEviction,
  // Every run pays its own eviction plus its own cold start, including the
  // first. This is the accounting under which weight order is provably
  // optimal.
  kOwnSetup,
};

/// t + (cold_start + eviction) / n.
double weight(const Function& f);

/// Sum of completion times of `sequence` on a single-instance server.
/// Throws ValidationError if the multiplicities do not match the request
/// counts or the sequence names an unknown function.
Time evaluate(std::span<const Function> fs, std::span<const FunctionId> sequence,
              SetupCharge charge = SetupCharge::kPreviousEviction);

/// Runs each function's requests back to back, functions in ascending
/// weight order (ties by ascending id). Throws ValidationError on empty
/// input, duplicate ids, zero request counts or non-positive exec times.
Schedule optimal(std::span<const Function> fs,
                 SetupCharge charge = SetupCharge::kPreviousEviction);

inline constexpr std::size_t kOracleMaxRequests = 10;

/// Exhaustive search over every distinct request order. Throws
/// ValidationError when more than kOracleMaxRequests requests are given.
Schedule oracle(std::span<const Function> fs,
                SetupCharge charge = SetupCharge::kPreviousEviction);

/// Best schedule among those that keep every function's requests together
/// (all block orders enumerated).
Schedule best_contiguous(std::span<const Function> fs,
                         SetupCharge charge = SetupCharge::kPreviousEviction);

/// Sequence with each function's requests contiguous, in the given order.
std::vector<FunctionId> blocks(std::span<const Function> fs, std::span<const FunctionId> order);

}  // namespace edgesched::ssfs
