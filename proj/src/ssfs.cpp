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

#include "edgesched/ssfs.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <string>

#include "edgesched/errors.hpp"

namespace edgesched::ssfs {
namespace {

void validate(std::span<const Function> fs) {
  if (fs.empty()) throw ValidationError("no functions given");
  std::vector<FunctionId> ids;
  for (const auto& f : fs) {
    if (f.request_count == 0) {
      throw ValidationError("function " + std::to_string(f.id.value) + " has no requests");
    }
    if (!(f.exec_time > 0)) {
      throw ValidationError("function " + std::to_string(f.id.value) +
                            " has non-positive exec time");
    }
    if (!(f.cold_start >= 0) || !(f.eviction >= 0)) {
      throw ValidationError("function " + std::to_string(f.id.value) +
                            " has a negative setup time");
    }
    ids.push_back(f.id);
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw ValidationError("duplicate function ids");
  }
}

std::size_t total_requests(std::span<const Function> fs) {
  std::size_t n = 0;
  for (const auto& f : fs) n += f.request_count;
  return n;
}

}  // namespace

double weight(const Function& f) {
  return f.exec_time + (f.cold_start + f.eviction) / static_cast<double>(f.request_count);
}

Time evaluate(std::span<const Function> fs, std::span<const FunctionId> sequence,
              SetupCharge charge) {
  std::map<FunctionId, std::pair<const Function*, std::size_t>> seen;
  for (const auto& f : fs) seen[f.id] = {&f, 0};

  Time clock = 0;
  Time total = 0;
  const Function* prev = nullptr;
  for (FunctionId id : sequence) {
    auto it = seen.find(id);
    if (it == seen.end()) {
      throw ValidationError("sequence names unknown function " + std::to_string(id.value));
    }
    const Function* f = it->second.first;
    ++it->second.second;
    if (f != prev) {
      if (charge == SetupCharge::kPreviousEviction) {
        clock += (prev != nullptr ? prev->eviction : 0) + f->cold_start;
      } else {
        clock += f->eviction + f->cold_start;
      }
    }
    clock += f->exec_time;
    total += clock;
    prev = f;
  }
  for (const auto& [id, entry] : seen) {
    if (entry.second != entry.first->request_count) {
      throw ValidationError("function " + std::to_string(id.value) + " appears " +
                            std::to_string(entry.second) + " times, expected " +
                            std::to_string(entry.first->request_count));
    }
  }
  return total;
}

std::vector<FunctionId> blocks(std::span<const Function> fs, std::span<const FunctionId> order) {
  std::vector<FunctionId> seq;
  for (FunctionId id : order) {
    auto it = std::find_if(fs.begin(), fs.end(), [id](const Function& f) { return f.id == id; });
    if (it == fs.end()) throw ValidationError("unknown function " + std::to_string(id.value));
    seq.insert(seq.end(), it->request_count, id);
  }
  return seq;
}

Schedule optimal(std::span<const Function> fs, SetupCharge charge) {
  validate(fs);
  std::vector<const Function*> order;
  for (const auto& f : fs) order.push_back(&f);
  std::stable_sort(order.begin(), order.end(), [](const Function* a, const Function* b) {
    const double wa = weight(*a);
    const double wb = weight(*b);
    if (wa != wb) return wa < wb;
    return a->id < b->id;
  });
  std::vector<FunctionId> ids;
  for (const auto* f : order) ids.push_back(f->id);
  Schedule s;
  s.sequence = blocks(fs, ids);
  s.total_response_time = evaluate(fs, s.sequence, charge);
  return s;
}

Schedule oracle(std::span<const Function> fs, SetupCharge charge) {
  validate(fs);
  if (total_requests(fs) > kOracleMaxRequests) {
    throw ValidationError("oracle instance has " + std::to_string(total_requests(fs)) +
                          " requests; at most " + std::to_string(kOracleMaxRequests) +
                          " are enumerable");
  }
  std::vector<FunctionId> seq;
  for (const auto& f : fs) seq.insert(seq.end(), f.request_count, f.id);
  std::sort(seq.begin(), seq.end());

  // next_permutation visits each distinct multiset permutation once.
  std::optional<Schedule> best;
  do {
    const Time t = evaluate(fs, seq, charge);
    if (!best || t < best->total_response_time) best = Schedule{seq, t};
  } while (std::next_permutation(seq.begin(), seq.end()));
  return *best;
}

Schedule best_contiguous(std::span<const Function> fs, SetupCharge charge) {
  validate(fs);
  std::vector<FunctionId> order;
  for (const auto& f : fs) order.push_back(f.id);
  std::sort(order.begin(), order.end());
  std::optional<Schedule> best;
  do {
    auto seq = blocks(fs, order);
    const Time t = evaluate(fs, seq, charge);
    if (!best || t < best->total_response_time) best = Schedule{std::move(seq), t};
  } while (std::next_permutation(order.begin(), order.end()));
  return *best;
}

}  // namespace edgesched::ssfs
