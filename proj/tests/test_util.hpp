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

#include <cmath>
#include <functional>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

#include "edgesched/engine.hpp"
#include "edgesched/scheduler.hpp"

namespace edgesched::testing {

struct RandomCase {
  std::vector<Request> requests;
  std::vector<FunctionProfile> profiles;
  SimulationConfig config;
};

/// Small mixed workload: a handful of functions, clustered arrivals,
/// execution times spanning three orders of magnitude.
inline RandomCase random_case(std::uint64_t seed, std::size_t n = 300) {
  std::mt19937_64 rng(seed);
  RandomCase c;
  c.config.rng_seed = seed;
  c.config.capacity = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
  const std::size_t nf = std::uniform_int_distribution<std::size_t>(1, 10)(rng);
  c.profiles = draw_profiles(nf, c.config, seed ^ 0x5eedULL);
  std::vector<double> mean(nf);
  std::uniform_real_distribution<double> log_exec(std::log(5.0), std::log(4000.0));
  for (auto& m : mean) m = std::exp(log_exec(rng));

  std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(nf - 1));
  std::exponential_distribution<double> gap(1.0 / 150.0);
  std::bernoulli_distribution same_instant(0.1);
  std::lognormal_distribution<double> jitter(0.0, 0.3);
  Time t = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!same_instant(rng)) t += gap(rng);
    const auto f = pick(rng);
    c.requests.push_back(Request{RequestId{i}, FunctionId{f}, t, mean[f] * jitter(rng),
                                 std::nullopt, std::nullopt});
  }
  return c;
}

/// Scheduler whose hooks are supplied by the test.
class ScriptedScheduler final : public Scheduler {
 public:
  using ArrivalFn = std::function<std::vector<Action>(const Request&, const SchedulerContext&)>;
  using CompletionFn = std::function<std::vector<Action>(InstanceId, const SchedulerContext&)>;

  ScriptedScheduler(ArrivalFn arrival, CompletionFn completion)
      : arrival_(std::move(arrival)), completion_(std::move(completion)) {}

  std::string_view name() const override { return "scripted"; }
  std::vector<Action> on_arrival(const Request& r, const SchedulerContext& ctx) override {
    return arrival_(r, ctx);
  }
  std::vector<Action> on_completion(InstanceId k, const SchedulerContext& ctx) override {
    return completion_(k, ctx);
  }

 private:
  ArrivalFn arrival_;
  CompletionFn completion_;
};

}  // namespace edgesched::testing
