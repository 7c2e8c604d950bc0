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

#include "edgesched/trace.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "edgesched/errors.hpp"

namespace edgesched {
namespace {

ParsedTrace parse(const std::string& text, std::optional<std::size_t> limit = std::nullopt) {
  std::istringstream in(text);
  return parse_trace(in, limit);
}

std::size_t parse_error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

TEST(ParseTrace, ReconstructsArrivalFromEndTimestamp) {
  const auto t = parse("func,end_timestamp,duration\nf1,100,40\nf2,100,0\n");
  ASSERT_EQ(t.requests.size(), 2u);
  EXPECT_EQ(t.requests[0].arrival, 60);
  EXPECT_EQ(t.requests[0].exec_time, 40);
  // The zero-duration row becomes 1 ms.
  EXPECT_EQ(t.requests[1].arrival, 99);
  EXPECT_EQ(t.requests[1].exec_time, 1);
  EXPECT_EQ(t.function_keys, (std::vector<std::string>{"f1", "f2"}));
}

TEST(ParseTrace, SortsStablyAndAssignsIds) {
  const auto t = parse("func,arrival,duration\na,5,1\nb,3,1\nc,5,1\nd,3,1\n");
  std::vector<std::string> keys;
  for (std::size_t i = 0; i < t.requests.size(); ++i) {
    EXPECT_EQ(t.requests[i].id.value, i);
    keys.push_back(t.function_keys[t.requests[i].function.value]);
  }
  EXPECT_EQ(keys, (std::vector<std::string>{"b", "d", "a", "c"}));
}

TEST(ParseTrace, LimitKeepsEarliest) {
  const auto t = parse("func,arrival,duration\nx,5,1\nx,1,1\nx,4,1\nx,2,1\nx,3,1\n", 2);
  ASSERT_EQ(t.requests.size(), 2u);
  EXPECT_EQ(t.requests[0].arrival, 1);
  EXPECT_EQ(t.requests[1].arrival, 2);
}

TEST(ParseTrace, SharedKeysShareFunctionIds) {
  const auto t = parse("func,arrival,duration\na,1,1\nb,2,1\na,3,1\n");
  EXPECT_EQ(t.requests[0].function, t.requests[2].function);
  EXPECT_NE(t.requests[0].function, t.requests[1].function);
}

TEST(ParseTrace, SkipsBlankLines) {
  EXPECT_EQ(parse("\nfunc,arrival,duration\n\na,1,1\n\n").requests.size(), 1u);
}

TEST(ParseTrace, ErrorsCarryLineNumbers) {
  EXPECT_EQ(parse_error_line(""), 0u);
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_EQ(parse_error_line("name,time\n"), 1u);
  EXPECT_EQ(parse_error_line("func,arrival,duration\na,1,1\nb,2\n"), 3u);
  EXPECT_EQ(parse_error_line("func,arrival,duration\na,x,1\n"), 2u);
  EXPECT_EQ(parse_error_line("func,arrival,duration\na,1,-3\n"), 2u);
  EXPECT_EQ(parse_error_line("func,end_timestamp,duration\na,1,5\n"), 2u);
  EXPECT_EQ(parse_error_line("func,arrival,duration\n,1,1\n"), 2u);
}

TEST(ParseTrace, EmptyBodyIsAnEmptyTrace) {
  EXPECT_TRUE(parse("func,arrival,duration\n").requests.empty());
}

TEST(WriteTrace, RoundTrips) {
  const auto a = parse("func,arrival,duration\nf,0.5,12.25\ng,3,7\nf,9,1\n");
  std::ostringstream out;
  write_trace(out, a.requests, a.function_keys);
  const auto b = parse(out.str());
  ASSERT_EQ(a.requests.size(), b.requests.size());
  for (std::size_t i = 0; i < a.requests.size(); ++i) {
    EXPECT_EQ(a.requests[i].arrival, b.requests[i].arrival);
    EXPECT_EQ(a.requests[i].exec_time, b.requests[i].exec_time);
    EXPECT_EQ(a.requests[i].function, b.requests[i].function);
  }
  EXPECT_EQ(a.function_keys, b.function_keys);
}

TEST(ApplyIntensity, ScalesGapsFromFirstArrival) {
  std::vector<Request> rs;
  for (Time t : {0.0, 10.0, 30.0}) {
    rs.push_back(Request{RequestId{rs.size()}, FunctionId{0}, t, 1, std::nullopt, std::nullopt});
  }
  const auto doubled = apply_intensity(rs, 2);
  EXPECT_EQ(doubled[0].arrival, 0);
  EXPECT_EQ(doubled[1].arrival, 20);
  EXPECT_EQ(doubled[2].arrival, 60);
  const auto same = apply_intensity(rs, 1);
  for (std::size_t i = 0; i < rs.size(); ++i) EXPECT_EQ(same[i].arrival, rs[i].arrival);
  for (auto& r : rs) r.arrival += 100;
  EXPECT_EQ(apply_intensity(rs, 0.5)[2].arrival, 115);
  EXPECT_THROW(apply_intensity(rs, 0), ValidationError);
  EXPECT_THROW(apply_intensity(rs, -1), ValidationError);
}

bool same_workload(const Workload& a, const Workload& b) {
  if (a.requests.size() != b.requests.size() || a.profiles.size() != b.profiles.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.requests.size(); ++i) {
    if (a.requests[i].arrival != b.requests[i].arrival ||
        a.requests[i].exec_time != b.requests[i].exec_time ||
        a.requests[i].function != b.requests[i].function) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.profiles.size(); ++i) {
    if (a.profiles[i].cold_start != b.profiles[i].cold_start ||
        a.profiles[i].eviction != b.profiles[i].eviction) {
      return false;
    }
  }
  return true;
}

TEST(Synthetic, IsAPureFunctionOfTheSeed) {
  SimulationConfig config;
  for (const char* name : {"poisson", "bursty"}) {
    const auto a = generate_synthetic(synthetic_preset(name, 7), config);
    const auto b = generate_synthetic(synthetic_preset(name, 7), config);
    const auto c = generate_synthetic(synthetic_preset(name, 8), config);
    EXPECT_TRUE(same_workload(a, b)) << name;
    EXPECT_FALSE(same_workload(a, c)) << name;
  }
}

TEST(Synthetic, RequestsAreSortedWithinBounds) {
  SimulationConfig config;
  const auto spec = synthetic_preset("bursty", 3);
  const auto w = generate_synthetic(spec, config);
  ASSERT_FALSE(w.requests.empty());
  EXPECT_LE(w.requests.size(), spec.max_requests);
  for (std::size_t i = 0; i < w.requests.size(); ++i) {
    const auto& r = w.requests[i];
    EXPECT_EQ(r.id.value, i);
    if (i > 0) {
      EXPECT_LE(w.requests[i - 1].arrival, r.arrival);
    }
    EXPECT_GE(r.arrival, 0);
    EXPECT_GT(r.exec_time, 0);
    EXPECT_LT(r.function.value, spec.function_count);
  }
  for (const auto& p : w.profiles) {
    EXPECT_GE(p.cold_start, config.cold_start_min);
    EXPECT_LE(p.cold_start, config.cold_start_max);
    EXPECT_GE(p.eviction, config.eviction_min);
    EXPECT_LE(p.eviction, config.eviction_max);
    EXPECT_FALSE(p.exec_hint.has_value());
  }
}

TEST(Synthetic, PoissonCountsMatchTheRate) {
  // Mean count is rate * horizon; every seed must land within 5 sigma.
  SimulationConfig config;
  double sum = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    auto spec = synthetic_preset("poisson", seed);
    spec.max_requests = 0;
    spec.horizon = 60000;
    const double mean = spec.arrival_rate * spec.horizon / 1000;
    const double n = static_cast<double>(generate_synthetic(spec, config).requests.size());
    EXPECT_LT(std::abs(n - mean), 5 * std::sqrt(mean)) << "seed " << seed;
    sum += n;
  }
  EXPECT_NEAR(sum / 100, 600, 5 * std::sqrt(600.0 / 100));
}

TEST(Synthetic, BlockersPresetIsExact) {
  const auto w = generate_synthetic(synthetic_preset("blockers", 1), blockers_config());
  ASSERT_EQ(w.requests.size(), 5u);
  EXPECT_EQ(w.warm_pool, (std::vector<FunctionId>{FunctionId{0}}));
  const Time arrivals[] = {0, 100, 200, 300, 400};
  const Time execs[] = {2000, 2000, 100, 100, 100};
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(w.requests[i].arrival, arrivals[i]);
    EXPECT_EQ(w.requests[i].exec_time, execs[i]);
  }
  for (const auto& p : w.profiles) {
    EXPECT_EQ(p.cold_start, 500);
    EXPECT_EQ(p.eviction, 500);
  }
}

TEST(Synthetic, RejectsBadSpecs) {
  EXPECT_THROW(synthetic_preset("zipf", 1), ValidationError);
  SimulationConfig config;
  auto spec = synthetic_preset("poisson", 1);
  spec.arrival_rate = 0;
  EXPECT_THROW(generate_synthetic(spec, config), ValidationError);
  spec = synthetic_preset("poisson", 1);
  spec.exec_min = 10;
  spec.exec_max = 5;
  EXPECT_THROW(generate_synthetic(spec, config), ValidationError);
  spec = synthetic_preset("bursty", 1);
  spec.function_count = 0;
  EXPECT_THROW(generate_synthetic(spec, config), ValidationError);
}

TEST(DeriveSeed, SeparatesPurposesAndIndices) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t base : {0ULL, 1ULL, 2ULL}) {
    for (const char* purpose : {"profiles", "arrivals", "ssfs-check"}) {
      for (std::uint64_t i = 0; i < 4; ++i) seen.insert(derive_seed(base, purpose, i));
    }
  }
  EXPECT_EQ(seen.size(), 36u);
  EXPECT_EQ(derive_seed(5, "x"), derive_seed(5, "x"));
}

TEST(Handoff, ScenarioShape) {
  const auto w = handoff_scenario();
  ASSERT_EQ(w.requests.size(), 5u);
  EXPECT_EQ(handoff_config().capacity, 2u);
  const Time arrivals[] = {0, 1300, 1900, 2000, 2100};
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(w.requests[i].arrival, arrivals[i]);
}

}  // namespace
}  // namespace edgesched
