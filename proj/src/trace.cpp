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

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <unordered_map>

#include "edgesched/errors.hpp"

namespace edgesched {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  for (;;) {
    auto comma = line.find(',', pos);
    out.push_back(trim(line.substr(pos, comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

double parse_number(std::string_view field, std::size_t line, std::string_view what) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v)) {
    throw ParseError(line, fmt::format("bad {} '{}'", what, field));
  }
  return v;
}

struct Row {
  std::string key;
  Time arrival;
  Time exec;
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

ParsedTrace parse_trace(std::istream& in, std::optional<std::size_t> limit) {
  std::string line;
  std::size_t line_no = 0;
  bool has_end_timestamp = false;
  bool has_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto header = split(line);
    if (header.size() == 3 && header[0] == "func" && header[2] == "duration" &&
        (header[1] == "end_timestamp" || header[1] == "arrival")) {
      has_end_timestamp = header[1] == "end_timestamp";
      has_header = true;
      break;
    }
    throw ParseError(line_no, "expected header 'func,end_timestamp,duration' or "
                              "'func,arrival,duration'");
  }
  if (!has_header) throw ParseError(line_no, "empty trace");

  std::vector<Row> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split(line);
    if (fields.size() != 3) {
      throw ParseError(line_no, fmt::format("expected 3 fields, got {}", fields.size()));
    }
    if (fields[0].empty()) throw ParseError(line_no, "empty function key");
    const Time stamp = parse_number(fields[1], line_no, "timestamp");
    Time duration = parse_number(fields[2], line_no, "duration");
    if (duration < 0) throw ParseError(line_no, "negative duration");
    // Zero durations are below the trace's measurement precision.
    if (duration == 0) duration = 1;
    const Time arrival = has_end_timestamp ? stamp - duration : stamp;
    if (arrival < 0) throw ParseError(line_no, "arrival before time zero");
    rows.push_back({std::string(fields[0]), arrival, duration});
  }

  std::stable_sort(rows.begin(), rows.end(),
                   [](const Row& a, const Row& b) { return a.arrival < b.arrival; });
  if (limit && rows.size() > *limit) rows.resize(*limit);

  ParsedTrace out;
  std::unordered_map<std::string, std::uint32_t> interned;
  out.requests.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto [it, inserted] =
        interned.try_emplace(rows[i].key, static_cast<std::uint32_t>(out.function_keys.size()));
    if (inserted) out.function_keys.push_back(rows[i].key);
    Request r;
    r.id = RequestId{i};
    r.function = FunctionId{it->second};
    r.arrival = rows[i].arrival;
    r.exec_time = rows[i].exec;
    out.requests.push_back(r);
  }
  return out;
}

ParsedTrace parse_trace_file(const std::filesystem::path& path, std::optional<std::size_t> limit) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open trace " + path.string());
  return parse_trace(in, limit);
}

void write_trace(std::ostream& out, const std::vector<Request>& requests,
                 const std::vector<std::string>& function_keys) {
  out << "func,arrival,duration\n";
  for (const auto& r : requests) {
    const std::string key = r.function.value < function_keys.size()
                                ? function_keys[r.function.value]
                                : "f" + std::to_string(r.function.value);
    out << fmt::format("{},{},{}\n", key, r.arrival, r.exec_time);
  }
}

std::vector<Request> apply_intensity(std::vector<Request> requests, double ratio) {
  if (!(ratio > 0)) throw ValidationError("intensity ratio must be positive");
  if (requests.empty() || ratio == 1.0) return requests;
  const Time anchor = requests.front().arrival;
  for (auto& r : requests) r.arrival = anchor + (r.arrival - anchor) * ratio;
  return requests;
}

void SyntheticSpec::validate() const {
  if (!(horizon > 0)) throw ValidationError("synthetic horizon must be positive");
  if (shape == WorkloadShape::kBlockers) {
    if (long_count == 0 || short_count == 0) {
      throw ValidationError("blockers shape needs long and short requests");
    }
    if (!(long_exec > 0) || !(short_exec > 0) || !(spacing >= 0)) {
      throw ValidationError("blockers shape needs positive execution times");
    }
    return;
  }
  if (function_count == 0) throw ValidationError("function count must be positive");
  if (!(exec_min > 0) || exec_min > exec_max) {
    throw ValidationError("execution range must satisfy 0 < min <= max");
  }
  if (!(exec_jitter_sigma >= 0)) throw ValidationError("jitter sigma must be non-negative");
  if (!(arrival_rate > 0)) throw ValidationError("arrival rate must be positive");
  if (shape == WorkloadShape::kBursty) {
    if (!(burst_rate > 0) || !(burst_size >= 1) || !(burst_window >= 0)) {
      throw ValidationError("burst rate, size and window must be positive");
    }
  }
}

Workload generate_synthetic(const SyntheticSpec& spec, const SimulationConfig& config) {
  spec.validate();
  Workload w;

  if (spec.shape == WorkloadShape::kBlockers) {
    w.function_keys = {"long", "short"};
    w.profiles = draw_profiles(2, config, derive_seed(spec.rng_seed, "profiles"));
    if (spec.exec_hints) {
      w.profiles[0].exec_hint = spec.long_exec;
      w.profiles[1].exec_hint = spec.short_exec;
    }
    w.warm_pool = {FunctionId{0}};
    Time t = 0;
    auto add = [&](std::uint32_t f, Time exec) {
      Request r;
      r.id = RequestId{w.requests.size()};
      r.function = FunctionId{f};
      r.arrival = t;
      r.exec_time = exec;
      w.requests.push_back(r);
      t += spec.spacing;
    };
    for (std::size_t i = 0; i < spec.long_count; ++i) add(0, spec.long_exec);
    for (std::size_t i = 0; i < spec.short_count; ++i) add(1, spec.short_exec);
    return w;
  }

  std::mt19937_64 rng(spec.rng_seed);
  const std::size_t nf = spec.function_count;
  std::vector<Time> mean_exec(nf);
  std::uniform_real_distribution<double> log_exec(std::log(spec.exec_min),
                                                  std::log(spec.exec_max));
  for (auto& m : mean_exec) m = std::exp(log_exec(rng));

  std::vector<std::size_t> rank(nf);
  std::iota(rank.begin(), rank.end(), 1);
  std::shuffle(rank.begin(), rank.end(), rng);
  if (spec.short_functions_popular) {
    std::vector<std::size_t> by_exec(nf);
    std::iota(by_exec.begin(), by_exec.end(), 0);
    std::stable_sort(by_exec.begin(), by_exec.end(),
                     [&](std::size_t a, std::size_t b) { return mean_exec[a] < mean_exec[b]; });
    for (std::size_t i = 0; i < nf; ++i) rank[by_exec[i]] = i + 1;
  }
  std::vector<double> popularity(nf);
  for (std::size_t f = 0; f < nf; ++f) {
    popularity[f] = 1.0 / std::pow(static_cast<double>(rank[f]), spec.popularity_skew);
  }
  std::discrete_distribution<std::uint32_t> pick(popularity.begin(), popularity.end());
  std::lognormal_distribution<double> jitter(0.0, spec.exec_jitter_sigma);

  struct Draft {
    Time arrival;
    std::uint32_t function;
    Time exec;
  };
  std::vector<Draft> drafts;
  auto exec_of = [&](std::uint32_t f) {
    return spec.exec_jitter_sigma > 0 ? mean_exec[f] * jitter(rng) : mean_exec[f];
  };

  std::exponential_distribution<double> gap(spec.arrival_rate / 1000.0);
  for (Time t = gap(rng); t < spec.horizon; t += gap(rng)) {
    const auto f = pick(rng);
    drafts.push_back({t, f, exec_of(f)});
  }
  if (spec.shape == WorkloadShape::kBursty) {
    std::exponential_distribution<double> burst_gap(spec.burst_rate / 1000.0);
    std::poisson_distribution<int> size(spec.burst_size - 1);
    std::uniform_real_distribution<double> offset(0.0, spec.burst_window);
    for (Time t = burst_gap(rng); t < spec.horizon; t += burst_gap(rng)) {
      const auto f = pick(rng);
      const int n = 1 + size(rng);
      for (int i = 0; i < n; ++i) {
        const Time at = t + (spec.burst_window > 0 ? offset(rng) : 0.0);
        drafts.push_back({at, f, exec_of(f)});
      }
    }
  }
  std::stable_sort(drafts.begin(), drafts.end(),
                   [](const Draft& a, const Draft& b) { return a.arrival < b.arrival; });
  if (spec.max_requests > 0 && drafts.size() > spec.max_requests) {
    drafts.resize(spec.max_requests);
  }

  w.requests.reserve(drafts.size());
  for (std::size_t i = 0; i < drafts.size(); ++i) {
    Request r;
    r.id = RequestId{i};
    r.function = FunctionId{drafts[i].function};
    r.arrival = drafts[i].arrival;
    r.exec_time = drafts[i].exec;
    w.requests.push_back(r);
  }
  w.function_keys.reserve(nf);
  for (std::size_t f = 0; f < nf; ++f) w.function_keys.push_back("fn" + std::to_string(f));
  w.profiles = draw_profiles(nf, config, derive_seed(spec.rng_seed, "profiles"));
  if (spec.exec_hints) {
    for (std::size_t f = 0; f < nf; ++f) w.profiles[f].exec_hint = mean_exec[f];
  }
  return w;
}

SyntheticSpec synthetic_preset(std::string_view name, std::uint64_t seed) {
  SyntheticSpec s;
  s.rng_seed = seed;
  if (name == "bursty") {
    // 40 functions, about 6 requests per second (half of them in bursts of
    // one function), the most popular functions being the shortest.
    s.shape = WorkloadShape::kBursty;
    s.function_count = 40;
    s.exec_max = 2000;
    s.arrival_rate = 3.0;
    s.burst_rate = 0.15;
    s.burst_size = 20;
    s.short_functions_popular = true;
    s.horizon = 2000000;
    s.max_requests = 10000;
  } else if (name == "poisson") {
    s.shape = WorkloadShape::kPoisson;
    s.arrival_rate = 10.0;
    s.max_requests = 10000;
  } else if (name == "blockers") {
    s.shape = WorkloadShape::kBlockers;
    s.exec_hints = true;
  } else {
    throw ValidationError("unknown synthetic preset '" + std::string(name) +
                          "' (expected bursty, poisson or blockers)");
  }
  return s;
}

SimulationConfig blockers_config() {
  SimulationConfig c;
  c.capacity = 1;
  c.cold_start_min = c.cold_start_max = 500;
  c.eviction_min = c.eviction_max = 500;
  return c;
}

SimulationConfig handoff_config() {
  SimulationConfig c;
  c.capacity = 2;
  c.cold_start_min = c.cold_start_max = 500;
  c.eviction_min = c.eviction_max = 500;
  return c;
}

Workload handoff_scenario() {
  Workload w;
  w.function_keys = {"f1", "f2"};
  w.profiles = {FunctionProfile{FunctionId{0}, 500, 500, 2000.0},
                FunctionProfile{FunctionId{1}, 500, 500, 100.0}};
  struct Row {
    std::uint32_t f;
    Time arrival;
    Time exec;
  };
  const Row rows[] = {{0, 0, 2000}, {0, 1300, 2000}, {0, 1900, 2000}, {1, 2000, 100},
                      {1, 2100, 100}};
  for (const auto& row : rows) {
    Request r;
    r.id = RequestId{w.requests.size()};
    r.function = FunctionId{row.f};
    r.arrival = row.arrival;
    r.exec_time = row.exec;
    w.requests.push_back(r);
  }
  return w;
}

std::uint64_t derive_seed(std::uint64_t base, std::string_view purpose, std::uint64_t index) {
  // FNV-1a over the purpose string.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : purpose) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(base ^ h ^ splitmix64(index));
}

}  // namespace edgesched
