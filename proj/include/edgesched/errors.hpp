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
#include <stdexcept>
#include <string>

namespace edgesched {

/// Bad input: malformed config, inconsistent schedule, unknown ids.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A slot was requested while every capacity slot is occupied.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An instance was asked to make a lifecycle transition it cannot make.
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A scheduler returned actions that break an engine invariant.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace edgesched
