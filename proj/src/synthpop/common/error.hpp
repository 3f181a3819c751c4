// Copyright 2026 The synthpop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace synthpop {

// Base for every error the toolkit raises on purpose. Anything else escaping a
// public entry point is a bug.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad, missing or malformed input: files, config keys, column names.
class InputError : public Error {
 public:
  using Error::Error;
};

// The inputs parsed but a pipeline stage could not complete (infeasible
// constraints, degenerate geometry, numeric overflow).
class PipelineError : public Error {
 public:
  using Error::Error;
};

// Runs fn and prefixes any toolkit error with the stage name, keeping the
// error category.
template <typename Fn>
decltype(auto) with_stage(std::string_view stage, Fn&& fn) {
  try {
    return std::forward<Fn>(fn)();
  } catch (const InputError& e) {
    throw InputError("stage '" + std::string(stage) + "': " + e.what());
  } catch (const PipelineError& e) {
    throw PipelineError("stage '" + std::string(stage) + "': " + e.what());
  }
}

}  // namespace synthpop
