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

#include <span>
#include <string>
#include <string_view>

namespace synthpop::config {

enum class ValueType {
  kString,
  kPath,
  kInt,
  kUInt,
  kDouble,
  kBool,
  kChoice,         // one of KeySpec::choices, '|' separated
  kIntList,        // comma separated
  kStringList,     // comma separated
  kThresholdList,  // comma separated fractions or "none"
  kBetaBands,      // comma separated age:beta pairs
};

// Subcommands that read a key.
enum Command : unsigned { kGenerate = 1u, kEvaluate = 2u, kSimulate = 4u, kAllCommands = 7u };

struct KeySpec {
  std::string_view key;
  ValueType type;
  std::string_view default_value;  // empty: unset
  unsigned commands;
  std::string_view help;
  std::string_view choices = {};
};

inline constexpr int kSchemaVersion = 1;

std::span<const KeySpec> schema();
const KeySpec* find_key(std::string_view key);
std::string_view type_name(ValueType type);

// Throws InputError when value does not parse as the key's type.
void check_value(const KeySpec& spec, std::string_view value);

// One line per key read by the command, generated from the schema.
std::string schema_help(unsigned command);

}  // namespace synthpop::config
